#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "support.hpp"
#include "tsde/grid.hpp"
#include "tsde/surface_io.hpp"

using namespace tsde;

namespace {

DomainPtr small_integer_domain(long n1, long n2, long nz) {
    return make_domain(TimeScale::integer_range(0, n1), TimeScale::integer_range(0, n2),
                       TimeScale::integer_range(0, nz));
}

DomainPtr random_dyadic_domain(std::mt19937_64& g) {
    return make_domain(tsupport::dyadic_scale(g, tsupport::pick(g, 2, 8)),
                       tsupport::dyadic_scale(g, tsupport::pick(g, 2, 8)),
                       tsupport::dyadic_scale(g, tsupport::pick(g, 2, 4)));
}

}  // namespace

TEST_CASE("domain invariants") {
    CHECK_THROWS_AS(make_domain(TimeScale::integer_range(0, 2), TimeScale::integer_range(0, 2),
                                TimeScale(std::vector<double>{1.0})),
                    std::invalid_argument);
    const DomainPtr d = small_integer_domain(3, 2, 1);
    CHECK(d->x0() == 0.0);
    CHECK(d->y0() == 0.0);
    CHECK(d->a() == 0.0);
    CHECK(d->b() == 1.0);
}

TEST_CASE("partial delta") {
    const DomainPtr d = small_integer_domain(3, 3, 1);
    const auto ux = GridFunction::sample(d, [](double x, double, double) { return x; });
    const GridFunction dx = partial_delta(ux, 1);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 2; ++k) CHECK(dx(i, j, k) == 1.0);
    CHECK(dx.boundary_fill_mask() == kFillAxis1);
    CHECK(dx.is_boundary_filled(3, 0, 0));
    CHECK_FALSE(dx.is_boundary_filled(2, 3, 0));

    const auto c4 = GridFunction::constant(d, 4.0);
    for (int axis : {1, 2}) {
        const GridFunction dc = partial_delta(c4, axis);
        for (double v : dc.values()) CHECK(v == 0.0);
    }

    const auto uxy = GridFunction::sample(d, [](double x, double y, double) { return x * y; });
    CHECK(partial_delta(uxy, 1)(1, 1, 0) == 1.0);

    CHECK_THROWS_AS(partial_delta(ux, 3), std::domain_error);
    const DomainPtr thin = make_domain(TimeScale(std::vector<double>{0.0}),
                                       TimeScale::integer_range(0, 2),
                                       TimeScale::integer_range(0, 1));
    CHECK_THROWS_AS(partial_delta(GridFunction::zeros(thin), 1), std::domain_error);
    CHECK_THROWS_AS(mixed_delta(GridFunction::zeros(thin)), std::domain_error);
}

TEST_CASE("mixed delta") {
    const DomainPtr d = small_integer_domain(3, 3, 1);
    const auto uxy = GridFunction::sample(d, [](double x, double y, double) { return x * y; });
    const GridFunction m = mixed_delta(uxy);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(m(i, j, 0) == 1.0);

    const auto usum = GridFunction::sample(d, [](double x, double y, double) { return x + y; });
    const GridFunction msum = mixed_delta(usum);
    for (double v : msum.values()) CHECK(v == 0.0);
}

TEST_CASE("differencing order does not matter") {
    std::mt19937_64 g(21);
    for (int rep = 0; rep < 20; ++rep) {
        const DomainPtr d = random_dyadic_domain(g);
        const GridFunction u = tsupport::dyadic_grid(g, d);
        const GridFunction m = mixed_delta(u);
        const GridFunction d12 = partial_delta(partial_delta(u, 1), 2);
        const GridFunction d21 = partial_delta(partial_delta(u, 2), 1);
        for (std::size_t i = 0; i + 1 < d->n1(); ++i)
            for (std::size_t j = 0; j + 1 < d->n2(); ++j)
                for (std::size_t k = 0; k < d->nz(); ++k) {
                    CHECK(m(i, j, k) == d12(i, j, k));
                    CHECK(m(i, j, k) == d21(i, j, k));
                }
    }
}

TEST_CASE("iterated integral") {
    const DomainPtr d = small_integer_domain(4, 4, 1);
    const auto one = GridFunction::constant(d, 1.0);
    CHECK(double_integral(one, 0, 3.0, 2.0) == 6.0);
    CHECK(double_integral(one, 0, 0.0, 3.0) == 0.0);

    const DomainPtr d2 = small_integer_domain(2, 2, 1);
    const auto st = GridFunction::sample(d2, [](double x, double y, double) { return x + y; });
    CHECK(double_integral(st, 0, 2.0, 2.0) == 4.0);
}

TEST_CASE("reconstruction identity is exact") {
    std::mt19937_64 g(22);
    for (int rep = 0; rep < 20; ++rep) {
        const DomainPtr d = random_dyadic_domain(g);
        const GridFunction gfun = tsupport::dyadic_grid(g, d);
        std::vector<double> integral(d->cells());
        for (std::size_t i = 0; i < d->n1(); ++i)
            for (std::size_t j = 0; j < d->n2(); ++j)
                for (std::size_t k = 0; k < d->nz(); ++k)
                    integral[(i * d->n2() + j) * d->nz() + k] =
                        double_integral(gfun, k, d->t1.point(i), d->t2.point(j));
        const GridFunction recon = mixed_delta(GridFunction(d, std::move(integral)));
        for (std::size_t i = 0; i + 1 < d->n1(); ++i)
            for (std::size_t j = 0; j + 1 < d->n2(); ++j)
                for (std::size_t k = 0; k < d->nz(); ++k)
                    CHECK(recon(i, j, k) == gfun(i, j, k));
    }
}

TEST_CASE("slice integral") {
    const TimeScale z3 = TimeScale::integer_range(0, 2);
    CHECK(z_integral(z3, std::vector<double>{1.0, 1.0, 1.0}) == 2.0);
    CHECK(z_integral(z3, std::vector<double>{0.0, 1.0, 2.0}) == 1.0);

    const TimeScale two(std::vector<double>{0.5, 2.5});
    CHECK(z_integral(two, std::vector<double>{3.0, 100.0}) == 6.0);
}

TEST_CASE("pointwise seminorm") {
    const DomainPtr d = small_integer_domain(3, 3, 1);
    const SolutionTriple ones(GridFunction::constant(d, 1.0), GridFunction::zeros(d),
                              GridFunction::zeros(d));
    CHECK(pointwise_seminorm(ones, 1, 2, 0) == 1.0);

    const auto ux = GridFunction::sample(d, [](double x, double, double) { return x; });
    const SolutionTriple t = differentiate(ux);
    CHECK(pointwise_seminorm(t, 2, 0, 0) == 3.0);  // |2| + 1 + 0

    const SolutionTriple zero = SolutionTriple::zeros(d);
    CHECK(pointwise_seminorm(zero, 0, 0, 0) == 0.0);
}

TEST_CASE("weight") {
    const DomainPtr d = small_integer_domain(3, 3, 1);
    CHECK(weight(*d, 2.5, 0, 0, 0) == 1.0);
    CHECK(weight(*d, 1.0, 2, 1, 0) == 8.0);  // 4 * 2 * 1 on the integers
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                CHECK(std::abs(weight(*d, 1e-9, i, j, k) - 1.0) <= 1e-6);
    CHECK_THROWS_AS(ExpWeight(*d, 0.0), std::invalid_argument);
}

TEST_CASE("weight splits along the second axis") {
    std::mt19937_64 g(23);
    const DomainPtr d = random_dyadic_domain(g);
    const double lambda = 0.875;
    const ExpWeight w(*d, lambda);
    const auto e2 = ts_exp_table(d->t2, lambda);
    for (std::size_t i = 0; i < d->n1(); ++i)
        for (std::size_t j = 0; j < d->n2(); ++j)
            for (std::size_t k = 0; k < d->nz(); ++k)
                CHECK(w(i, j, k) == w(i, 0, k) * e2[j]);
}

TEST_CASE("weighted sup norm") {
    const DomainPtr d = small_integer_domain(3, 3, 1);
    CHECK(weighted_sup_norm(SolutionTriple::zeros(d), 1.0) == 0.0);

    const SolutionTriple c(GridFunction::constant(d, 2.5), GridFunction::zeros(d),
                           GridFunction::zeros(d));
    CHECK(weighted_sup_norm(c, 1.0) == 2.5);  // attained at the origin

    const SolutionTriple twice(GridFunction::constant(d, 5.0), GridFunction::zeros(d),
                               GridFunction::zeros(d));
    CHECK(weighted_sup_norm(twice, 1.0) == 2.0 * weighted_sup_norm(c, 1.0));
}

TEST_CASE("weighted sup norm obeys the triangle inequality") {
    std::mt19937_64 g(24);
    for (int rep = 0; rep < 20; ++rep) {
        const DomainPtr d = random_dyadic_domain(g);
        const SolutionTriple a(tsupport::dyadic_grid(g, d), tsupport::dyadic_grid(g, d),
                               tsupport::dyadic_grid(g, d));
        const SolutionTriple b(tsupport::dyadic_grid(g, d), tsupport::dyadic_grid(g, d),
                               tsupport::dyadic_grid(g, d));
        std::vector<double> su(d->cells()), s1(d->cells()), s2(d->cells());
        for (std::size_t n = 0; n < d->cells(); ++n) {
            su[n] = a.u.values()[n] + b.u.values()[n];
            s1[n] = a.d1.values()[n] + b.d1.values()[n];
            s2[n] = a.d2.values()[n] + b.d2.values()[n];
        }
        const SolutionTriple sum(GridFunction(d, std::move(su)), GridFunction(d, std::move(s1)),
                                 GridFunction(d, std::move(s2)));
        const double lambda = tsupport::uniform(g, 0.25, 2.0);
        const double lhs = weighted_sup_norm(sum, lambda);
        const double rhs = weighted_sup_norm(a, lambda) + weighted_sup_norm(b, lambda);
        CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("csv surfaces round-trip bitwise") {
    const DomainPtr d = make_domain(TimeScale(std::vector<double>{0.0, 1.0 / 3.0, 0.77}),
                                    TimeScale::integer_range(0, 1),
                                    TimeScale(std::vector<double>{-2.5, 1e-300}));
    std::mt19937_64 g(25);
    std::vector<double> v(d->cells());
    for (double& x : v) x = tsupport::uniform(g, -1.0, 1.0) * std::pow(10.0, (int)(g() % 40) - 20);
    const GridFunction surf(d, v);

    std::ostringstream out;
    write_surface_csv(out, surf);
    std::istringstream in(out.str());
    const auto rows = read_surface_csv(in);
    REQUIRE(rows.size() == d->cells());
    std::size_t n = 0;
    for (std::size_t i = 0; i < d->n1(); ++i)
        for (std::size_t j = 0; j < d->n2(); ++j)
            for (std::size_t k = 0; k < d->nz(); ++k, ++n) {
                CHECK(rows[n].x == d->t1.point(i));
                CHECK(rows[n].y == d->t2.point(j));
                CHECK(rows[n].z == d->zscale.point(k));
                CHECK(rows[n].value == surf(i, j, k));
            }

    std::istringstream bad("not,a,surface\n");
    CHECK_THROWS_AS(read_surface_csv(bad), std::runtime_error);
}
