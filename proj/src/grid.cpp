#include "tsde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsde {

ProductDomain::ProductDomain(TimeScale t1_, TimeScale t2_, TimeScale z_)
    : t1(std::move(t1_)), t2(std::move(t2_)), zscale(std::move(z_)) {
    if (zscale.size() < 2)
        throw std::invalid_argument("slice interval needs at least two points (a < b)");
}

bool ProductDomain::same_points_as(const ProductDomain& other) const {
    return t1.same_points_as(other.t1) && t2.same_points_as(other.t2) &&
           zscale.same_points_as(other.zscale);
}

DomainPtr make_domain(TimeScale t1, TimeScale t2, TimeScale zscale) {
    return std::make_shared<const ProductDomain>(std::move(t1), std::move(t2), std::move(zscale));
}

GridFunction::GridFunction(DomainPtr dom, std::vector<double> values, unsigned fill_mask)
    : dom_(std::move(dom)), v_(std::move(values)), fill_mask_(fill_mask) {
    if (!dom_) throw std::invalid_argument("grid function needs a domain");
    if (v_.size() != dom_->cells())
        throw std::invalid_argument("grid value count does not match the domain");
}

GridFunction GridFunction::zeros(DomainPtr dom) {
    std::vector<double> v(dom->cells(), 0.0);
    return GridFunction(std::move(dom), std::move(v));
}

GridFunction GridFunction::constant(DomainPtr dom, double c) {
    std::vector<double> v(dom->cells(), c);
    return GridFunction(std::move(dom), std::move(v));
}

bool GridFunction::is_boundary_filled(std::size_t i, std::size_t j, std::size_t k) const {
    (void)k;
    if ((fill_mask_ & kFillAxis1) && i + 1 == dom_->n1()) return true;
    if ((fill_mask_ & kFillAxis2) && j + 1 == dom_->n2()) return true;
    return false;
}

SolutionTriple::SolutionTriple(GridFunction u_, GridFunction d1_, GridFunction d2_)
    : u(std::move(u_)), d1(std::move(d1_)), d2(std::move(d2_)) {
    if (!u.domain().same_points_as(d1.domain()) || !u.domain().same_points_as(d2.domain()))
        throw std::invalid_argument("triple layers must share one domain");
}

SolutionTriple SolutionTriple::zeros(DomainPtr dom) {
    return SolutionTriple(GridFunction::zeros(dom), GridFunction::zeros(dom),
                          GridFunction::zeros(dom));
}

SolutionTriple differentiate(const GridFunction& u) {
    return SolutionTriple(u, partial_delta(u, 1), partial_delta(u, 2));
}

GridFunction partial_delta(const GridFunction& u, int axis) {
    if (axis != 1 && axis != 2) throw std::domain_error("partial delta axis must be 1 or 2");
    const ProductDomain& d = u.domain();
    const std::size_t n1 = d.n1(), n2 = d.n2(), nz = d.nz();
    const TimeScale& ax = axis == 1 ? d.t1 : d.t2;
    if (ax.size() < 2) throw std::domain_error("partial delta needs at least two points on the axis");

    std::vector<double> out(d.cells());
    auto idx = [n2, nz](std::size_t i, std::size_t j, std::size_t k) {
        return (i * n2 + j) * nz + k;
    };
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            for (std::size_t k = 0; k < nz; ++k) {
                if (axis == 1) {
                    if (i + 1 < n1)
                        out[idx(i, j, k)] = (u(i + 1, j, k) - u(i, j, k)) / d.t1.mu_at(i);
                    else
                        out[idx(i, j, k)] = out[idx(i - 1, j, k)];
                } else {
                    if (j + 1 < n2)
                        out[idx(i, j, k)] = (u(i, j + 1, k) - u(i, j, k)) / d.t2.mu_at(j);
                    else
                        out[idx(i, j, k)] = out[idx(i, j - 1, k)];
                }
            }
        }
    }
    return GridFunction(u.domain_ptr(), std::move(out), axis == 1 ? kFillAxis1 : kFillAxis2);
}

GridFunction mixed_delta(const GridFunction& u) {
    const ProductDomain& d = u.domain();
    const std::size_t n1 = d.n1(), n2 = d.n2(), nz = d.nz();
    if (n1 < 2 || n2 < 2) throw std::domain_error("mixed delta needs at least two points per axis");

    std::vector<double> out(d.cells());
    auto idx = [n2, nz](std::size_t i, std::size_t j, std::size_t k) {
        return (i * n2 + j) * nz + k;
    };
    for (std::size_t i = 0; i + 1 < n1; ++i)
        for (std::size_t j = 0; j + 1 < n2; ++j)
            for (std::size_t k = 0; k < nz; ++k) {
                const double num =
                    (u(i + 1, j + 1, k) + u(i, j, k)) - (u(i + 1, j, k) + u(i, j + 1, k));
                out[idx(i, j, k)] = num / (d.t1.mu_at(i) * d.t2.mu_at(j));
            }
    for (std::size_t j = 0; j + 1 < n2; ++j)
        for (std::size_t k = 0; k < nz; ++k)
            out[idx(n1 - 1, j, k)] = out[idx(n1 - 2, j, k)];
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t k = 0; k < nz; ++k)
            out[idx(i, n2 - 1, k)] = out[idx(i, n2 - 2, k)];
    return GridFunction(u.domain_ptr(), std::move(out), kFillAxis1 | kFillAxis2);
}

double double_integral(const GridFunction& g, std::size_t zindex, double x, double y) {
    const ProductDomain& d = g.domain();
    if (zindex >= d.nz()) throw std::domain_error("slice index out of range");
    const std::size_t i1 = d.t1.index_of(x);
    const std::size_t j1 = d.t2.index_of(y);
    double acc = 0.0;
    for (std::size_t s = 0; s < i1; ++s) {
        double inner = 0.0;
        for (std::size_t t = 0; t < j1; ++t) inner += d.t2.mu_at(t) * g(s, t, zindex);
        acc += d.t1.mu_at(s) * inner;
    }
    return acc;
}

double z_integral(const TimeScale& zscale, std::span<const double> values) {
    if (values.size() != zscale.size())
        throw std::invalid_argument("slice samples must cover the whole slice scale");
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < zscale.size(); ++k) acc += zscale.mu_at(k) * values[k];
    return acc;
}

double pointwise_seminorm(const SolutionTriple& s, std::size_t i, std::size_t j, std::size_t k) {
    return std::abs(s.u(i, j, k)) + std::abs(s.d1(i, j, k)) + std::abs(s.d2(i, j, k));
}

ExpWeight::ExpWeight(const ProductDomain& dom, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("weight needs lambda > 0");
    e1_ = ts_exp_table(dom.t1, lambda);
    e2_ = ts_exp_table(dom.t2, lambda);
    ez_ = ts_exp_table(dom.zscale, lambda);
}

double weight(const ProductDomain& dom, double lambda, std::size_t i, std::size_t j,
              std::size_t k) {
    return ExpWeight(dom, lambda)(i, j, k);
}

double weighted_sup_norm(const SolutionTriple& s, double lambda) {
    const ProductDomain& d = s.domain();
    const ExpWeight w(d, lambda);
    double best = 0.0;
    for (std::size_t i = 0; i < d.n1(); ++i)
        for (std::size_t j = 0; j < d.n2(); ++j)
            for (std::size_t k = 0; k < d.nz(); ++k)
                best = std::max(best, pointwise_seminorm(s, i, j, k) / w(i, j, k));
    return best;
}

double weighted_sup_distance(const SolutionTriple& a, const SolutionTriple& b, double lambda) {
    const ProductDomain& d = a.domain();
    if (!d.same_points_as(b.domain()))
        throw std::invalid_argument("triples live on different domains");
    const ExpWeight w(d, lambda);
    double best = 0.0;
    for (std::size_t i = 0; i < d.n1(); ++i)
        for (std::size_t j = 0; j < d.n2(); ++j)
            for (std::size_t k = 0; k < d.nz(); ++k) {
                const double sem = std::abs(a.u(i, j, k) - b.u(i, j, k)) +
                                   std::abs(a.d1(i, j, k) - b.d1(i, j, k)) +
                                   std::abs(a.d2(i, j, k) - b.d2(i, j, k));
                best = std::max(best, sem / w(i, j, k));
            }
    return best;
}

double sup_distance(const SolutionTriple& a, const SolutionTriple& b) {
    const ProductDomain& d = a.domain();
    if (!d.same_points_as(b.domain()))
        throw std::invalid_argument("triples live on different domains");
    double best = 0.0;
    for (std::size_t i = 0; i < d.n1(); ++i)
        for (std::size_t j = 0; j < d.n2(); ++j)
            for (std::size_t k = 0; k < d.nz(); ++k) {
                const double sem = std::abs(a.u(i, j, k) - b.u(i, j, k)) +
                                   std::abs(a.d1(i, j, k) - b.d1(i, j, k)) +
                                   std::abs(a.d2(i, j, k) - b.d2(i, j, k));
                best = std::max(best, sem);
            }
    return best;
}

GridFunction abs(const GridFunction& g) {
    std::vector<double> v(g.values().begin(), g.values().end());
    for (double& x : v) x = std::abs(x);
    return GridFunction(g.domain_ptr(), std::move(v));
}

GridFunction abs_diff(const GridFunction& a, const GridFunction& b) {
    if (!a.domain().same_points_as(b.domain()))
        throw std::invalid_argument("grid functions live on different domains");
    std::vector<double> v(a.values().size());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = std::abs(a.values()[n] - b.values()[n]);
    return GridFunction(a.domain_ptr(), std::move(v));
}

}  // namespace tsde
