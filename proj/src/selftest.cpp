#include "tsde/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "tsde/inequalities.hpp"
#include "tsde/solver.hpp"

namespace tsde {

bool SelftestReport::all_pass() const {
    for (const auto& f : families)
        if (!f.pass) return false;
    return true;
}

namespace {

double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

std::size_t pick(std::mt19937_64& g, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(g() % (hi - lo + 1));
}

// Dyadic value k/16 with |k| <= 128: sums of these stay exactly
// representable, so identity checks can be bit-for-bit.
double dyadic(std::mt19937_64& g) {
    return (static_cast<double>(g() % 257) - 128.0) / 16.0;
}

// Power-of-two increments keep division by the graininess exact as well.
TimeScale dyadic_scale(std::mt19937_64& g, std::size_t n) {
    static constexpr double steps[4] = {0.25, 0.5, 1.0, 2.0};
    std::vector<double> pts;
    double t = static_cast<double>(g() % 9) - 4.0;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(t);
        t += steps[g() % 4];
    }
    return TimeScale(std::move(pts));
}

TimeScale random_scale(std::mt19937_64& g, std::size_t n) {
    std::vector<double> pts;
    double t = uniform(g, 0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(t);
        t += uniform(g, 0.25, 1.25);
    }
    return TimeScale(std::move(pts));
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- family: closed-form exponentials --------------------------------

SelftestFamily exp_integers() {
    SelftestFamily fam{"exp-integers", true, ""};
    const TimeScale zscale = TimeScale::integer_range(0, 20);
    double worst = 0.0;
    for (double lambda : {0.5, 1.0, 2.0}) {
        for (double t : zscale.points()) {
            const double got = ts_exp(zscale, lambda, t, 0.0);
            const double want = std::pow(1.0 + lambda, t);
            worst = std::max(worst, std::abs(got - want) / want);
        }
    }
    fam.pass = worst <= 1e-12;
    fam.detail = "max rel err " + fmt(worst) + " vs (1+lambda)^t";
    return fam;
}

SelftestFamily exp_uniform() {
    SelftestFamily fam{"exp-uniform", true, ""};
    const TimeScale ts = TimeScale::uniform(0.0, 1.0, 10000);
    const double got = ts_exp(ts, 1.0, 1.0, 0.0);
    const double err = std::abs(got - std::exp(1.0));
    fam.pass = err <= 3e-4;
    fam.detail = "|e_1(1,0) - e| = " + fmt(err);
    return fam;
}

SelftestFamily exp_qscale() {
    SelftestFamily fam{"exp-qscale", true, ""};
    const TimeScale ts = TimeScale::geometric(1.0, 2.0, 10);
    double worst = 0.0;
    for (double t : ts.points()) {
        // Direct product oracle: mu(s) = s on this scale.
        double want = 1.0;
        for (double s : ts.points()) {
            if (s >= t) break;
            want *= 1.0 + s;
        }
        const double got = ts_exp(ts, 1.0, t, 1.0);
        worst = std::max(worst, std::abs(got - want) / want);
    }
    fam.pass = worst <= 1e-12;
    fam.detail = "max rel err " + fmt(worst) + " vs direct product";
    return fam;
}

SelftestFamily exp_laws(std::mt19937_64& g) {
    SelftestFamily fam{"exp-laws", true, ""};
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const TimeScale ts = random_scale(g, pick(g, 3, 8));
        std::vector<double> pv;
        for (std::size_t i = 0; i < ts.size(); ++i) pv.push_back(uniform(g, -0.6, 2.0));
        const SampledFunction p(ts, pv);
        std::vector<double> neg;
        for (std::size_t i = 0; i < ts.size(); ++i)
            neg.push_back(circle_minus(pv[i], ts.mu_at(i)));
        const SampledFunction pneg(ts, neg);
        for (double t : ts.points()) {
            const double prod = ts_exp(p, t, ts.min()) * ts_exp(pneg, t, ts.min());
            worst = std::max(worst, std::abs(prod - 1.0));
        }
        for (double t : ts.points())
            for (double r : ts.points())
                for (double t0 : ts.points()) {
                    const double lhs = ts_exp(p, t, r) * ts_exp(p, r, t0);
                    const double rhs = ts_exp(p, t, t0);
                    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
                }
    }
    fam.pass = worst <= 1e-12;
    fam.detail = "max law violation " + fmt(worst);
    return fam;
}

// ---- family: calculus identities --------------------------------------

SelftestFamily calculus_identities(std::mt19937_64& g) {
    SelftestFamily fam{"calculus-identities", true, ""};
    int bad = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n1 = pick(g, 2, 8), n2 = pick(g, 2, 8), nz = pick(g, 2, 4);
        DomainPtr dom = make_domain(dyadic_scale(g, n1), dyadic_scale(g, n2), dyadic_scale(g, nz));
        std::vector<double> vals(dom->cells());
        for (double& v : vals) v = dyadic(g);
        const GridFunction gfun(dom, std::move(vals));

        // Reconstruction: the mixed delta of the iterated integral gives
        // back the integrand, bit-for-bit on dyadic data.
        std::vector<double> integral(dom->cells());
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j)
                for (std::size_t k = 0; k < nz; ++k)
                    integral[(i * n2 + j) * nz + k] =
                        double_integral(gfun, k, dom->t1.point(i), dom->t2.point(j));
        const GridFunction recon = mixed_delta(GridFunction(dom, std::move(integral)));
        for (std::size_t i = 0; i + 1 < n1; ++i)
            for (std::size_t j = 0; j + 1 < n2; ++j)
                for (std::size_t k = 0; k < nz; ++k)
                    if (recon(i, j, k) != gfun(i, j, k)) ++bad;

        // Fundamental theorem on the first axis of the same data.
        const TimeScale& ts = dom->t1;
        std::vector<double> fvals;
        for (std::size_t i = 0; i < n1; ++i) fvals.push_back(gfun(i, 0, 0));
        const SampledFunction f(ts, fvals);
        std::vector<double> F;
        for (double t : ts.points()) F.push_back(delta_integral(f, ts.min(), t));
        const SampledFunction prim(ts, F);
        for (std::size_t i = 0; i + 1 < n1; ++i)
            if (delta_derivative(prim, ts.point(i)) != f.values[i]) ++bad;
    }
    fam.pass = bad == 0;
    fam.detail = bad == 0 ? "reconstruction + fundamental theorem exact"
                          : std::to_string(bad) + " exactness failures";
    return fam;
}

// ---- family: one-variable comparison lemma -----------------------------

SelftestFamily gronwall_lemma_1d(std::mt19937_64& g) {
    SelftestFamily fam{"gronwall-lemma-1d", true, ""};
    double worst = -1e300;
    for (int rep = 0; rep < 50; ++rep) {
        const TimeScale ts = random_scale(g, pick(g, 3, 10));
        std::vector<double> a, u;
        for (std::size_t i = 0; i < ts.size(); ++i) a.push_back(uniform(g, 0.0, 2.0));
        u.push_back(uniform(g, 0.0, 3.0));
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            // Forward recursion with a slack factor keeps u^delta <= a*u.
            const double theta = uniform01(g);
            u.push_back(u[i] * (1.0 + ts.mu_at(i) * a[i] * theta));
        }
        const SampledFunction coeff(ts, a);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double bound = u[0] * ts_exp(coeff, ts.point(i), ts.min());
            worst = std::max(worst, u[i] - bound);
        }
    }
    fam.pass = worst <= 1e-12;
    fam.detail = "max excess over comparison bound " + fmt(worst);
    return fam;
}

// ---- family: Darboux recursion oracle ----------------------------------

SelftestFamily darboux_recursion() {
    SelftestFamily fam{"darboux-recursion", true, ""};
    ProblemSpec spec;
    spec.domain = make_domain(TimeScale::integer_range(0, 6), TimeScale::integer_range(0, 6),
                              TimeScale(std::vector<double>{0.0, 1.0}));
    spec.kind = ProblemKind::Reduced;
    spec.forcing = Expr::parse("u");
    spec.kernel = Expr::parse("0");
    spec.alpha = Expr::parse("1");
    spec.beta = Expr::parse("1");
    spec.lambda = 1.0;
    spec.tol = 1e-10;
    spec.max_iter = 40;

    const SolveReport rep = solve_picard(spec);
    if (!rep.converged) {
        fam.pass = false;
        fam.detail = "solve did not converge";
        return fam;
    }

    // Forward recursion oracle for the second mixed difference equal to u,
    // unit graininess, both conditions identically one.
    const std::size_t n = 7;
    std::vector<double> oracle(n * n, 1.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j)
            oracle[(i + 1) * n + (j + 1)] =
                oracle[(i + 1) * n + j] + oracle[i * n + (j + 1)] - oracle[i * n + j] +
                oracle[i * n + j];
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                worst = std::max(worst, std::abs(rep.solution.u(i, j, k) - oracle[i * n + j]));
    fam.pass = worst <= 1e-10 && rep.solution.u(1, 1, 0) == 2.0 && rep.solution.u(2, 2, 0) == 6.0;
    fam.detail = "max abs err " + fmt(worst) + " vs forward recursion";
    return fam;
}

// ---- family: randomized Gronwall sweep ----------------------------------

struct SweepInstance {
    DomainPtr dom;
    KernelPair kernels;
    double c = 0.0;
    GridFunction w;
};

Expr random_kernel_expr(std::mt19937_64& g, bool with_q) {
    // base + amp * sin(ax + by + cz (+ dq))^2 stays inside [0, 2] and
    // varies over every coordinate.
    const double amp = uniform(g, 0.0, 1.0);
    const double base = uniform(g, 0.0, 2.0 - amp);
    std::ostringstream os;
    os << fmt(base) << " + " << fmt(amp) << "*sin(" << fmt(uniform(g, -1.0, 1.0)) << "*x + "
       << fmt(uniform(g, -1.0, 1.0)) << "*y + " << fmt(uniform(g, -1.0, 1.0)) << "*z";
    if (with_q) os << " + " << fmt(uniform(g, -1.0, 1.0)) << "*q";
    os << ")^2";
    return Expr::parse(os.str());
}

SweepInstance make_sweep_instance(std::mt19937_64& g) {
    const std::size_t n1 = pick(g, 2, 8), n2 = pick(g, 2, 8), nz = pick(g, 2, 4);
    DomainPtr dom = make_domain(random_scale(g, n1), random_scale(g, n2), random_scale(g, nz));
    KernelPair kernels{random_kernel_expr(g, false), random_kernel_expr(g, true)};
    const double c = uniform(g, 0.0, 5.0);

    const ProductDomain& d = *dom;
    // Sample the kernels directly; the recursion below is the oracle side
    // and does its own arithmetic.
    std::vector<double> pv(d.cells()), rv(d.cells() * nz);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            for (std::size_t k = 0; k < nz; ++k) {
                Env env;
                env.set(Var::X, d.t1.point(i)).set(Var::Y, d.t2.point(j)).set(Var::Z,
                                                                              d.zscale.point(k));
                pv[(i * n2 + j) * nz + k] = kernels.p.eval(env);
                for (std::size_t q = 0; q < nz; ++q) {
                    env.set(Var::Q, d.zscale.point(q));
                    rv[((i * n2 + j) * nz + k) * nz + q] = kernels.r.eval(env);
                }
            }

    // Equality recursion: w = c + iterated integral of [p w + slice
    // integral of r w], evaluated cell by cell over strictly smaller
    // rectangles.
    std::vector<double> w(d.cells(), 0.0);
    auto widx = [n2, nz](std::size_t i, std::size_t j, std::size_t k) {
        return (i * n2 + j) * nz + k;
    };
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            for (std::size_t k = 0; k < nz; ++k) {
                double acc = c;
                for (std::size_t s = 0; s < i; ++s)
                    for (std::size_t t = 0; t < j; ++t) {
                        double coupled = 0.0;
                        for (std::size_t q = 0; q + 1 < nz; ++q)
                            coupled += d.zscale.mu_at(q) * rv[widx(s, t, k) * nz + q] *
                                       w[widx(s, t, q)];
                        acc += d.t1.mu_at(s) * d.t2.mu_at(t) *
                               (pv[widx(s, t, k)] * w[widx(s, t, k)] + coupled);
                    }
                w[widx(i, j, k)] = acc;
            }
    return SweepInstance{dom, std::move(kernels), c, GridFunction(dom, std::move(w))};
}

}  // namespace

GronwallSweepResult run_gronwall_sweep(std::uint64_t seed, int count) {
    std::mt19937_64 g(seed);
    GronwallSweepResult res;
    res.instances = count;
    res.min_margin = 1e300;
    res.min_rel_margin = 1e300;
    for (int n = 0; n < count; ++n) {
        const SweepInstance inst = make_sweep_instance(g);
        const Certificate cert = verify_gronwall(inst.w, inst.kernels, inst.c);
        if (cert.pass()) ++res.passes;
        res.min_margin = std::min(res.min_margin, cert.margin);
        double bound_mag = 0.0;
        if (cert.bound)
            for (double b : cert.bound->values()) bound_mag = std::max(bound_mag, std::abs(b));
        res.min_rel_margin = std::min(res.min_rel_margin, cert.margin / (1.0 + bound_mag));
    }

    // Single-cell t2 and r = 0: the bound surface must coincide with the
    // one-variable exponential of the accumulated coefficient.
    res.max_lemma_rel_err = 0.0;
    for (int n = 0; n < 20; ++n) {
        const std::size_t n1 = pick(g, 2, 8), nz = pick(g, 2, 4);
        DomainPtr dom = make_domain(random_scale(g, n1), random_scale(g, 2), random_scale(g, nz));
        const Expr p = random_kernel_expr(g, false);
        const KernelPair kp{p, Expr::parse("0")};
        const double c = uniform(g, 0.0, 5.0);
        const GridFunction bound = gronwall_bound(kp, c, dom);
        const ProductDomain& d = *dom;
        for (std::size_t k = 0; k < d.nz(); ++k) {
            std::vector<double> coeff;
            for (std::size_t i = 0; i < d.n1(); ++i) {
                Env env;
                env.set(Var::X, d.t1.point(i))
                    .set(Var::Y, d.t2.point(0))
                    .set(Var::Z, d.zscale.point(k));
                coeff.push_back(d.t2.mu_at(0) * p.eval(env));
            }
            const SampledFunction a(d.t1, coeff);
            for (std::size_t i = 0; i < d.n1(); ++i) {
                const double lemma = c * ts_exp(a, d.t1.point(i), d.t1.min());
                const double got = bound(i, 1, k);
                const double rel =
                    std::abs(got - lemma) / std::max({1.0, std::abs(got), std::abs(lemma)});
                res.max_lemma_rel_err = std::max(res.max_lemma_rel_err, rel);
            }
        }
    }
    res.lemma_consistent = res.max_lemma_rel_err <= 1e-12;
    return res;
}

SelftestReport run_selftest(std::uint64_t seed) {
    std::mt19937_64 g(seed);
    SelftestReport report;
    report.families.push_back(exp_integers());
    report.families.push_back(exp_uniform());
    report.families.push_back(exp_qscale());
    report.families.push_back(exp_laws(g));
    report.families.push_back(calculus_identities(g));
    report.families.push_back(gronwall_lemma_1d(g));
    report.families.push_back(darboux_recursion());
    {
        const GronwallSweepResult sweep = run_gronwall_sweep(g(), 200);
        SelftestFamily fam{"gronwall-sweep", sweep.all_pass(), ""};
        std::ostringstream os;
        os << sweep.passes << "/" << sweep.instances << " instances, min rel margin "
           << fmt(sweep.min_rel_margin) << ", lemma rel err " << fmt(sweep.max_lemma_rel_err);
        fam.detail = os.str();
        report.families.push_back(fam);
    }
    return report;
}

void print_selftest(std::ostream& os, const SelftestReport& report) {
    for (const auto& fam : report.families) {
        os << (fam.pass ? "PASS" : "FAIL") << "  " << fam.name;
        for (std::size_t i = fam.name.size(); i < 22; ++i) os << ' ';
        os << fam.detail << '\n';
    }
    os << (report.all_pass() ? "all oracle families passed" : "FAILURES present") << '\n';
}

}  // namespace tsde
