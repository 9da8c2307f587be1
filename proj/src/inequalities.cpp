#include "tsde/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tsde {

std::string_view cert_kind_name(CertKind k) {
    switch (k) {
        case CertKind::Gronwall: return "gronwall";
        case CertKind::Boundedness: return "boundedness";
        case CertKind::Dependence: return "dependence";
        case CertKind::Uniqueness: return "uniqueness";
        case CertKind::Contraction: return "contraction";
    }
    return "unknown";
}

std::string_view cert_verdict_name(CertVerdict v) {
    switch (v) {
        case CertVerdict::Pass: return "pass";
        case CertVerdict::Fail: return "fail";
        case CertVerdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

namespace {

double pass_slack(double max_abs) { return 1e-9 * (1.0 + max_abs); }

[[noreturn]] void refuse_negative(const char* which, double value, double x, double y, double z) {
    std::ostringstream os;
    os << "kernel " << which << " is negative (" << value << ") at (x=" << x << ", y=" << y
       << ", z=" << z << ")";
    throw std::domain_error(os.str());
}

// Kernels sampled on the whole domain, rejected if any value is negative.
struct KernelTables {
    std::size_t n1 = 0, n2 = 0, nz = 0;
    std::vector<double> p;  // (i,j,k)
    std::vector<double> r;  // (i,j,k,q)

    double p_at(std::size_t i, std::size_t j, std::size_t k) const {
        return p[(i * n2 + j) * nz + k];
    }
    double r_at(std::size_t i, std::size_t j, std::size_t k, std::size_t q) const {
        return r[((i * n2 + j) * nz + k) * nz + q];
    }

    static KernelTables build(const KernelPair& kp, const ProductDomain& dom) {
        KernelTables t;
        t.n1 = dom.n1();
        t.n2 = dom.n2();
        t.nz = dom.nz();
        t.p.resize(t.n1 * t.n2 * t.nz);
        t.r.resize(t.n1 * t.n2 * t.nz * t.nz);
        for (std::size_t i = 0; i < t.n1; ++i)
            for (std::size_t j = 0; j < t.n2; ++j)
                for (std::size_t k = 0; k < t.nz; ++k) {
                    const double x = dom.t1.point(i), y = dom.t2.point(j),
                                 z = dom.zscale.point(k);
                    Env env;
                    env.set(Var::X, x).set(Var::Y, y).set(Var::Z, z);
                    const double pv = kp.p.eval(env);
                    if (pv < 0.0) refuse_negative("p", pv, x, y, z);
                    t.p[(i * t.n2 + j) * t.nz + k] = pv;
                    for (std::size_t q = 0; q < t.nz; ++q) {
                        env.set(Var::Q, dom.zscale.point(q));
                        const double rv = kp.r.eval(env);
                        if (rv < 0.0) refuse_negative("r", rv, x, y, z);
                        t.r[((i * t.n2 + j) * t.nz + k) * t.nz + q] = rv;
                    }
                }
        return t;
    }

    // bracket(i,j,k) = p + slice integral of r; the integrand of Q.
    double bracket(const ProductDomain& dom, std::size_t i, std::size_t j, std::size_t k) const {
        double inner = 0.0;
        for (std::size_t q = 0; q + 1 < nz; ++q) inner += dom.zscale.mu_at(q) * r_at(i, j, k, q);
        return p_at(i, j, k) + inner;
    }

    // Q(i,j,k) = integral over t < j of bracket(i,t,k).
    std::vector<double> q_table(const ProductDomain& dom) const {
        std::vector<double> q(n1 * n2 * nz, 0.0);
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t k = 0; k < nz; ++k) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n2; ++j) {
                    q[(i * n2 + j) * nz + k] = acc;
                    if (j + 1 < n2) acc += dom.t2.mu_at(j) * bracket(dom, i, j, k);
                }
            }
        return q;
    }
};

GridFunction bound_from_q(const std::vector<double>& q, double c, const DomainPtr& dom) {
    const std::size_t n1 = dom->n1(), n2 = dom->n2(), nz = dom->nz();
    std::vector<double> v(n1 * n2 * nz);
    for (std::size_t j = 0; j < n2; ++j)
        for (std::size_t k = 0; k < nz; ++k) {
            double prod = c;
            for (std::size_t i = 0; i < n1; ++i) {
                v[(i * n2 + j) * nz + k] = prod;
                if (i + 1 < n1) prod *= 1.0 + dom->t1.mu_at(i) * q[(i * n2 + j) * nz + k];
            }
        }
    return GridFunction(dom, std::move(v));
}

struct SurfaceComparison {
    double margin = 0.0;
    double bound_mag = 0.0;
    WorstPoint worst;
    bool ok = false;
};

SurfaceComparison compare_surfaces(const GridFunction& bound, const GridFunction& observed) {
    const ProductDomain& d = bound.domain();
    SurfaceComparison cmp;
    bool first = true;
    for (std::size_t i = 0; i < d.n1(); ++i)
        for (std::size_t j = 0; j < d.n2(); ++j)
            for (std::size_t k = 0; k < d.nz(); ++k) {
                const double b = bound(i, j, k);
                const double o = observed(i, j, k);
                cmp.bound_mag = std::max(cmp.bound_mag, std::abs(b));
                const double m = b - o;
                if (first || m < cmp.margin) {
                    first = false;
                    cmp.margin = m;
                    cmp.worst = WorstPoint{d.t1.point(i), d.t2.point(j), d.zscale.point(k), b, o};
                }
            }
    cmp.ok = cmp.margin >= -pass_slack(cmp.bound_mag);
    return cmp;
}

}  // namespace

double compute_Q(const KernelPair& k, const ProductDomain& dom, double x, double y, double z) {
    dom.t1.index_of(x);  // membership checks
    const std::size_t j1 = dom.t2.index_of(y);
    dom.zscale.index_of(z);
    double acc = 0.0;
    for (std::size_t t = 0; t < j1; ++t) {
        const double yt = dom.t2.point(t);
        Env env;
        env.set(Var::X, x).set(Var::Y, yt).set(Var::Z, z);
        const double pv = k.p.eval(env);
        if (pv < 0.0) refuse_negative("p", pv, x, yt, z);
        double inner = 0.0;
        for (std::size_t q = 0; q + 1 < dom.nz(); ++q) {
            env.set(Var::Q, dom.zscale.point(q));
            const double rv = k.r.eval(env);
            if (rv < 0.0) refuse_negative("r", rv, x, yt, z);
            inner += dom.zscale.mu_at(q) * rv;
        }
        acc += dom.t2.mu_at(t) * (pv + inner);
    }
    return acc;
}

GridFunction gronwall_bound(const KernelPair& k, double c, const DomainPtr& dom) {
    if (!(c >= 0.0)) throw std::invalid_argument("bound constant c must be nonnegative");
    const KernelTables tables = KernelTables::build(k, *dom);
    return bound_from_q(tables.q_table(*dom), c, dom);
}

Certificate verify_gronwall(const GridFunction& w, const KernelPair& k, double c) {
    if (!(c >= 0.0)) throw std::invalid_argument("bound constant c must be nonnegative");
    const DomainPtr dom = w.domain_ptr();
    const ProductDomain& d = *dom;
    const std::size_t n1 = d.n1(), n2 = d.n2(), nz = d.nz();
    for (double v : w.values())
        if (v < 0.0) throw std::invalid_argument("gronwall check needs a nonnegative surface");

    const KernelTables tables = KernelTables::build(k, d);

    // Premise right-hand side c + iterated integral of [p*w + slice
    // integral of r*w], accumulated the same way the solver integrates.
    std::vector<double> rhs(d.cells());
    auto idx = [n2, nz](std::size_t i, std::size_t j, std::size_t k2) {
        return (i * n2 + j) * nz + k2;
    };
    for (std::size_t k2 = 0; k2 < nz; ++k2) {
        std::vector<double> col(n2, 0.0);
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t j = 0; j < n2; ++j) rhs[idx(i, j, k2)] = c + col[j];
            if (i + 1 < n1) {
                const double mu1 = d.t1.mu_at(i);
                double inner = 0.0;
                for (std::size_t j = 0; j + 1 < n2; ++j) {
                    double coupled = 0.0;
                    for (std::size_t q = 0; q + 1 < nz; ++q)
                        coupled += d.zscale.mu_at(q) * tables.r_at(i, j, k2, q) * w(i, j, q);
                    const double m = tables.p_at(i, j, k2) * w(i, j, k2) + coupled;
                    inner += d.t2.mu_at(j) * m;
                    col[j + 1] += mu1 * inner;
                }
            }
        }
    }

    double premise_margin = 0.0, rhs_mag = 0.0;
    bool first = true;
    double worst_x = d.t1.point(0), worst_y = d.t2.point(0), worst_z = d.zscale.point(0);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            for (std::size_t k2 = 0; k2 < nz; ++k2) {
                const double rv = rhs[idx(i, j, k2)];
                rhs_mag = std::max(rhs_mag, std::abs(rv));
                const double m = rv - w(i, j, k2);
                if (first || m < premise_margin) {
                    first = false;
                    premise_margin = m;
                    worst_x = d.t1.point(i);
                    worst_y = d.t2.point(j);
                    worst_z = d.zscale.point(k2);
                }
            }
    const bool premise_ok = premise_margin >= -pass_slack(rhs_mag);

    Certificate cert;
    cert.kind = CertKind::Gronwall;
    cert.premise_ok = premise_ok;
    cert.bound = bound_from_q(tables.q_table(d), c, dom);
    cert.observed = w;
    const SurfaceComparison cmp = compare_surfaces(*cert.bound, *cert.observed);
    cert.margin = cmp.margin;
    cert.worst = cmp.worst;
    cert.constants["c"] = c;
    cert.constants["premise_margin"] = premise_margin;
    if (!premise_ok) {
        cert.verdict = CertVerdict::Fail;
        std::ostringstream os;
        os << "premise violated at (x=" << worst_x << ", y=" << worst_y << ", z=" << worst_z
           << ") by " << -premise_margin << "; bound not asserted";
        cert.note = os.str();
    } else {
        cert.verdict = cmp.ok ? CertVerdict::Pass : CertVerdict::Fail;
    }
    return cert;
}

ContractionConstants estimate_constants(const ProblemSpec& spec, const Expr& M, const Expr& K) {
    spec.validate();
    const ProductDomain& d = *spec.domain;
    const std::size_t n1 = d.n1(), n2 = d.n2(), nz = d.nz();

    KernelPair moduli{M, K};
    const KernelTables mk = KernelTables::build(moduli, d);

    const ExpWeight weight(d, spec.lambda);

    // Slice integral of the kernel at the zero iterate, then the forcing at
    // the zero iterate.
    const PicardOperator op = PicardOperator::from_spec(spec);
    const SolutionTriple zero = SolutionTriple::zeros(spec.domain);
    std::vector<double> f0(d.cells());
    auto idx = [n2, nz](std::size_t i, std::size_t j, std::size_t k) {
        return (i * n2 + j) * nz + k;
    };
    {
        const bool full = spec.kind == ProblemKind::Full;
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j) {
                const std::vector<double> h0 = op.kernel_term(zero, i, j);
                for (std::size_t k = 0; k < nz; ++k) {
                    Env env;
                    env.set(Var::X, d.t1.point(i))
                        .set(Var::Y, d.t2.point(j))
                        .set(Var::Z, d.zscale.point(k))
                        .set(Var::U, 0.0)
                        .set(Var::HU, h0[k]);
                    if (full) env.set(Var::U1, 0.0).set(Var::U2, 0.0);
                    f0[idx(i, j, k)] = spec.forcing.eval(env);
                }
            }
    }

    // B(i,j,k) = M * e1 * e2 * (ez(k) + slice integral of K * ez(q)): the
    // weighted integrand shared by all three contraction conditions.
    std::vector<double> B(d.cells());
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            for (std::size_t k = 0; k < nz; ++k) {
                double kq = 0.0;
                for (std::size_t q = 0; q + 1 < nz; ++q)
                    kq += d.zscale.mu_at(q) * mk.r_at(i, j, k, q) * weight.axisz(q);
                B[idx(i, j, k)] = mk.p_at(i, j, k) * weight.axis1(i) * weight.axis2(j) *
                                  (weight.axisz(k) + kq);
            }

    const Table2 alpha = sample_condition(spec.alpha, Var::X, d.t1, d.zscale);
    const Table2 beta = sample_condition(spec.beta, Var::Y, d.t2, d.zscale);
    const Table2 alpha_d1 = condition_delta(alpha, d.t1);
    const Table2 beta_d2 = condition_delta(beta, d.t2);

    ContractionConstants out;
    for (std::size_t k = 0; k < nz; ++k) {
        // Running integrals of B and |f0|: col* over both axes, line* along
        // t2 for the current row, xint* along t1 per column.
        std::vector<double> colB(n2, 0.0), colF(n2, 0.0);
        std::vector<double> xintB(n2, 0.0), xintF(n2, 0.0);
        for (std::size_t i = 0; i < n1; ++i) {
            double lineB = 0.0, lineF = 0.0;
            for (std::size_t j = 0; j < n2; ++j) {
                const double E = weight(i, j, k);
                out.gamma1 = std::max(out.gamma1, colB[j] / E);
                out.gamma2 = std::max(out.gamma2, lineB / E);
                out.gamma3 = std::max(out.gamma3, xintB[j] / E);
                out.eta1 = std::max(out.eta1, (std::abs(alpha(i, k)) + std::abs(beta(j, k)) +
                                               std::abs(alpha(0, k)) + colF[j]) /
                                                  E);
                out.eta2 = std::max(out.eta2, (std::abs(alpha_d1(i, k)) + lineF) / E);
                out.eta3 = std::max(out.eta3, (std::abs(beta_d2(j, k)) + xintF[j]) / E);
                if (j + 1 < n2) {
                    lineB += d.t2.mu_at(j) * B[idx(i, j, k)];
                    lineF += d.t2.mu_at(j) * std::abs(f0[idx(i, j, k)]);
                }
            }
            if (i + 1 < n1) {
                const double mu1 = d.t1.mu_at(i);
                double innerB = 0.0, innerF = 0.0;
                for (std::size_t j = 0; j + 1 < n2; ++j) {
                    innerB += d.t2.mu_at(j) * B[idx(i, j, k)];
                    innerF += d.t2.mu_at(j) * std::abs(f0[idx(i, j, k)]);
                    colB[j + 1] += mu1 * innerB;
                    colF[j + 1] += mu1 * innerF;
                }
                for (std::size_t j = 0; j < n2; ++j) {
                    xintB[j] += mu1 * B[idx(i, j, k)];
                    xintF[j] += mu1 * std::abs(f0[idx(i, j, k)]);
                }
            }
        }
    }
    return out;
}

double condition_magnitude(const ProblemSpec& spec) {
    spec.validate();
    const ProductDomain& d = *spec.domain;
    const Table2 alpha = sample_condition(spec.alpha, Var::X, d.t1, d.zscale);
    const Table2 beta = sample_condition(spec.beta, Var::Y, d.t2, d.zscale);
    double best = 0.0;
    for (std::size_t i = 0; i < d.n1(); ++i)
        for (std::size_t j = 0; j < d.n2(); ++j)
            for (std::size_t k = 0; k < d.nz(); ++k)
                best = std::max(best, std::abs(alpha(i, k) + beta(j, k) - alpha(0, k)));
    return best;
}

namespace {

Certificate inconclusive(CertKind kind, const std::string& note) {
    Certificate cert;
    cert.kind = kind;
    cert.verdict = CertVerdict::Inconclusive;
    cert.note = note;
    return cert;
}

}  // namespace

Certificate boundedness_certificate(const ProblemSpec& spec, const SolveReport& report,
                                    const KernelPair& k, double c) {
    spec.validate();
    if (spec.kind != ProblemKind::Reduced)
        throw std::invalid_argument("boundedness certificate applies to the reduced problem");
    if (!(c >= 0.0)) throw std::invalid_argument("bound constant c must be nonnegative");
    if (!report.converged)
        return inconclusive(CertKind::Boundedness, "solve did not converge; nothing to certify");
    if (!report.solution.domain().same_points_as(*spec.domain))
        throw std::invalid_argument("report domain does not match the problem");

    const DomainPtr dom = spec.domain;
    const ProductDomain& d = *dom;
    const std::size_t n1 = d.n1(), n2 = d.n2(), nz = d.nz();
    const KernelTables tables = KernelTables::build(k, d);
    const PicardOperator op = PicardOperator::from_spec(spec);
    const SolutionTriple& sol = report.solution;

    // Growth premises: |f| <= p (|u| + |hu|) and |j| <= r |u|, evaluated at
    // the computed solution; and |alpha + beta - alpha(x0,.)| <= c.
    double premise_margin = 0.0, premise_scale = 0.0;
    bool first = true;
    std::string where;
    auto update = [&](double margin, double scale, double x, double y, double z,
                      const char* what) {
        premise_scale = std::max(premise_scale, scale);
        if (first || margin < premise_margin) {
            first = false;
            premise_margin = margin;
            std::ostringstream os;
            os << what << " at (x=" << x << ", y=" << y << ", z=" << z << ")";
            where = os.str();
        }
    };

    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            const std::vector<double> hu = op.kernel_term(sol, i, j);
            const double x = d.t1.point(i), y = d.t2.point(j);
            for (std::size_t kz = 0; kz < nz; ++kz) {
                const double z = d.zscale.point(kz);
                Env env;
                env.set(Var::X, x).set(Var::Y, y).set(Var::Z, z);
                env.set(Var::U, sol.u(i, j, kz)).set(Var::HU, hu[kz]);
                const double fv = spec.forcing.eval(env);
                const double dom_f =
                    tables.p_at(i, j, kz) * (std::abs(sol.u(i, j, kz)) + std::abs(hu[kz]));
                update(dom_f - std::abs(fv), dom_f, x, y, z, "growth premise on f violated");
                for (std::size_t q = 0; q + 1 < nz; ++q) {
                    Env kenv;
                    kenv.set(Var::X, x).set(Var::Y, y).set(Var::Z, z);
                    kenv.set(Var::Q, d.zscale.point(q)).set(Var::U, sol.u(i, j, q));
                    const double jv = spec.kernel.eval(kenv);
                    const double dom_j = tables.r_at(i, j, kz, q) * std::abs(sol.u(i, j, q));
                    update(dom_j - std::abs(jv), dom_j, x, y, z, "growth premise on j violated");
                }
            }
        }
    {
        const Table2 alpha = sample_condition(spec.alpha, Var::X, d.t1, d.zscale);
        const Table2 beta = sample_condition(spec.beta, Var::Y, d.t2, d.zscale);
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j)
                for (std::size_t kz = 0; kz < nz; ++kz) {
                    const double cond = std::abs(alpha(i, kz) + beta(j, kz) - alpha(0, kz));
                    update(c - cond, c, d.t1.point(i), d.t2.point(j), d.zscale.point(kz),
                           "condition magnitude exceeds c");
                }
    }
    const bool premise_ok = premise_margin >= -pass_slack(premise_scale);

    Certificate cert;
    cert.kind = CertKind::Boundedness;
    cert.premise_ok = premise_ok;
    cert.bound = bound_from_q(tables.q_table(d), c, dom);
    cert.observed = abs(sol.u);
    const SurfaceComparison cmp = compare_surfaces(*cert.bound, *cert.observed);
    cert.margin = cmp.margin;
    cert.worst = cmp.worst;
    cert.constants["c"] = c;
    cert.constants["premise_margin"] = premise_margin;
    if (!premise_ok) {
        cert.verdict = CertVerdict::Fail;
        cert.note = where + "; bound not asserted";
    } else {
        cert.verdict = cmp.ok ? CertVerdict::Pass : CertVerdict::Fail;
    }
    return cert;
}

Certificate dependence_certificate(const ProblemSpec& spec1, const ProblemSpec& spec2,
                                   const KernelPair& k) {
    spec1.validate();
    spec2.validate();
    if (!spec1.domain->same_points_as(*spec2.domain))
        throw std::invalid_argument("dependence certificate needs matching domains");
    if (spec1.kind != ProblemKind::Reduced || spec2.kind != ProblemKind::Reduced)
        throw std::invalid_argument("dependence certificate applies to the reduced problem");
    if (!spec1.forcing.same_structure(spec2.forcing) || !spec1.kernel.same_structure(spec2.kernel))
        throw std::invalid_argument(
            "dependence certificate needs problems identical except for their conditions");
    if (spec1.lambda != spec2.lambda || spec1.tol != spec2.tol)
        throw std::invalid_argument("dependence certificate needs matching lambda and tol");

    const SolveReport rep1 = solve_picard(spec1);
    const SolveReport rep2 = solve_picard(spec2);
    if (!rep1.converged || !rep2.converged)
        return inconclusive(CertKind::Dependence, "a solve did not converge; nothing to certify");

    const DomainPtr dom = spec1.domain;
    const ProductDomain& d = *dom;
    const std::size_t n1 = d.n1(), n2 = d.n2(), nz = d.nz();
    const KernelTables tables = KernelTables::build(k, d);

    // Tightest constant bounding the distance between the two condition
    // aggregates over the grid.
    double a = 0.0;
    {
        const Table2 a1 = sample_condition(spec1.alpha, Var::X, d.t1, d.zscale);
        const Table2 b1 = sample_condition(spec1.beta, Var::Y, d.t2, d.zscale);
        const Table2 a2 = sample_condition(spec2.alpha, Var::X, d.t1, d.zscale);
        const Table2 b2 = sample_condition(spec2.beta, Var::Y, d.t2, d.zscale);
        for (std::size_t i = 0; i < n1; ++i)
            for (std::size_t j = 0; j < n2; ++j)
                for (std::size_t kz = 0; kz < nz; ++kz) {
                    const double diff = (a1(i, kz) + b1(j, kz) - a1(0, kz)) -
                                        (a2(i, kz) + b2(j, kz) - a2(0, kz));
                    a = std::max(a, std::abs(diff));
                }
    }

    // Realized Lipschitz premises along the two computed solutions.
    const PicardOperator op = PicardOperator::from_spec(spec1);
    const SolutionTriple& u = rep1.solution;
    const SolutionTriple& v = rep2.solution;
    double premise_margin = 0.0, premise_scale = 0.0;
    bool first = true;
    std::string where;
    auto update = [&](double margin, double scale, double x, double y, double z,
                      const char* what) {
        premise_scale = std::max(premise_scale, scale);
        if (first || margin < premise_margin) {
            first = false;
            premise_margin = margin;
            std::ostringstream os;
            os << what << " at (x=" << x << ", y=" << y << ", z=" << z << ")";
            where = os.str();
        }
    };
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            const std::vector<double> hu = op.kernel_term(u, i, j);
            const std::vector<double> hv = op.kernel_term(v, i, j);
            const double x = d.t1.point(i), y = d.t2.point(j);
            for (std::size_t kz = 0; kz < nz; ++kz) {
                const double z = d.zscale.point(kz);
                Env eu, ev;
                eu.set(Var::X, x).set(Var::Y, y).set(Var::Z, z);
                ev.set(Var::X, x).set(Var::Y, y).set(Var::Z, z);
                eu.set(Var::U, u.u(i, j, kz)).set(Var::HU, hu[kz]);
                ev.set(Var::U, v.u(i, j, kz)).set(Var::HU, hv[kz]);
                const double df = std::abs(spec1.forcing.eval(eu) - spec1.forcing.eval(ev));
                const double dom_f =
                    tables.p_at(i, j, kz) * (std::abs(u.u(i, j, kz) - v.u(i, j, kz)) +
                                             std::abs(hu[kz] - hv[kz]));
                update(dom_f - df, dom_f, x, y, z, "Lipschitz premise on f violated");
                for (std::size_t q = 0; q + 1 < nz; ++q) {
                    Env ku, kv;
                    ku.set(Var::X, x).set(Var::Y, y).set(Var::Z, z);
                    kv.set(Var::X, x).set(Var::Y, y).set(Var::Z, z);
                    ku.set(Var::Q, d.zscale.point(q)).set(Var::U, u.u(i, j, q));
                    kv.set(Var::Q, d.zscale.point(q)).set(Var::U, v.u(i, j, q));
                    const double dj = std::abs(spec1.kernel.eval(ku) - spec1.kernel.eval(kv));
                    const double dom_j =
                        tables.r_at(i, j, kz, q) * std::abs(u.u(i, j, q) - v.u(i, j, q));
                    update(dom_j - dj, dom_j, x, y, z, "Lipschitz premise on j violated");
                }
            }
        }
    const bool premise_ok = premise_margin >= -pass_slack(premise_scale);

    Certificate cert;
    cert.kind = CertKind::Dependence;
    cert.premise_ok = premise_ok;
    cert.bound = bound_from_q(tables.q_table(d), a, dom);
    cert.observed = abs_diff(u.u, v.u);
    const SurfaceComparison cmp = compare_surfaces(*cert.bound, *cert.observed);
    cert.margin = cmp.margin;
    cert.worst = cmp.worst;
    cert.constants["a"] = a;
    cert.constants["premise_margin"] = premise_margin;
    if (!premise_ok) {
        cert.verdict = CertVerdict::Fail;
        cert.note = where + "; bound not asserted";
    } else {
        cert.verdict = cmp.ok ? CertVerdict::Pass : CertVerdict::Fail;
    }
    return cert;
}

Certificate uniqueness_check(const ProblemSpec& spec, const SolutionTriple& seed_a,
                             const SolutionTriple& seed_b, const KernelPair* kernels) {
    spec.validate();
    const SolveReport rep_a = solve_picard(spec, &seed_a);
    const SolveReport rep_b = solve_picard(spec, &seed_b);
    if (!rep_a.converged || !rep_b.converged)
        return inconclusive(CertKind::Uniqueness, "a solve did not converge; nothing to certify");

    const DomainPtr dom = spec.domain;
    const ProductDomain& d = *dom;
    const ExpWeight w(d, spec.lambda);
    const double threshold = 2.0 * spec.tol;

    std::vector<double> observed(d.cells());
    for (std::size_t i = 0; i < d.n1(); ++i)
        for (std::size_t j = 0; j < d.n2(); ++j)
            for (std::size_t k = 0; k < d.nz(); ++k) {
                const double sem =
                    std::abs(rep_a.solution.u(i, j, k) - rep_b.solution.u(i, j, k)) +
                    std::abs(rep_a.solution.d1(i, j, k) - rep_b.solution.d1(i, j, k)) +
                    std::abs(rep_a.solution.d2(i, j, k) - rep_b.solution.d2(i, j, k));
                observed[(i * d.n2() + j) * d.nz() + k] = sem / w(i, j, k);
            }

    Certificate cert;
    cert.kind = CertKind::Uniqueness;
    cert.premise_ok = true;
    cert.bound = GridFunction::constant(dom, threshold);
    cert.observed = GridFunction(dom, std::move(observed));
    const SurfaceComparison cmp = compare_surfaces(*cert.bound, *cert.observed);
    cert.margin = cmp.margin;
    cert.worst = cmp.worst;
    const double distance = weighted_sup_distance(rep_a.solution, rep_b.solution, spec.lambda);
    cert.constants["distance"] = distance;
    cert.constants["threshold"] = threshold;
    if (kernels) {
        // Total growth integral over the whole domain, reported per the
        // finiteness condition; always finite on a finite grid.
        const KernelTables tables = KernelTables::build(*kernels, d);
        double total = 0.0;
        for (std::size_t k = 0; k < d.nz(); ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < d.n1(); ++i)
                for (std::size_t j = 0; j + 1 < d.n2(); ++j)
                    acc += d.t1.mu_at(i) * d.t2.mu_at(j) * tables.bracket(d, i, j, k);
            total = std::max(total, acc);
        }
        cert.constants["growth_integral"] = total;
    }
    cert.verdict = distance <= threshold ? CertVerdict::Pass : CertVerdict::Fail;
    return cert;
}

}  // namespace tsde
