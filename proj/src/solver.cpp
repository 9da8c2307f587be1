#include "tsde/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tsde {

namespace {

[[noreturn]] void rethrow_with_point(const EvalError& e, const char* role, double x, double y,
                                     double z) {
    std::ostringstream os;
    os << role << " at (x=" << x << ", y=" << y << ", z=" << z << "): " << e.what();
    throw EvalError(os.str());
}

void require_only(const Expr& e, std::uint8_t allowed, const char* role) {
    const std::uint8_t used = e.variables();
    if (used & ~allowed) {
        for (int i = 0; i < kVarCount; ++i) {
            const std::uint8_t bit = std::uint8_t{1} << i;
            if ((used & bit) && !(allowed & bit)) {
                throw std::invalid_argument(std::string(role) + " must not reference '" +
                                            std::string(var_name(static_cast<Var>(i))) + "'");
            }
        }
    }
}

std::uint8_t mask_of(std::initializer_list<Var> vars) {
    std::uint8_t m = 0;
    for (Var v : vars) m |= std::uint8_t{1} << static_cast<int>(v);
    return m;
}

}  // namespace

void ProblemSpec::validate() const {
    if (!domain) throw std::invalid_argument("problem needs a domain");
    if (domain->n1() < 2 || domain->n2() < 2)
        throw std::invalid_argument("problem needs at least two points on each of t1 and t2");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    if (forcing.empty() || kernel.empty() || alpha.empty() || beta.empty())
        throw std::invalid_argument("problem needs forcing, kernel, alpha and beta expressions");

    const auto xyz = mask_of({Var::X, Var::Y, Var::Z});
    if (kind == ProblemKind::Full) {
        require_only(forcing, xyz | mask_of({Var::U, Var::U1, Var::U2, Var::HU}), "F");
        require_only(kernel, xyz | mask_of({Var::Q, Var::U, Var::U1, Var::U2}), "G");
    } else {
        require_only(forcing, xyz | mask_of({Var::U, Var::HU}), "f");
        require_only(kernel, xyz | mask_of({Var::Q, Var::U}), "j");
    }
    require_only(alpha, mask_of({Var::X, Var::Z}), "alpha");
    require_only(beta, mask_of({Var::Y, Var::Z}), "beta");
}

Table2 sample_condition(const Expr& e, Var axis_var, const TimeScale& axis,
                        const TimeScale& zscale) {
    Table2 out(axis.size(), zscale.size());
    for (std::size_t i = 0; i < axis.size(); ++i)
        for (std::size_t k = 0; k < zscale.size(); ++k) {
            Env env;
            env.set(axis_var, axis.point(i)).set(Var::Z, zscale.point(k));
            out.at(i, k) = e.eval(env);
        }
    return out;
}

Table2 condition_delta(const Table2& t, const TimeScale& axis) {
    Table2 out(t.rows, t.cols);
    for (std::size_t i = 0; i + 1 < t.rows; ++i)
        for (std::size_t k = 0; k < t.cols; ++k)
            out.at(i, k) = (t(i + 1, k) - t(i, k)) / axis.mu_at(i);
    if (t.rows >= 2)
        for (std::size_t k = 0; k < t.cols; ++k) out.at(t.rows - 1, k) = out(t.rows - 2, k);
    return out;
}

PicardOperator::PicardOperator(DomainPtr dom, Forcing forcing, KernelTerm kernel, Table2 alpha,
                               Table2 beta)
    : dom_(std::move(dom)),
      forcing_(std::move(forcing)),
      kernel_(std::move(kernel)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)) {
    if (dom_->n1() < 2 || dom_->n2() < 2)
        throw std::invalid_argument("operator needs at least two points on each of t1 and t2");
    if (alpha_.rows != dom_->n1() || alpha_.cols != dom_->nz() || beta_.rows != dom_->n2() ||
        beta_.cols != dom_->nz())
        throw std::invalid_argument("condition tables do not match the domain");
    alpha_d1_ = condition_delta(alpha_, dom_->t1);
    beta_d2_ = condition_delta(beta_, dom_->t2);
}

PicardOperator PicardOperator::from_spec(const ProblemSpec& spec) {
    spec.validate();
    const ProductDomain& d = *spec.domain;
    Table2 alpha = sample_condition(spec.alpha, Var::X, d.t1, d.zscale);
    Table2 beta = sample_condition(spec.beta, Var::Y, d.t2, d.zscale);

    const DomainPtr dom = spec.domain;
    const Expr forcing_expr = spec.forcing;
    const Expr kernel_expr = spec.kernel;
    const ProblemKind kind = spec.kind;

    Forcing forcing = [dom, forcing_expr, kind](std::size_t i, std::size_t j, std::size_t k,
                                                double u, double u1, double u2, double hu) {
        const double x = dom->t1.point(i), y = dom->t2.point(j), z = dom->zscale.point(k);
        Env env;
        env.set(Var::X, x).set(Var::Y, y).set(Var::Z, z).set(Var::U, u).set(Var::HU, hu);
        if (kind == ProblemKind::Full) env.set(Var::U1, u1).set(Var::U2, u2);
        try {
            return forcing_expr.eval(env);
        } catch (const EvalError& e) {
            rethrow_with_point(e, "forcing", x, y, z);
        }
    };

    KernelTerm kernel = [dom, kernel_expr, kind](const SolutionTriple& s, std::size_t i,
                                                 std::size_t j, std::span<double> out) {
        const TimeScale& zs = dom->zscale;
        const double x = dom->t1.point(i), y = dom->t2.point(j);
        // Kernel samples over the integration variable are shared by every
        // z at this (x, y); evaluate per (z, q) pair.
        for (std::size_t k = 0; k < zs.size(); ++k) {
            const double z = zs.point(k);
            double acc = 0.0;
            for (std::size_t q = 0; q + 1 < zs.size(); ++q) {
                Env env;
                env.set(Var::X, x).set(Var::Y, y).set(Var::Z, z).set(Var::Q, zs.point(q));
                env.set(Var::U, s.u(i, j, q));
                if (kind == ProblemKind::Full)
                    env.set(Var::U1, s.d1(i, j, q)).set(Var::U2, s.d2(i, j, q));
                double g;
                try {
                    g = kernel_expr.eval(env);
                } catch (const EvalError& e) {
                    rethrow_with_point(e, "kernel", x, y, z);
                }
                acc += zs.mu_at(q) * g;
            }
            out[k] = acc;
        }
    };

    return PicardOperator(dom, std::move(forcing), std::move(kernel), std::move(alpha),
                          std::move(beta));
}

PicardOperator PicardOperator::from_table(DomainPtr dom, const GridFunction& forcing, Table2 alpha,
                                          Table2 beta) {
    if (!forcing.domain().same_points_as(*dom))
        throw std::invalid_argument("forcing table domain mismatch");
    GridFunction table = forcing;
    Forcing f = [table](std::size_t i, std::size_t j, std::size_t k, double, double, double,
                        double) { return table(i, j, k); };
    KernelTerm none = [](const SolutionTriple&, std::size_t, std::size_t, std::span<double> out) {
        for (double& v : out) v = 0.0;
    };
    return PicardOperator(std::move(dom), std::move(f), std::move(none), std::move(alpha),
                          std::move(beta));
}

std::vector<double> PicardOperator::kernel_term(const SolutionTriple& s, std::size_t i,
                                                std::size_t j) const {
    std::vector<double> out(dom_->nz(), 0.0);
    kernel_(s, i, j, out);
    return out;
}

SolutionTriple PicardOperator::apply(const SolutionTriple& s) const {
    const ProductDomain& d = *dom_;
    if (!s.domain().same_points_as(d)) throw std::invalid_argument("iterate domain mismatch");
    const std::size_t n1 = d.n1(), n2 = d.n2(), nz = d.nz();
    auto idx = [n2, nz](std::size_t i, std::size_t j, std::size_t k) {
        return (i * n2 + j) * nz + k;
    };

    // Right-hand side evaluated on the whole grid from the current iterate.
    std::vector<double> rhs(d.cells());
    std::vector<double> hu(nz);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            kernel_(s, i, j, hu);
            for (std::size_t k = 0; k < nz; ++k)
                rhs[idx(i, j, k)] =
                    forcing_(i, j, k, s.u(i, j, k), s.d1(i, j, k), s.d2(i, j, k), hu[k]);
        }

    std::vector<double> u(d.cells()), ud1(d.cells()), ud2(d.cells());

    // u(x,y,z) = alpha + beta - alpha(x0) + iterated integral of the rhs.
    // The inner running sum is over t < y, the outer over s < x.
    for (std::size_t k = 0; k < nz; ++k) {
        std::vector<double> col(n2, 0.0);  // col[j] = sum over s<i of mu1 * inner(s, j)
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t j = 0; j < n2; ++j)
                u[idx(i, j, k)] = alpha_(i, k) + beta_(j, k) - alpha_(0, k) + col[j];
            if (i + 1 < n1) {
                const double mu1 = d.t1.mu_at(i);
                double inner = 0.0;
                for (std::size_t j = 0; j + 1 < n2; ++j) {
                    inner += d.t2.mu_at(j) * rhs[idx(i, j, k)];
                    col[j + 1] += mu1 * inner;
                }
            }
        }
    }

    // u^{d1}(x,y,z) = alpha^{d1}(x,z) + integral over t < y of rhs(x,t,z).
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t k = 0; k < nz; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n2; ++j) {
                ud1[idx(i, j, k)] = alpha_d1_(i, k) + acc;
                if (j + 1 < n2) acc += d.t2.mu_at(j) * rhs[idx(i, j, k)];
            }
        }

    // u^{d2}(x,y,z) = beta^{d2}(y,z) + integral over s < x of rhs(s,y,z).
    for (std::size_t j = 0; j < n2; ++j)
        for (std::size_t k = 0; k < nz; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n1; ++i) {
                ud2[idx(i, j, k)] = beta_d2_(j, k) + acc;
                if (i + 1 < n1) acc += d.t1.mu_at(i) * rhs[idx(i, j, k)];
            }
        }

    return SolutionTriple(GridFunction(dom_, std::move(u)), GridFunction(dom_, std::move(ud1)),
                          GridFunction(dom_, std::move(ud2)));
}

SolutionTriple apply_picard(const SolutionTriple& s, const ProblemSpec& spec) {
    return PicardOperator::from_spec(spec).apply(s);
}

std::vector<double> kernel_term(const SolutionTriple& s, const ProblemSpec& spec, std::size_t i,
                                std::size_t j) {
    return PicardOperator::from_spec(spec).kernel_term(s, i, j);
}

SolveReport solve_picard(const PicardOperator& op, double lambda, double tol, int max_iter,
                         const SolutionTriple* seed) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

    // Sweep zero imposes the side conditions on the seed; counted sweeps
    // then measure successive distances, which is what contraction acts on.
    SolutionTriple cur = op.apply(seed ? *seed : SolutionTriple::zeros(op.domain_ptr()));

    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(max_iter));
    bool converged = false;
    double final_sup = 0.0;

    for (int n = 0; n < max_iter; ++n) {
        SolutionTriple next = op.apply(cur);
        const double r = weighted_sup_distance(next, cur, lambda);
        history.push_back(r);
        final_sup = sup_distance(next, cur);
        cur = std::move(next);
        if (!std::isfinite(r)) break;  // diverged; report what happened
        if (r <= tol) {
            converged = true;
            break;
        }
    }

    double gamma_hat = 0.0;
    for (std::size_t n = 1; n < history.size(); ++n) {
        if (history[n - 1] > 0.0)
            gamma_hat = std::max(gamma_hat, history[n] / history[n - 1]);
    }

    SolveReport report{std::move(cur), static_cast<int>(history.size()), std::move(history),
                       gamma_hat, final_sup, converged};
    return report;
}

SolveReport solve_picard(const ProblemSpec& spec, const SolutionTriple* seed) {
    spec.validate();
    return solve_picard(PicardOperator::from_spec(spec), spec.lambda, spec.tol, spec.max_iter,
                        seed);
}

CompatibilityReport check_compatibility(const ProblemSpec& spec) {
    spec.validate();
    const ProductDomain& d = *spec.domain;
    const Table2 alpha = sample_condition(spec.alpha, Var::X, d.t1, d.zscale);
    const Table2 beta = sample_condition(spec.beta, Var::Y, d.t2, d.zscale);

    double alpha_mag = 0.0;
    for (double v : alpha.v) alpha_mag = std::max(alpha_mag, std::abs(v));

    CompatibilityReport rep;
    rep.threshold = 1e-9 * (1.0 + alpha_mag);
    rep.worst_z = d.zscale.point(0);
    for (std::size_t k = 0; k < d.nz(); ++k) {
        const double mismatch = std::abs(alpha(0, k) - beta(0, k));
        if (mismatch > rep.max_mismatch) {
            rep.max_mismatch = mismatch;
            rep.worst_z = d.zscale.point(k);
        }
    }
    rep.ok = rep.max_mismatch <= rep.threshold;
    return rep;
}

}  // namespace tsde
