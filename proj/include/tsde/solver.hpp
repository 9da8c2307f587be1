// Successive-approximation solver for the mixed-derivative dynamic
// integrodifferential equation
//
//     u^{d2 d1}(x,y,z) = F(x, y, z, u, u^{d1}, u^{d2}, (Hu))
//     u(x, y0, z) = alpha(x, z),   u(x0, y, z) = beta(y, z)
//
// where (Hu)(x,y,z) integrates a kernel G over the slice interval. The
// reduced form drops the derivative arguments:
//
//     u^{d2 d1}(x,y,z) = f(x, y, z, u, (hu)),
//     (hu)(x,y,z) = integral over q of j(x, y, z, q, u(x,y,q)).
//
// One operator application rebuilds the triple from the equivalent integral
// equations; iteration stops when successive iterates are closer than tol
// in the weighted sup norm.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tsde/expr.hpp"
#include "tsde/grid.hpp"

namespace tsde {

enum class ProblemKind { Full, Reduced };

/// One problem instance: domain, equation right-hand sides as expressions,
/// side conditions, weight exponent and stopping parameters.
struct ProblemSpec {
    DomainPtr domain;
    ProblemKind kind = ProblemKind::Full;
    Expr forcing;  // F(x,y,z,u,u1,u2,Hu) or, reduced, f(x,y,z,u,Hu)
    Expr kernel;   // G(x,y,z,q,u,u1,u2) or, reduced, j(x,y,z,q,u)
    Expr alpha;    // alpha(x,z)
    Expr beta;     // beta(y,z)
    double lambda = 1.0;
    double tol = 1e-10;
    int max_iter = 50;

    /// Checks field sanity and that each expression only uses the
    /// variables its role allows. Throws std::invalid_argument.
    void validate() const;
};

struct SolveReport {
    SolutionTriple solution;
    int iterations = 0;
    std::vector<double> residual_history;  // weighted sup distances per sweep
    double gamma_hat = 0.0;                // max successive residual ratio
    double final_residual_sup = 0.0;       // unweighted companion of the last entry
    bool converged = false;
};

/// Dense value table, row index first.
struct Table2 {
    std::size_t rows = 0, cols = 0;
    std::vector<double> v;

    Table2() = default;
    Table2(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
    double operator()(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
};

/// One sweep of the successive-approximation operator. Built either from a
/// ProblemSpec (expression-backed) or directly from callables, which lets
/// tests drive it with tabulated forcing.
class PicardOperator {
public:
    /// forcing(i, j, k, u, u1, u2, hu) -> value of the right-hand side.
    using Forcing =
        std::function<double(std::size_t, std::size_t, std::size_t, double, double, double, double)>;
    /// kernel_term(triple, i, j, out): fills out[k] with the slice integral
    /// at (x_i, y_j, z_k).
    using KernelTerm =
        std::function<void(const SolutionTriple&, std::size_t, std::size_t, std::span<double>)>;

    PicardOperator(DomainPtr dom, Forcing forcing, KernelTerm kernel, Table2 alpha, Table2 beta);

    static PicardOperator from_spec(const ProblemSpec& spec);

    /// Test path: forcing given as a precomputed table (independent of the
    /// iterate, kernel term identically zero), conditions sampled from
    /// tables.
    static PicardOperator from_table(DomainPtr dom, const GridFunction& forcing, Table2 alpha,
                                     Table2 beta);

    SolutionTriple apply(const SolutionTriple& s) const;
    std::vector<double> kernel_term(const SolutionTriple& s, std::size_t i, std::size_t j) const;

    const ProductDomain& domain() const { return *dom_; }
    const DomainPtr& domain_ptr() const { return dom_; }

private:
    DomainPtr dom_;
    Forcing forcing_;
    KernelTerm kernel_;
    Table2 alpha_, beta_;      // sampled conditions
    Table2 alpha_d1_, beta_d2_;  // delta derivatives, last row boundary-filled
};

/// Samples an (x,z) or (y,z) condition expression on axis x zscale.
Table2 sample_condition(const Expr& e, Var axis_var, const TimeScale& axis, const TimeScale& zscale);

/// Delta derivative of a condition table along its axis; the last row is
/// boundary-filled by copying the previous one.
Table2 condition_delta(const Table2& t, const TimeScale& axis);

/// One application of the operator defined by the spec.
SolutionTriple apply_picard(const SolutionTriple& s, const ProblemSpec& spec);

/// Slice integral term (Hu or hu) at one (x_i, y_j), one value per z point.
std::vector<double> kernel_term(const SolutionTriple& s, const ProblemSpec& spec, std::size_t i,
                                std::size_t j);

/// Iterates the operator from the seed (zero triple by default). The seed
/// is first pushed through the operator once so that every counted sweep
/// starts from a triple that already carries the side conditions; residuals
/// then measure successive sweeps. Non-convergence within max_iter yields
/// converged = false, not an exception.
SolveReport solve_picard(const ProblemSpec& spec, const SolutionTriple* seed = nullptr);

/// Same iteration driven by an already-built operator (used with tabulated
/// forcing).
SolveReport solve_picard(const PicardOperator& op, double lambda, double tol, int max_iter,
                         const SolutionTriple* seed = nullptr);

struct CompatibilityReport {
    double max_mismatch = 0.0;
    double threshold = 0.0;
    double worst_z = 0.0;
    bool ok = false;
};

/// Checks the corner identity alpha(x0, z) == beta(y0, z) for every z, with
/// slack 1e-9 * (1 + max |alpha|).
CompatibilityReport check_compatibility(const ProblemSpec& spec);

}  // namespace tsde
