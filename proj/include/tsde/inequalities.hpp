// Explicit bound machinery: the two-variable Gronwall-type surface bound,
// contraction-constant estimation for the fixed-point argument, and the
// boundedness / dependence / uniqueness certificates built on them.

#pragma once

#include <map>
#include <optional>
#include <string>

#include "tsde/expr.hpp"
#include "tsde/grid.hpp"
#include "tsde/solver.hpp"

namespace tsde {

/// Nonnegative kernels for the Gronwall-type inequality: p(x,y,z) for the
/// local term and r(x,y,z,q) for the slice-coupled term. The same pair
/// carries the growth moduli of the reduced problem.
struct KernelPair {
    Expr p;  // p(x,y,z)
    Expr r;  // r(x,y,z,q)
};

enum class CertKind { Gronwall, Boundedness, Dependence, Uniqueness, Contraction };
enum class CertVerdict { Pass, Fail, Inconclusive };

std::string_view cert_kind_name(CertKind k);
std::string_view cert_verdict_name(CertVerdict v);

struct WorstPoint {
    double x = 0.0, y = 0.0, z = 0.0;
    double bound = 0.0, observed = 0.0;
};

/// Outcome record of one theorem check. When the hypotheses fail the bound
/// is not asserted: premise_ok is false, the note explains, and the verdict
/// is Fail without claiming anything about the theorem itself.
struct Certificate {
    CertKind kind = CertKind::Gronwall;
    CertVerdict verdict = CertVerdict::Fail;
    bool premise_ok = true;
    double margin = 0.0;  // min over the grid of bound - observed
    std::map<std::string, double> constants;
    std::optional<WorstPoint> worst;
    std::optional<GridFunction> bound;
    std::optional<GridFunction> observed;
    std::string note;

    bool pass() const { return verdict == CertVerdict::Pass; }
};

/// Coefficient of the bound exponential at (x, y, z): the integral over
/// t in [y0, y) of p(x,t,z) plus the slice integral of r(x,t,z,.).
/// Nonnegative kernels are enforced by scan; a negative value is refused
/// with std::domain_error.
double compute_Q(const KernelPair& k, const ProductDomain& dom, double x, double y, double z);

/// The bound surface c * product over s in [x0, x) of (1 + mu1(s) Q(s,y,z)).
GridFunction gronwall_bound(const KernelPair& k, double c, const DomainPtr& dom);

/// Checks the inequality premise
///   w <= c + iterated integral of [p*w + slice integral of r*w]
/// pointwise, then compares w against the bound surface. w must be
/// nonnegative.
Certificate verify_gronwall(const GridFunction& w, const KernelPair& k, double c);

/// Smallest admissible contraction and growth constants for the
/// fixed-point argument, computed as suprema of weighted integral ratios
/// over the grid. M bounds the forcing's Lipschitz modulus in its state
/// arguments, K the kernel's.
struct ContractionConstants {
    double gamma1 = 0.0, gamma2 = 0.0, gamma3 = 0.0;
    double eta1 = 0.0, eta2 = 0.0, eta3 = 0.0;
    double gamma() const { return gamma1 + gamma2 + gamma3; }
    bool contractive() const { return gamma() < 1.0; }
};

ContractionConstants estimate_constants(const ProblemSpec& spec, const Expr& M, const Expr& K);

/// Boundedness certificate for a converged reduced-problem solve: checks
/// the growth premises |f| <= p(|u|+|hu|), |j| <= r|u| and
/// |alpha+beta-alpha(x0,.)| <= c, then compares |u| against the bound
/// surface for (k, c).
Certificate boundedness_certificate(const ProblemSpec& spec, const SolveReport& report,
                                    const KernelPair& k, double c);

/// Dependence certificate: solves both problems (identical except for the
/// side conditions), computes the tightest condition-distance constant a,
/// checks the realized Lipschitz premises, and compares |u - v| against the
/// bound surface for (k, a).
Certificate dependence_certificate(const ProblemSpec& spec1, const ProblemSpec& spec2,
                                   const KernelPair& k);

/// Uniqueness check: solves from two seeds and passes when the final
/// weighted distance is at most 2*tol. A non-convergent solve yields an
/// Inconclusive verdict. When kernels are given, the finiteness value of
/// the growth integral over the whole domain is reported in the constants.
Certificate uniqueness_check(const ProblemSpec& spec, const SolutionTriple& seed_a,
                             const SolutionTriple& seed_b, const KernelPair* kernels = nullptr);

/// Largest |alpha(x,z) + beta(y,z) - alpha(x0,z)| over the grid: the
/// tightest constant for the condition-magnitude premise.
double condition_magnitude(const ProblemSpec& spec);

}  // namespace tsde
