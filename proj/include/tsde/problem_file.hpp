// Line-oriented problem files.
//
//   [domain]            t1 / t2 / zscale, each one of
//                         uniform(start, stop, n) | integers(a, b)
//                         | qscale(t0, q, n) | points(v1, v2, ...)
//   [equation]          kind = full | reduced, then F = .. / G = ..
//                         (or f = .. / j = ..)
//   [conditions]        alpha = .., beta = ..
//   [weights]           lambda = .., tol = .., max_iter = ..
//   [kernels]           optional: p = .., r = .., M = .., K = ..
//   [conditions2]       optional: alpha2 = .., beta2 = ..
//
// '#' starts a comment. Plain numbers are decimal; everything richer is an
// expression.

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "tsde/inequalities.hpp"
#include "tsde/solver.hpp"

namespace tsde {

class ProblemFileError : public std::runtime_error {
public:
    ProblemFileError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

struct ProblemFile {
    DomainPtr domain;
    ProblemKind kind = ProblemKind::Full;
    Expr forcing, kernel, alpha, beta;
    double lambda = 0.0, tol = 0.0;
    int max_iter = 0;
    std::optional<Expr> p, r, moduli_M, moduli_K;
    std::optional<Expr> alpha2, beta2;

    ProblemSpec to_spec() const;

    /// The same problem with the second conditions; requires [conditions2].
    ProblemSpec to_spec2() const;

    /// Built from [kernels] p and r; empty when either is missing.
    std::optional<KernelPair> kernel_pair() const;
};

ProblemFile parse_problem_file(std::istream& is);
ProblemFile load_problem_file(const std::string& path);

}  // namespace tsde
