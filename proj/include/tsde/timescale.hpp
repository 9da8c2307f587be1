// Finite time scales and single-variable delta calculus: jump operators,
// graininess, delta derivative/integral, circle arithmetic, and the
// generalized time-scale exponential.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tsde {

/// A finite time scale: a nonempty, strictly increasing set of real
/// abscissae. On a finite scale every point except the maximum is
/// right-scattered, so delta calculus below is exact, not a discretization.
class TimeScale {
public:
    /// Builds a scale from arbitrary points: sorts them and merges points
    /// closer than 1e-12 relative. Throws std::invalid_argument when empty.
    explicit TimeScale(std::vector<double> points);

    /// steps+1 equally spaced points covering [start, stop].
    static TimeScale uniform(double start, double stop, std::size_t steps);
    /// The integers a, a+1, ..., b.
    static TimeScale integer_range(long a, long b);
    /// count geometric points t0, t0*q, t0*q^2, ... (t0 > 0, q > 1).
    static TimeScale geometric(double t0, double q, std::size_t count);

    std::size_t size() const noexcept { return pts_.size(); }
    double point(std::size_t i) const { return pts_[i]; }
    double min() const noexcept { return pts_.front(); }
    double max() const noexcept { return pts_.back(); }
    std::span<const double> points() const noexcept { return pts_; }

    /// Exact membership of a stored abscissa.
    bool contains(double t) const noexcept;
    /// Index of the stored point equal to t; throws std::domain_error if
    /// t is not a member.
    std::size_t index_of(double t) const;

    /// Forward jump sigma(t): the next point of the scale; sigma(max)=max.
    double sigma(double t) const;
    /// Graininess mu(t) = sigma(t) - t; zero exactly at the maximum.
    double graininess(double t) const;

    /// Index-level variants used by grid loops.
    double sigma_at(std::size_t i) const;
    double mu_at(std::size_t i) const;

    bool same_points_as(const TimeScale& other) const noexcept;

private:
    std::vector<double> pts_;
};

/// A real-valued function sampled on every point of a scale.
struct SampledFunction {
    TimeScale scale;
    std::vector<double> values;

    SampledFunction(TimeScale s, std::vector<double> v);

    static SampledFunction constant(TimeScale s, double c);

    template <class F>
    static SampledFunction from(TimeScale s, F&& f) {
        std::vector<double> v;
        v.reserve(s.size());
        for (double t : s.points()) v.push_back(f(t));
        return SampledFunction(std::move(s), std::move(v));
    }

    double operator()(double t) const { return values[scale.index_of(t)]; }
    double at(std::size_t i) const { return values[i]; }
};

/// Delta derivative (f(sigma(t)) - f(t)) / mu(t). Every non-max point of a
/// finite scale is right-scattered, so this is the exact derivative.
/// Throws std::domain_error at t = max(scale) where it is undefined.
double delta_derivative(const SampledFunction& f, double t);

/// Cauchy delta integral over [t1, t2): the left sum of mu(t) * f(t).
/// Requires t1 <= t2, both members of the scale.
double delta_integral(const SampledFunction& f, double t1, double t2);

/// Circle minus: -p / (1 + mu*p), the additive inverse in the regressive
/// group. Throws std::domain_error when 1 + mu*p == 0.
double circle_minus(double p, double mu);

/// Generalized exponential e_p(t, t0) for a sampled coefficient p: the
/// product of (1 + mu(s)p(s)) over s in [t0, t), and the reciprocal of
/// e_p(t0, t) when t < t0. Throws std::domain_error when p is not
/// regressive at an intermediate point.
double ts_exp(const SampledFunction& p, double t, double t0);

/// Constant-coefficient exponential e_lambda(t, t0) on the given scale.
double ts_exp(const TimeScale& ts, double lambda, double t, double t0);

/// Cumulative table e_lambda(t_i, min) for every point of the scale.
/// entry[0] = 1 (empty product).
std::vector<double> ts_exp_table(const TimeScale& ts, double lambda);

/// Exact solution of the first-order initial value problem
/// u^delta = p*u, u(min) = u0, by forward recursion
/// u(sigma(t)) = u(t) * (1 + mu(t)p(t)).
SampledFunction solve_first_order(const SampledFunction& p, double u0);

}  // namespace tsde
