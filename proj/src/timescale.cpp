#include "tsde/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tsde {

namespace {

[[noreturn]] void not_a_member(double t) {
    std::ostringstream os;
    os << "point " << t << " is not a member of the time scale";
    throw std::domain_error(os.str());
}

[[noreturn]] void non_regressive(double t) {
    std::ostringstream os;
    os << "non-regressive coefficient: 1 + mu*p vanishes at t = " << t;
    throw std::domain_error(os.str());
}

bool nearly_equal(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= 1e-12 * scale;
}

}  // namespace

TimeScale::TimeScale(std::vector<double> points) {
    if (points.empty()) throw std::invalid_argument("time scale must be nonempty");
    for (double p : points) {
        if (!std::isfinite(p)) throw std::invalid_argument("time scale points must be finite");
    }
    std::sort(points.begin(), points.end());
    pts_.reserve(points.size());
    pts_.push_back(points.front());
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!nearly_equal(points[i], pts_.back())) pts_.push_back(points[i]);
    }
}

TimeScale TimeScale::uniform(double start, double stop, std::size_t steps) {
    if (!(start < stop)) throw std::invalid_argument("uniform scale needs start < stop");
    if (steps == 0) throw std::invalid_argument("uniform scale needs at least one step");
    std::vector<double> pts;
    pts.reserve(steps + 1);
    const double len = stop - start;
    for (std::size_t i = 0; i < steps; ++i)
        pts.push_back(start + len * (static_cast<double>(i) / static_cast<double>(steps)));
    pts.push_back(stop);
    return TimeScale(std::move(pts));
}

TimeScale TimeScale::integer_range(long a, long b) {
    if (a > b) throw std::invalid_argument("integer range needs a <= b");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(b - a) + 1);
    for (long k = a; k <= b; ++k) pts.push_back(static_cast<double>(k));
    return TimeScale(std::move(pts));
}

TimeScale TimeScale::geometric(double t0, double q, std::size_t count) {
    if (!(t0 > 0.0)) throw std::invalid_argument("geometric scale needs t0 > 0");
    if (!(q > 1.0)) throw std::invalid_argument("geometric scale needs ratio q > 1");
    if (count == 0) throw std::invalid_argument("geometric scale needs at least one point");
    std::vector<double> pts;
    pts.reserve(count);
    double t = t0;
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::isfinite(t)) throw std::invalid_argument("geometric scale overflows");
        pts.push_back(t);
        t *= q;
    }
    return TimeScale(std::move(pts));
}

bool TimeScale::contains(double t) const noexcept {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), t);
    return it != pts_.end() && *it == t;
}

std::size_t TimeScale::index_of(double t) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), t);
    if (it == pts_.end() || *it != t) not_a_member(t);
    return static_cast<std::size_t>(it - pts_.begin());
}

double TimeScale::sigma(double t) const { return sigma_at(index_of(t)); }

double TimeScale::graininess(double t) const { return mu_at(index_of(t)); }

double TimeScale::sigma_at(std::size_t i) const {
    return i + 1 < pts_.size() ? pts_[i + 1] : pts_.back();
}

double TimeScale::mu_at(std::size_t i) const {
    return i + 1 < pts_.size() ? pts_[i + 1] - pts_[i] : 0.0;
}

bool TimeScale::same_points_as(const TimeScale& other) const noexcept {
    return pts_ == other.pts_;
}

SampledFunction::SampledFunction(TimeScale s, std::vector<double> v) : scale(std::move(s)), values(std::move(v)) {
    if (values.size() != scale.size())
        throw std::invalid_argument("sampled function needs one value per scale point");
}

SampledFunction SampledFunction::constant(TimeScale s, double c) {
    std::vector<double> v(s.size(), c);
    return SampledFunction(std::move(s), std::move(v));
}

double delta_derivative(const SampledFunction& f, double t) {
    const std::size_t i = f.scale.index_of(t);
    if (i + 1 == f.scale.size())
        throw std::domain_error("delta derivative is undefined at the maximum of the scale");
    return (f.values[i + 1] - f.values[i]) / f.scale.mu_at(i);
}

double delta_integral(const SampledFunction& f, double t1, double t2) {
    const std::size_t i1 = f.scale.index_of(t1);
    const std::size_t i2 = f.scale.index_of(t2);
    if (i1 > i2) throw std::domain_error("delta integral needs t1 <= t2");
    double acc = 0.0;
    for (std::size_t i = i1; i < i2; ++i) acc += f.scale.mu_at(i) * f.values[i];
    return acc;
}

double circle_minus(double p, double mu) {
    const double denom = 1.0 + mu * p;
    if (denom == 0.0) non_regressive(0.0);
    return -p / denom;
}

namespace {

// Product of (1 + mu(s)p(s)) over the index range [i0, i1).
double factor_product(const TimeScale& ts, std::span<const double> p, std::size_t i0, std::size_t i1) {
    double acc = 1.0;
    for (std::size_t i = i0; i < i1; ++i) {
        const double factor = 1.0 + ts.mu_at(i) * p[i];
        if (factor == 0.0) non_regressive(ts.point(i));
        acc *= factor;
    }
    return acc;
}

}  // namespace

double ts_exp(const SampledFunction& p, double t, double t0) {
    const std::size_t it = p.scale.index_of(t);
    const std::size_t it0 = p.scale.index_of(t0);
    if (it >= it0) return factor_product(p.scale, p.values, it0, it);
    return 1.0 / factor_product(p.scale, p.values, it, it0);
}

double ts_exp(const TimeScale& ts, double lambda, double t, double t0) {
    return ts_exp(SampledFunction::constant(ts, lambda), t, t0);
}

std::vector<double> ts_exp_table(const TimeScale& ts, double lambda) {
    std::vector<double> table;
    table.reserve(ts.size());
    double acc = 1.0;
    table.push_back(acc);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const double factor = 1.0 + ts.mu_at(i) * lambda;
        if (factor == 0.0) non_regressive(ts.point(i));
        acc *= factor;
        table.push_back(acc);
    }
    return table;
}

SampledFunction solve_first_order(const SampledFunction& p, double u0) {
    std::vector<double> u(p.scale.size());
    u[0] = u0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double factor = 1.0 + p.scale.mu_at(i) * p.values[i];
        if (factor == 0.0) non_regressive(p.scale.point(i));
        u[i + 1] = u[i] * factor;
    }
    return SampledFunction(p.scale, std::move(u));
}

}  // namespace tsde
