// Shared helpers for the test suites: a deterministic value source plus
// dyadic data generators. Dyadic values (small integers over 16) keep every
// intermediate sum, product and quotient exactly representable, so identity
// checks can assert bitwise equality. Oracle computations in the tests use
// raw loops of their own, independent of the library paths they check.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "tsde/grid.hpp"
#include "tsde/timescale.hpp"

namespace tsupport {

inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

inline std::size_t pick(std::mt19937_64& g, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(g() % (hi - lo + 1));
}

inline double dyadic(std::mt19937_64& g) {
    return (static_cast<double>(g() % 257) - 128.0) / 16.0;
}

// Power-of-two increments: dividing by these graininesses is exact too.
inline tsde::TimeScale dyadic_scale(std::mt19937_64& g, std::size_t n) {
    static constexpr double steps[4] = {0.25, 0.5, 1.0, 2.0};
    std::vector<double> pts;
    double t = static_cast<double>(g() % 9) - 4.0;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(t);
        t += steps[g() % 4];
    }
    return tsde::TimeScale(std::move(pts));
}

inline tsde::TimeScale random_scale(std::mt19937_64& g, std::size_t n) {
    std::vector<double> pts;
    double t = uniform(g, 0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(t);
        t += uniform(g, 0.25, 1.25);
    }
    return tsde::TimeScale(std::move(pts));
}

inline tsde::GridFunction dyadic_grid(std::mt19937_64& g, const tsde::DomainPtr& dom) {
    std::vector<double> v(dom->cells());
    for (double& x : v) x = dyadic(g);
    return tsde::GridFunction(dom, std::move(v));
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max({1.0, std::abs(got), std::abs(want)});
}

}  // namespace tsupport
