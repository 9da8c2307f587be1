// Functions on the product domain T1 x T2 x I: partial delta derivatives,
// iterated delta integrals, the pointwise seminorm |u|+|u^d1|+|u^d2| and its
// exponentially weighted sup norm.

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "tsde/timescale.hpp"

namespace tsde {

/// The product of two time scales with a slice interval I = [a, b],
/// itself represented as a finite scale with at least two points.
struct ProductDomain {
    TimeScale t1;
    TimeScale t2;
    TimeScale zscale;

    ProductDomain(TimeScale t1_, TimeScale t2_, TimeScale z_);

    double x0() const { return t1.min(); }
    double y0() const { return t2.min(); }
    double a() const { return zscale.min(); }
    double b() const { return zscale.max(); }

    std::size_t n1() const { return t1.size(); }
    std::size_t n2() const { return t2.size(); }
    std::size_t nz() const { return zscale.size(); }
    std::size_t cells() const { return n1() * n2() * nz(); }

    bool same_points_as(const ProductDomain& other) const;
};

using DomainPtr = std::shared_ptr<const ProductDomain>;

DomainPtr make_domain(TimeScale t1, TimeScale t2, TimeScale zscale);

/// Axis bitmask recording which max faces of a grid hold copied (not
/// computed) values after a partial delta.
enum : unsigned { kFillNone = 0u, kFillAxis1 = 1u, kFillAxis2 = 2u };

/// An immutable real-valued function sampled on every (x, y, z) of a
/// product domain, stored row-major as (i, j, k).
class GridFunction {
public:
    GridFunction(DomainPtr dom, std::vector<double> values, unsigned fill_mask = kFillNone);

    static GridFunction zeros(DomainPtr dom);
    static GridFunction constant(DomainPtr dom, double c);

    template <class F>
    static GridFunction sample(DomainPtr dom, F&& f) {
        std::vector<double> v;
        v.reserve(dom->cells());
        for (double x : dom->t1.points())
            for (double y : dom->t2.points())
                for (double z : dom->zscale.points()) v.push_back(f(x, y, z));
        return GridFunction(std::move(dom), std::move(v));
    }

    const ProductDomain& domain() const { return *dom_; }
    const DomainPtr& domain_ptr() const { return dom_; }

    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return v_[(i * dom_->n2() + j) * dom_->nz() + k];
    }
    std::span<const double> values() const { return v_; }
    unsigned boundary_fill_mask() const { return fill_mask_; }

    /// True when the value at (i, j, k) was boundary-filled rather than
    /// computed.
    bool is_boundary_filled(std::size_t i, std::size_t j, std::size_t k) const;

private:
    DomainPtr dom_;
    std::vector<double> v_;
    unsigned fill_mask_;
};

/// A grid function together with its two first-order delta layers.
struct SolutionTriple {
    GridFunction u;
    GridFunction d1;
    GridFunction d2;

    SolutionTriple(GridFunction u_, GridFunction d1_, GridFunction d2_);

    static SolutionTriple zeros(DomainPtr dom);
    const ProductDomain& domain() const { return u.domain(); }
};

/// Builds the triple (u, delta_1 u, delta_2 u) by direct differencing.
SolutionTriple differentiate(const GridFunction& u);

/// Per-point difference quotient along axis 1 or 2. Values on the max face
/// of that axis are copied from the last interior slice and flagged.
/// Throws std::domain_error for a bad axis or a degenerate (< 2 point)
/// axis.
GridFunction partial_delta(const GridFunction& u, int axis);

/// Second mixed difference, one fixed symmetric arithmetic for both
/// differencing orders. Max faces of both axes are boundary-filled.
GridFunction mixed_delta(const GridFunction& u);

/// Iterated delta integral of the z-slice g(.,.,z_k) over [x0, x) x [y0, y).
double double_integral(const GridFunction& g, std::size_t zindex, double x, double y);

/// Delta integral of samples over the whole slice interval [a, b).
double z_integral(const TimeScale& zscale, std::span<const double> values);

/// |u| + |d1| + |d2| at one grid node.
double pointwise_seminorm(const SolutionTriple& s, std::size_t i, std::size_t j, std::size_t k);

/// The separable weight e_lambda(x, x0) * e_lambda(z, a) * e_lambda(y, y0),
/// precomputed per axis.
class ExpWeight {
public:
    ExpWeight(const ProductDomain& dom, double lambda);

    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return (e1_[i] * ez_[k]) * e2_[j];
    }
    double axis1(std::size_t i) const { return e1_[i]; }
    double axis2(std::size_t j) const { return e2_[j]; }
    double axisz(std::size_t k) const { return ez_[k]; }

private:
    std::vector<double> e1_, e2_, ez_;
};

/// Weight value at a single node; equals 1 at (x0, y0, a).
double weight(const ProductDomain& dom, double lambda, std::size_t i, std::size_t j, std::size_t k);

/// Weighted sup norm: max over the grid of pointwise_seminorm / weight.
double weighted_sup_norm(const SolutionTriple& s, double lambda);

/// Weighted sup norm of the difference of two triples on the same domain.
double weighted_sup_distance(const SolutionTriple& a, const SolutionTriple& b, double lambda);

/// Unweighted sup of the pointwise seminorm of the difference.
double sup_distance(const SolutionTriple& a, const SolutionTriple& b);

/// Pointwise |g|.
GridFunction abs(const GridFunction& g);

/// Pointwise |a - b| on a shared domain.
GridFunction abs_diff(const GridFunction& a, const GridFunction& b);

}  // namespace tsde
