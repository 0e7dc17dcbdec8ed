#ifndef DISCLAB_LATTICE_HPP
#define DISCLAB_LATTICE_HPP

#include "disclab/bodies.hpp"
#include "disclab/core.hpp"

#include <cstdint>
#include <vector>

namespace disclab {

struct DiscrepancySample {
    double r = 0;
    Vec x;
    std::int64_t count = 0;
    double volume_term = 0;  // r^d |Omega|
    double discrepancy = 0;  // count - volume_term
};

// |Omega|. Closed form for balls/ellipsoids, radial quadrature for
// perturbed balls (relative target 1e-10).
double volume(const ConvexBody& body);

// #{k in Z^d : gauge(k + x) <= r}, boundary counted in. Slab enumeration:
// integer prefixes over the support bounding box, the last coordinate
// resolved as one convex interval via bisection on the two crossings.
std::int64_t count_lattice(const ConvexBody& body, double r, const Vec& x);

DiscrepancySample discrepancy(const ConvexBody& body, double r, const Vec& x);

// Counts for every translation x on the grid {0, 1/m, ..., (m-1)/m}^d at
// once; slab intervals are shared across translations of the last
// coordinate, which makes full-grid averages O(m * r * (bisect + m)) in
// d=2 instead of m^d independent counts. Row-major order, last index
// fastest.
std::vector<std::int64_t> count_grid(const ConvexBody& body, double r, int m);

// Reference implementation: straight loops over the bounding box testing
// the gauge at every integer point. The acceptance oracle for
// count_lattice; deliberately kept independent of the slab code path.
std::int64_t count_brute_force(const ConvexBody& body, double r, const Vec& x);

}  // namespace disclab

#endif
