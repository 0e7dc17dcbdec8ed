#ifndef DISCLAB_SPECTRA_HPP
#define DISCLAB_SPECTRA_HPP

#include "disclab/bodies.hpp"
#include "disclab/core.hpp"

namespace disclab {

// chihat_Omega(xi) = int_Omega exp(-2 pi i xi.x) dx.
// Balls/ellipsoids: closed Bessel form. Perturbed balls: oscillatory
// quadrature of the radially-integrated kernel; supported for |xi| <= 50,
// throws validation_error beyond and unconverged_error past the node budget.
cplx ft_exact(const ConvexBody& body, const Vec& xi);

// Stationary-phase coefficient of the exp(-2 pi i g(xi) r) phase at order
// |xi|^{-(d+1)/2-j}; homogeneous of degree 0. b_j(xi) = conj(a_j(-xi)).
cplx ft_coeff_a(const ConvexBody& body, int j, const Vec& xi);
cplx ft_coeff_b(const ConvexBody& body, int j, const Vec& xi);

// Truncated two-phase expansion
//   exp(-2 pi i g(xi)) |xi|^{-(d+1)/2} sum_{j<=h} a_j |xi|^{-j}
// + exp(+2 pi i g(-xi)) |xi|^{-(d+1)/2} sum_{j<=h} b_j |xi|^{-j}.
// Requires |xi| >= 1; h <= 2 for balls/ellipsoids, h = 0 for perturbed.
cplx ft_asymptotic(const ConvexBody& body, const Vec& xi, int h);

// Gaussian curvature at the boundary point with outer normal u.
double curvature_at_normal(const ConvexBody& body, const Vec& u);

int max_expansion_order(const ConvexBody& body);

}  // namespace disclab

#endif
