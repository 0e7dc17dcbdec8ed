#ifndef DISCLAB_SPECIAL_HPP
#define DISCLAB_SPECIAL_HPP

#include "disclab/core.hpp"

namespace disclab {

// Fourier transform of the d-dimensional unit ball at radius s = |xi|:
//   chihat(s) = s^{-d/2} J_{d/2}(2 pi s),   chihat(0) = |B_d|.
// d=3 uses the closed half-integer Bessel form, d=2 the J_1 kernel.
double unit_ball_ft(int dim, double s);

double unit_ball_volume(int dim);

// j-th coefficient of the Hankel large-argument expansion of J_nu:
//   (4nu^2-1)(4nu^2-9)...(4nu^2-(2j-1)^2) / (j! 8^j),  c_0 = 1.
double hankel_coeff(int j, double nu);

// Stationary-phase coefficient a_j of the unit ball: the weight of the
// exp(-2 pi i |xi|) phase at order |xi|^{-(d+1)/2-j}. Matches the Bessel
// expansion; a_0 has modulus 1/(2 pi) and argument (d+1) pi/4.
cplx unit_ball_aj(int dim, int j);

}  // namespace disclab

#endif
