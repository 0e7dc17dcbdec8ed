#ifndef DISCLAB_QUADRATURE_HPP
#define DISCLAB_QUADRATURE_HPP

#include "disclab/core.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace disclab {

struct QuadNode {
    double x;
    double w;
};

// Gauss-Legendre rule on [a, b], any order (Golub-Welsch).
std::vector<QuadNode> gauss_legendre(int n, double a, double b);

// Gauss-Jacobi rule for the weight (1+x)^b on [-1,1] (a-exponent 0).
// Used to absorb the r^{-alpha} endpoint singularity of power measures.
std::vector<QuadNode> gauss_jacobi_0b(int n, double b);

// Truncated tanh-sinh (double exponential) rule on [0,1]; robust for C-inf
// integrands that are flat at the endpoints.
std::vector<QuadNode> tanh_sinh_01(int n);

// Adaptive Gauss-Kronrod 15 on [a, b].
double adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double abs_tol, double rel_tol = 1e-12, int max_depth = 18);

cplx adaptive_gk_c(const std::function<cplx(double)>& f, double a, double b,
                   double abs_tol, double rel_tol = 1e-12, int max_depth = 18);

// Periodic trapezoid rule on [0, 2*pi), doubling the node count until two
// refinements agree to tol. Spectrally accurate for smooth periodic
// integrands. Throws unconverged_error past max_n.
cplx periodic_trapezoid(const std::function<cplx(double)>& f, double abs_tol,
                        int start_n = 64, int max_n = (1 << 21));

}  // namespace disclab

#endif
