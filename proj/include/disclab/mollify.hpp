#ifndef DISCLAB_MOLLIFY_HPP
#define DISCLAB_MOLLIFY_HPP

#include "disclab/bodies.hpp"
#include "disclab/core.hpp"
#include "disclab/fft_grid.hpp"

#include <memory>
#include <vector>

namespace disclab {

// Radial bump mollifier phi with support {|x| <= eps}, unit integral,
// profile exp(-1/(1-t^2)). The Fourier transform has no closed form; it is
// tabulated once per dimension by adaptive quadrature (1e-10 per node) on a
// dense radial grid, with zero extension past the table (entries there are
// below 3e-10 and the series tail accounting covers them by the fitted
// (1+z)^{-6} envelope).
class Mollifier {
  public:
    Mollifier(int dim, double eps);

    int dim() const { return dim_; }
    double eps() const { return eps_; }

    // \hat phi at frequency radius t:  hat_unit(eps * t)
    double hat(double t) const;
    // unit-support bump transform by table radius z
    double hat_unit(double z) const;
    double table_max_z() const;
    // fitted envelope constant: |hat_unit(z)| <= c (1+z)^{-6} on the table
    double envelope_c() const;
    // normalized radial profile of the unit-support bump, t in [0,1)
    double profile_unit(double t) const;

  private:
    int dim_;
    double eps_;
};

// Default mollification scale: eps = A/2 guarantees eps*(unit ball) inside
// the body with margin.
Mollifier make_mollifier(const ConvexBody& body);

struct SeriesOptions {
    double tail_rel_tol = 1e-3;  // truncation tail vs retained coefficient mass
    int n_cap = 4096;
    // evaluate chihat by the order-0 stationary-phase expansion for
    // perturbed balls (no closed form at series frequencies)
    bool perturbed_asymptotic_ft = true;
    std::size_t cache_cap = 700000;  // per-frequency cache, in retained points
};

// Truncated coefficient machinery behind D_delta and Phi(delta, z, r, x),
// evaluated on torus grids by FFT. Truncation ball |n| <= n_max with
// n_max = ceil(8/delta), grown geometrically until the envelope tail bound
// meets tail_rel_tol (throws unconverged_error at n_cap: "increase grid").
class SpectralSeries {
  public:
    SpectralSeries(const ConvexBody& body, double delta, cplx z, int h,
                   SeriesOptions opts = {});
    ~SpectralSeries();
    SpectralSeries(SpectralSeries&&) noexcept;
    SpectralSeries& operator=(SpectralSeries&&) noexcept;

    int n_max() const;
    int grid() const;  // FFT grid: next power of two >= 2 n_max + 2
    double delta() const;
    cplx z() const;
    int order() const;
    const Mollifier& mollifier() const;
    double retained_mass() const;
    double tail_bound() const;

    // Phi(delta, z, r, .) on the grid
    GridField phi_field(double r) const;
    // D_delta(body, r, .); normalized applies the r^{-(d-1)/2} scale
    GridField mollified_field(double r, bool normalized = false) const;
    // r^{-(d-1)/2} D_delta - Phi(delta, (d+1)/2, r, .) as a single
    // difference series (shared truncation, so the tail cancels to the
    // Bessel-remainder order)
    GridField remainder_field(double r) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Exact pointwise mollified discrepancy (d=2): Poisson summation turns the
// series into the finite spatial sum sum_k (K_{eps delta} * chi_{r Omega})(k+x)
// minus r^d |Omega|; each near-boundary term is a 2-D kernel integral
// evaluated to ~1e-11. No truncation error, so sandwich checks can run at
// 1e-8 slack.
double mollified_pointwise(const ConvexBody& body, double delta, double r, const Vec& x);

struct SandwichMargins {
    double lower = 0;  // D - (|O|((r-d)^d - r^d) + D_delta(r-d)), >= 0 in theory
    double upper = 0;  // (|O|((r+d)^d - r^d) + D_delta(r+d)) - D
};

SandwichMargins sandwich_margins(const ConvexBody& body, double delta, double r,
                                 const Vec& x);

struct RemainderReport {
    std::vector<double> r;
    std::vector<double> sup;  // sup_x |R_h| per r
    double slope = 0;         // log-log fit
    double c_fit = 0;         // fitted constant of sup ~ c r^slope
};

// h must exceed (d-3)/2.
RemainderReport remainder_scan(const ConvexBody& body, double delta, int h,
                               const std::vector<double>& r_list,
                               SeriesOptions opts = {});

}  // namespace disclab

#endif
