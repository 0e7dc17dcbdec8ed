#ifndef DISCLAB_NORMS_HPP
#define DISCLAB_NORMS_HPP

#include "disclab/bodies.hpp"
#include "disclab/core.hpp"
#include "disclab/measures.hpp"

#include <optional>
#include <string>
#include <vector>

namespace disclab {

enum class BodyClass { generic, ellipse };

struct CriticalExponent {
    int d = 0;
    double beta = 0;
    BodyClass body_class = BodyClass::generic;
    double p_critical = 0;
    double log_power_at_critical = 0;  // exponent kappa in C log^kappa(R) at p = p*
};

// The piecewise critical-exponent table: the largest p with bounded
// normalized L^p discrepancy, and the log power at criticality.
CriticalExponent critical_exponent(int d, double beta, BodyClass body_class);

struct CriticalLines {
    double z2 = 0;
    double z4 = 0;
    std::optional<double> z6;  // d=2 only
};

// Minimal Re(z) giving bounded L^2/L^4/L^6 norms of Phi.
CriticalLines critical_lines(int d, double beta, BodyClass body_class);

struct NormResolution {
    int x_grid = 256;     // translations per axis (64 for d=3 by default)
    int r_budget = 32;    // quadrature nodes of the measure
    bool spectral = false;
    double delta = 0;     // 0: default R^{-(d-1)/2}
};

// I(d, Omega, mu, p, R): outer measure quadrature, inner x-average of
// |r^{-(d-1)/2} D|^p over the translation grid. The exact-count route uses
// full-grid counting; the spectral route the mollified FFT field.
double estimate_norm(const ConvexBody& body, const MeasureSpec& mu, double p, double r0,
                     const NormResolution& res);

struct NormScanResult {
    double p = 0;
    std::vector<double> r_ladder;
    std::vector<double> values;     // I per ladder point
    std::string preferred_model;    // "bounded" or "log"
    double log_slope = 0;           // b in I^p ~ a + b log R
    double kappa_hat = 0;           // I ~ c log^kappa R
    double ratio_max_min = 0;
    double resid_bounded = 0;
    double resid_log = 0;
};

NormScanResult scan_growth(const ConvexBody& body, const MeasureSpec& mu, double p,
                           const std::vector<double>& r_ladder,
                           const NormResolution& res);

std::vector<double> geometric_ladder(double r_min, double r_max, int points);

}  // namespace disclab

#endif
