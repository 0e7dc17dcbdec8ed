#ifndef DISCLAB_MEASURES_HPP
#define DISCLAB_MEASURES_HPP

#include "disclab/core.hpp"

#include <vector>

namespace disclab {

// Compactly supported positive measure on [0, infinity), total mass 1.
//   dirac    : unit mass at 0,                      beta = 0
//   uniform  : Lebesgue on (0,1),                   beta = 1
//   power    : (1-alpha) r^{-alpha} dr on (0,1),    beta = 1 - alpha
//   bump     : smooth bump density on (0,1),        beta = +infinity
class MeasureSpec {
  public:
    enum class Kind { dirac, uniform, power, bump };

    static MeasureSpec dirac();
    static MeasureSpec uniform();
    static MeasureSpec power(double alpha);  // 0 < alpha < 1
    static MeasureSpec bump();

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    // Known decay exponent (infinity for the bump).
    double beta_exact() const;
    double support_diameter() const { return kind_ == Kind::dirac ? 0.0 : 1.0; }

  private:
    Kind kind_;
    double alpha_ = 0;
};

// muhat(xi) = int exp(-2 pi i xi r) dmu(r)
cplx measure_fourier(const MeasureSpec& mu, double xi);

struct BetaFit {
    double beta_hat = 0;
    double c_hat = 0;  // envelope constant: |muhat| <= c_hat (1+|xi|)^{-beta}
};

// Envelope fit of the decay exponent over a log grid up to xi_max
// (dyadic block maxima; raw fits are corrupted by the zeros of muhat).
BetaFit fit_beta(const MeasureSpec& mu, double xi_max);

// Nodes/weights for int f(r) dmu(r - R); supported in [R, R + diam].
// Power measures use a Gauss-Jacobi rule absorbing r^{-alpha} exactly.
std::vector<std::pair<double, double>> quadrature_nodes(const MeasureSpec& mu, double r0,
                                                        int budget);

}  // namespace disclab

#endif
