#ifndef DISCLAB_FITTING_HPP
#define DISCLAB_FITTING_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace disclab {

struct LinFit {
    double intercept = 0;
    double slope = 0;
    double resid_rms = 0;  // rms of residuals
    std::size_t n = 0;
};

// Ordinary least squares y ~ intercept + slope * x.
LinFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

// log|y| ~ intercept + slope * log(x); pairs with y == 0 are skipped.
LinFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Collapses (x, |y|) samples into per-dyadic-block maxima: one point per
// block [2^k, 2^{k+1}), located at the argmax. Recovers the decay envelope
// of oscillating data whose raw log-log fit is corrupted by near-zeros.
std::vector<std::pair<double, double>> dyadic_envelope(const std::vector<double>& x,
                                                       const std::vector<double>& y);

// Envelope + log-log fit in one step. Throws validation_error if fewer than
// three nonzero blocks survive.
LinFit fit_envelope_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace disclab

#endif
