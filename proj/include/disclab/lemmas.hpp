#ifndef DISCLAB_LEMMAS_HPP
#define DISCLAB_LEMMAS_HPP

#include "disclab/bodies.hpp"
#include "disclab/core.hpp"
#include "disclab/measures.hpp"

#include <optional>
#include <string>
#include <vector>

namespace disclab {

// Derived exponents of the integral lemmas' case analysis.
struct ExponentPack {
    int d = 0;
    double alpha = 0, beta = 0, gamma = 0;
    double tau = 0;    // min{1, gamma, beta}
    int sigma = 0;     // log power of the radial lemma
    int varsigma = 0;  // extra log when tau hits (d-1)/2
    double zeta = 0;   // min{1, beta, d-alpha, (d-1)/2}
    int eta = 0;       // log power of the pair-integral bound
};

ExponentPack exponent_pack(int d, double alpha, double beta, double gamma);

struct RatioReport {
    std::string lemma_id;
    std::string grid_spec;
    double sup_ratio = 0;
    std::vector<double> argmax;     // parameters attaining the sup
    double quad_rel_error = 0;      // quadrature tolerance used
};

// sup over X (and T where applicable) of integral / stated bound for the
// four 1-D estimates behind the ellipse reduction.
//   (1) int_0^inf (1+|X-t|)^-b t^{1-a} dt,   0 < 2-a < b
//   (2) int_0^1   (1+|X-t|)^-b t^{1-a} (-log t) dt,   a < 2
//   (3) int_0^T   (1+|X-t|)^-b t^{1-a} dt,   0<=b<1, 2-a >= b
//   (4) int_T^inf (1+|X-t|)^-b t^{1-2a} dt,  0<=b<1, a > 1
RatioReport verify_crucial(int case_id, double alpha, double beta, double x_max,
                           double t_max);

// sup over (k, Y) of the sphere-radial integral against
// Y^{gamma - min(tau,(d-1)/2)} log^{sigma+varsigma}(2+Y); d=2 quadrature.
RatioReport verify_mu_lemma(double gamma, double beta, const ConvexBody& body,
                            const std::vector<Vec>& k_samples,
                            const std::vector<double>& y_grid, double delta);

// sup over (k, Y) of int |x|^-a |k-x|^-a (1+|g(x)+g(k-x)-Y|)^-b dx against
// |k|^{d-2a} (1+|k|+|Y|)^{-zeta} log^eta(2+|k|+|Y|); d=2.
RatioReport verify_integral_lemma(double alpha, double beta, const ConvexBody& body,
                                  const std::vector<Vec>& k_samples,
                                  const std::vector<double>& y_grid);

// The five Euclidean cases of the ellipse reduction; Y values are sampled
// as offsets around |k| where the cutoff aligns worst.
RatioReport verify_ellipse_integral(int case_id, double alpha, double beta,
                                    const std::vector<double>& k_radii,
                                    const std::vector<double>& y_offsets);

// int over {|x| > excl, |x-k| > excl} of
//   |x|^-a |k-x|^-a (1+d|x|)^-l (1+d|k-x|)^-l (1+|g(x)+g(k-x)-Y|)^-b dx.
// excl = 0 integrates through the singularities by graded substitution.
// body == nullptr means Euclidean g.
double pair_integral(double alpha, double beta, double y, const ConvexBody* body,
                     const Vec& k, double exclusion, double delta_cut = 0,
                     double lambda = 0, double rel_tol = 1e-6);

struct N2Config {
    double z = 1.5;
    double beta = 0;
    double delta = 0.3;
    double r0 = 10;
    MeasureSpec mu = MeasureSpec::dirac();
    long long samples = 10'000'000;
    std::uint64_t seed = 7;
    double lambda = 6.0;
    int mu_budget = 8;
};

struct N2Report {
    double lhs = 0;        // int int |Phi|^4 dx dmu(r-R)
    double rhs = 0;        // Monte-Carlo estimate of the master integral
    double rhs_stderr = 0;
    bool inconclusive = false;  // MC variance too high
};

// N=2, d=2 instance of the moment-reduction inequality, Euclidean form.
N2Report verify_n2_reduction(const ConvexBody& body, const N2Config& cfg);

}  // namespace disclab

#endif
