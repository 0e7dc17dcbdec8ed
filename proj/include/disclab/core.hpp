#ifndef DISCLAB_CORE_HPP
#define DISCLAB_CORE_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace disclab {

// Small geometric vectors/matrices, dimension 2 or 3 chosen at runtime but
// stack-allocated (max size 3).
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;
using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

inline Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

inline Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

// Input/parameter validation failures. CLI maps these to exit code 2.
class validation_error : public std::runtime_error {
  public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A quadrature or iteration that ran out of budget. Carries the best
// estimate so far. CLI maps these to exit code 3.
class unconverged_error : public std::runtime_error {
  public:
    unconverged_error(const std::string& msg, double estimate)
        : std::runtime_error(msg), estimate_(estimate) {}
    double estimate() const { return estimate_; }

  private:
    double estimate_;
};

// Deterministic RNG used throughout tests and scans. Seeded explicitly so
// repeated runs are byte-identical.
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) {
    return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline Vec random_unit(Rng& rng, int dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec v(dim);
    double s = 0;
    do {
        for (int i = 0; i < dim; ++i) v[i] = n(rng);
        s = v.norm();
    } while (s < 1e-12);
    return v / s;
}

inline Vec random_in_cube(Rng& rng, int dim) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(rng, 0.0, 1.0);
    return v;
}

int worker_count();  // --threads / DISCLAB_THREADS, defaults to hardware
void set_worker_count(int n);

// Runs fn(i) for i in [0, n). Each index writes its own output slot, so the
// result is schedule-independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace disclab

#endif
