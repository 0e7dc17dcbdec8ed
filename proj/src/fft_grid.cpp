#include "disclab/fft_grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace disclab {

namespace {
std::mutex g_fftw_mutex;  // FFTW planning is not thread-safe
}

GridField::GridField(int dim, int m) : dim_(dim), m_(m) {
    if (dim < 1 || dim > 3) throw validation_error("GridField: dimension must be 1..3");
    if (m < 2) throw validation_error("GridField: grid too small");
    std::size_t cells = 1;
    for (int i = 0; i < dim; ++i) cells *= static_cast<std::size_t>(m);
    data_.assign(cells, cplx(0.0, 0.0));
}

cplx& GridField::coeff(int n0, int n1) {
    int a = ((n0 % m_) + m_) % m_;
    int b = ((n1 % m_) + m_) % m_;
    return data_[static_cast<std::size_t>(a) * m_ + b];
}

cplx& GridField::coeff(int n0, int n1, int n2) {
    int a = ((n0 % m_) + m_) % m_;
    int b = ((n1 % m_) + m_) % m_;
    int c = ((n2 % m_) + m_) % m_;
    return data_[(static_cast<std::size_t>(a) * m_ + b) * m_ + c];
}

void GridField::synthesize() {
    auto* buf = reinterpret_cast<fftw_complex*>(data_.data());
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_plan plan = nullptr;
    if (dim_ == 1)
        plan = fftw_plan_dft_1d(m_, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    else if (dim_ == 2)
        plan = fftw_plan_dft_2d(m_, m_, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    else
        plan = fftw_plan_dft_3d(m_, m_, m_, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

double GridField::max_abs() const {
    double m = 0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double GridField::max_imag_abs() const {
    double m = 0;
    for (const auto& v : data_) m = std::max(m, std::abs(v.imag()));
    return m;
}

double GridField::mean_real() const {
    double s = 0;
    for (const auto& v : data_) s += v.real();
    return s / static_cast<double>(data_.size());
}

double GridField::power_mean(double p) const {
    double s = 0;
    for (const auto& v : data_) s += std::pow(std::abs(v), p);
    return s / static_cast<double>(data_.size());
}

int next_pow2(int n) {
    int m = 1;
    while (m < n) m *= 2;
    return m;
}

}  // namespace disclab
