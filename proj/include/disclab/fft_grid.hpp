#ifndef DISCLAB_FFT_GRID_HPP
#define DISCLAB_FFT_GRID_HPP

#include "disclab/core.hpp"

#include <vector>

namespace disclab {

// Complex field on the torus grid {0, 1/m, ..., (m-1)/m}^d, stored row-major
// with the last index fastest. Filled with Fourier coefficients at wrapped
// integer frequencies, then synthesized in place:
//   value(x_j) = sum_n c_n exp(+2 pi i n.j/m).
// With coefficients supported on |n|_inf <= (m-2)/2 the synthesis is exact
// at the grid nodes (no aliasing).
class GridField {
  public:
    GridField(int dim, int m);

    int dim() const { return dim_; }
    int size() const { return m_; }
    std::size_t cells() const { return data_.size(); }

    // coefficient slot for frequency n (wrapped modulo m)
    cplx& coeff(int n0, int n1);
    cplx& coeff(int n0, int n1, int n2);

    void synthesize();  // backward FFT, unnormalized (coefficient sum convention)

    const std::vector<cplx>& values() const { return data_; }
    std::vector<cplx>& values() { return data_; }

    double max_abs() const;
    double max_imag_abs() const;
    double mean_real() const;
    // grid mean of |value|^p
    double power_mean(double p) const;

  private:
    int dim_, m_;
    std::vector<cplx> data_;
};

int next_pow2(int n);

}  // namespace disclab

#endif
