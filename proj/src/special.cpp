#include "disclab/special.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>

namespace disclab {

double unit_ball_volume(int dim) {
    if (dim == 2) return pi;
    if (dim == 3) return 4.0 * pi / 3.0;
    return std::pow(pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double unit_ball_ft(int dim, double s) {
    if (s == 0.0) return unit_ball_volume(dim);
    s = std::abs(s);
    double z = 2.0 * pi * s;
    if (dim == 2) return boost::math::cyl_bessel_j(1, z) / s;
    if (dim == 3) {
        // J_{3/2}(z) = sqrt(2/(pi z)) (sin z / z - cos z)
        double j32 = std::sqrt(2.0 / (pi * z)) * (std::sin(z) / z - std::cos(z));
        return j32 * std::pow(s, -1.5);
    }
    return boost::math::cyl_bessel_j(0.5 * dim, z) * std::pow(s, -0.5 * dim);
}

double hankel_coeff(int j, double nu) {
    double c = 1.0;
    double mu = 4.0 * nu * nu;
    for (int m = 1; m <= j; ++m) {
        double odd = 2.0 * m - 1.0;
        c *= (mu - odd * odd) / (8.0 * m);
    }
    return c;
}

cplx unit_ball_aj(int dim, int j) {
    cplx phase = std::exp(cplx(0.0, (dim + 1) * pi / 4.0));
    cplx minus_i_pow = std::exp(cplx(0.0, -0.5 * pi * j));  // (-i)^j
    return phase * minus_i_pow * hankel_coeff(j, 0.5 * dim) /
           (2.0 * pi * std::pow(2.0 * pi, j));
}

}  // namespace disclab
