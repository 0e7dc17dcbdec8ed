#include "disclab/spectra.hpp"

#include "disclab/lattice.hpp"
#include "disclab/quadrature.hpp"
#include "disclab/special.hpp"

#include <cmath>

namespace disclab {

namespace {

// int_0^rho s exp(-i a s) ds, stable through a -> 0
cplx radial_kernel_2d(double rho, double a) {
    double z = a * rho;
    if (std::abs(z) < 1e-4) {
        // series in (i z): rho^2 (1/2 - i z/3 - z^2/8 + i z^3/30 + z^4/144)
        cplx iz(0.0, -z);
        return rho * rho *
               (0.5 + iz / 3.0 + iz * iz / 8.0 + iz * iz * iz / 30.0 +
                iz * iz * iz * iz / 144.0);
    }
    cplx e = std::exp(cplx(0.0, -z));
    cplx ia(0.0, a);
    return (e * cplx(rho) - (cplx(1.0) - e) / ia) / (-ia);
}

// int_0^rho s^2 exp(-i a s) ds
cplx radial_kernel_3d(double rho, double a) {
    double z = a * rho;
    if (std::abs(z) < 1e-4) {
        cplx iz(0.0, -z);
        return rho * rho * rho *
               (1.0 / 3.0 + iz / 4.0 + iz * iz / 10.0 + iz * iz * iz / 36.0);
    }
    cplx e = std::exp(cplx(0.0, -z));
    cplx ia(0.0, a);
    // integrate by parts twice
    return (e * cplx(rho * rho) - 2.0 * radial_kernel_2d(rho, a)) / (-ia);
}

cplx ft_perturbed(const ConvexBody& body, const Vec& xi) {
    double s = xi.norm();
    if (s > 50.0)
        throw validation_error("ft_exact: perturbed-ball quadrature capped at |xi| <= 50");
    if (body.dim() == 2) {
        double phix = std::atan2(xi[1], xi[0]);
        auto f = [&](double th) -> cplx {
            double rho = body.radial(vec2(std::cos(th), std::sin(th)));
            double a = 2.0 * pi * s * std::cos(th - phix);
            return radial_kernel_2d(rho, a);
        };
        int start = 256;
        while (start < 8.0 * s) start *= 2;
        return periodic_trapezoid(f, 1e-9, start);
    }
    // d=3: sphere quadrature of the closed-form radial integral
    Vec w = s > 0 ? Vec(xi / s) : vec3(0, 0, 1);
    cplx prev = 0;
    int n0 = 64;
    while (n0 < 4.0 * s) n0 *= 2;
    for (int n = n0; n <= 4096; n *= 2) {
        auto gl = gauss_legendre(n, -1.0, 1.0);
        int nphi = 2 * n;
        cplx total = 0;
        for (const auto& q : gl) {
            double st = std::sqrt(std::max(0.0, 1.0 - q.x * q.x));
            cplx row = 0;
            for (int j = 0; j < nphi; ++j) {
                double ph = 2.0 * pi * j / nphi;
                Vec u = vec3(st * std::cos(ph), st * std::sin(ph), q.x);
                double rho = body.radial(u);
                double a = 2.0 * pi * s * w.dot(u);
                row += radial_kernel_3d(rho, a);
            }
            total += q.w * row * (2.0 * pi / nphi);
        }
        if (n > n0 && std::abs(total - prev) < 1e-8 * (1.0 + std::abs(total))) return total;
        prev = total;
    }
    throw unconverged_error("ft_exact: sphere quadrature did not converge", std::abs(prev));
}

}  // namespace

cplx ft_exact(const ConvexBody& body, const Vec& xi) {
    double s = xi.norm();
    if (s == 0.0) return cplx(volume(body), 0.0);
    switch (body.kind()) {
        case ConvexBody::Kind::ball: {
            double r = body.ball_radius();
            return cplx(std::pow(r, body.dim()) * unit_ball_ft(body.dim(), r * s), 0.0);
        }
        case ConvexBody::Kind::ellipsoid: {
            Vec mtxi = body.matrix().transpose() * xi;
            return cplx(body.det_abs() * unit_ball_ft(body.dim(), mtxi.norm()), 0.0);
        }
        case ConvexBody::Kind::perturbed_ball:
            return ft_perturbed(body, xi);
    }
    return 0;
}

int max_expansion_order(const ConvexBody& body) {
    return body.kind() == ConvexBody::Kind::perturbed_ball ? 0 : 2;
}

cplx ft_coeff_a(const ConvexBody& body, int j, const Vec& xi) {
    const int d = body.dim();
    switch (body.kind()) {
        case ConvexBody::Kind::ball: {
            // a_j of Ball(R) = R^{(d-1)/2 - j} a_j(unit ball)
            double r = body.ball_radius();
            return std::pow(r, 0.5 * (d - 1) - j) * unit_ball_aj(d, j);
        }
        case ConvexBody::Kind::ellipsoid: {
            // affine image: |det M| (|M^T xi|/|xi|)^{-(d+1)/2-j} a_j(unit)
            Vec u = xi.normalized();
            double q = (body.matrix().transpose() * u).norm();
            return body.det_abs() * std::pow(q, -0.5 * (d + 1) - j) * unit_ball_aj(d, j);
        }
        case ConvexBody::Kind::perturbed_ball: {
            if (j > 0)
                throw validation_error("ft_coeff_a: only order 0 for perturbed balls");
            double k = body.curvature_at_normal(xi.normalized());
            return std::exp(cplx(0.0, (d + 1) * pi / 4.0)) / (2.0 * pi * std::sqrt(k));
        }
    }
    return 0;
}

cplx ft_coeff_b(const ConvexBody& body, int j, const Vec& xi) {
    return std::conj(ft_coeff_a(body, j, Vec(-xi)));
}

cplx ft_asymptotic(const ConvexBody& body, const Vec& xi, int h) {
    double s = xi.norm();
    if (s < 1.0) throw std::domain_error("ft_asymptotic: requires |xi| >= 1");
    if (h < 0 || h > max_expansion_order(body))
        throw validation_error("ft_asymptotic: expansion order not available");
    const int d = body.dim();
    double g_plus = body.support(xi);
    double g_minus = body.support(Vec(-xi));
    cplx sum_a = 0, sum_b = 0;
    for (int j = 0; j <= h; ++j) {
        double fall = std::pow(s, -j);
        sum_a += ft_coeff_a(body, j, xi) * fall;
        sum_b += ft_coeff_b(body, j, xi) * fall;
    }
    double lead = std::pow(s, -0.5 * (d + 1));
    return std::exp(cplx(0.0, -2.0 * pi * g_plus)) * lead * sum_a +
           std::exp(cplx(0.0, 2.0 * pi * g_minus)) * lead * sum_b;
}

double curvature_at_normal(const ConvexBody& body, const Vec& u) {
    return body.curvature_at_normal(u);
}

}  // namespace disclab
