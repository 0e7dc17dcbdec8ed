#include "disclab/measures.hpp"

#include "disclab/fitting.hpp"
#include "disclab/quadrature.hpp"

#include <cmath>
#include <limits>

namespace disclab {

namespace {

double bump_density_raw(double r) {
    if (r <= 0.0 || r >= 1.0) return 0.0;
    return std::exp(-1.0 / (r * (1.0 - r)));
}

double bump_mass() {
    static const double mass = adaptive_gk([](double r) { return bump_density_raw(r); },
                                           0.0, 1.0, 1e-15);
    return mass;
}

}  // namespace

MeasureSpec MeasureSpec::dirac() {
    MeasureSpec m;
    m.kind_ = Kind::dirac;
    return m;
}

MeasureSpec MeasureSpec::uniform() {
    MeasureSpec m;
    m.kind_ = Kind::uniform;
    return m;
}

MeasureSpec MeasureSpec::power(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw validation_error("power measure: alpha must lie in (0,1)");
    MeasureSpec m;
    m.kind_ = Kind::power;
    m.alpha_ = alpha;
    return m;
}

MeasureSpec MeasureSpec::bump() {
    MeasureSpec m;
    m.kind_ = Kind::bump;
    return m;
}

double MeasureSpec::beta_exact() const {
    switch (kind_) {
        case Kind::dirac:
            return 0.0;
        case Kind::uniform:
            return 1.0;
        case Kind::power:
            return 1.0 - alpha_;
        case Kind::bump:
            return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

cplx measure_fourier(const MeasureSpec& mu, double xi) {
    switch (mu.kind()) {
        case MeasureSpec::Kind::dirac:
            return 1.0;
        case MeasureSpec::Kind::uniform: {
            if (xi == 0.0) return 1.0;
            return std::exp(cplx(0.0, -pi * xi)) * std::sin(pi * xi) / (pi * xi);
        }
        case MeasureSpec::Kind::power: {
            // substitute r = s^{1/(1-alpha)}: (1-alpha) r^{-alpha} dr = ds
            double p = 1.0 / (1.0 - mu.alpha());
            auto f = [&](double s) -> cplx {
                return std::exp(cplx(0.0, -2.0 * pi * xi * std::pow(s, p)));
            };
            return adaptive_gk_c(f, 0.0, 1.0, 1e-12, 1e-11, 24);
        }
        case MeasureSpec::Kind::bump: {
            double mass = bump_mass();
            auto f = [&](double r) -> cplx {
                return bump_density_raw(r) / mass * std::exp(cplx(0.0, -2.0 * pi * xi * r));
            };
            return adaptive_gk_c(f, 0.0, 1.0, 1e-12, 1e-11, 24);
        }
    }
    return 0.0;
}

BetaFit fit_beta(const MeasureSpec& mu, double xi_max) {
    if (xi_max < 100.0) throw validation_error("fit_beta: xi_max must be >= 100");
    const int n = 600;
    std::vector<double> xs, ys;
    xs.reserve(n);
    ys.reserve(n);
    for (int i = 0; i < n; ++i) {
        double xi = std::exp(std::log(1.0) +
                             (std::log(xi_max) - std::log(1.0)) * (i + 0.5) / n);
        xs.push_back(xi);
        ys.push_back(std::abs(measure_fourier(mu, xi)));
    }
    auto env = dyadic_envelope(xs, ys);
    if (env.size() < 3) throw validation_error("fit_beta: degenerate envelope (all-zero blocks)");
    LinFit f = fit_envelope_loglog(xs, ys);
    BetaFit out;
    out.beta_hat = -f.slope;
    // envelope constant against (1 + xi)^{-beta}
    double c = 0;
    for (auto& [x, y] : env) c = std::max(c, y * std::pow(1.0 + x, out.beta_hat));
    out.c_hat = c;
    return out;
}

std::vector<std::pair<double, double>> quadrature_nodes(const MeasureSpec& mu, double r0,
                                                        int budget) {
    if (budget < 1) throw validation_error("quadrature_nodes: budget must be >= 1");
    std::vector<std::pair<double, double>> out;
    switch (mu.kind()) {
        case MeasureSpec::Kind::dirac:
            out.emplace_back(r0, 1.0);
            break;
        case MeasureSpec::Kind::uniform: {
            for (const auto& q : gauss_legendre(budget, 0.0, 1.0))
                out.emplace_back(r0 + q.x, q.w);
            break;
        }
        case MeasureSpec::Kind::power: {
            // Gauss-Jacobi with weight (1+x)^{-alpha} on [-1,1], mapped to
            // r = (1+x)/2: integrates polynomials against r^{-alpha} exactly.
            double a = mu.alpha();
            double scale = (1.0 - a) * std::pow(2.0, a - 1.0);
            for (const auto& q : gauss_jacobi_0b(budget, -a))
                out.emplace_back(r0 + 0.5 * (1.0 + q.x), scale * q.w);
            break;
        }
        case MeasureSpec::Kind::bump: {
            // tanh-sinh handles the flat C-inf endpoints
            int n = std::max(budget, 3);
            double mass = bump_mass();
            for (const auto& q : tanh_sinh_01(n)) {
                double w = q.w * bump_density_raw(q.x) / mass;
                if (w > 0) out.emplace_back(r0 + q.x, w);
            }
            break;
        }
    }
    return out;
}

}  // namespace disclab
