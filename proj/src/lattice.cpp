#include "disclab/lattice.hpp"

#include "disclab/quadrature.hpp"
#include "disclab/special.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace disclab {

namespace {

double volume_perturbed(const ConvexBody& body) {
    if (body.dim() == 2) {
        // (1/2) int rho(theta)^2 dtheta
        auto f = [&](double th) -> cplx {
            double r = body.radial(vec2(std::cos(th), std::sin(th)));
            return cplx(0.5 * r * r, 0.0);
        };
        return periodic_trapezoid(f, 1e-12, 256).real();
    }
    // (1/3) int_{S^2} rho^3 dsigma, Gauss-Legendre in cos(theta) x trapezoid in phi
    double prev = 0;
    for (int n = 32; n <= 1024; n *= 2) {
        auto gl = gauss_legendre(n, -1.0, 1.0);
        int nphi = 2 * n;
        double total = 0;
        for (const auto& q : gl) {
            double st = std::sqrt(std::max(0.0, 1.0 - q.x * q.x));
            double row = 0;
            for (int j = 0; j < nphi; ++j) {
                double ph = 2.0 * pi * j / nphi;
                double rho = body.radial(vec3(st * std::cos(ph), st * std::sin(ph), q.x));
                row += rho * rho * rho;
            }
            total += q.w * row * (2.0 * pi / nphi);
        }
        total /= 3.0;
        if (n > 32 && std::abs(total - prev) < 1e-11 * (1.0 + std::abs(total))) return total;
        prev = total;
    }
    return prev;
}

// gauge along the last coordinate of a fixed integer prefix
struct SlabFn {
    const ConvexBody* body;
    int dim;
    double a0, a1;  // prefix coordinates (a1 unused in d=2)
    double operator()(double w) const {
        return dim == 2 ? body->gauge2(a0, w) : body->gauge3(a0, a1, w);
    }
};

struct SlabInterval {
    double lo, hi;  // continuous interval {w : gauge <= r}, in w-space
};

// Golden-section minimum of the convex slab function, with early exit once
// a strictly interior point is found.
double slab_minimize(const SlabFn& f, double lo, double hi, double r) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 < r - 1e-9 || f2 < r - 1e-9) break;
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

// Bisect for the boundary crossing between an inside point (gauge <= r) and
// an outside point. Returns the midpoint of the final bracket.
double slab_crossing(const SlabFn& f, double inside, double outside, double r,
                     double tol) {
    for (int it = 0; it < 200 && std::abs(outside - inside) > tol; ++it) {
        double m = 0.5 * (inside + outside);
        if (f(m) <= r)
            inside = m;
        else
            outside = m;
    }
    return 0.5 * (inside + outside);
}

// The convex interval of the slab, or nullopt when the minimum sits above r
// (tangency candidates are handled by the callers).
std::optional<SlabInterval> slab_interval(const SlabFn& f, double wlo, double whi,
                                          double r, double tol) {
    double wstar = slab_minimize(f, wlo, whi, r);
    if (f(wstar) > r) return std::nullopt;
    SlabInterval iv;
    iv.lo = slab_crossing(f, wstar, wlo, r, tol);
    iv.hi = slab_crossing(f, wstar, whi, r, tol);
    return iv;
}

struct BoxBounds {
    double lo[3], hi[3];  // real bounds for k_i (translation already subtracted)
};

BoxBounds box_bounds(const ConvexBody& body, double r, const Vec& x) {
    BoxBounds bb{};
    int d = body.dim();
    double pad = 1e-9 * (1.0 + r);
    for (int i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e[i] = 1.0;
        double gp = body.support(e);
        e[i] = -1.0;
        double gm = body.support(e);
        bb.lo[i] = -r * gm - x[i] - pad;
        bb.hi[i] = r * gp - x[i] + pad;
    }
    return bb;
}

// Count integers k with k + shift in [iv.lo, iv.hi]; the candidates nearest
// each endpoint are re-tested by direct gauge evaluation (closed boundary).
std::int64_t integers_in(const SlabFn& f, const SlabInterval& iv, double shift,
                         double r) {
    auto k_lo = static_cast<std::int64_t>(std::ceil(iv.lo - shift)) - 1;
    auto k_hi = static_cast<std::int64_t>(std::floor(iv.hi - shift)) + 1;
    while (k_lo <= k_hi && f(k_lo + shift) > r) ++k_lo;
    while (k_hi >= k_lo && f(k_hi + shift) > r) --k_hi;
    return k_hi >= k_lo ? k_hi - k_lo + 1 : 0;
}

// A slab flagged empty can still graze one integer at a tangency.
std::int64_t tangent_candidates(const SlabFn& f, double wstar, double shift, double r) {
    std::int64_t n = 0;
    auto base = static_cast<std::int64_t>(std::llround(wstar - shift));
    for (std::int64_t k = base - 1; k <= base + 1; ++k)
        if (f(k + shift) <= r) ++n;
    return n;
}

}  // namespace

double volume(const ConvexBody& body) {
    switch (body.kind()) {
        case ConvexBody::Kind::ball:
            return unit_ball_volume(body.dim()) * std::pow(body.ball_radius(), body.dim());
        case ConvexBody::Kind::ellipsoid:
            return unit_ball_volume(body.dim()) * body.det_abs();
        case ConvexBody::Kind::perturbed_ball:
            return volume_perturbed(body);
    }
    return 0;
}

std::int64_t count_lattice(const ConvexBody& body, double r, const Vec& x) {
    if (!(r > 0)) throw std::domain_error("count_lattice: r must be positive");
    int d = body.dim();
    if (static_cast<int>(x.size()) != d)
        throw validation_error("count_lattice: translation has wrong dimension");
    BoxBounds bb = box_bounds(body, r, x);
    double tol = 1e-12 * std::max(1.0, r);
    int last = d - 1;
    double wlo = bb.lo[last] + x[last], whi = bb.hi[last] + x[last];

    std::int64_t total = 0;
    auto handle = [&](double a0, double a1) {
        SlabFn f{&body, d, a0, a1};
        auto iv = slab_interval(f, wlo, whi, r, tol);
        if (!iv) {
            total += tangent_candidates(f, slab_minimize(f, wlo, whi, r), x[last], r);
            return;
        }
        total += integers_in(f, *iv, x[last], r);
    };

    auto i0 = static_cast<std::int64_t>(std::ceil(bb.lo[0]));
    auto i1 = static_cast<std::int64_t>(std::floor(bb.hi[0]));
    if (d == 2) {
        for (std::int64_t k = i0; k <= i1; ++k) handle(k + x[0], 0.0);
    } else {
        auto j0 = static_cast<std::int64_t>(std::ceil(bb.lo[1]));
        auto j1 = static_cast<std::int64_t>(std::floor(bb.hi[1]));
        for (std::int64_t k = i0; k <= i1; ++k)
            for (std::int64_t j = j0; j <= j1; ++j) handle(k + x[0], j + x[1]);
    }
    return total;
}

DiscrepancySample discrepancy(const ConvexBody& body, double r, const Vec& x) {
    DiscrepancySample s;
    s.r = r;
    s.x = x;
    s.count = count_lattice(body, r, x);
    s.volume_term = std::pow(r, body.dim()) * volume(body);
    s.discrepancy = static_cast<double>(s.count) - s.volume_term;
    return s;
}

std::vector<std::int64_t> count_grid(const ConvexBody& body, double r, int m) {
    if (!(r > 0)) throw std::domain_error("count_grid: r must be positive");
    if (m < 1) throw validation_error("count_grid: grid size must be >= 1");
    int d = body.dim();
    Vec zero = Vec::Zero(d);
    BoxBounds bb = box_bounds(body, r, zero);
    double tol = 1e-12 * std::max(1.0, r);
    int last = d - 1;
    // conservative w-range: every b/m offset keeps the endpoints outside
    double wlo = bb.lo[last] - 1.0, whi = bb.hi[last] + 2.0;
    const double guard = 1e-7;

    std::size_t cells = 1;
    for (int i = 0; i < d; ++i) cells *= m;
    std::vector<std::int64_t> out(cells, 0);

    auto accumulate_slab = [&](const SlabFn& f, std::int64_t* row) {
        auto iv = slab_interval(f, wlo, whi, r, tol);
        if (!iv) {
            double wstar = slab_minimize(f, wlo, whi, r);
            if (f(wstar) > r + guard) return;
            for (int b = 0; b < m; ++b)
                row[b] += tangent_candidates(f, wstar, double(b) / m, r);
            return;
        }
        for (int b = 0; b < m; ++b) {
            double shift = double(b) / m;
            auto k_lo = static_cast<std::int64_t>(std::ceil(iv->lo - shift));
            auto k_hi = static_cast<std::int64_t>(std::floor(iv->hi - shift));
            // direct re-tests only within the bisection guard window
            if ((k_lo - 1) + shift > iv->lo - guard && f((k_lo - 1) + shift) <= r) --k_lo;
            while (k_lo <= k_hi && (k_lo + shift) < iv->lo + guard && f(k_lo + shift) > r)
                ++k_lo;
            if ((k_hi + 1) + shift < iv->hi + guard && f((k_hi + 1) + shift) <= r) ++k_hi;
            while (k_hi >= k_lo && (k_hi + shift) > iv->hi - guard && f(k_hi + shift) > r)
                --k_hi;
            row[b] += k_hi >= k_lo ? k_hi - k_lo + 1 : 0;
        }
    };

    auto i0 = static_cast<std::int64_t>(std::ceil(bb.lo[0] - 1.0));
    auto i1 = static_cast<std::int64_t>(std::floor(bb.hi[0] + 1.0));
    if (d == 2) {
        parallel_for(m, [&](std::size_t a) {
            double xa = double(a) / m;
            for (std::int64_t k = i0; k <= i1; ++k) {
                SlabFn f{&body, 2, k + xa, 0.0};
                accumulate_slab(f, &out[a * m]);
            }
        });
    } else {
        auto j0 = static_cast<std::int64_t>(std::ceil(bb.lo[1] - 1.0));
        auto j1 = static_cast<std::int64_t>(std::floor(bb.hi[1] + 1.0));
        parallel_for(static_cast<std::size_t>(m) * m, [&](std::size_t ab) {
            int a = static_cast<int>(ab / m), b = static_cast<int>(ab % m);
            double xa = double(a) / m, xb = double(b) / m;
            for (std::int64_t k = i0; k <= i1; ++k)
                for (std::int64_t j = j0; j <= j1; ++j) {
                    SlabFn f{&body, 3, k + xa, j + xb};
                    accumulate_slab(f, &out[ab * m]);
                }
        });
    }
    return out;
}

std::int64_t count_brute_force(const ConvexBody& body, double r, const Vec& x) {
    if (!(r > 0)) throw std::domain_error("count_brute_force: r must be positive");
    int d = body.dim();
    BoxBounds bb = box_bounds(body, r, x);
    std::int64_t total = 0;
    auto i0 = static_cast<std::int64_t>(std::floor(bb.lo[0])) - 1;
    auto i1 = static_cast<std::int64_t>(std::ceil(bb.hi[0])) + 1;
    auto j0 = static_cast<std::int64_t>(std::floor(bb.lo[1])) - 1;
    auto j1 = static_cast<std::int64_t>(std::ceil(bb.hi[1])) + 1;
    if (d == 2) {
        for (std::int64_t i = i0; i <= i1; ++i)
            for (std::int64_t j = j0; j <= j1; ++j)
                if (body.gauge2(i + x[0], j + x[1]) <= r) ++total;
        return total;
    }
    auto k0 = static_cast<std::int64_t>(std::floor(bb.lo[2])) - 1;
    auto k1 = static_cast<std::int64_t>(std::ceil(bb.hi[2])) + 1;
    for (std::int64_t i = i0; i <= i1; ++i)
        for (std::int64_t j = j0; j <= j1; ++j)
            for (std::int64_t k = k0; k <= k1; ++k)
                if (body.gauge3(i + x[0], j + x[1], k + x[2]) <= r) ++total;
    return total;
}

}  // namespace disclab
