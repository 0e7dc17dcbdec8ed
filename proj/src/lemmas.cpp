#include "disclab/lemmas.hpp"

#include "disclab/mollify.hpp"
#include "disclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace disclab {

namespace {

bool feq(double a, double b) { return std::abs(a - b) < 1e-12; }

double clamp1(double t) { return std::max(-1.0, std::min(1.0, t)); }

double log_pow(double base, int power) {
    return power == 0 ? 1.0 : std::pow(std::log(base), power);
}

}  // namespace

ExponentPack exponent_pack(int d, double alpha, double beta, double gamma) {
    if (d < 2) throw validation_error("exponent_pack: d must be >= 2");
    ExponentPack e;
    e.d = d;
    e.alpha = alpha;
    e.beta = beta;
    e.gamma = gamma;
    e.tau = std::min({1.0, gamma, beta});
    e.sigma = ((feq(beta, 1.0) && gamma >= 1.0 - 1e-12) ||
               (feq(beta, gamma) && beta <= 1.0 + 1e-12))
                  ? 1
                  : 0;
    e.varsigma = feq(e.tau, 0.5 * (d - 1)) ? 1 : 0;
    e.zeta = std::min({1.0, beta, double(d) - alpha, 0.5 * (d - 1)});
    if (d == 2) {
        if (feq(beta, 0.5) && feq(alpha, 1.5))
            e.eta = 2;
        else if (feq(beta, 0.5) && alpha > 1.0 && alpha < 1.5)
            e.eta = 1;
        else if (beta > 0 && beta < 0.5 && feq(alpha, 2.0 - beta))
            e.eta = 1;
        else if (beta > 0.5 && feq(alpha, 1.5))
            e.eta = 1;
        else
            e.eta = 0;
    } else if (d == 3) {
        if (feq(beta, 1.0) && alpha > 1.5 && alpha <= 2.0 + 1e-12)
            e.eta = 2;
        else if (beta > 1.0 && alpha > 1.5 && alpha <= 2.0 + 1e-12)
            e.eta = 1;
        else if (beta > 0 && beta < 1.0 && feq(alpha, 3.0 - beta))
            e.eta = 1;
        else
            e.eta = 0;
    } else {
        if (feq(beta, 1.0) && alpha > 0.5 * d && alpha <= d - 1.0 + 1e-12)
            e.eta = 1;
        else if (beta > 0 && beta < 1.0 && feq(alpha, double(d) - beta))
            e.eta = 1;
        else
            e.eta = 0;
    }
    return e;
}

// ---------------------------------------------------------------------------
// crucial 1-D estimates
// ---------------------------------------------------------------------------

namespace {

// int_lo^inf (1+|X-t|)^-b t^p dt, truncated where the analytic tail bound
// drops below 1e-12 of the accumulated value. Requires p - b < -1.
double integral_to_infinity(double x, double b, double p, double lo) {
    auto f = [&](double t) { return std::pow(1.0 + std::abs(x - t), -b) * std::pow(t, p); };
    double hi = std::max({2.0 * std::abs(x) + 4.0, 2.0 * lo, 8.0});
    double acc = adaptive_gk(f, lo, hi, 1e-13, 1e-9);
    for (int it = 0; it < 60; ++it) {
        // for t >= hi >= 2|X|: 1+|X-t| >= t/2
        double tail_bound = std::pow(2.0, b) * std::pow(hi, p - b + 1.0) / (b - p - 1.0);
        if (tail_bound < 1e-12 * std::abs(acc) + 1e-300) break;
        double nxt = 2.0 * hi;
        acc += adaptive_gk(f, hi, nxt, 1e-13, 1e-9);
        hi = nxt;
    }
    return acc;
}

double crucial_integral(int case_id, double alpha, double beta, double x, double t) {
    switch (case_id) {
        case 1:
            return integral_to_infinity(x, beta, 1.0 - alpha, 0.0);
        case 2: {
            auto f = [&](double u) {
                return std::pow(1.0 + std::abs(x - u), -beta) * std::pow(u, 1.0 - alpha) *
                       (-std::log(u));
            };
            return adaptive_gk(f, 0.0, 1.0, 1e-13, 1e-9, 24);
        }
        case 3: {
            auto f = [&](double u) {
                return std::pow(1.0 + std::abs(x - u), -beta) * std::pow(u, 1.0 - alpha);
            };
            return adaptive_gk(f, 0.0, t, 1e-13, 1e-9, 24);
        }
        case 4:
            return integral_to_infinity(x, beta, 1.0 - 2.0 * alpha, t);
    }
    throw validation_error("verify_crucial: case must be 1..4");
}

double crucial_bound(int case_id, double alpha, double beta, double x, double t) {
    switch (case_id) {
        case 1: {
            int dlog = feq(beta, 1.0) ? 1 : 0;
            return std::pow(1.0 + std::abs(x), 2.0 - alpha - std::min(beta, 1.0)) *
                   log_pow(2.0 + std::abs(x), dlog);
        }
        case 2:
            return std::pow(1.0 + std::abs(x), -beta);
        case 3: {
            int dlog = feq(2.0 - alpha, beta) ? 1 : 0;
            return std::pow(t, 2.0 - alpha - beta) * log_pow(t, dlog);
        }
        case 4:
            return std::pow(t, 2.0 - 2.0 * alpha - beta);
    }
    return 1.0;
}

void crucial_validate(int case_id, double alpha, double beta) {
    switch (case_id) {
        case 1:
            if (!(beta >= 0 && 2.0 - alpha > 0 && 2.0 - alpha < beta))
                throw validation_error("crucial case 1: need 0 < 2-alpha < beta");
            return;
        case 2:
            if (!(alpha < 2.0)) throw validation_error("crucial case 2: need alpha < 2");
            return;
        case 3:
            if (!(beta >= 0 && beta < 1.0 && 2.0 - alpha >= beta && alpha < 2.0))
                throw validation_error("crucial case 3: need 0 <= beta < 1, beta <= 2-alpha");
            return;
        case 4:
            if (!(beta >= 0 && beta < 1.0 && alpha > 1.0))
                throw validation_error("crucial case 4: need 0 <= beta < 1, alpha > 1");
            return;
    }
    throw validation_error("verify_crucial: case must be 1..4");
}

}  // namespace

RatioReport verify_crucial(int case_id, double alpha, double beta, double x_max,
                           double t_max) {
    crucial_validate(case_id, alpha, beta);
    std::vector<double> xs{0.0, 0.5, 1.0, -0.5, -1.0};
    for (double v = 2.0; v <= x_max * (1.0 + 1e-12); v *= 2.0) {
        xs.push_back(v);
        xs.push_back(-v);
    }
    std::vector<double> ts{2.0};
    if (case_id == 3 || case_id == 4)
        for (double v = 4.0; v <= t_max * (1.0 + 1e-12); v *= 2.0) ts.push_back(v);
    else
        ts = {0.0};

    RatioReport rep;
    rep.lemma_id = "crucial(" + std::to_string(case_id) + ")";
    std::ostringstream gs;
    gs << "X in +-[0," << x_max << "], T dyadic to " << t_max;
    rep.grid_spec = gs.str();
    rep.quad_rel_error = 1e-8;
    for (double t : ts)
        for (double x : xs) {
            double val = crucial_integral(case_id, alpha, beta, x, t);
            double bound = crucial_bound(case_id, alpha, beta, x, t);
            double ratio = val / bound;
            if (ratio > rep.sup_ratio) {
                rep.sup_ratio = ratio;
                rep.argmax = {x, t};
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// pair integral with the support-sum cutoff
// ---------------------------------------------------------------------------

namespace {

struct PairSetup {
    double alpha, beta, y;
    const ConvexBody* body;  // nullptr: Euclidean
    double delta_cut, lambda;

    double g(double v0, double v1) const {
        if (!body) return std::hypot(v0, v1);
        return body->support(vec2(v0, v1));
    }

    double integrand_polar(double rho, double th, double k0, double k1) const {
        double x0 = rho * std::cos(th), x1 = rho * std::sin(th);
        double w0 = k0 - x0, w1 = k1 - x1;
        double rw = std::hypot(w0, w1);
        double v = std::pow(rho, -alpha) * std::pow(rw, -alpha);
        if (lambda > 0)
            v *= std::pow(1.0 + delta_cut * rho, -lambda) *
                 std::pow(1.0 + delta_cut * rw, -lambda);
        if (beta > 0) v *= std::pow(1.0 + std::abs(g(x0, x1) + g(w0, w1) - y), -beta);
        return v;
    }
};

// angular integral at fixed radius, excluding the disc of radius `excl`
// around k when it intersects the circle
double angular_integral(const PairSetup& s, double rho, double k0, double k1,
                        double excl, double rel_tol) {
    double kn = std::hypot(k0, k1);
    double thk = std::atan2(k1, k0);
    double lo = 0.0, hi = 2.0 * pi, shift = thk;
    if (excl > 0 && std::abs(rho - kn) < excl) {
        double c = (rho * rho + kn * kn - excl * excl) / (2.0 * rho * kn);
        double th_ex = std::acos(clamp1(c));
        lo = th_ex;
        hi = 2.0 * pi - th_ex;
    }
    auto f = [&](double th) { return s.integrand_polar(rho, th + shift, k0, k1); };
    if (hi <= lo) return 0.0;
    return adaptive_gk(f, lo, hi, 1e-14, rel_tol, 20);
}

}  // namespace

double pair_integral(double alpha, double beta, double y, const ConvexBody* body,
                     const Vec& k, double exclusion, double delta_cut, double lambda,
                     double rel_tol) {
    if (exclusion == 0.0 && !(alpha < 2.0))
        throw validation_error("pair_integral: singular patches require alpha < 2");
    PairSetup s{alpha, beta, y, body, delta_cut, lambda};
    double k0 = k[0], k1 = k[1];
    double kn = std::hypot(k0, k1);
    if (!(kn > 0)) throw validation_error("pair_integral: k must be nonzero");

    // |x|^{-2a}, the cutoff and the two lambda factors together must be
    // integrable at infinity
    double a_low = body ? body->support_bounds().first : 1.0;
    double decay = 2.0 * alpha + beta + 2.0 * lambda;
    if (!(decay > 2.0))
        throw validation_error("pair_integral: integrand is not integrable at infinity");

    double total = 0;
    if (exclusion == 0.0) {
        // two symmetric singular patches around 0 and k: substitution
        // t = rho^{2-alpha} absorbs rho^{1-alpha}
        double p = 2.0 - alpha;
        double t_hi = std::pow(0.5 * kn, p);
        auto patch = [&](double t) {
            double rho = std::pow(t, 1.0 / p);
            return std::pow(rho, alpha) *
                   angular_integral(s, rho, k0, k1, 0.0, rel_tol) / p;
        };
        total += 2.0 * adaptive_gk(patch, 0.0, t_hi, 1e-14, rel_tol, 20);
    }

    // mid range in log radius (the disc around k is excluded here: for
    // exclusion 0 the symmetric patch above already covered it)
    double rho_lo = exclusion > 0 ? exclusion : 0.5 * kn;
    double excl = exclusion > 0 ? exclusion : 0.5 * kn;
    double rho_far = std::max({4.0 * kn, 4.0 * (std::abs(y) + 1.0) / a_low, 8.0 * rho_lo});
    auto shell = [&](double u) {
        double rho = std::exp(u);
        return rho * rho * angular_integral(s, rho, k0, k1, excl, rel_tol);
    };
    total += adaptive_gk(shell, std::log(rho_lo), std::log(rho_far), 1e-14, rel_tol, 20);

    // far field mapped to a finite graded integral: rho = rho_far v^{-s}
    // with s = 1/(decay-2) makes the v-integrand bounded near v = 0
    double sgrade = 1.0 / (decay - 2.0);
    auto far = [&](double v) {
        double rho = rho_far * std::pow(v, -sgrade);
        double jac = rho_far * sgrade * std::pow(v, -sgrade - 1.0);
        return rho * jac * angular_integral(s, rho, k0, k1, 0.0, rel_tol);
    };
    total += adaptive_gk(far, 0.0, 1.0, 1e-14, rel_tol, 20);
    return total;
}

RatioReport verify_integral_lemma(double alpha, double beta, const ConvexBody& body,
                                  const std::vector<Vec>& k_samples,
                                  const std::vector<double>& y_grid) {
    if (body.dim() != 2)
        throw validation_error("verify_integral_lemma: d=2 quadrature only");
    if (!(alpha > 1.0 && alpha < 2.0))
        throw validation_error("verify_integral_lemma: requires d/2 < alpha < d");
    ExponentPack ep = exponent_pack(2, alpha, beta, 1.0);
    RatioReport rep;
    rep.lemma_id = "integral";
    rep.grid_spec = std::to_string(k_samples.size()) + " k-samples x " +
                    std::to_string(y_grid.size()) + " Y values";
    rep.quad_rel_error = 1e-5;
    for (const auto& k : k_samples) {
        double kn = k.norm();
        if (kn < 2.0) throw validation_error("verify_integral_lemma: need |k| >= 2");
        for (double y : y_grid) {
            double val = pair_integral(alpha, beta, y, &body, k, 0.0);
            double bound = std::pow(kn, 2.0 - 2.0 * alpha) *
                           std::pow(1.0 + kn + std::abs(y), -ep.zeta) *
                           log_pow(2.0 + kn + std::abs(y), ep.eta);
            double ratio = val / bound;
            if (ratio > rep.sup_ratio) {
                rep.sup_ratio = ratio;
                rep.argmax = {k[0], k[1], y};
            }
        }
    }
    return rep;
}

RatioReport verify_mu_lemma(double gamma, double beta, const ConvexBody& body,
                            const std::vector<Vec>& k_samples,
                            const std::vector<double>& y_grid, double delta) {
    if (body.dim() != 2) throw validation_error("verify_mu_lemma: d=2 quadrature only");
    if (!(gamma > 0 && delta > 0))
        throw validation_error("verify_mu_lemma: gamma and delta must be positive");
    ExponentPack ep = exponent_pack(2, 0.0, beta, gamma);
    RatioReport rep;
    rep.lemma_id = "mu";
    rep.grid_spec = std::to_string(k_samples.size()) + " k-samples x " +
                    std::to_string(y_grid.size()) + " Y values, delta=" +
                    std::to_string(delta);
    rep.quad_rel_error = 1e-5;
    for (const auto& k : k_samples) {
        for (double y : y_grid) {
            if (!(y >= 1.0)) throw validation_error("verify_mu_lemma: Y must be >= 1");
            double t_hi = std::pow(delta * y, gamma);
            auto outer = [&](double th) {
                double u0 = std::cos(th), u1 = std::sin(th);
                auto inner = [&](double t) {
                    double rho = std::pow(t, 1.0 / gamma);
                    double s = body.support(vec2(rho * u0, rho * u1)) +
                               body.support(vec2(k[0] - rho * u0, k[1] - rho * u1));
                    return std::pow(1.0 + std::abs(s - y), -beta) / gamma;
                };
                return adaptive_gk(inner, 0.0, t_hi, 1e-14, 1e-6, 20);
            };
            double val = adaptive_gk(outer, 0.0, 2.0 * pi, 1e-14, 1e-5, 16);
            double bound = std::pow(y, gamma - std::min(ep.tau, 0.5)) *
                           log_pow(2.0 + y, ep.sigma + ep.varsigma);
            double ratio = val / bound;
            if (ratio > rep.sup_ratio) {
                rep.sup_ratio = ratio;
                rep.argmax = {k[0], k[1], y};
            }
        }
    }
    return rep;
}

namespace {

void ellipse_case_validate(int case_id, double alpha, double beta) {
    switch (case_id) {
        case 1:
            if (!(alpha >= 1.5 && alpha < 2.0 && beta > 2.0 - alpha))
                throw validation_error("ellipse case 1: need 3/2 <= alpha < 2, beta > 2-alpha");
            return;
        case 2:
            if (!(alpha > 1.5 && alpha < 2.0 && beta >= 0 && beta <= 2.0 - alpha))
                throw validation_error("ellipse case 2: need 3/2 < alpha < 2, 0 <= beta <= 2-alpha");
            return;
        case 3:
            if (!(feq(alpha, 1.5) && feq(beta, 0.5)))
                throw validation_error("ellipse case 3: alpha = 3/2, beta = 1/2");
            return;
        case 4:
            if (!(alpha > 0.75 && alpha < 1.5 && beta >= 0))
                throw validation_error("ellipse case 4: need 3/4 < alpha < 3/2");
            if (beta <= 0.5 && !(alpha > 1.0))
                throw validation_error(
                    "ellipse case 4: with beta <= 1/2 the integral needs alpha > 1");
            return;
        case 5:
            if (!(alpha > 1.0)) throw validation_error("ellipse case 5: need alpha > 1");
            return;
    }
    throw validation_error("verify_ellipse_integral: case must be 1..5");
}

double ellipse_case_bound(int case_id, double alpha, double beta, double kn, double y) {
    double dy = std::abs(y - kn);
    switch (case_id) {
        case 1: {
            int l1 = feq(alpha, 1.5) ? 1 : 0;
            int l2 = feq(beta, 1.0) ? 1 : 0;
            return std::pow(kn, -alpha) * log_pow(kn, l1) *
                   std::pow(1.0 + dy, 2.0 - alpha - std::min(1.0, beta)) *
                   log_pow(2.0 + dy, l2);
        }
        case 2: {
            int l = feq(2.0 - alpha, beta) ? 1 : 0;
            return std::pow(kn, 2.0 - 2.0 * alpha - beta) * log_pow(kn, l);
        }
        case 3:
            return std::pow(kn, -1.5) * std::pow(std::log(kn), 2.0);
        case 4: {
            if (beta <= 0.5) return std::pow(kn, 2.0 - 2.0 * alpha - beta);
            int l = feq(beta, 1.0) ? 1 : 0;
            return std::pow(kn, 1.5 - 2.0 * alpha) *
                   std::pow(1.0 + dy, 0.5 - std::min(1.0, beta)) * log_pow(2.0 + dy, l);
        }
        case 5:
            return 1.0 / (2.0 * alpha - 2.0);
    }
    return 1.0;
}

}  // namespace

RatioReport verify_ellipse_integral(int case_id, double alpha, double beta,
                                    const std::vector<double>& k_radii,
                                    const std::vector<double>& y_offsets) {
    ellipse_case_validate(case_id, alpha, beta);
    RatioReport rep;
    rep.lemma_id = "ellipse-integral(" + std::to_string(case_id) + ")";
    rep.grid_spec = std::to_string(k_radii.size()) + " |k| values x " +
                    std::to_string(y_offsets.size()) + " Y offsets";
    rep.quad_rel_error = 1e-5;
    for (double kn : k_radii) {
        if (kn < 2.0) throw validation_error("verify_ellipse_integral: need |k| >= 2");
        Vec k = vec2(kn, 0.0);
        if (case_id == 5) {
            double val = pair_integral(alpha, 0.0, 0.0, nullptr, k, 1.0);
            double ratio = val / ellipse_case_bound(5, alpha, beta, kn, 0.0);
            if (ratio > rep.sup_ratio) {
                rep.sup_ratio = ratio;
                rep.argmax = {kn};
            }
            continue;
        }
        for (double off : y_offsets) {
            double y = kn + off;
            double val = pair_integral(alpha, beta, y, nullptr, k, 0.0);
            double ratio = val / ellipse_case_bound(case_id, alpha, beta, kn, y);
            if (ratio > rep.sup_ratio) {
                rep.sup_ratio = ratio;
                rep.argmax = {kn, y};
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// N=2 moment reduction, Monte-Carlo right side
// ---------------------------------------------------------------------------

namespace {

struct PolarSample {
    double x0, x1, rho;
    double inv_density;  // 1/q(m) with q = p(rho)/(2 pi rho)
};

// Pareto radial proposal on [1, inf), exponent fixed so common random
// numbers stay monotone across Re(z).
PolarSample sample_polar(Rng& rng) {
    const double c = 1.5;
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double rho = std::pow(std::max(u, 1e-300), -1.0 / (c - 1.0));
    double th = std::uniform_real_distribution<double>(0.0, 2.0 * pi)(rng);
    double pd = (c - 1.0) * std::pow(rho, -c);  // radial density
    PolarSample s;
    s.rho = rho;
    s.x0 = rho * std::cos(th);
    s.x1 = rho * std::sin(th);
    s.inv_density = 2.0 * pi * rho / pd;
    return s;
}

}  // namespace

N2Report verify_n2_reduction(const ConvexBody& body, const N2Config& cfg) {
    if (body.dim() != 2) throw validation_error("verify_n2_reduction: d=2 only");
    N2Report rep;

    // left side: |Phi|^4 averaged over the torus and the translated measure
    SpectralSeries series(body, cfg.delta, cplx(cfg.z, 0.0), 0);
    double lhs = 0;
    for (const auto& [r, w] : quadrature_nodes(cfg.mu, cfg.r0, cfg.mu_budget))
        lhs += w * series.phi_field(r).power_mean(4.0);
    rep.lhs = lhs;

    // right side: outer log-radius quadrature in |k|, inner 4-D Monte Carlo
    const double alpha = cfg.z;
    const double lam = cfg.lambda;
    double k_lo = 0.05, k_hi = 40.0 / cfg.delta;
    const int k_nodes = 24;
    auto gl = gauss_legendre(k_nodes, std::log(k_lo), std::log(k_hi));
    long long per_node = std::max<long long>(1000, cfg.samples / k_nodes);
    double total = 0, var_total = 0;
    for (int node = 0; node < k_nodes; ++node) {
        double kn = std::exp(gl[node].x);
        double k0 = kn, k1 = 0.0;
        Rng rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 0x517cc1b727220a95ULL * node);
        double acc = 0, acc2 = 0;
        for (long long s = 0; s < per_node; ++s) {
            PolarSample m = sample_polar(rng);
            PolarSample n = sample_polar(rng);
            double m20 = k0 - m.x0, m21 = k1 - m.x1;
            double n20 = k0 - n.x0, n21 = k1 - n.x1;
            double m2 = std::hypot(m20, m21), n2 = std::hypot(n20, n21);
            double f = 0;
            if (m2 > 1.0 && n2 > 1.0) {
                double sm = m.rho + m2, sn = n.rho + n2;
                f = std::pow(m.rho * m2 * n.rho * n2, -alpha) *
                    std::pow((1.0 + cfg.delta * m.rho) * (1.0 + cfg.delta * m2) *
                                 (1.0 + cfg.delta * n.rho) * (1.0 + cfg.delta * n2),
                             -lam) *
                    std::pow(1.0 + std::abs(sm - sn), -cfg.beta) * m.inv_density *
                    n.inv_density;
            }
            acc += f;
            acc2 += f * f;
        }
        double mean = acc / double(per_node);
        double var = std::max(0.0, acc2 / double(per_node) - mean * mean) / double(per_node);
        double w = gl[node].w * kn * kn * std::pow(1.0 + cfg.delta * kn, -lam);
        // d|k| = kn du, ring measure 2 pi kn ... folded: H depends on |k| only
        total += w * mean;
        var_total += w * w * var;
    }
    rep.rhs = 2.0 * pi * total;
    rep.rhs_stderr = 2.0 * pi * std::sqrt(var_total);
    rep.inconclusive = rep.rhs_stderr > 0.2 * std::abs(rep.rhs);
    return rep;
}

}  // namespace disclab
