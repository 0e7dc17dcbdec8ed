#include "disclab/mollify.hpp"

#include "disclab/fitting.hpp"
#include "disclab/lattice.hpp"
#include "disclab/quadrature.hpp"
#include "disclab/special.hpp"
#include "disclab/spectra.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace disclab {

namespace {

constexpr double kTableZMax = 48.0;
constexpr int kTableNodesPerUnit = 512;

double bump_raw(double t) { return (t < 1.0) ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

struct HatTable {
    std::vector<double> vals;  // hat_unit at z = i / kTableNodesPerUnit
    double norm_c = 0;         // profile normalization constant C_d
    double envelope_c = 0;     // sup |hat(z)| (1+z)^6 over the table
};

double hat_unit_quad(int dim, double z, double norm_c) {
    if (dim == 2) {
        auto f = [&](double t) {
            return bump_raw(t) * boost::math::cyl_bessel_j(0, 2.0 * pi * z * t) * t;
        };
        return 2.0 * pi * norm_c * adaptive_gk(f, 0.0, 1.0, 1e-12, 1e-12);
    }
    if (z < 1e-8) {
        auto f = [&](double t) { return bump_raw(t) * t * t; };
        return 4.0 * pi * norm_c * adaptive_gk(f, 0.0, 1.0, 1e-12, 1e-12);
    }
    auto f = [&](double t) { return bump_raw(t) * std::sin(2.0 * pi * z * t) * t; };
    return 2.0 * norm_c / z * adaptive_gk(f, 0.0, 1.0, 1e-12, 1e-12);
}

const HatTable& hat_table(int dim) {
    static HatTable tables[2];
    static std::once_flag flags[2];
    int slot = dim - 2;
    std::call_once(flags[slot], [dim, slot] {
        HatTable& tb = tables[slot];
        double mass;
        if (dim == 2)
            mass = 2.0 * pi * adaptive_gk([](double t) { return bump_raw(t) * t; }, 0.0,
                                          1.0, 1e-15);
        else
            mass = 4.0 * pi *
                   adaptive_gk([](double t) { return bump_raw(t) * t * t; }, 0.0, 1.0,
                               1e-15);
        tb.norm_c = 1.0 / mass;
        int n = static_cast<int>(kTableZMax * kTableNodesPerUnit) + 1;
        tb.vals.resize(n);
        parallel_for(n, [&](std::size_t i) {
            tb.vals[i] = hat_unit_quad(dim, double(i) / kTableNodesPerUnit, tb.norm_c);
        });
        double c = 0;
        for (int i = 0; i < n; ++i) {
            double z = double(i) / kTableNodesPerUnit;
            c = std::max(c, std::abs(tb.vals[i]) * std::pow(1.0 + z, 6.0));
        }
        tb.envelope_c = c;
    });
    return tables[slot];
}

}  // namespace

Mollifier::Mollifier(int dim, double eps) : dim_(dim), eps_(eps) {
    if (dim < 2 || dim > 3) throw validation_error("Mollifier: dimension must be 2 or 3");
    if (!(eps > 0)) throw validation_error("Mollifier: eps must be positive");
    hat_table(dim);  // build the shared table eagerly
}

double Mollifier::hat_unit(double z) const {
    const HatTable& tb = hat_table(dim_);
    z = std::abs(z);
    double u = z * kTableNodesPerUnit;
    auto i = static_cast<long>(u);
    if (i + 2 >= static_cast<long>(tb.vals.size())) return 0.0;
    // 4-point cubic through neighbouring table nodes
    double t = u - i;
    long i0 = std::max(0L, i - 1);
    double ym = tb.vals[i0], y0 = tb.vals[i], y1 = tb.vals[i + 1], y2 = tb.vals[i + 2];
    if (i == 0) ym = tb.vals[1];  // even extension through z=0
    return y0 + t * (0.5 * (y1 - ym) + t * ((ym - 2.5 * y0 + 2.0 * y1 - 0.5 * y2) +
                                            t * (0.5 * (y2 - ym) + 1.5 * (y0 - y1))));
}

double Mollifier::hat(double t) const { return hat_unit(eps_ * std::abs(t)); }

double Mollifier::table_max_z() const { return kTableZMax; }

double Mollifier::envelope_c() const { return hat_table(dim_).envelope_c; }

double Mollifier::profile_unit(double t) const {
    return hat_table(dim_).norm_c * bump_raw(std::abs(t));
}

Mollifier make_mollifier(const ConvexBody& body) {
    return Mollifier(body.dim(), 0.5 * body.support_bounds().first);
}

// ---------------------------------------------------------------------------
// SpectralSeries
// ---------------------------------------------------------------------------

struct SpectralSeries::Impl {
    ConvexBody body;
    Mollifier moll;
    double delta;
    cplx z;
    int h;
    SeriesOptions opts;
    int n_max = 0;
    int grid = 0;
    double retained = 0;
    double tail = 0;

    // per-frequency cache (built when the truncation ball is small enough)
    bool cached = false;
    std::vector<int> ci, cj, ck;
    std::vector<double> cabsn, cphihat, cgp, cgm;
    std::vector<cplx> ca[3], cb[3];

    Impl(const ConvexBody& b, double d, cplx zz, int hh, SeriesOptions o)
        : body(b), moll(make_mollifier(b)), delta(d), z(zz), h(hh), opts(o) {}

    template <class Fn>
    void for_each_n(const Fn& fn) const {
        int n = n_max;
        double n2 = double(n) * n;
        if (body.dim() == 2) {
            for (int i = -n; i <= n; ++i)
                for (int j = -n; j <= n; ++j) {
                    if (i == 0 && j == 0) continue;
                    double q = double(i) * i + double(j) * j;
                    if (q <= n2) fn(i, j, 0, std::sqrt(q));
                }
        } else {
            for (int i = -n; i <= n; ++i)
                for (int j = -n; j <= n; ++j)
                    for (int k = -n; k <= n; ++k) {
                        if (i == 0 && j == 0 && k == 0) continue;
                        double q = double(i) * i + double(j) * j + double(k) * k;
                        if (q <= n2) fn(i, j, k, std::sqrt(q));
                    }
        }
    }

    Vec nvec(int i, int j, int k) const {
        return body.dim() == 2 ? vec2(i, j) : vec3(i, j, k);
    }

    void build_cache() {
        std::size_t count = 0;
        for_each_n([&](int, int, int, double) { ++count; });
        if (count > opts.cache_cap) return;
        ci.reserve(count);
        cj.reserve(count);
        ck.reserve(count);
        cabsn.reserve(count);
        cphihat.reserve(count);
        cgp.reserve(count);
        cgm.reserve(count);
        for (int j = 0; j <= h; ++j) {
            ca[j].reserve(count);
            cb[j].reserve(count);
        }
        for_each_n([&](int i, int j, int k, double absn) {
            Vec nv = nvec(i, j, k);
            ci.push_back(i);
            cj.push_back(j);
            ck.push_back(k);
            cabsn.push_back(absn);
            cphihat.push_back(moll.hat(delta * absn));
            cgp.push_back(body.support(nv));
            cgm.push_back(body.support(Vec(-nv)));
            for (int jj = 0; jj <= h; ++jj) {
                ca[jj].push_back(ft_coeff_a(body, jj, nv));
                cb[jj].push_back(ft_coeff_b(body, jj, nv));
            }
        });
        cached = true;
    }

    double chihat_at(double r, const Vec& nv, double absn) const {
        // closed Bessel forms; the perturbed-ball fallback is handled by the
        // caller through the asymptotic path
        if (body.kind() == ConvexBody::Kind::ball) {
            double rr = body.ball_radius();
            return std::pow(rr, body.dim()) * unit_ball_ft(body.dim(), rr * r * absn);
        }
        Vec mt = body.matrix().transpose() * nv;
        return body.det_abs() * unit_ball_ft(body.dim(), r * mt.norm());
    }

    cplx phi_coeff(double r, double phihat, double absn, double gp, double gm,
                   const cplx* aj, const cplx* bj, cplx zz, int order) const {
        cplx sum = 0;
        for (int j = 0; j <= order; ++j) {
            cplx fall = std::exp(-(zz + double(j)) * std::log(absn)) * std::pow(r, -j);
            sum += fall * (aj[j] * std::exp(cplx(0.0, -2.0 * pi * gp * r)) +
                           bj[j] * std::exp(cplx(0.0, 2.0 * pi * gm * r)));
        }
        return phihat * sum;
    }
};

SpectralSeries::SpectralSeries(const ConvexBody& body, double delta, cplx z, int h,
                               SeriesOptions opts)
    : impl_(std::make_unique<Impl>(body, delta, z, h, opts)) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw validation_error("SpectralSeries: delta must lie in (0, 1]");
    if (h < 0 || h > max_expansion_order(body))
        throw validation_error("SpectralSeries: expansion order not available for body");
    const int d = body.dim();
    const double alpha = z.real();
    const Mollifier& moll = impl_->moll;
    const double ed = moll.eps() * delta;

    int n = static_cast<int>(std::ceil(8.0 / delta));
    for (;;) {
        if (n > opts.n_cap)
            throw unconverged_error(
                "SpectralSeries: truncation tail above tolerance, increase grid", n);
        // retained coefficient mass (integral approximation is enough here)
        double retained = 0;
        {
            int steps = 2000;
            double lo = 1.0, hi = n;
            for (int i = 0; i < steps; ++i) {
                double s = lo * std::pow(hi / lo, (i + 0.5) / steps);
                double ds = s * (std::pow(hi / lo, 1.0 / steps) - 1.0);
                double surf = (d == 2) ? 2.0 * pi * s : 4.0 * pi * s * s;
                retained += std::abs(moll.hat_unit(ed * s)) * std::pow(s, -alpha) * surf * ds;
            }
        }
        // tail: table values while available, fitted envelope beyond
        double tail = 0;
        {
            int steps = 3000;
            double lo = n, hi = std::max(1e9, 1000.0 * n);
            double c6 = moll.envelope_c();
            for (int i = 0; i < steps; ++i) {
                double s = lo * std::pow(hi / lo, (i + 0.5) / steps);
                double ds = s * (std::pow(hi / lo, 1.0 / steps) - 1.0);
                double zarg = ed * s;
                double q = (zarg < moll.table_max_z() - 1.0)
                               ? std::abs(moll.hat_unit(zarg))
                               : c6 * std::pow(1.0 + zarg, -6.0);
                double surf = (d == 2) ? 2.0 * pi * s : 4.0 * pi * s * s;
                tail += q * std::pow(s, -alpha) * surf * ds;
            }
            tail *= 2.0;  // sum-vs-integral safety
        }
        if (retained > 0 && tail <= opts.tail_rel_tol * retained) {
            impl_->n_max = n;
            impl_->retained = retained;
            impl_->tail = tail;
            break;
        }
        n = static_cast<int>(std::ceil(1.25 * n));
    }
    impl_->grid = next_pow2(2 * impl_->n_max + 2);
    impl_->build_cache();
}

SpectralSeries::~SpectralSeries() = default;
SpectralSeries::SpectralSeries(SpectralSeries&&) noexcept = default;
SpectralSeries& SpectralSeries::operator=(SpectralSeries&&) noexcept = default;

int SpectralSeries::n_max() const { return impl_->n_max; }
int SpectralSeries::grid() const { return impl_->grid; }
double SpectralSeries::delta() const { return impl_->delta; }
cplx SpectralSeries::z() const { return impl_->z; }
int SpectralSeries::order() const { return impl_->h; }
const Mollifier& SpectralSeries::mollifier() const { return impl_->moll; }
double SpectralSeries::retained_mass() const { return impl_->retained; }
double SpectralSeries::tail_bound() const { return impl_->tail; }

GridField SpectralSeries::phi_field(double r) const {
    if (!(r >= 1.0)) throw validation_error("phi_field: requires r >= 1");
    const Impl& s = *impl_;
    GridField field(s.body.dim(), s.grid);
    if (s.cached) {
        for (std::size_t p = 0; p < s.ci.size(); ++p) {
            cplx aj[3], bj[3];
            for (int j = 0; j <= s.h; ++j) {
                aj[j] = s.ca[j][p];
                bj[j] = s.cb[j][p];
            }
            cplx c = s.phi_coeff(r, s.cphihat[p], s.cabsn[p], s.cgp[p], s.cgm[p], aj, bj,
                                 s.z, s.h);
            if (s.body.dim() == 2)
                field.coeff(s.ci[p], s.cj[p]) = c;
            else
                field.coeff(s.ci[p], s.cj[p], s.ck[p]) = c;
        }
    } else {
        s.for_each_n([&](int i, int j, int k, double absn) {
            Vec nv = s.nvec(i, j, k);
            cplx aj[3], bj[3];
            for (int jj = 0; jj <= s.h; ++jj) {
                aj[jj] = ft_coeff_a(s.body, jj, nv);
                bj[jj] = ft_coeff_b(s.body, jj, nv);
            }
            cplx c = s.phi_coeff(r, s.moll.hat(s.delta * absn), absn,
                                 s.body.support(nv), s.body.support(Vec(-nv)), aj, bj,
                                 s.z, s.h);
            if (s.body.dim() == 2)
                field.coeff(i, j) = c;
            else
                field.coeff(i, j, k) = c;
        });
    }
    field.synthesize();
    return field;
}

GridField SpectralSeries::mollified_field(double r, bool normalized) const {
    if (!(r >= 1.0)) throw validation_error("mollified_field: requires r >= 1");
    const Impl& s = *impl_;
    const int d = s.body.dim();
    const bool asymptotic = s.body.kind() == ConvexBody::Kind::perturbed_ball;
    if (asymptotic && !s.opts.perturbed_asymptotic_ft)
        throw validation_error(
            "mollified_field: perturbed ball needs the asymptotic chihat fallback");
    double scale = normalized ? std::pow(r, 0.5 * (d + 1)) : std::pow(r, d);
    GridField field(d, s.grid);
    auto emit = [&](int i, int j, int k, cplx c) {
        if (d == 2)
            field.coeff(i, j) = c;
        else
            field.coeff(i, j, k) = c;
    };
    if (s.cached) {
        for (std::size_t p = 0; p < s.ci.size(); ++p) {
            cplx chi;
            if (!asymptotic) {
                chi = s.chihat_at(r, s.nvec(s.ci[p], s.cj[p], s.ck[p]), s.cabsn[p]);
            } else {
                double lead = std::pow(r * s.cabsn[p], -0.5 * (d + 1));
                chi = lead * (s.ca[0][p] * std::exp(cplx(0, -2 * pi * s.cgp[p] * r)) +
                              s.cb[0][p] * std::exp(cplx(0, 2 * pi * s.cgm[p] * r)));
            }
            emit(s.ci[p], s.cj[p], s.ck[p], scale * s.cphihat[p] * chi);
        }
    } else {
        s.for_each_n([&](int i, int j, int k, double absn) {
            Vec nv = s.nvec(i, j, k);
            cplx chi = asymptotic ? ft_asymptotic(s.body, Vec(r * nv), 0)
                                  : s.chihat_at(r, nv, absn);
            emit(i, j, k, scale * s.moll.hat(s.delta * absn) * chi);
        });
    }
    field.synthesize();
    return field;
}

GridField SpectralSeries::remainder_field(double r) const {
    if (!(r >= 1.0)) throw validation_error("remainder_field: requires r >= 1");
    const Impl& s = *impl_;
    const int d = s.body.dim();
    if (std::abs(s.z - cplx(0.5 * (d + 1), 0.0)) > 1e-12)
        throw validation_error("remainder_field: defined at z = (d+1)/2");
    if (s.body.kind() == ConvexBody::Kind::perturbed_ball)
        throw validation_error("remainder_field: needs closed-form chihat");
    double scale = std::pow(r, 0.5 * (d + 1));
    GridField field(d, s.grid);
    cplx zz(0.5 * (d + 1), 0.0);
    auto emit = [&](int i, int j, int k, cplx c) {
        if (d == 2)
            field.coeff(i, j) = c;
        else
            field.coeff(i, j, k) = c;
    };
    if (s.cached) {
        for (std::size_t p = 0; p < s.ci.size(); ++p) {
            cplx aj[3], bj[3];
            for (int j = 0; j <= s.h; ++j) {
                aj[j] = s.ca[j][p];
                bj[j] = s.cb[j][p];
            }
            cplx dmoll = scale * s.cphihat[p] *
                         s.chihat_at(r, s.nvec(s.ci[p], s.cj[p], s.ck[p]), s.cabsn[p]);
            cplx phi = s.phi_coeff(r, s.cphihat[p], s.cabsn[p], s.cgp[p], s.cgm[p], aj,
                                   bj, zz, s.h);
            emit(s.ci[p], s.cj[p], s.ck[p], dmoll - phi);
        }
    } else {
        s.for_each_n([&](int i, int j, int k, double absn) {
            Vec nv = s.nvec(i, j, k);
            cplx aj[3], bj[3];
            for (int jj = 0; jj <= s.h; ++jj) {
                aj[jj] = ft_coeff_a(s.body, jj, nv);
                bj[jj] = ft_coeff_b(s.body, jj, nv);
            }
            double phihat = s.moll.hat(s.delta * absn);
            cplx dmoll = scale * phihat * s.chihat_at(r, nv, absn);
            cplx phi = s.phi_coeff(r, phihat, absn, s.body.support(nv),
                                   s.body.support(Vec(-nv)), aj, bj, zz, s.h);
            emit(i, j, k, dmoll - phi);
        });
    }
    field.synthesize();
    return field;
}

// ---------------------------------------------------------------------------
// exact pointwise evaluation via Poisson summation (d=2)
// ---------------------------------------------------------------------------

namespace {

// Smoothed membership F(y) = (K_{s0} * chi_{r Omega})(y) for the unit-bump
// kernel scaled to support s0. Local frame aligned with the outward gauge
// gradient; the inside region is a q-interval per chord by convexity.
double smoothed_membership(const ConvexBody& body, const Mollifier& moll, double s0,
                           double r, double y0, double y1) {
    double g = body.gauge2(y0, y1);
    double lip = body.gauge_lipschitz();
    if (g + s0 * lip <= r) return 1.0;
    if (g - s0 * lip > r) return 0.0;

    // outward normal direction by central differences of the gauge
    const double hg = 1e-7;
    double n0 = (body.gauge2(y0 + hg, y1) - body.gauge2(y0 - hg, y1)) / (2 * hg);
    double n1 = (body.gauge2(y0, y1 + hg) - body.gauge2(y0, y1 - hg)) / (2 * hg);
    double nn = std::hypot(n0, n1);
    n0 /= nn;
    n1 /= nn;
    // e_q = outward normal, e_p = tangent
    auto gauge_local = [&](double p, double q) {
        // evaluate at y - s0*(p*e_p + q*e_q)
        double v0 = s0 * (p * (-n1) + q * n0);
        double v1 = s0 * (p * n0 + q * n1);
        return body.gauge2(y0 - v0, y1 - v1);
    };

    auto chord = [&](double p) {
        double c = std::sqrt(std::max(0.0, 1.0 - p * p));
        if (c <= 0) return 0.0;
        // inside (gauge <= r) for q >= q0; q = +1 direction lowers the gauge
        double qin = c, qout = -c;
        if (gauge_local(p, qin) > r) return 0.0;  // entire chord outside
        double q0;
        if (gauge_local(p, qout) <= r) {
            q0 = qout;  // entire chord inside
        } else {
            for (int it = 0; it < 60 && (qin - qout) > 1e-13; ++it) {
                double m = 0.5 * (qin + qout);
                if (gauge_local(p, m) <= r)
                    qin = m;
                else
                    qout = m;
            }
            q0 = 0.5 * (qin + qout);
        }
        double acc = 0;
        for (const auto& nq : gauss_legendre(20, q0, c))
            acc += nq.w * moll.profile_unit(std::hypot(p, nq.x));
        return acc;
    };

    return adaptive_gk(chord, -1.0, 1.0, 1e-11, 1e-10, 14);
}

}  // namespace

double mollified_pointwise(const ConvexBody& body, double delta, double r, const Vec& x) {
    if (body.dim() != 2)
        throw validation_error("mollified_pointwise: implemented for d=2");
    if (!(delta > 0.0 && delta <= 1.0) || !(r >= 1.0))
        throw validation_error("mollified_pointwise: need 0 < delta <= 1 and r >= 1");
    Mollifier moll = make_mollifier(body);
    double s0 = moll.eps() * delta;
    double lip = body.gauge_lipschitz();

    double gx = body.support(vec2(1, 0)), gmx = body.support(vec2(-1, 0));
    double gy = body.support(vec2(0, 1)), gmy = body.support(vec2(0, -1));
    auto i0 = static_cast<std::int64_t>(std::floor(-r * gmx - x[0] - 1));
    auto i1 = static_cast<std::int64_t>(std::ceil(r * gx - x[0] + 1));
    auto j0 = static_cast<std::int64_t>(std::floor(-r * gmy - x[1] - 1));
    auto j1 = static_cast<std::int64_t>(std::ceil(r * gy - x[1] + 1));

    double total = 0;
    std::int64_t inside = 0;
    for (std::int64_t i = i0; i <= i1; ++i)
        for (std::int64_t j = j0; j <= j1; ++j) {
            double y0 = i + x[0], y1 = j + x[1];
            double g = body.gauge2(y0, y1);
            if (g + s0 * lip <= r) {
                ++inside;
            } else if (g - s0 * lip <= r) {
                total += smoothed_membership(body, moll, s0, r, y0, y1);
            }
        }
    return total + static_cast<double>(inside) - std::pow(r, 2) * volume(body);
}

SandwichMargins sandwich_margins(const ConvexBody& body, double delta, double r,
                                 const Vec& x) {
    double vol = volume(body);
    int d = body.dim();
    double disc = static_cast<double>(count_lattice(body, r, x)) - std::pow(r, d) * vol;
    double lower = vol * (std::pow(r - delta, d) - std::pow(r, d)) +
                   mollified_pointwise(body, delta, r - delta, x);
    double upper = vol * (std::pow(r + delta, d) - std::pow(r, d)) +
                   mollified_pointwise(body, delta, r + delta, x);
    return {disc - lower, upper - disc};
}

RemainderReport remainder_scan(const ConvexBody& body, double delta, int h,
                               const std::vector<double>& r_list, SeriesOptions opts) {
    const int d = body.dim();
    if (!(h > 0.5 * (d - 3)))
        throw validation_error("remainder_scan: requires h > (d-3)/2");
    SpectralSeries series(body, delta, cplx(0.5 * (d + 1), 0.0), h, opts);
    RemainderReport rep;
    rep.r = r_list;
    rep.sup.resize(r_list.size());
    for (std::size_t i = 0; i < r_list.size(); ++i)
        rep.sup[i] = series.remainder_field(r_list[i]).max_abs();
    LinFit f = fit_loglog(rep.r, rep.sup);
    rep.slope = f.slope;
    rep.c_fit = std::exp(f.intercept);
    return rep;
}

}  // namespace disclab
