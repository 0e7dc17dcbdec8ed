#include "disclab/bodies.hpp"

#include <boost/math/special_functions/spherical_harmonic.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace disclab {

namespace {

constexpr int kGridTheta2d = 2048;   // construction/validation grid, d=2
constexpr int kGridTheta3d = 64;     // polar rows, d=3
constexpr int kGridPhi3d = 128;      // azimuthal columns, d=3
constexpr int kNewtonCap = 30;
constexpr double kNewtonTol = 1e-12;

double clamp1(double t) { return std::max(-1.0, std::min(1.0, t)); }

}  // namespace

struct BodyImpl {
    ConvexBody::Kind kind;
    int dim;

    // ball
    double radius = 0;

    // ellipsoid
    Mat m, mt, minv;
    double det_abs = 0;

    // perturbed ball
    double rho0 = 0;
    std::vector<PerturbMode> modes;
    std::vector<Vec> grid_dir;     // cached unit directions
    std::vector<double> grid_rho;  // boundary radius at grid_dir

    double bound_a = 0, bound_b = 0;  // A|x| <= g(x) <= B|x|
    double lipschitz = 0;             // upper bound for max gauge on sphere

    // ---- perturbed-ball radial parametrization ----

    // d=2 profile and its first two angle derivatives
    void rho2(double theta, double& r, double& dr, double& ddr) const {
        r = 1.0;
        dr = 0.0;
        ddr = 0.0;
        for (const auto& md : modes) {
            double k = md.freq[0];
            double c = std::cos(k * theta), s = std::sin(k * theta);
            r += md.amp * c;
            dr -= md.amp * k * s;
            ddr -= md.amp * k * k * c;
        }
        r *= rho0;
        dr *= rho0;
        ddr *= rho0;
    }

    double rho_of_theta(double theta) const {
        double r, dr, ddr;
        rho2(theta, r, dr, ddr);
        return r;
    }

    double rho_dir(const Vec& u) const {
        if (dim == 2) return rho_of_theta(std::atan2(u[1], u[0]));
        double theta = std::acos(clamp1(u[2]));
        double phi = std::atan2(u[1], u[0]);
        double q = 0;
        for (const auto& md : modes) {
            int l = md.freq[0], m = md.freq[1];
            double y = (m >= 0) ? boost::math::spherical_harmonic_r(l, m, theta, phi)
                                : boost::math::spherical_harmonic_i(l, -m, theta, phi);
            q += md.amp * y;
        }
        return rho0 * (1.0 + q);
    }

    // f(u) = rho(u) (x.u), the objective of the support maximization
    double obj(const Vec& x, const Vec& u) const { return rho_dir(u) * x.dot(u); }

    // ---- support maximization ----

    struct SupportResult {
        double value;
        Vec maximizer;  // unit direction u*, boundary point is rho(u*) u*
    };

    SupportResult support_newton2(const Vec& x, double theta) const {
        for (int it = 0; it < kNewtonCap; ++it) {
            double r, dr, ddr;
            rho2(theta, r, dr, ddr);
            double c = x[0] * std::cos(theta) + x[1] * std::sin(theta);
            double dc = -x[0] * std::sin(theta) + x[1] * std::cos(theta);
            double f1 = dr * c + r * dc;
            double f2 = ddr * c + 2.0 * dr * dc - r * c;  // c'' = -c
            if (f2 >= -1e-14 * (std::abs(r * c) + 1)) break;
            double step = f1 / f2;
            if (std::abs(step) > 2.0 * pi / kGridTheta2d) step = std::copysign(2.0 * pi / kGridTheta2d, step);
            theta -= step;
            if (std::abs(step) < kNewtonTol) break;
        }
        Vec u = vec2(std::cos(theta), std::sin(theta));
        return {obj(x, u), u};
    }

    // 2-D tangent-plane Newton with finite-difference derivatives (d=3)
    SupportResult support_newton3(const Vec& x, Vec u) const {
        const double h = 1e-6;
        for (int it = 0; it < kNewtonCap; ++it) {
            // local orthonormal tangent basis at u
            Vec t1 = (std::abs(u[0]) < 0.9) ? vec3(1, 0, 0) : vec3(0, 1, 0);
            t1 = (t1 - u * u.dot(t1)).normalized();
            Vec t2(3);
            t2 << u[1] * t1[2] - u[2] * t1[1], u[2] * t1[0] - u[0] * t1[2],
                u[0] * t1[1] - u[1] * t1[0];
            auto feval = [&](double s, double t) {
                Vec v = (u + s * t1 + t * t2).normalized();
                return obj(x, v);
            };
            double f0 = feval(0, 0);
            double fp = feval(h, 0), fm = feval(-h, 0);
            double gp = feval(0, h), gm = feval(0, -h);
            double fpp = feval(h, h), fmm = feval(-h, -h), fpm = feval(h, -h),
                   fmp = feval(-h, h);
            double g1 = (fp - fm) / (2 * h), g2 = (gp - gm) / (2 * h);
            double h11 = (fp - 2 * f0 + fm) / (h * h);
            double h22 = (gp - 2 * f0 + gm) / (h * h);
            double h12 = (fpp + fmm - fpm - fmp) / (4 * h * h);
            double det = h11 * h22 - h12 * h12;
            if (det <= 0 || h11 >= 0) break;  // not a definite maximum: stay with grid point
            double s = -(h22 * g1 - h12 * g2) / det;
            double t = -(-h12 * g1 + h11 * g2) / det;
            double len = std::hypot(s, t);
            const double cap = 2.0 * pi / kGridTheta3d;
            if (len > cap) {
                s *= cap / len;
                t *= cap / len;
            }
            u = (u + s * t1 + t * t2).normalized();
            if (len < 1e-10) break;
        }
        return {obj(x, u), u};
    }

    SupportResult support_max(const Vec& x, const Vec* hint = nullptr) const {
        if (hint) {
            if (dim == 2) return support_newton2(x, std::atan2((*hint)[1], (*hint)[0]));
            return support_newton3(x, *hint);
        }
        // scan the cached grid, keep the 8 best starts
        const int keep = 8;
        int best_idx[keep];
        double best_val[keep];
        for (int i = 0; i < keep; ++i) {
            best_idx[i] = -1;
            best_val[i] = -std::numeric_limits<double>::infinity();
        }
        for (std::size_t i = 0; i < grid_dir.size(); ++i) {
            double v = grid_rho[i] * x.dot(grid_dir[i]);
            int slot = -1;
            for (int j = 0; j < keep; ++j)
                if (v > best_val[j]) { slot = j; break; }
            if (slot >= 0) {
                for (int j = keep - 1; j > slot; --j) {
                    best_val[j] = best_val[j - 1];
                    best_idx[j] = best_idx[j - 1];
                }
                best_val[slot] = v;
                best_idx[slot] = static_cast<int>(i);
            }
        }
        SupportResult best{-std::numeric_limits<double>::infinity(), grid_dir[0]};
        for (int j = 0; j < keep; ++j) {
            if (best_idx[j] < 0) continue;
            SupportResult r =
                (dim == 2)
                    ? support_newton2(x, std::atan2(grid_dir[best_idx[j]][1],
                                                    grid_dir[best_idx[j]][0]))
                    : support_newton3(x, grid_dir[best_idx[j]]);
            if (r.value > best.value) best = r;
        }
        return best;
    }
};

namespace {

using Impl = BodyImpl;

double gauge_impl(const Impl& b, const Vec& x) {
    double n = x.norm();
    if (n == 0.0) return 0.0;
    switch (b.kind) {
        case ConvexBody::Kind::ball:
            return n / b.radius;
        case ConvexBody::Kind::ellipsoid:
            return (b.minv * x).norm();
        case ConvexBody::Kind::perturbed_ball:
            return n / b.rho_dir(x / n);
    }
    return 0.0;
}

double support_impl(const Impl& b, const Vec& x) {
    switch (b.kind) {
        case ConvexBody::Kind::ball:
            return b.radius * x.norm();
        case ConvexBody::Kind::ellipsoid:
            return (b.mt * x).norm();
        case ConvexBody::Kind::perturbed_ball:
            return b.support_max(x).value;
    }
    return 0.0;
}

Vec z_point_impl(const Impl& b, const Vec& x) {
    switch (b.kind) {
        case ConvexBody::Kind::ball:
            return Vec(b.radius * x.normalized());
        case ConvexBody::Kind::ellipsoid: {
            Vec mtx = b.mt * x;
            return Vec(b.m * mtx / mtx.norm());
        }
        case ConvexBody::Kind::perturbed_ball: {
            auto r = b.support_max(x);
            return Vec(b.rho_dir(r.maximizer) * r.maximizer);
        }
    }
    return x;
}

Vec z_point_hinted(const Impl& b, const Vec& x, const Vec& hint) {
    if (b.kind != ConvexBody::Kind::perturbed_ball) return z_point_impl(b, x);
    auto r = b.support_max(x, &hint);
    return Vec(b.rho_dir(r.maximizer) * r.maximizer);
}

double curvature_impl(const Impl& b, const Vec& u_in) {
    Vec u = u_in.normalized();
    const int d = b.dim;
    switch (b.kind) {
        case ConvexBody::Kind::ball:
            return std::pow(b.radius, 1 - d);
        case ConvexBody::Kind::ellipsoid: {
            // K(u) = |det M|^{-2} (|M^T u|)^{d+1} for |u| = 1
            return std::pow((b.mt * u).norm(), d + 1) / (b.det_abs * b.det_abs);
        }
        case ConvexBody::Kind::perturbed_ball: {
            // Hessian of g restricted to u-perp: its eigenvalues are the
            // principal curvature radii. grad g = z, so columns of the
            // Hessian come from central differences of z.
            const double h = 1e-5;
            Vec z0 = z_point_impl(b, u);
            Mat hess(d, d);
            for (int i = 0; i < d; ++i) {
                Vec up = u, um = u;
                up[i] += h;
                um[i] -= h;
                Vec zp = z_point_hinted(b, up, z0.normalized());
                Vec zm = z_point_hinted(b, um, z0.normalized());
                hess.col(i) = (zp - zm) / (2 * h);
            }
            Mat hs = 0.5 * (hess + hess.transpose());
            if (d == 2) {
                Vec t = vec2(-u[1], u[0]);
                double radius = t.dot(hs * t);
                return 1.0 / radius;
            }
            Vec t1 = (std::abs(u[0]) < 0.9) ? vec3(1, 0, 0) : vec3(0, 1, 0);
            t1 = (t1 - u * u.dot(t1)).normalized();
            Vec t2(3);
            t2 << u[1] * t1[2] - u[2] * t1[1], u[2] * t1[0] - u[0] * t1[2],
                u[0] * t1[1] - u[1] * t1[0];
            Eigen::Matrix2d s;
            s << t1.dot(hs * t1), t1.dot(hs * t2), t2.dot(hs * t1), t2.dot(hs * t2);
            double det = s.determinant();
            return 1.0 / det;
        }
    }
    return 0.0;
}

// Gaussian curvature of the level set {gauge = const} through p, from
// finite differences of the gauge (Goldman's implicit-surface formulas).
// Used only as the construction-time positivity check for d=3.
double levelset_curvature3(const Impl& b, const Vec& p) {
    const double h = 1e-5;
    auto G = [&](const Vec& y) { return gauge_impl(b, y); };
    Vec g(3);
    Eigen::Matrix3d H;
    double g0 = G(p);
    for (int i = 0; i < 3; ++i) {
        Vec ep = p, em = p;
        ep[i] += h;
        em[i] -= h;
        double gp = G(ep), gm = G(em);
        g[i] = (gp - gm) / (2 * h);
        H(i, i) = (gp - 2 * g0 + gm) / (h * h);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            Vec pp = p, pm = p, mp = p, mm = p;
            pp[i] += h; pp[j] += h;
            pm[i] += h; pm[j] -= h;
            mp[i] -= h; mp[j] += h;
            mm[i] -= h; mm[j] -= h;
            H(i, j) = H(j, i) = (G(pp) + G(mm) - G(pm) - G(mp)) / (4 * h * h);
        }
    Eigen::Matrix3d adj;
    adj << H(1, 1) * H(2, 2) - H(1, 2) * H(2, 1), H(0, 2) * H(2, 1) - H(0, 1) * H(2, 2),
        H(0, 1) * H(1, 2) - H(0, 2) * H(1, 1), H(1, 2) * H(2, 0) - H(1, 0) * H(2, 2),
        H(0, 0) * H(2, 2) - H(0, 2) * H(2, 0), H(0, 2) * H(1, 0) - H(0, 0) * H(1, 2),
        H(1, 0) * H(2, 1) - H(1, 1) * H(2, 0), H(0, 1) * H(2, 0) - H(0, 0) * H(2, 1),
        H(0, 0) * H(1, 1) - H(0, 1) * H(1, 0);
    Eigen::Vector3d gv(g[0], g[1], g[2]);
    double gn = gv.norm();
    return gv.dot(adj * gv) / (gn * gn * gn * gn);
}

void finish_perturbed(Impl& b) {
    if (b.rho0 <= 0) throw validation_error("perturbed_ball: rho0 must be positive");
    for (const auto& md : b.modes) {
        if (b.dim == 2 && md.freq.size() != 1)
            throw validation_error("perturbed_ball: d=2 modes take one frequency");
        if (b.dim == 3) {
            if (md.freq.size() != 2)
                throw validation_error("perturbed_ball: d=3 modes take (l, m)");
            if (md.freq[0] < 0 || std::abs(md.freq[1]) > md.freq[0])
                throw validation_error("perturbed_ball: need l >= 0 and |m| <= l");
        }
    }

    // validation grid with cached radii
    if (b.dim == 2) {
        b.grid_dir.reserve(kGridTheta2d);
        b.grid_rho.reserve(kGridTheta2d);
        for (int i = 0; i < kGridTheta2d; ++i) {
            double th = 2.0 * pi * i / kGridTheta2d;
            double r, dr, ddr;
            b.rho2(th, r, dr, ddr);
            if (r <= 1e-9) throw validation_error("perturbed_ball: origin not interior");
            double kappa = (r * r + 2 * dr * dr - r * ddr) /
                           std::pow(r * r + dr * dr, 1.5);
            if (kappa <= 1e-9)
                throw validation_error("perturbed_ball: curvature not strictly positive");
            b.grid_dir.push_back(vec2(std::cos(th), std::sin(th)));
            b.grid_rho.push_back(r);
        }
    } else {
        b.grid_dir.reserve(kGridTheta3d * kGridPhi3d);
        b.grid_rho.reserve(kGridTheta3d * kGridPhi3d);
        for (int i = 0; i < kGridTheta3d; ++i) {
            double th = pi * (i + 0.5) / kGridTheta3d;
            for (int j = 0; j < kGridPhi3d; ++j) {
                double ph = 2.0 * pi * j / kGridPhi3d;
                Vec u = vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                             std::cos(th));
                double r = b.rho_dir(u);
                if (r <= 1e-9) throw validation_error("perturbed_ball: origin not interior");
                b.grid_dir.push_back(u);
                b.grid_rho.push_back(r);
            }
        }
        for (std::size_t i = 0; i < b.grid_dir.size(); ++i) {
            Vec p = b.grid_rho[i] * b.grid_dir[i];
            if (levelset_curvature3(b, p) <= 1e-9)
                throw validation_error("perturbed_ball: curvature not strictly positive");
        }
    }

    // support bounds over a direction grid (B is attained at a radial max,
    // A needs the full support evaluation)
    double rho_min = *std::min_element(b.grid_rho.begin(), b.grid_rho.end());
    b.lipschitz = 1.0 / (rho_min * 0.95);
    int stride = (b.dim == 2) ? 2 : 4;
    double a = std::numeric_limits<double>::infinity(), bb = 0;
    for (std::size_t i = 0; i < b.grid_dir.size(); i += stride) {
        double g = 0;
        const Vec& x = b.grid_dir[i];
        for (std::size_t j = 0; j < b.grid_dir.size(); ++j)
            g = std::max(g, b.grid_rho[j] * x.dot(b.grid_dir[j]));
        a = std::min(a, g);
        bb = std::max(bb, g);
    }
    b.bound_a = a;
    b.bound_b = std::max(bb, *std::max_element(b.grid_rho.begin(), b.grid_rho.end()));
}

}  // namespace

ConvexBody ConvexBody::ball(int dim, double radius) {
    if (dim < 2 || dim > 3) throw validation_error("ball: dimension must be 2 or 3");
    if (!(radius > 0)) throw validation_error("ball: radius must be positive");
    auto impl = std::make_shared<BodyImpl>();
    impl->kind = Kind::ball;
    impl->dim = dim;
    impl->radius = radius;
    impl->det_abs = std::pow(radius, dim);
    impl->bound_a = impl->bound_b = radius;
    impl->lipschitz = 1.0 / radius;
    return ConvexBody(impl);
}

ConvexBody ConvexBody::ellipsoid(const Mat& m) {
    int d = static_cast<int>(m.rows());
    if (d < 2 || d > 3 || m.cols() != d)
        throw validation_error("ellipsoid: matrix must be 2x2 or 3x3");
    auto impl = std::make_shared<BodyImpl>();
    impl->kind = Kind::ellipsoid;
    impl->dim = d;
    impl->m = m;
    impl->mt = m.transpose();
    double det = m.determinant();
    if (std::abs(det) < 1e-12) throw validation_error("ellipsoid: matrix is singular");
    impl->det_abs = std::abs(det);
    impl->minv = m.inverse();
    Eigen::MatrixXd md = m;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(md);
    impl->bound_a = svd.singularValues().minCoeff();
    impl->bound_b = svd.singularValues().maxCoeff();
    impl->lipschitz = 1.0 / impl->bound_a;
    return ConvexBody(impl);
}

ConvexBody ConvexBody::perturbed_ball(int dim, double rho0, std::vector<PerturbMode> modes) {
    if (dim < 2 || dim > 3) throw validation_error("perturbed_ball: dimension must be 2 or 3");
    auto impl = std::make_shared<BodyImpl>();
    impl->kind = Kind::perturbed_ball;
    impl->dim = dim;
    impl->rho0 = rho0;
    impl->modes = std::move(modes);
    impl->det_abs = 1.0;
    finish_perturbed(*impl);
    return ConvexBody(impl);
}

int ConvexBody::dim() const { return impl_->dim; }
ConvexBody::Kind ConvexBody::kind() const { return impl_->kind; }

double ConvexBody::support(const Vec& x) const {
    if (x.norm() == 0.0) throw std::domain_error("support: zero vector");
    return support_impl(*impl_, x);
}

BoundaryPoint ConvexBody::support_gradient(const Vec& x) const {
    if (x.norm() == 0.0) throw std::domain_error("support_gradient: zero vector");
    BoundaryPoint bp;
    bp.point = z_point_impl(*impl_, x);
    bp.normal = x.normalized();
    bp.curvature = curvature_impl(*impl_, bp.normal);
    return bp;
}

double ConvexBody::gauge(const Vec& x) const { return gauge_impl(*impl_, x); }

double ConvexBody::gauge2(double x0, double x1) const {
    const Impl& b = *impl_;
    switch (b.kind) {
        case Kind::ball:
            return std::hypot(x0, x1) / b.radius;
        case Kind::ellipsoid: {
            double y0 = b.minv(0, 0) * x0 + b.minv(0, 1) * x1;
            double y1 = b.minv(1, 0) * x0 + b.minv(1, 1) * x1;
            return std::hypot(y0, y1);
        }
        case Kind::perturbed_ball: {
            double n = std::hypot(x0, x1);
            if (n == 0) return 0;
            return n / b.rho_of_theta(std::atan2(x1, x0));
        }
    }
    return 0;
}

double ConvexBody::gauge3(double x0, double x1, double x2) const {
    const Impl& b = *impl_;
    switch (b.kind) {
        case Kind::ball:
            return std::sqrt(x0 * x0 + x1 * x1 + x2 * x2) / b.radius;
        case Kind::ellipsoid: {
            double y0 = b.minv(0, 0) * x0 + b.minv(0, 1) * x1 + b.minv(0, 2) * x2;
            double y1 = b.minv(1, 0) * x0 + b.minv(1, 1) * x1 + b.minv(1, 2) * x2;
            double y2 = b.minv(2, 0) * x0 + b.minv(2, 1) * x1 + b.minv(2, 2) * x2;
            return std::sqrt(y0 * y0 + y1 * y1 + y2 * y2);
        }
        case Kind::perturbed_ball: {
            double n = std::sqrt(x0 * x0 + x1 * x1 + x2 * x2);
            if (n == 0) return 0;
            return n / b.rho_dir(vec3(x0 / n, x1 / n, x2 / n));
        }
    }
    return 0;
}

std::pair<double, double> ConvexBody::support_bounds() const {
    return {impl_->bound_a, impl_->bound_b};
}

double ConvexBody::curvature_at_normal(const Vec& u) const {
    if (u.norm() == 0.0) throw std::domain_error("curvature_at_normal: zero vector");
    return curvature_impl(*impl_, u);
}

double ConvexBody::radial(const Vec& u) const {
    switch (impl_->kind) {
        case Kind::ball:
            return impl_->radius;
        case Kind::ellipsoid:
            return 1.0 / (impl_->minv * u).norm();
        case Kind::perturbed_ball:
            return impl_->rho_dir(u);
    }
    return 0;
}

double ConvexBody::gauge_lipschitz() const { return impl_->lipschitz; }

double ConvexBody::ball_radius() const {
    if (impl_->kind != Kind::ball) throw validation_error("not a ball");
    return impl_->radius;
}

const Mat& ConvexBody::matrix() const {
    if (impl_->kind != Kind::ellipsoid) throw validation_error("not an ellipsoid");
    return impl_->m;
}

const Mat& ConvexBody::matrix_inv() const {
    if (impl_->kind != Kind::ellipsoid) throw validation_error("not an ellipsoid");
    return impl_->minv;
}

double ConvexBody::det_abs() const { return impl_->det_abs; }

double ConvexBody::rho_base() const {
    if (impl_->kind != Kind::perturbed_ball) throw validation_error("not a perturbed ball");
    return impl_->rho0;
}

const std::vector<PerturbMode>& ConvexBody::modes() const {
    if (impl_->kind != Kind::perturbed_ball) throw validation_error("not a perturbed ball");
    return impl_->modes;
}

}  // namespace disclab
