#include "disclab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>

namespace disclab {

namespace {

std::atomic<int> g_workers{0};

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix, weights are mu0 * (first eigenvector component)^2.
std::vector<QuadNode> golub_welsch(const std::vector<double>& diag,
                                   const std::vector<double>& subdiag, double mu0) {
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) J(i, i) = diag[i];
    for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = subdiag[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<QuadNode> out(n);
    for (int i = 0; i < n; ++i) {
        double v0 = es.eigenvectors()(0, i);
        out[i] = {es.eigenvalues()(i), mu0 * v0 * v0};
    }
    return out;
}

}  // namespace

int worker_count() {
    int w = g_workers.load();
    if (w > 0) return w;
    if (const char* env = std::getenv("DISCLAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 8u));
}

void set_worker_count(int n) { g_workers.store(n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    int workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<QuadNode> gauss_legendre(int n, double a, double b) {
    if (n < 1) throw validation_error("gauss_legendre: order must be >= 1");
    std::vector<double> diag(n, 0.0), sub(n - 1);
    for (int k = 1; k < n; ++k) {
        double kk = k;
        sub[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    auto nodes = golub_welsch(diag, sub, 2.0);
    for (auto& q : nodes) {
        q.x = 0.5 * (a + b) + 0.5 * (b - a) * q.x;
        q.w *= 0.5 * (b - a);
    }
    return nodes;
}

std::vector<QuadNode> gauss_jacobi_0b(int n, double b) {
    if (n < 1) throw validation_error("gauss_jacobi: order must be >= 1");
    if (b <= -1.0) throw validation_error("gauss_jacobi: weight exponent must be > -1");
    const double a = 0.0;
    std::vector<double> diag(n), sub(std::max(0, n - 1));
    auto ab = a + b;
    diag[0] = (b - a) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        double t = 2.0 * k + ab;
        diag[k] = (b * b - a * a) / (t * (t + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        double bk;
        if (k == 1) {
            bk = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            double t = 2.0 * k + ab;
            bk = 4.0 * k * (k + a) * (k + b) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
        }
        sub[k - 1] = std::sqrt(bk);
    }
    // mu0 = int_{-1}^{1} (1+x)^b dx = 2^{b+1}/(b+1)
    double mu0 = std::pow(2.0, b + 1.0) / (b + 1.0);
    return golub_welsch(diag, sub, mu0);
}

std::vector<QuadNode> tanh_sinh_01(int n) {
    if (n < 3) throw validation_error("tanh_sinh: need at least 3 nodes");
    const double T = 3.45;
    std::vector<QuadNode> out;
    out.reserve(n);
    double dt = 2.0 * T / (n - 1);
    for (int i = 0; i < n; ++i) {
        double t = -T + i * dt;
        double s = 0.5 * pi * std::sinh(t);
        double x = std::tanh(s);                    // in (-1,1)
        double ch = std::cosh(s);
        double w = 0.5 * pi * std::cosh(t) / (ch * ch) * dt;
        out.push_back({0.5 * (1.0 + x), 0.5 * w});  // mapped to (0,1)
    }
    return out;
}

namespace {

// Gauss-Kronrod 15 point rule (7 point Gauss embedded).
const double gk_xk[8] = {0.0,
                         0.207784955007898468,
                         0.405845151377397167,
                         0.586087235467691130,
                         0.741531185599394440,
                         0.864864423359769073,
                         0.949107912342758525,
                         0.991455371120812639};
const double gk_wk[8] = {0.209482141084727828, 0.204432940075298892,
                         0.190350578064785410, 0.169004726639267903,
                         0.140653259715525919, 0.104790010322250184,
                         0.063092092629978553, 0.022935322010529225};
const double gk_wg[4] = {0.417959183673469388, 0.381830050505118945,
                         0.279705391489276668, 0.129484966168869693};

template <class R, class F>
void gk15(const F& f, double a, double b, R& result, double& err) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    R fc = f(c);
    R resk = gk_wk[0] * fc;
    R resg = gk_wg[0] * fc;
    for (int j = 1; j < 8; ++j) {
        R v = f(c - h * gk_xk[j]) + f(c + h * gk_xk[j]);
        resk += gk_wk[j] * v;
        if (j % 2 == 0) resg += gk_wg[j / 2] * v;
    }
    result = resk * h;
    err = std::abs(resk - resg) * h;
}

template <class R, class F>
R adaptive_impl(const F& f, double a, double b, double abs_tol, double rel_tol,
                int max_depth) {
    struct Panel {
        double a, b;
        R val;
        double err;
        int depth;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    Panel p0{a, b, R{}, 0, 0};
    gk15(f, a, b, p0.val, p0.err);
    std::vector<Panel> heap{p0};
    R total = p0.val;
    double err_sum = p0.err;
    std::size_t splits = 0;
    const std::size_t split_cap = 40000;
    while (true) {
        double goal = std::max(abs_tol, rel_tol * std::abs(total));
        if (err_sum <= goal || heap.empty()) break;
        if (splits >= split_cap)
            throw unconverged_error("adaptive quadrature did not converge",
                                    std::abs(total));
        std::pop_heap(heap.begin(), heap.end());
        Panel p = heap.back();
        heap.pop_back();
        if (p.depth >= max_depth) {
            // Below the refinement floor: accept this panel's estimate.
            err_sum -= p.err;
            continue;
        }
        ++splits;
        double m = 0.5 * (p.a + p.b);
        Panel l{p.a, m, R{}, 0, p.depth + 1}, r{m, p.b, R{}, 0, p.depth + 1};
        gk15(f, l.a, l.b, l.val, l.err);
        gk15(f, r.a, r.b, r.val, r.err);
        total += l.val + r.val - p.val;
        err_sum += l.err + r.err - p.err;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end());
    }
    return total;
}

}  // namespace

double adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double abs_tol, double rel_tol, int max_depth) {
    return adaptive_impl<double>(f, a, b, abs_tol, rel_tol, max_depth);
}

cplx adaptive_gk_c(const std::function<cplx(double)>& f, double a, double b,
                   double abs_tol, double rel_tol, int max_depth) {
    return adaptive_impl<cplx>(f, a, b, abs_tol, rel_tol, max_depth);
}

cplx periodic_trapezoid(const std::function<cplx(double)>& f, double abs_tol,
                        int start_n, int max_n) {
    int n = start_n;
    cplx prev = 0;
    double h = 2.0 * pi / n;
    for (int i = 0; i < n; ++i) prev += f(i * h);
    prev *= h;
    while (n < max_n) {
        // refine: add midpoints only
        cplx extra = 0;
        for (int i = 0; i < n; ++i) extra += f((i + 0.5) * h);
        cplx cur = 0.5 * prev + extra * (0.5 * h);
        n *= 2;
        h *= 0.5;
        if (std::abs(cur - prev) < abs_tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    throw unconverged_error("periodic_trapezoid exceeded node budget", std::abs(prev));
}

}  // namespace disclab
