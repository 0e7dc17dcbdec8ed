#ifndef DISCLAB_BODIES_HPP
#define DISCLAB_BODIES_HPP

#include "disclab/core.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace disclab {

// One term of the trigonometric perturbation on the unit sphere.
// d=2: freq = {k}   and the term is amp * cos(k * theta).
// d=3: freq = {l,m} and the term is amp * (real spherical harmonic Y_lm).
struct PerturbMode {
    std::vector<int> freq;
    double amp = 0;
};

struct BoundaryPoint {
    Vec point;       // z(x) on the boundary
    Vec normal;      // outer unit normal x/|x|
    double curvature = 0;
};

struct BodyImpl;

// Smooth strictly convex body containing the origin. Immutable after
// construction; construction validates origin-interior and positive
// curvature (on a sphere grid for perturbed balls) and throws
// validation_error on violation.
class ConvexBody {
  public:
    enum class Kind { ball, ellipsoid, perturbed_ball };

    static ConvexBody ball(int dim, double radius);
    static ConvexBody ellipsoid(const Mat& m);
    static ConvexBody perturbed_ball(int dim, double rho0, std::vector<PerturbMode> modes);

    int dim() const;
    Kind kind() const;

    // Support function g(x) = sup_{y in Omega} x.y; homogeneous of degree 1.
    double support(const Vec& x) const;

    // The unique boundary point z(x) with outer normal x/|x|, together with
    // the Gaussian curvature there. z is homogeneous of degree 0.
    BoundaryPoint support_gradient(const Vec& x) const;

    // Minkowski functional |x|_Omega = inf{t>0 : x/t in Omega}; gauge(0)=0.
    double gauge(const Vec& x) const;
    double gauge2(double x0, double x1) const;
    double gauge3(double x0, double x1, double x2) const;

    // (A, B) with A|x| <= g(x) <= B|x|; extremes of g over the unit sphere.
    std::pair<double, double> support_bounds() const;

    // Gaussian curvature at the boundary point with outer normal u (|u|=1).
    double curvature_at_normal(const Vec& u) const;

    // Boundary radius in direction u (|u|=1): the t with gauge(t*u)=1.
    double radial(const Vec& u) const;

    // Upper bound for the Euclidean Lipschitz constant of the gauge.
    double gauge_lipschitz() const;

    // Closed-form accessors (throw if the kind does not match).
    double ball_radius() const;
    const Mat& matrix() const;      // ellipsoid M with Omega = M * (unit ball)
    const Mat& matrix_inv() const;
    double det_abs() const;         // |det M|, 1 for perturbed, R^d for balls
    double rho_base() const;
    const std::vector<PerturbMode>& modes() const;

  private:
    explicit ConvexBody(std::shared_ptr<const BodyImpl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const BodyImpl> impl_;
};

}  // namespace disclab

#endif
