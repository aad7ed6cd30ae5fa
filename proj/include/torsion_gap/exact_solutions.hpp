#ifndef TORSION_GAP_EXACT_SOLUTIONS_HPP
#define TORSION_GAP_EXACT_SOLUTIONS_HPP

// Closed-form oracles. Every formula is centered at the origin; callers
// translate coordinates.

#include <cmath>
#include <cstddef>
#include <string>

#include "torsion_gap/errors.hpp"
#include "torsion_gap/geometry.hpp"
#include "torsion_gap/quadrature.hpp"

namespace torsion_gap {

inline constexpr double kInvTwoPi = 1.0 / kTwoPi;

// ---------------------------------------------------------------------------
// Torsion functions

inline double disk_torsion(double radius, const Point& x) { return (radius * radius - x.squaredNorm()) / 4.0; }
inline Vector disk_torsion_gradient(double /*radius*/, const Point& x) { return -0.5 * x; }
inline Matrix2 disk_torsion_hessian(double /*radius*/, const Point& /*x*/) { return -0.5 * Matrix2::Identity(); }

inline double ellipse_torsion_scale(double a, double b) { return a * a * b * b / (2.0 * (a * a + b * b)); }

inline double ellipse_torsion(double a, double b, const Point& x) {
    return ellipse_torsion_scale(a, b) * (1.0 - x.x() * x.x() / (a * a) - x.y() * x.y() / (b * b));
}
inline Vector ellipse_torsion_gradient(double a, double b, const Point& x) {
    const double k = ellipse_torsion_scale(a, b);
    return Vector(-2.0 * k * x.x() / (a * a), -2.0 * k * x.y() / (b * b));
}
inline Matrix2 ellipse_torsion_hessian(double a, double b, const Point& /*x*/) {
    const double k = ellipse_torsion_scale(a, b);
    Matrix2 h;
    h << -2.0 * k / (a * a), 0.0, 0.0, -2.0 * k / (b * b);
    return h;
}

/// Torsion function of B(0,1) \ B(0,eps): u(r) = (1 - r^2)/4 + A ln r.
struct RadialTorsion {
    double eps;
    double A;
    double B = 0.25;

    explicit RadialTorsion(double hole_radius) : eps(hole_radius), A((hole_radius * hole_radius - 1.0) / (4.0 * std::log(hole_radius))) {
        if (!(eps > 0.0 && eps < 1.0)) throw DomainError("annulus requires 0 < eps < 1");
    }

    void check(double r) const {
        if (!(r >= eps && r <= 1.0)) throw DomainError("radius " + std::to_string(r) + " outside [eps, 1]");
    }

    double value(double r) const {
        check(r);
        return B * (1.0 - r * r) + A * std::log(r);
    }
    double derivative(double r) const {
        check(r);
        return -0.5 * r + A / r;
    }
    double second_derivative(double r) const {
        check(r);
        return -0.5 - A / (r * r);
    }
    // Radius of the ring of maxima.
    double max_radius() const { return std::sqrt(2.0 * A); }
};

inline double annulus_torsion(double eps, double r) { return RadialTorsion(eps).value(r); }
inline double annulus_torsion_derivative(double eps, double r) { return RadialTorsion(eps).derivative(r); }
inline double annulus_torsion_second_derivative(double eps, double r) { return RadialTorsion(eps).second_derivative(r); }

// Field adaptors (value/gradient/hessian at a point).

struct DiskTorsionField {
    double radius = 1.0;
    Point center = Point::Zero();

    double value(const Point& x) const { return disk_torsion(radius, x - center); }
    Vector gradient(const Point& x) const { return disk_torsion_gradient(radius, x - center); }
    Matrix2 hessian(const Point& x) const { return disk_torsion_hessian(radius, x - center); }
};

struct EllipseTorsionField {
    double a = 1.0;
    double b = 1.0;
    Point center = Point::Zero();

    double value(const Point& x) const { return ellipse_torsion(a, b, x - center); }
    Vector gradient(const Point& x) const { return ellipse_torsion_gradient(a, b, x - center); }
    Matrix2 hessian(const Point& x) const { return ellipse_torsion_hessian(a, b, x - center); }
};

struct AnnulusTorsionField {
    RadialTorsion radial;

    explicit AnnulusTorsionField(double eps) : radial(eps) {}

    double value(const Point& x) const { return radial.value(x.norm()); }
    Vector gradient(const Point& x) const {
        const double r = x.norm();
        return radial.derivative(r) / r * x;
    }
    Matrix2 hessian(const Point& x) const {
        const double r = x.norm();
        const Vector e = x / r;
        const double ur = radial.derivative(r);
        const double urr = radial.second_derivative(r);
        return urr * e * e.transpose() + (ur / r) * (Matrix2::Identity() - e * e.transpose());
    }
};

// ---------------------------------------------------------------------------
// Green's function of the disk B(0,R) by the method of images

/// Regular part H with G(x,y) = -(1/2pi) log|x-y| - H(x,y). Finite at x = y.
inline double disk_green_regular(double radius, const Point& x, const Point& y) {
    const double r2 = radius * radius;
    // | |y| x - R^2 y/|y| |^2 / R^2, symmetric in x and y
    const double q = (x.squaredNorm() * y.squaredNorm() - 2.0 * r2 * x.dot(y) + r2 * r2) / r2;
    return -0.5 * kInvTwoPi * std::log(q);
}

inline double disk_green(double radius, const Point& x, const Point& y) {
    const double d = (x - y).norm();
    if (d == 0.0) throw SingularityError("disk_green: x == y");
    return -kInvTwoPi * std::log(d) - disk_green_regular(radius, x, y);
}

// ---------------------------------------------------------------------------
// Green's function of R^2 \ B(0,1)

inline double g0(const Point& w, const Point& s) {
    const double d = (w - s).norm();
    if (d == 0.0) throw SingularityError("g0: w == s");
    const double nw = w.norm();
    return -kInvTwoPi * (std::log(d) - std::log((nw * s - w / nw).norm()));
}

/// Normal derivative of g0 in s along nu_s = -s, for |s| = 1.
inline double g0_normal_derivative(const Point& w, const Point& s) {
    return (1.0 - w.squaredNorm()) / (kTwoPi * (w - s).squaredNorm());
}

// ---------------------------------------------------------------------------
// Capacity function of B(0,1) \ B(0,eps): 0 on the outer circle, 1 on the hole

inline double capacity_concentric(double eps, const Point& x) {
    const double r = x.norm();
    if (!(r >= eps * (1.0 - 1e-14) && r <= 1.0 + 1e-14)) throw DomainError("capacity_concentric: |x| outside [eps, 1]");
    return std::log(r) / std::log(eps);
}

// ---------------------------------------------------------------------------
// Reconstruction on the unit disk from boundary values and the Laplacian:
//   phi(s) = (1/2pi) \int_{|y|=1} (1-|s|^2)/|s-y|^2 phi(y) dsigma
//            - \int_{|y|<1} lap_phi(y) G(s,y) dy
// Boundary term: trapezoid rule. Area term: polar grid centered at s
// (Gauss-Legendre in the radius, trapezoid in the angle), which absorbs the
// logarithmic singularity of G.
template <class Phi, class Lap>
double disk_poisson_reconstruct(Phi&& phi, Lap&& laplacian, const Point& s, std::size_t n_quad) {
    if (!(s.norm() < 1.0)) throw DomainError("disk_poisson_reconstruct requires |s| < 1");
    const double h = kTwoPi / static_cast<double>(n_quad);
    const double s2 = s.squaredNorm();

    double boundary = 0.0;
    for (std::size_t i = 0; i < n_quad; ++i) {
        const Point y(std::cos(i * h), std::sin(i * h));
        boundary += (1.0 - s2) / (s - y).squaredNorm() * phi(y);
    }
    boundary *= h * kInvTwoPi;

    const auto [nodes, weights] = gauss_legendre(n_quad);
    double area = 0.0;
    for (std::size_t i = 0; i < n_quad; ++i) {
        const Vector e(std::cos(i * h), std::sin(i * h));
        const double se = s.dot(e);
        const double rho_max = -se + std::sqrt(se * se + 1.0 - s2);
        double ray = 0.0;
        for (std::size_t k = 0; k < n_quad; ++k) {
            const double rho = 0.5 * rho_max * (nodes[k] + 1.0);
            const Point y = s + rho * e;
            // G(s, y) with the log singularity written explicitly
            const double g = -kInvTwoPi * std::log(rho) - disk_green_regular(1.0, s, y);
            ray += weights[k] * rho * laplacian(y) * g;
        }
        area += 0.5 * rho_max * ray;
    }
    area *= h;
    return boundary - area;
}

}  // namespace torsion_gap

#endif  // TORSION_GAP_EXACT_SOLUTIONS_HPP
