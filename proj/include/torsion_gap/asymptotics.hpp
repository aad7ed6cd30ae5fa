#ifndef TORSION_GAP_ASYMPTOTICS_HPP
#define TORSION_GAP_ASYMPTOTICS_HPP

// Leading-order predictions for u_eps as eps -> 0. All o(1) and O(.)
// remainders are dropped; the harness measures them against the solver.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "torsion_gap/errors.hpp"
#include "torsion_gap/exact_solutions.hpp"
#include "torsion_gap/field.hpp"
#include "torsion_gap/geometry.hpp"
#include "torsion_gap/harmonic_mfs.hpp"
#include "torsion_gap/torsion_core.hpp"

namespace torsion_gap {

struct AsymptoticInputs {
    double u0_x0 = 0.0;
    Vector grad_u0_x0 = Vector::Zero();
    Eigenpairs hess_y0;  // eigenpairs of D^2 u0 at the maximum point y0
    Point x0 = Point::Zero();
    Point y0 = Point::Zero();
    double eps = 0.0;
    double h_x0x0 = 0.0;  // regular part H(x0, x0) of the Green function of Omega
    double diameter = 0.0;

    double abs_log_eps() const { return std::abs(std::log(eps)); }
    bool hole_at_maximum() const { return (x0 - y0).norm() <= 1e-6 * diameter; }

    void validate() const {
        if (!(eps > 0.0)) throw ConfigError("eps must be positive");
        if (std::abs(hess_y0.lambda1 + hess_y0.lambda2 + 1.0) > 1e-8)
            throw ConfigError("lambda1 + lambda2 must equal -1");
        if (hess_y0.lambda1 < hess_y0.lambda2) throw ConfigError("need lambda1 >= lambda2");
        if (std::abs(hess_y0.v1.norm() - 1.0) > 1e-10 || std::abs(hess_y0.v2.norm() - 1.0) > 1e-10 ||
            std::abs(hess_y0.v1.dot(hess_y0.v2)) > 1e-10)
            throw ConfigError("eigenvectors must be orthonormal");
    }
};

/// Inputs gathered from the solved torsion function of Omega. H(x0,x0) comes
/// from the image formula on a disk and from a numerical Green function otherwise.
inline AsymptoticInputs make_inputs(const TorsionSolution& u0, const Point& x0, double eps, const MfsConfig& cfg = {}) {
    if (u0.has_hole()) throw ConfigError("make_inputs needs the torsion function of the unpunctured domain");
    const auto pts = find_critical_points(u0);
    const CriticalPoint& y0 = select_maximum(pts, u0.base().center(), 1e-12);
    AsymptoticInputs in;
    in.u0_x0 = u0.value(x0);
    in.grad_u0_x0 = u0.gradient(x0);
    in.y0 = y0.location;
    in.hess_y0 = y0.eig;
    // the trace is exact up to the Hessian certificate; pin it so validate() holds
    const double shift = 0.5 * (in.hess_y0.lambda1 + in.hess_y0.lambda2 + 1.0);
    in.hess_y0.lambda1 -= shift;
    in.hess_y0.lambda2 -= shift;
    in.x0 = x0;
    in.eps = eps;
    in.diameter = u0.diameter();
    if (const auto* disk = std::get_if<Disk>(&u0.base().shape()))
        in.h_x0x0 = disk_green_regular(disk->radius, x0 - disk->center, x0 - disk->center);
    else
        in.h_x0x0 = green_numeric(u0.base(), x0, cfg).regular(x0);
    in.validate();
    return in;
}

/// Two-term capacity expansion; `green` evaluates G(x, x0) on Omega.
template <class Green>
double predict_capacity(const AsymptoticInputs& in, Green&& green, const Point& x) {
    const double le = std::log(in.eps);
    return -(kTwoPi / le) * (1.0 - kTwoPi * in.h_x0x0 / le) * green(x);
}

template <ScalarField U0>
double predict_u(const AsymptoticInputs& in, const U0& u0, const Point& x) {
    return u0.value(x) + std::log((x - in.x0).norm()) / in.abs_log_eps() * in.u0_x0;
}

namespace detail {

inline void check_validity_annulus(const AsymptoticInputs& in, const Point& x) {
    const double r = (x - in.x0).norm();
    if (r < 10.0 * in.eps || r > 0.2 * in.diameter)
        throw RangeError("prediction needs 10 eps <= |x - x0| <= 0.2 diam; got |x - x0| = " + format_double(r));
}

}  // namespace detail

template <ScalarField U0>
Vector predict_gradient(const AsymptoticInputs& in, const U0& u0, const Point& x) {
    detail::check_validity_annulus(in, x);
    const Vector d = x - in.x0;
    return u0.gradient(x) + in.u0_x0 * d / (in.abs_log_eps() * d.squaredNorm());
}

// The correction is (u0(x0) / (|log eps| r^2)) (I - 2 xhat xhat^T), trace-free.
template <ScalarField U0>
Matrix2 predict_hessian(const AsymptoticInputs& in, const U0& u0, const Point& x) {
    detail::check_validity_annulus(in, x);
    const Vector d = x - in.x0;
    const double r2 = d.squaredNorm();
    const Matrix2 corr = Matrix2::Identity() - 2.0 * d * d.transpose() / r2;
    return u0.hessian(x) + in.u0_x0 / (in.abs_log_eps() * r2) * corr;
}

struct XepsPrediction {
    std::vector<Point> points;
    double radius = 0.0;  // |x_eps - x0|
    bool ring = false;    // lambda1 = lambda2: every direction is a maximizer
};

/// Maximizer location. With the hole at y0 this is the pair
/// x0 +- sqrt(-u0(x0)/lambda1) / sqrt|log eps| v1; otherwise x_eps -> y0.
inline XepsPrediction predict_xeps(const AsymptoticInputs& in) {
    XepsPrediction p;
    if (!in.hole_at_maximum()) {
        p.points = {in.y0};
        p.radius = (in.y0 - in.x0).norm();
        return p;
    }
    const auto& e = in.hess_y0;
    p.radius = std::sqrt(-in.u0_x0 / e.lambda1) / std::sqrt(in.abs_log_eps());
    p.points = {in.x0 + p.radius * e.v1, in.x0 - p.radius * e.v1};
    p.ring = std::abs(e.lambda1 - e.lambda2) < 1e-6;
    return p;
}

inline double predict_limit_lambda_max(double lambda1, double lambda2, bool hole_at_maximum) {
    const double m = std::max(lambda1, lambda2);
    return hole_at_maximum ? std::max(m, -std::abs(lambda2 - lambda1)) : m;
}

inline double predict_limit_lambda_max(const AsymptoticInputs& in) {
    return predict_limit_lambda_max(in.hess_y0.lambda1, in.hess_y0.lambda2, in.hole_at_maximum());
}

/// Eigenbasis form of D^2 u_eps(x_eps) for x0 = y0: diag(lambda1, lambda2 - lambda1)
/// in the frame (v1, v2).
inline Eigenpairs predict_hessian_at_max(const AsymptoticInputs& in) {
    if (!in.hole_at_maximum()) throw DomainError("predict_hessian_at_max needs x0 = y0");
    Eigenpairs p = in.hess_y0;
    p.lambda2 = in.hess_y0.lambda2 - in.hess_y0.lambda1;
    return p;
}

// The same limit obtained by substituting the maximizer into predict_hessian:
// along v1 the correction -lambda1 (I - 2 v1 v1^T) doubles lambda1, so the
// pair is (2 lambda1, lambda2 - lambda1) and its trace is -1.
inline Eigenpairs predict_hessian_at_max_consistent(const AsymptoticInputs& in) {
    if (!in.hole_at_maximum()) throw DomainError("predict_hessian_at_max_consistent needs x0 = y0");
    Eigenpairs p = in.hess_y0;
    p.lambda1 = 2.0 * in.hess_y0.lambda1;
    p.lambda2 = in.hess_y0.lambda2 - in.hess_y0.lambda1;
    if (p.lambda1 < p.lambda2) {
        std::swap(p.lambda1, p.lambda2);
        std::swap(p.v1, p.v2);
    }
    return p;
}

inline double predict_limit_lambda_max_consistent(const AsymptoticInputs& in) {
    if (!in.hole_at_maximum()) return predict_limit_lambda_max(in);
    return predict_hessian_at_max_consistent(in).lambda1;
}

inline SpectralPrediction spectral_prediction(const AsymptoticInputs& in) {
    const auto x = predict_xeps(in);
    return {predict_limit_lambda_max(in), x.points, x.radius};
}

// -c1 exp(-c2 diam/inrad), the upper bound on lambda_max claimed for convex domains.
inline double theorem_a_rhs(double c1, double c2, double diam_over_inrad) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw ConfigError("bound constants c1, c2 must be positive");
    return -c1 * std::exp(-c2 * diam_over_inrad);
}

inline double theorem_a_rhs(double c1, double c2, const Domain& d) {
    return theorem_a_rhs(c1, c2, diameter(d) / inradius(d));
}

inline double theorem_a_rhs(double c1, double c2, const PuncturedDomain& d) {
    return theorem_a_rhs(c1, c2, diameter(d) / inradius(d));
}

}  // namespace torsion_gap

#endif  // TORSION_GAP_ASYMPTOTICS_HPP
