#ifndef TORSION_GAP_GEOMETRY_HPP
#define TORSION_GAP_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "torsion_gap/errors.hpp"

namespace torsion_gap {

using Point = Eigen::Vector2d;
using Vector = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Disk {
    Point center{0.0, 0.0};
    double radius = 1.0;
};

// Axis-aligned ellipse with semi-axes a >= b > 0.
struct Ellipse {
    Point center{0.0, 0.0};
    double a = 1.0;
    double b = 1.0;
};

// Star-shaped domain with radius function
//   rho(t) = c0 + sum_k ( ck cos kt + sk sin kt ).
// cos_coeffs[0] is c0; sin_coeffs[0] is ignored.
struct Star {
    Point center{0.0, 0.0};
    std::vector<double> cos_coeffs{1.0};
    std::vector<double> sin_coeffs{0.0};

    double rho(double t) const {
        double r = cos_coeffs.empty() ? 0.0 : cos_coeffs[0];
        for (std::size_t k = 1; k < cos_coeffs.size(); ++k) r += cos_coeffs[k] * std::cos(k * t);
        for (std::size_t k = 1; k < sin_coeffs.size(); ++k) r += sin_coeffs[k] * std::sin(k * t);
        return r;
    }
    double rho_prime(double t) const {
        double r = 0.0;
        for (std::size_t k = 1; k < cos_coeffs.size(); ++k) r -= k * cos_coeffs[k] * std::sin(k * t);
        for (std::size_t k = 1; k < sin_coeffs.size(); ++k) r += k * sin_coeffs[k] * std::cos(k * t);
        return r;
    }
    double rho_second(double t) const {
        double r = 0.0;
        for (std::size_t k = 1; k < cos_coeffs.size(); ++k) r -= double(k * k) * cos_coeffs[k] * std::cos(k * t);
        for (std::size_t k = 1; k < sin_coeffs.size(); ++k) r -= double(k * k) * sin_coeffs[k] * std::sin(k * t);
        return r;
    }
};

namespace detail {

// Golden-section minimization of a unimodal function on [lo, hi].
template <class F>
double golden_minimize(F&& f, double lo, double hi, double tol = 1e-13) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > tol) {
        if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - inv_phi * (hi - lo); fc = f(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + inv_phi * (hi - lo); fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// A bounded smooth planar domain: disk, ellipse or trig-polynomial star.
///
/// The boundary is parametrized counter-clockwise by t in [0, 2pi). Values are
/// immutable after construction.
class Domain {
public:
    using Shape = std::variant<Disk, Ellipse, Star>;

    static Domain disk(double radius, Point center = Point::Zero()) {
        if (!(radius > 0.0)) throw ConfigError("disk requires R > 0");
        return Domain(Disk{center, radius});
    }

    static Domain ellipse(double a, double b, Point center = Point::Zero()) {
        if (!(b > 0.0) || !(a >= b)) throw ConfigError("ellipse requires a >= b > 0");
        return Domain(Ellipse{center, a, b});
    }

    static Domain star(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs = {},
                       Point center = Point::Zero()) {
        if (cos_coeffs.empty()) throw ConfigError("star requires c0");
        if (sin_coeffs.empty()) sin_coeffs.push_back(0.0);
        Star s{center, std::move(cos_coeffs), std::move(sin_coeffs)};
        constexpr int kCheck = 4096;
        for (int i = 0; i < kCheck; ++i) {
            if (!(s.rho(kTwoPi * i / kCheck) > 0.0))
                throw ConfigError("star radius function must be positive");
        }
        return Domain(std::move(s));
    }

    const Shape& shape() const noexcept { return shape_; }

    Point center() const {
        return std::visit([](const auto& s) { return s.center; }, shape_);
    }

    Point boundary_point(double t) const {
        return std::visit(
            [t](const auto& s) -> Point {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Disk>) {
                    return s.center + s.radius * Point(std::cos(t), std::sin(t));
                } else if constexpr (std::is_same_v<S, Ellipse>) {
                    return s.center + Point(s.a * std::cos(t), s.b * std::sin(t));
                } else {
                    return s.center + s.rho(t) * Point(std::cos(t), std::sin(t));
                }
            },
            shape_);
    }

    // d/dt of boundary_point.
    Vector boundary_tangent(double t) const {
        return std::visit(
            [t](const auto& s) -> Vector {
                using S = std::decay_t<decltype(s)>;
                const double c = std::cos(t), sn = std::sin(t);
                if constexpr (std::is_same_v<S, Disk>) {
                    return s.radius * Vector(-sn, c);
                } else if constexpr (std::is_same_v<S, Ellipse>) {
                    return Vector(-s.a * sn, s.b * c);
                } else {
                    return s.rho_prime(t) * Vector(c, sn) + s.rho(t) * Vector(-sn, c);
                }
            },
            shape_);
    }

    Vector boundary_second_derivative(double t) const {
        return std::visit(
            [t](const auto& s) -> Vector {
                using S = std::decay_t<decltype(s)>;
                const double c = std::cos(t), sn = std::sin(t);
                if constexpr (std::is_same_v<S, Disk>) {
                    return -s.radius * Vector(c, sn);
                } else if constexpr (std::is_same_v<S, Ellipse>) {
                    return Vector(-s.a * c, -s.b * sn);
                } else {
                    return (s.rho_second(t) - s.rho(t)) * Vector(c, sn) +
                           2.0 * s.rho_prime(t) * Vector(-sn, c);
                }
            },
            shape_);
    }

    Vector outward_normal(double t) const {
        const Vector d = boundary_tangent(t);
        return Vector(d.y(), -d.x()).normalized();
    }

    double speed(double t) const { return boundary_tangent(t).norm(); }

    // Signed curvature of the counter-clockwise boundary.
    double curvature(double t) const {
        const Vector d1 = boundary_tangent(t);
        const Vector d2 = boundary_second_derivative(t);
        return (d1.x() * d2.y() - d1.y() * d2.x()) / std::pow(d1.norm(), 3);
    }

    bool is_convex(int grid = 4096) const {
        for (int i = 0; i < grid; ++i) {
            if (curvature(kTwoPi * i / grid) < -1e-12) return false;
        }
        return true;
    }

    // Open-set membership.
    bool contains(const Point& x) const {
        return std::visit(
            [&x](const auto& s) -> bool {
                using S = std::decay_t<decltype(s)>;
                const Vector d = x - s.center;
                if constexpr (std::is_same_v<S, Disk>) {
                    return d.norm() < s.radius;
                } else if constexpr (std::is_same_v<S, Ellipse>) {
                    const double q = (d.x() / s.a) * (d.x() / s.a) + (d.y() / s.b) * (d.y() / s.b);
                    return q < 1.0;
                } else {
                    const double r = d.norm();
                    if (r == 0.0) return true;
                    return r < s.rho(std::atan2(d.y(), d.x()));
                }
            },
            shape_);
    }

    // Largest distance from the center to the boundary; bounds the domain.
    double outer_radius() const {
        return std::visit(
            [](const auto& s) -> double {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Disk>) {
                    return s.radius;
                } else if constexpr (std::is_same_v<S, Ellipse>) {
                    return s.a;
                } else {
                    double r = 0.0;
                    for (int i = 0; i < 4096; ++i) r = std::max(r, s.rho(kTwoPi * i / 4096));
                    return r;
                }
            },
            shape_);
    }

    // Distance from x to the boundary curve.
    double distance_to_boundary(const Point& x) const {
        if (const auto* d = std::get_if<Disk>(&shape_)) {
            return std::abs(d->radius - (x - d->center).norm());
        }
        constexpr int kSamples = 720;
        int best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kSamples; ++i) {
            const double d2 = (boundary_point(kTwoPi * i / kSamples) - x).squaredNorm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best = i;
            }
        }
        const double h = kTwoPi / kSamples;
        const double t = detail::golden_minimize(
            [&](double s) { return (boundary_point(s) - x).squaredNorm(); },
            (best - 1) * h, (best + 1) * h);
        return std::sqrt(std::min(best_d2, (boundary_point(t) - x).squaredNorm()));
    }

    bool is_disk() const { return std::holds_alternative<Disk>(shape_); }

private:
    explicit Domain(Shape s) : shape_(std::move(s)) {}
    Shape shape_;
};

/// Omega minus the closed disk B(hole_center, hole_radius).
class PuncturedDomain {
public:
    PuncturedDomain(Domain base, Point hole_center, double hole_radius)
        : base_(std::move(base)), hole_center_(std::move(hole_center)), hole_radius_(hole_radius) {
        if (!(hole_radius_ > 0.0)) throw ConfigError("hole radius must be positive");
        if (!base_.contains(hole_center_) || !(base_.distance_to_boundary(hole_center_) > hole_radius_))
            throw ConfigError("closed hole disk must lie strictly inside the base domain");
    }

    const Domain& base() const noexcept { return base_; }
    const Point& hole_center() const noexcept { return hole_center_; }
    double hole_radius() const noexcept { return hole_radius_; }

    bool contains(const Point& x) const {
        return base_.contains(x) && (x - hole_center_).norm() > hole_radius_;
    }

private:
    Domain base_;
    Point hole_center_;
    double hole_radius_;
};

inline bool contains(const Domain& d, const Point& x) { return d.contains(x); }
inline bool contains(const PuncturedDomain& d, const Point& x) { return d.contains(x); }

inline double diameter(const Domain& d) {
    return std::visit(
        [&d](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Disk>) {
                return 2.0 * s.radius;
            } else if constexpr (std::is_same_v<S, Ellipse>) {
                return 2.0 * s.a;
            } else {
                constexpr int n = 512;
                const double h = kTwoPi / n;
                double best = 0.0;
                double t1 = 0.0, t2 = 0.0;
                for (int i = 0; i < n; ++i) {
                    for (int j = i + 1; j < n; ++j) {
                        const double dd = (d.boundary_point(i * h) - d.boundary_point(j * h)).norm();
                        if (dd > best) {
                            best = dd;
                            t1 = i * h;
                            t2 = j * h;
                        }
                    }
                }
                // Coordinate ascent over the two boundary parameters.
                double step = h;
                while (step > 1e-12) {
                    bool moved = false;
                    for (const auto& [dt1, dt2] : {std::pair{step, 0.0}, std::pair{-step, 0.0},
                                                  std::pair{0.0, step}, std::pair{0.0, -step}}) {
                        const double dd = (d.boundary_point(t1 + dt1) - d.boundary_point(t2 + dt2)).norm();
                        if (dd > best) {
                            best = dd;
                            t1 += dt1;
                            t2 += dt2;
                            moved = true;
                        }
                    }
                    if (!moved) step *= 0.5;
                }
                return best;
            }
        },
        d.shape());
}

inline double diameter(const PuncturedDomain& d) { return diameter(d.base()); }

// Area centroid. For a star the trapezoid sum is exact: rho^3 is a trig polynomial.
inline Point centroid(const Domain& d) {
    const auto* s = std::get_if<Star>(&d.shape());
    if (!s) return d.center();
    constexpr int n = 4096;
    double area = 0.0;
    Vector m = Vector::Zero();
    for (int i = 0; i < n; ++i) {
        const double t = kTwoPi * i / n;
        const double r = s->rho(t);
        area += 0.5 * r * r;
        m += r * r * r / 3.0 * Vector(std::cos(t), std::sin(t));
    }
    return s->center + m / area;
}

namespace detail {

// Maximizes a distance-like function: a cheap `screen` picks the best grid
// points, which are refined with `dist` by compass search down to a 1e-8 step.
template <class Screen, class Dist, class Inside>
double maximize_distance(Screen&& screen, Dist&& dist, Inside&& inside, const Point& lo, const Point& hi,
                         double pitch) {
    std::vector<std::pair<double, Point>> cand;
    const int nx = static_cast<int>(std::ceil((hi.x() - lo.x()) / pitch));
    const int ny = static_cast<int>(std::ceil((hi.y() - lo.y()) / pitch));
    for (int i = 0; i <= nx; ++i) {
        for (int j = 0; j <= ny; ++j) {
            const Point p(lo.x() + i * pitch, lo.y() + j * pitch);
            if (inside(p)) cand.emplace_back(screen(p), p);
        }
    }
    if (cand.empty()) return 0.0;
    const std::size_t keep = std::min<std::size_t>(8, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + keep, cand.end(),
                      [](const auto& l, const auto& r) { return l.first > r.first; });

    std::array<Vector, 16> dirs;
    for (int k = 0; k < 16; ++k) dirs[k] = Vector(std::cos(kTwoPi * k / 16), std::sin(kTwoPi * k / 16));

    double best = 0.0;
    for (std::size_t c = 0; c < keep; ++c) {
        Point p = cand[c].second;
        double f = dist(p);
        double step = pitch;
        while (step > 1e-8) {
            bool moved = false;
            for (const auto& dir : dirs) {
                const Point q = p + step * dir;
                if (!inside(q)) continue;
                const double fq = dist(q);
                if (fq > f) {
                    f = fq;
                    p = q;
                    moved = true;
                }
            }
            if (!moved) step *= 0.5;
        }
        best = std::max(best, f);
    }
    return best;
}

// Distance to a 720-point polyline sample of the boundary.
inline auto polyline_distance(const Domain& d) {
    std::vector<Point> pts;
    for (int i = 0; i < 720; ++i) pts.push_back(d.boundary_point(kTwoPi * i / 720));
    return [pts = std::move(pts)](const Point& x) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : pts) best = std::min(best, (q - x).squaredNorm());
        return std::sqrt(best);
    };
}

}  // namespace detail

inline double inradius(const Domain& d) {
    if (const auto* s = std::get_if<Disk>(&d.shape())) return s->radius;
    if (const auto* s = std::get_if<Ellipse>(&d.shape())) return s->b;
    const double extent = d.outer_radius();
    const Point c = d.center();
    double estimate = extent;
    for (int i = 0; i < 720; ++i)
        estimate = std::min(estimate, (d.boundary_point(kTwoPi * i / 720) - c).norm());
    const Vector half(extent, extent);
    return detail::maximize_distance(detail::polyline_distance(d),
                                     [&d](const Point& p) { return d.distance_to_boundary(p); },
                                     [&d](const Point& p) { return d.contains(p); }, c - half, c + half,
                                     estimate / 50.0);
}

inline double inradius(const PuncturedDomain& pd) {
    const Domain& d = pd.base();
    const double extent = d.outer_radius();
    const Vector half(extent, extent);
    const double pitch = inradius(d) / 50.0;
    const auto coarse = detail::polyline_distance(d);
    return detail::maximize_distance(
        [&pd, &coarse](const Point& p) {
            return std::min(coarse(p), (p - pd.hole_center()).norm() - pd.hole_radius());
        },
        [&pd, &d](const Point& p) {
            return std::min(d.distance_to_boundary(p), (p - pd.hole_center()).norm() - pd.hole_radius());
        },
        [&pd](const Point& p) { return pd.contains(p); }, d.center() - half, d.center() + half, pitch);
}

/// Boundary nodes with unit outward normals and trapezoid arc-length weights.
/// The first `outer_count` entries lie on the outer curve; the rest on the hole.
struct BoundarySample {
    std::vector<Point> points;
    std::vector<Vector> normals;
    std::vector<double> weights;
    std::size_t outer_count = 0;

    std::size_t size() const noexcept { return points.size(); }
    std::size_t hole_count() const noexcept { return points.size() - outer_count; }
};

namespace detail {

inline void append_outer(BoundarySample& s, const Domain& d, std::size_t n, double phase) {
    const double h = kTwoPi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) + phase) * h;
        s.points.push_back(d.boundary_point(t));
        s.normals.push_back(d.outward_normal(t));
        s.weights.push_back(d.speed(t) * h);
    }
}

inline void append_hole(BoundarySample& s, const Point& x0, double eps, std::size_t n, double phase) {
    const double h = kTwoPi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) + phase) * h;
        const Vector e(std::cos(t), std::sin(t));
        s.points.push_back(x0 + eps * e);
        s.normals.push_back(-e);
        s.weights.push_back(eps * h);
    }
}

}  // namespace detail

// `phase` shifts the nodes by a fraction of the parameter step (0 gives t = 0
// as the first node).
inline BoundarySample boundary_sample(const Domain& d, std::size_t n_outer, double phase = 0.0) {
    if (n_outer < 16) throw ConfigError("boundary_sample requires n_outer >= 16");
    BoundarySample s;
    detail::append_outer(s, d, n_outer, phase);
    s.outer_count = n_outer;
    return s;
}

inline BoundarySample boundary_sample(const PuncturedDomain& pd, std::size_t n_outer, std::size_t n_hole,
                                      double phase = 0.0) {
    if (n_outer < 16) throw ConfigError("boundary_sample requires n_outer >= 16");
    if (n_hole < 8) throw ConfigError("boundary_sample requires n_hole >= 8");
    BoundarySample s;
    detail::append_outer(s, pd.base(), n_outer, phase);
    s.outer_count = n_outer;
    detail::append_hole(s, pd.hole_center(), pd.hole_radius(), n_hole, phase);
    return s;
}

}  // namespace torsion_gap

#endif  // TORSION_GAP_GEOMETRY_HPP
