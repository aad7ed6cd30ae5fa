#ifndef TORSION_GAP_TORSION_CORE_HPP
#define TORSION_GAP_TORSION_CORE_HPP

// Torsion solutions on Omega and Omega_eps, critical points and the Hessian
// spectrum at the maximum, and the K_eps / L_eps splitting near the hole.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "torsion_gap/errors.hpp"
#include "torsion_gap/field.hpp"
#include "torsion_gap/geometry.hpp"
#include "torsion_gap/harmonic_mfs.hpp"
#include "torsion_gap/literals.hpp"

namespace torsion_gap {

inline constexpr double kMinHoleRadius = 1e-9;

/// u(x) = -|x - x_c|^2 / 4 + h(x), so -Laplacian u = 1 holds exactly.
class TorsionSolution {
public:
    TorsionSolution(Domain base, std::optional<PuncturedDomain> punctured, Point expansion_center,
                    HarmonicSolution harmonic)
        : base_(std::move(base)),
          punctured_(std::move(punctured)),
          xc_(std::move(expansion_center)),
          h_(std::move(harmonic)) {}

    double value(const Point& x) const { return -0.25 * (x - xc_).squaredNorm() + h_.value(x); }
    Vector gradient(const Point& x) const { return -0.5 * (x - xc_) + h_.gradient(x); }
    Matrix2 hessian(const Point& x) const { return -0.5 * Matrix2::Identity() + h_.hessian(x); }

    const Domain& base() const noexcept { return base_; }
    const std::optional<PuncturedDomain>& punctured() const noexcept { return punctured_; }
    bool has_hole() const noexcept { return punctured_.has_value(); }
    const Point& expansion_center() const noexcept { return xc_; }
    const HarmonicSolution& harmonic() const noexcept { return h_; }

    bool contains(const Point& x) const { return punctured_ ? punctured_->contains(x) : base_.contains(x); }
    double diameter() const { return torsion_gap::diameter(base_); }
    double inradius() const { return punctured_ ? torsion_gap::inradius(*punctured_) : torsion_gap::inradius(base_); }

    // max |u| over the boundary check grid
    double certificate() const noexcept { return h_.certificate(); }
    bool converged() const noexcept { return h_.converged(); }
    void require_converged() const { h_.require_converged(); }

private:
    Domain base_;
    std::optional<PuncturedDomain> punctured_;
    Point xc_;
    HarmonicSolution h_;
};

inline TorsionSolution solve_torsion(const Domain& d, const MfsConfig& cfg = {}) {
    const Point xc = centroid(d);
    auto g = [&xc](const Point& x) { return 0.25 * (x - xc).squaredNorm(); };
    return TorsionSolution(d, std::nullopt, xc, solve_dirichlet(d, g, cfg));
}

inline TorsionSolution solve_torsion_punctured(const PuncturedDomain& pd, const MfsConfig& cfg = {}) {
    if (pd.hole_radius() < kMinHoleRadius)
        throw ConfigError("hole radius " + format_double(pd.hole_radius()) + " is below the 1e-9 guardrail");
    const Point xc = centroid(pd.base());
    auto g = [&xc](const Point& x) { return 0.25 * (x - xc).squaredNorm(); };
    return TorsionSolution(pd.base(), pd, xc, solve_dirichlet(pd, g, cfg));
}

enum class CriticalKind { maximum, saddle, minimum, degenerate };

inline const char* to_string(CriticalKind k) {
    switch (k) {
        case CriticalKind::maximum: return "maximum";
        case CriticalKind::saddle: return "saddle";
        case CriticalKind::minimum: return "minimum";
        case CriticalKind::degenerate: return "degenerate";
    }
    return "?";
}

struct Eigenpairs {
    double lambda1 = 0.0;  // lambda1 >= lambda2
    double lambda2 = 0.0;
    Vector v1 = Vector::UnitX();
    Vector v2 = Vector::UnitY();
};

// Symmetric 2x2 eigen-decomposition, eigenvalues descending. The sign of each
// eigenvector is fixed so its first nonzero component is positive.
inline Eigenpairs eigenpairs(const Matrix2& m) {
    const Eigen::SelfAdjointEigenSolver<Matrix2> es(0.5 * (m + m.transpose()));
    Eigenpairs e;
    e.lambda1 = es.eigenvalues()(1);
    e.lambda2 = es.eigenvalues()(0);
    e.v1 = es.eigenvectors().col(1);
    e.v2 = es.eigenvectors().col(0);
    for (Vector* v : {&e.v1, &e.v2}) {
        const double lead = std::abs(v->x()) > 1e-14 ? v->x() : v->y();
        if (lead < 0) *v = -*v;
    }
    return e;
}

struct CriticalPoint {
    Point location;
    CriticalKind kind = CriticalKind::degenerate;
    double value = 0.0;
    double gradient_norm = 0.0;
    Matrix2 hessian = Matrix2::Zero();
    Eigenpairs eig;
};

struct CriticalSearchConfig {
    double newton_rel_tol = 1e-11;  // relative to the u scale
    int max_iterations = 50;
    double dedup_rel = 1e-7;        // relative to the diameter
    double degenerate_tol = 1e-6;
    std::size_t ring_angles = 16;
    unsigned threads = 0;           // 0: hardware concurrency
};

namespace detail {

inline CriticalKind classify(const Eigenpairs& e, double tol) {
    if (std::abs(e.lambda1) < tol || std::abs(e.lambda2) < tol) return CriticalKind::degenerate;
    if (e.lambda1 < 0) return CriticalKind::maximum;
    if (e.lambda2 > 0) return CriticalKind::minimum;
    return CriticalKind::saddle;
}

inline std::vector<Point> critical_starts(const TorsionSolution& u, const CriticalSearchConfig& cfg) {
    const Domain& d = u.base();
    const double ext = d.outer_radius();
    const double pitch = inradius(d) / 10.0;
    const Point c = d.center();
    std::vector<Point> starts;
    const int n = static_cast<int>(std::ceil(ext / pitch));
    for (int i = -n; i <= n; ++i)
        for (int j = -n; j <= n; ++j) {
            const Point p = c + pitch * Point(i, j);
            if (u.contains(p)) starts.push_back(p);
        }
    if (const auto& pd = u.punctured()) {
        const double eps = pd->hole_radius();
        std::vector<double> radii{2.0 * eps, std::sqrt(eps) * u.diameter()};
        for (double r = 8.0 * eps; r < inradius(d); r *= 4.0) radii.push_back(r);
        for (double r : radii)
            for (std::size_t k = 0; k < cfg.ring_angles; ++k) {
                const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(cfg.ring_angles);
                const Point p = pd->hole_center() + r * Point(std::cos(t), std::sin(t));
                if (u.contains(p)) starts.push_back(p);
            }
    }
    return starts;
}

// Newton on grad u = 0. Near-singular Hessian directions are dropped, and the
// step is halved until it stays inside the domain and reduces |grad u|.
template <class Field>
std::optional<Point> newton_critical(const Field& u, Point x, double tol, int max_iter) {
    Vector g = u.gradient(x);
    for (int it = 0; it < max_iter; ++it) {
        if (g.norm() <= tol) return x;
        const Eigenpairs e = eigenpairs(u.hessian(x));
        const double cut = 1e-10 * std::max(std::abs(e.lambda1), std::abs(e.lambda2));
        Vector step = Vector::Zero();
        for (const auto& [lam, v] : {std::pair{e.lambda1, e.v1}, std::pair{e.lambda2, e.v2}})
            if (std::abs(lam) > cut) step -= v.dot(g) / lam * v;
        bool moved = false;
        for (int k = 0; k < 40; ++k, step *= 0.5) {
            const Point y = x + step;
            if (!u.contains(y)) continue;
            const Vector gy = u.gradient(y);
            if (gy.norm() < g.norm()) {
                x = y;
                g = gy;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    if (g.norm() <= tol) return x;
    return std::nullopt;
}

}  // namespace detail

/// All critical points reached by multi-start Newton, sorted lexicographically
/// and deduplicated.
inline std::vector<CriticalPoint> find_critical_points(const TorsionSolution& u, const CriticalSearchConfig& cfg = {}) {
    const std::vector<Point> starts = detail::critical_starts(u, cfg);
    double u_scale = 0.0;
    for (const auto& p : starts) u_scale = std::max(u_scale, std::abs(u.value(p)));
    const double tol = cfg.newton_rel_tol * std::max(u_scale, 1e-300);

    std::vector<std::optional<Point>> found(starts.size());
    unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, starts.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < n_threads; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < starts.size(); i += n_threads)
                    found[i] = detail::newton_critical(u, starts[i], tol, cfg.max_iterations);
            });
    }

    std::vector<Point> pts;
    for (const auto& f : found)
        if (f) pts.push_back(*f);
    std::sort(pts.begin(), pts.end(),
              [](const Point& a, const Point& b) { return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y(); });

    const double dedup = cfg.dedup_rel * u.diameter();
    std::vector<CriticalPoint> out;
    for (const auto& p : pts) {
        const bool dup = std::any_of(out.begin(), out.end(),
                                     [&](const CriticalPoint& c) { return (c.location - p).norm() <= dedup; });
        if (dup) continue;
        CriticalPoint c;
        c.location = p;
        c.value = u.value(p);
        c.gradient_norm = u.gradient(p).norm();
        c.hessian = u.hessian(p);
        c.eig = eigenpairs(c.hessian);
        c.kind = detail::classify(c.eig, cfg.degenerate_tol);
        out.push_back(c);
    }
    return out;
}

/// The maximum point x_eps among the critical points: largest u, ties broken
/// by smallest polar angle about the hole center on a degenerate ring and by
/// lexicographic order otherwise.
inline const CriticalPoint& select_maximum(const std::vector<CriticalPoint>& pts, const Point& pole,
                                           double tie_tol) {
    std::vector<const CriticalPoint*> cand;
    for (const auto& c : pts)
        if (c.kind == CriticalKind::maximum || (c.kind == CriticalKind::degenerate && c.eig.lambda2 < 0))
            cand.push_back(&c);
    if (cand.empty()) {
        std::string msg = "maximum not found";
        if (!pts.empty()) {
            const auto best = std::max_element(pts.begin(), pts.end(),
                                               [](const auto& a, const auto& b) { return a.value < b.value; });
            msg += "; best candidate (" + format_double(best->location.x()) + ", " +
                   format_double(best->location.y()) + ") kind " + to_string(best->kind) + " |grad u| " +
                   format_double(best->gradient_norm);
            throw SolverError(msg, best->gradient_norm);
        }
        throw SolverError(msg + "; no critical point converged");
    }
    double top = -std::numeric_limits<double>::infinity();
    for (const auto* c : cand) top = std::max(top, c->value);
    std::vector<const CriticalPoint*> tied;
    for (const auto* c : cand)
        if (c->value >= top - tie_tol) tied.push_back(c);

    const bool ring = std::any_of(tied.begin(), tied.end(),
                                  [](const auto* c) { return c->kind == CriticalKind::degenerate; });
    auto angle = [&pole](const CriticalPoint* c) {
        const Vector d = c->location - pole;
        double t = std::atan2(d.y(), d.x());
        if (t < 0) t += kTwoPi;
        // a representative just below the positive axis counts as angle 0
        if (t > kTwoPi - 1e-6) t -= kTwoPi;
        return t;
    };
    auto lex = [](const CriticalPoint* a, const CriticalPoint* b) {
        return a->location.x() != b->location.x() ? a->location.x() < b->location.x()
                                                  : a->location.y() < b->location.y();
    };
    if (ring)
        return **std::min_element(tied.begin(), tied.end(),
                                  [&](const auto* a, const auto* b) { return angle(a) < angle(b); });
    return **std::min_element(tied.begin(), tied.end(), lex);
}

struct SpectralPrediction {
    double lambda_limit = std::numeric_limits<double>::quiet_NaN();
    std::vector<Point> xeps;
    double xeps_radius = std::numeric_limits<double>::quiet_NaN();
};

struct SpectralReport {
    double eps = 0.0;
    Point x_eps = Point::Zero();
    double u_max = 0.0;
    Eigenpairs eig;
    double lambda_max = 0.0;
    double predicted_limit = 0.0;
    std::vector<Point> predicted_xeps;
    double predicted_xeps_radius = 0.0;
    double limit_discrepancy = 0.0;   // lambda_max - predicted_limit
    double radius_discrepancy = 0.0;  // |x_eps - x0| - predicted_xeps_radius
    double diam_inrad = 0.0;
    double boundary_residual = 0.0;
    double gradient_residual = 0.0;
    std::vector<CriticalPoint> maxima;
};

inline SpectralReport spectral_report(const TorsionSolution& u, const SpectralPrediction& pred,
                                      const CriticalSearchConfig& cfg = {}) {
    const auto pts = find_critical_points(u, cfg);
    const Point pole = u.has_hole() ? u.punctured()->hole_center() : u.base().center();
    double u_scale = 0.0;
    for (const auto& c : pts) u_scale = std::max(u_scale, std::abs(c.value));
    const CriticalPoint& m = select_maximum(pts, pole, std::max(1e-9 * u_scale, 10.0 * u.certificate()));

    SpectralReport r;
    r.eps = u.has_hole() ? u.punctured()->hole_radius() : 0.0;
    r.x_eps = m.location;
    r.u_max = m.value;
    r.eig = m.eig;
    r.lambda_max = m.eig.lambda1;
    r.predicted_limit = pred.lambda_limit;
    r.predicted_xeps = pred.xeps;
    r.predicted_xeps_radius = pred.xeps_radius;
    r.limit_discrepancy = r.lambda_max - r.predicted_limit;
    r.radius_discrepancy = (r.x_eps - pole).norm() - r.predicted_xeps_radius;
    r.diam_inrad = u.diameter() / u.inradius();
    r.boundary_residual = u.certificate();
    r.gradient_residual = m.gradient_norm;
    for (const auto& c : pts)
        if (c.kind == CriticalKind::maximum || (c.kind == CriticalKind::degenerate && c.eig.lambda2 < 0))
            r.maxima.push_back(c);
    return r;
}

namespace detail {

inline double check_w(const Point& w) {
    const double r2 = w.squaredNorm();
    if (r2 < 1.0 - 1e-12) throw DomainError("K_eps needs |w| >= 1");
    return r2;
}

}  // namespace detail

/// K_eps(w) = -u0(x0 + eps w/|w|^2) + (eps^2/2)(1 - 1/|w|^2).
template <ScalarField U0>
double k_epsilon(const U0& u0, const Point& x0, double eps, const Point& w) {
    const double r2 = detail::check_w(w);
    return -u0.value(x0 + eps * w / r2) + 0.5 * eps * eps * (1.0 - 1.0 / r2);
}

// Derivatives in w.
template <ScalarField U0>
Vector k_epsilon_gradient(const U0& u0, const Point& x0, double eps, const Point& w) {
    const double r2 = detail::check_w(w);
    const Matrix2 j = (Matrix2::Identity() * r2 - 2.0 * w * w.transpose()) / (r2 * r2);
    return -eps * j.transpose() * u0.gradient(x0 + eps * w / r2) + eps * eps * w / (r2 * r2);
}

template <ScalarField U0>
Matrix2 k_epsilon_hessian(const U0& u0, const Point& x0, double eps, const Point& w) {
    const double r2 = detail::check_w(w);
    const double r4 = r2 * r2, r6 = r4 * r2;
    const Point y = x0 + eps * w / r2;
    const Matrix2 j = (Matrix2::Identity() * r2 - 2.0 * w * w.transpose()) / r4;
    const Vector g = u0.gradient(y);
    Matrix2 out = -eps * eps * j.transpose() * u0.hessian(y) * j;
    for (int i = 0; i < 2; ++i)
        for (int l = 0; l < 2; ++l) {
            // d/dw_l of J_ki = delta_ki/|w|^2 - 2 w_k w_i/|w|^4
            double acc = 0.0;
            for (int k = 0; k < 2; ++k) {
                const double djk = -2.0 * (k == i) * w(l) / r4 - 2.0 * ((k == l) * w(i) + w(k) * (i == l)) / r4 +
                                   8.0 * w(k) * w(i) * w(l) / r6;
                acc += g(k) * djk;
            }
            out(i, l) += -eps * acc + eps * eps * ((i == l) / r4 - 4.0 * w(i) * w(l) / r6);
        }
    return 0.5 * (out + out.transpose());
}

/// L_eps(w) = u_eps(x) - u0(x) - K_eps(w) at x = x0 + eps w.
template <ScalarField UEps, ScalarField U0>
double l_epsilon_numeric(const UEps& u_eps, const U0& u0, const Point& x0, double eps, const Point& w) {
    const Point x = x0 + eps * w;
    return u_eps.value(x) - u0.value(x) - k_epsilon(u0, x0, eps, w);
}

}  // namespace torsion_gap

#endif  // TORSION_GAP_TORSION_CORE_HPP
