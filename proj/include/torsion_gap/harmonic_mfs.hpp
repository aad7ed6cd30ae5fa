#ifndef TORSION_GAP_HARMONIC_MFS_HPP
#define TORSION_GAP_HARMONIC_MFS_HPP

// Dirichlet solver for Laplace's equation on Omega and Omega_eps by
// fundamental-solution collocation.
//
// The harmonic function is represented as
//   h(x) = constant + sum_k c_k K(x, q_k) + m K(x, x0),  K(x,q) = -(1/2pi) ln|x-q|,
// with sources q_k on the outer boundary curve scaled about the domain center
// and, for punctured domains, on a circle of radius deflation*eps about x0.
// The hole sources are constrained to zero net charge (their trigonometric
// modes k >= 1 are the unknowns), since the net charge on the hole is carried
// by the explicit monopole m.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "torsion_gap/errors.hpp"
#include "torsion_gap/exact_solutions.hpp"
#include "torsion_gap/geometry.hpp"

namespace torsion_gap {

struct MfsConfig {
    // 0 selects the default for the domain kind (64 for disks, 128 otherwise).
    std::size_t n_outer_sources = 0;
    std::size_t n_hole_sources = 16;
    double outer_source_inflation = 1.5;
    double hole_source_deflation = 0.5;
    double oversampling = 2.0;
    double svd_cutoff = 1e-12;
    // 0 selects max(1e-8 * ||g||_inf, 1e-12).
    double tolerance = 0.0;

    std::size_t outer_sources_for(const Domain& d) const {
        if (n_outer_sources != 0) return n_outer_sources;
        return d.is_disk() ? 64 : 128;
    }

    void validate() const {
        if (n_outer_sources != 0 && n_outer_sources < 8) throw ConfigError("n_outer_sources must be >= 8");
        if (n_hole_sources < 8) throw ConfigError("n_hole_sources must be >= 8");
        if (outer_source_inflation < 1.05 || outer_source_inflation > 3.0)
            throw ConfigError("outer_source_inflation must lie in [1.05, 3]");
        if (hole_source_deflation < 0.2 || hole_source_deflation > 0.8)
            throw ConfigError("hole_source_deflation must lie in [0.2, 0.8]");
        if (oversampling < 2.0) throw ConfigError("oversampling must be >= 2");
        if (svd_cutoff < 1e-14 || svd_cutoff > 1e-8) throw ConfigError("svd_cutoff must lie in [1e-14, 1e-8]");
        if (tolerance < 0.0) throw ConfigError("tolerance must be non-negative");
    }
};

enum class SolveStatus { converged, unconverged };

inline const char* to_string(SolveStatus s) { return s == SolveStatus::converged ? "converged" : "unconverged"; }

struct Charge {
    Point source;
    double strength;
};

struct Monopole {
    Point center;
    double strength;
};

/// A harmonic function given by point charges, an optional log monopole and a
/// constant. Immutable after construction; derivatives are exact.
class HarmonicSolution {
public:
    HarmonicSolution() = default;
    HarmonicSolution(std::vector<Charge> charges, std::optional<Monopole> monopole, double constant)
        : charges_(std::move(charges)), monopole_(std::move(monopole)), constant_(constant) {}

    double value(const Point& x) const {
        double acc = 0.0;
        for (const auto& c : charges_) acc += c.strength * kernel(x, c.source);
        if (monopole_) acc += monopole_->strength * kernel(x, monopole_->center);
        return constant_ + acc;
    }

    Vector gradient(const Point& x) const {
        Vector g = Vector::Zero();
        for (const auto& c : charges_) g += c.strength * kernel_gradient(x, c.source);
        if (monopole_) g += monopole_->strength * kernel_gradient(x, monopole_->center);
        return g;
    }

    // Stored as [[s, t], [t, -s]]: the trace vanishes exactly.
    Matrix2 hessian(const Point& x) const {
        double s = 0.0, t = 0.0;
        auto add = [&](double strength, const Point& q) {
            const Vector d = checked_offset(x, q);
            const double r2 = d.squaredNorm();
            const double f = -kInvTwoPi * strength / (r2 * r2);
            s += f * (d.y() * d.y() - d.x() * d.x());
            t += f * (-2.0 * d.x() * d.y());
        };
        for (const auto& c : charges_) add(c.strength, c.source);
        if (monopole_) add(monopole_->strength, monopole_->center);
        Matrix2 h;
        h << s, t, t, -s;
        return h;
    }

    const std::vector<Charge>& charges() const noexcept { return charges_; }
    const std::optional<Monopole>& monopole() const noexcept { return monopole_; }
    double constant() const noexcept { return constant_; }

    double certificate() const noexcept { return certificate_; }
    double tolerance() const noexcept { return tolerance_; }
    SolveStatus status() const noexcept { return status_; }
    std::size_t rank() const noexcept { return rank_; }
    bool converged() const noexcept { return status_ == SolveStatus::converged; }

    void require_converged() const {
        if (!converged())
            throw SolverError("unconverged: certificate " + std::to_string(certificate_) + " exceeds tolerance " +
                                  std::to_string(tolerance_),
                              certificate_);
    }

    void set_diagnostics(double certificate, double tolerance, std::size_t rank) {
        certificate_ = certificate;
        tolerance_ = tolerance;
        rank_ = rank;
        status_ = certificate <= tolerance ? SolveStatus::converged : SolveStatus::unconverged;
    }

    static Vector checked_offset(const Point& x, const Point& q) {
        const Vector d = x - q;
        if (d.norm() < 1e-12)
            throw SingularityError("evaluation point coincides with a source");
        return d;
    }

    static double kernel(const Point& x, const Point& q) { return -kInvTwoPi * std::log(checked_offset(x, q).norm()); }

    static Vector kernel_gradient(const Point& x, const Point& q) {
        const Vector d = checked_offset(x, q);
        return -kInvTwoPi * d / d.squaredNorm();
    }

private:
    std::vector<Charge> charges_;
    std::optional<Monopole> monopole_;
    double constant_ = 0.0;
    double certificate_ = 0.0;
    double tolerance_ = 0.0;
    std::size_t rank_ = 0;
    SolveStatus status_ = SolveStatus::converged;
};

namespace detail {

struct HoleLayout {
    Point center;
    double eps;
    std::vector<Point> sources;
    std::vector<double> angles;
};

struct CollocationProblem {
    std::vector<Point> outer_sources;
    std::optional<HoleLayout> hole;
    std::vector<Point> points;
    Eigen::VectorXd data;
    std::vector<Point> check_points;
    Eigen::VectorXd check_data;
    double svd_cutoff = 1e-12;
    double tolerance = 0.0;
};

inline std::size_t hole_mode_count(std::size_t n_hole) { return n_hole - 1; }

// Strength pattern of hole mode `m` (0-based): cos k phi for even m, sin k phi for odd m.
inline double hole_mode_weight(std::size_t m, double phi) {
    const std::size_t k = m / 2 + 1;
    return m % 2 == 0 ? std::cos(k * phi) : std::sin(k * phi);
}

inline std::size_t column_count(const CollocationProblem& p) {
    std::size_t n = 1 + p.outer_sources.size();
    if (p.hole) n += 1 + hole_mode_count(p.hole->sources.size());
    return n;
}

template <class Row>
void fill_row(const CollocationProblem& p, const Point& x, Row&& row) {
    std::size_t c = 0;
    row(c++) = 1.0;
    for (const auto& q : p.outer_sources) row(c++) = HarmonicSolution::kernel(x, q);
    if (!p.hole) return;
    const auto& h = *p.hole;
    row(c++) = HarmonicSolution::kernel(x, h.center);
    std::vector<double> k(h.sources.size());
    for (std::size_t j = 0; j < h.sources.size(); ++j) k[j] = HarmonicSolution::kernel(x, h.sources[j]);
    for (std::size_t m = 0; m < hole_mode_count(h.sources.size()); ++m) {
        double acc = 0.0;
        for (std::size_t j = 0; j < h.sources.size(); ++j) acc += hole_mode_weight(m, h.angles[j]) * k[j];
        row(c++) = acc;
    }
}

inline HarmonicSolution solve_collocation(const CollocationProblem& p) {
    const std::size_t rows = p.points.size();
    const std::size_t cols = column_count(p);
    Eigen::MatrixXd a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) fill_row(p, p.points[i], a.row(i));

    Eigen::VectorXd scale = a.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j) {
        if (scale(j) == 0.0) scale(j) = 1.0;
        a.col(j) /= scale(j);
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    std::size_t rank = 0;
    while (rank < static_cast<std::size_t>(sv.size()) && sv(rank) > p.svd_cutoff * sv(0)) ++rank;
    if (rank < 8) throw SolverError("ill-posed configuration: effective rank " + std::to_string(rank));

    const Eigen::VectorXd proj = svd.matrixU().leftCols(rank).transpose() * p.data;
    Eigen::VectorXd coef = svd.matrixV().leftCols(rank) * (proj.array() / sv.head(rank).array()).matrix();
    coef.array() /= scale.array();

    std::size_t c = 0;
    const double constant = coef(c++);
    std::vector<Charge> charges;
    for (const auto& q : p.outer_sources) charges.push_back({q, coef(c++)});
    std::optional<Monopole> monopole;
    if (p.hole) {
        const auto& h = *p.hole;
        monopole = Monopole{h.center, coef(c++)};
        const std::size_t modes = hole_mode_count(h.sources.size());
        for (std::size_t j = 0; j < h.sources.size(); ++j) {
            double s = 0.0;
            for (std::size_t m = 0; m < modes; ++m) s += coef(c + m) * hole_mode_weight(m, h.angles[j]);
            charges.push_back({h.sources[j], s});
        }
    }

    HarmonicSolution sol(std::move(charges), std::move(monopole), constant);
    double cert = 0.0;
    double g_max = 0.0;
    for (std::size_t i = 0; i < p.check_points.size(); ++i) {
        cert = std::max(cert, std::abs(sol.value(p.check_points[i]) - p.check_data(i)));
        g_max = std::max(g_max, std::abs(p.check_data(i)));
    }
    const double tol = p.tolerance > 0.0 ? p.tolerance : std::max(1e-8 * g_max, 1e-12);
    sol.set_diagnostics(cert, tol, rank);
    return sol;
}

inline std::vector<Point> outer_sources(const Domain& d, std::size_t n, double inflation) {
    std::vector<Point> src;
    const Point c = d.center();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        src.push_back(c + inflation * (d.boundary_point(t) - c));
    }
    return src;
}

inline std::size_t collocation_count(std::size_t sources, double oversampling) {
    return static_cast<std::size_t>(std::llround(oversampling * static_cast<double>(sources)));
}

}  // namespace detail

/// Harmonic h on Omega with h = g on the boundary.
template <class F>
concept BoundaryFunction = std::is_invocable_r_v<double, F, const Point&>;

template <BoundaryFunction BoundaryData>
HarmonicSolution solve_dirichlet(const Domain& d, BoundaryData&& g, const MfsConfig& cfg = {}) {
    cfg.validate();
    const std::size_t n_src = cfg.outer_sources_for(d);
    detail::CollocationProblem p;
    p.outer_sources = detail::outer_sources(d, n_src, cfg.outer_source_inflation);
    p.svd_cutoff = cfg.svd_cutoff;
    p.tolerance = cfg.tolerance;

    const std::size_t n_col = detail::collocation_count(n_src, cfg.oversampling);
    const BoundarySample col = boundary_sample(d, n_col);
    const BoundarySample chk = boundary_sample(d, 4 * n_col, 0.5);
    p.points = col.points;
    p.check_points = chk.points;
    p.data.resize(static_cast<Eigen::Index>(p.points.size()));
    for (std::size_t i = 0; i < p.points.size(); ++i) p.data(i) = g(p.points[i]);
    p.check_data.resize(static_cast<Eigen::Index>(p.check_points.size()));
    for (std::size_t i = 0; i < p.check_points.size(); ++i) p.check_data(i) = g(p.check_points[i]);
    return detail::solve_collocation(p);
}

/// Harmonic h on Omega_eps with h = g_outer on the outer curve and h = g_hole
/// on the hole circle.
template <BoundaryFunction OuterData, BoundaryFunction HoleData>
HarmonicSolution solve_dirichlet(const PuncturedDomain& pd, OuterData&& g_outer, HoleData&& g_hole,
                                 const MfsConfig& cfg = {}) {
    cfg.validate();
    const Domain& d = pd.base();
    const std::size_t n_src = cfg.outer_sources_for(d);
    const std::size_t n_hole = cfg.n_hole_sources;
    detail::CollocationProblem p;
    p.outer_sources = detail::outer_sources(d, n_src, cfg.outer_source_inflation);
    p.svd_cutoff = cfg.svd_cutoff;
    p.tolerance = cfg.tolerance;

    detail::HoleLayout hole{pd.hole_center(), pd.hole_radius(), {}, {}};
    for (std::size_t j = 0; j < n_hole; ++j) {
        const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(n_hole);
        hole.angles.push_back(phi);
        hole.sources.push_back(pd.hole_center() +
                               cfg.hole_source_deflation * pd.hole_radius() * Point(std::cos(phi), std::sin(phi)));
    }
    p.hole = std::move(hole);

    const std::size_t n_col = detail::collocation_count(n_src, cfg.oversampling);
    const std::size_t n_col_hole = detail::collocation_count(n_hole, cfg.oversampling);
    const BoundarySample col = boundary_sample(pd, n_col, n_col_hole);
    const BoundarySample chk = boundary_sample(pd, 4 * n_col, 4 * n_col_hole, 0.5);

    auto eval = [&](const BoundarySample& s, std::vector<Point>& pts, Eigen::VectorXd& data) {
        pts = s.points;
        data.resize(static_cast<Eigen::Index>(pts.size()));
        for (std::size_t i = 0; i < pts.size(); ++i) data(i) = i < s.outer_count ? g_outer(pts[i]) : g_hole(pts[i]);
    };
    eval(col, p.points, p.data);
    eval(chk, p.check_points, p.check_data);
    return detail::solve_collocation(p);
}

template <BoundaryFunction BoundaryData>
HarmonicSolution solve_dirichlet(const PuncturedDomain& pd, BoundaryData&& g, const MfsConfig& cfg = {}) {
    return solve_dirichlet(pd, g, g, cfg);
}

/// Green's function G(x,y) = -(1/2pi) log|x-y| - H(x,y) with the regular part
/// H(., y) held as a HarmonicSolution.
class GreenFunction {
public:
    GreenFunction(Point pole, HarmonicSolution regular) : pole_(std::move(pole)), regular_(std::move(regular)) {}

    const Point& pole() const noexcept { return pole_; }
    const HarmonicSolution& regular_part() const noexcept { return regular_; }

    double regular(const Point& x) const { return regular_.value(x); }

    double value(const Point& x) const {
        const double d = (x - pole_).norm();
        if (d == 0.0) throw SingularityError("green function evaluated at its pole");
        return -kInvTwoPi * std::log(d) - regular_.value(x);
    }

    Vector gradient(const Point& x) const {
        const Vector d = x - pole_;
        if (d.norm() == 0.0) throw SingularityError("green function evaluated at its pole");
        return -kInvTwoPi * d / d.squaredNorm() - regular_.gradient(x);
    }

private:
    Point pole_;
    HarmonicSolution regular_;
};

inline GreenFunction green_numeric(const Domain& d, const Point& y, const MfsConfig& cfg = {}) {
    if (!d.contains(y)) throw DomainError("green_numeric: pole outside the domain");
    auto data = [&y](const Point& x) { return -kInvTwoPi * std::log((x - y).norm()); };
    return GreenFunction(y, solve_dirichlet(d, data, cfg));
}

inline GreenFunction green_numeric(const PuncturedDomain& pd, const Point& y, const MfsConfig& cfg = {}) {
    if (!pd.contains(y)) throw DomainError("green_numeric: pole outside the domain");
    auto data = [&y](const Point& x) { return -kInvTwoPi * std::log((x - y).norm()); };
    return GreenFunction(y, solve_dirichlet(pd, data, cfg));
}

/// v = 0 on the outer boundary, v = 1 on the hole.
inline HarmonicSolution capacity_numeric(const PuncturedDomain& pd, const MfsConfig& cfg = {}) {
    return solve_dirichlet(
        pd, [](const Point&) { return 0.0; }, [](const Point&) { return 1.0; }, cfg);
}

}  // namespace torsion_gap

#endif  // TORSION_GAP_HARMONIC_MFS_HPP
