#ifndef TORSION_GAP_VERIFY_HPP
#define TORSION_GAP_VERIFY_HPP

// Acceptance criteria grouped into named suites. Each criterion is a list of
// checks (measured value, threshold, verdict); informational checks are
// reported but do not affect the verdict.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>  // vendored nlohmann::json

#include "torsion_gap/asymptotics.hpp"
#include "torsion_gap/exact_solutions.hpp"
#include "torsion_gap/geometry.hpp"
#include "torsion_gap/harmonic_mfs.hpp"
#include "torsion_gap/literals.hpp"
#include "torsion_gap/rate_fit.hpp"
#include "torsion_gap/sweep.hpp"
#include "torsion_gap/torsion_core.hpp"

namespace torsion_gap {

struct Check {
    std::string label;
    double measured = 0.0;
    double threshold = 0.0;
    std::string relation;  // "<=", ">=", "<", ">"
    bool passed = false;
    bool informational = false;
};

struct CriterionResult {
    int id = 0;
    std::string suite;
    std::string title;
    std::vector<Check> checks;
    std::vector<std::string> notes;
    double seconds = 0.0;
    std::string error;  // set when the criterion could not be evaluated

    bool passed() const {
        if (!error.empty()) return false;
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed || c.informational; });
    }
};

struct VerifyOptions {
    std::uint64_t seed = 20240611;
    unsigned threads = 0;
    double c1 = 1.0;  // constants of the convex-domain bound -c1 exp(-c2 diam/inrad)
    double c2 = 1.0;
    MfsConfig solver;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"oracles",  "annulus",     "ellipse-centered", "offcenter",
                                                "capacity", "expansions",  "counterexample",   "properties"};
    return names;
}

namespace detail {

inline Check compare(std::string label, double measured, const std::string& rel, double threshold,
                     bool informational = false) {
    bool ok = false;
    if (rel == "<=") ok = measured <= threshold;
    else if (rel == ">=") ok = measured >= threshold;
    else if (rel == "<") ok = measured < threshold;
    else if (rel == ">") ok = measured > threshold;
    return {std::move(label), measured, threshold, rel, ok, informational};
}

// Uniform points in the open domain by rejection from the bounding square.
template <class Region>
std::vector<Point> sample_points(const Region& region, const Domain& base, std::size_t n, std::mt19937_64& rng,
                                 double shrink = 0.98) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double ext = base.outer_radius();
    const Point c = base.center();
    std::vector<Point> out;
    while (out.size() < n) {
        const Point p = c + ext * Point(u(rng), u(rng));
        if (region.contains(p) && base.contains(c + (p - c) / shrink)) out.push_back(p);
    }
    return out;
}

inline double abs_log(double eps) { return std::abs(std::log(eps)); }

class Runner {
public:
    explicit Runner(VerifyOptions opt) : opt_(std::move(opt)) {}

    const VerifyOptions& options() const { return opt_; }

    const std::vector<SweepRow>& sweep_rows(const std::string& key, const Domain& d, const Point& x0,
                                            const std::string& ladder) {
        auto it = sweeps_.find(key);
        if (it != sweeps_.end()) return it->second;
        SweepConfig cfg;
        cfg.domain = d;
        cfg.hole_center = x0;
        cfg.eps = parse_eps_ladder(ladder);
        cfg.solver = opt_.solver;
        cfg.threads = opt_.threads;
        return sweeps_.emplace(key, sweep(cfg)).first->second;
    }

    const TorsionSolution& u0(const std::string& key, const Domain& d) {
        auto it = u0_.find(key);
        if (it != u0_.end()) return it->second;
        return u0_.emplace(key, solve_torsion(d, opt_.solver)).first->second;
    }

    const AsymptoticInputs& inputs(const std::string& key, const Domain& d, const Point& x0, double eps) {
        const std::string k = key + "@" + format_point(x0);
        auto it = inputs_.find(k);
        if (it == inputs_.end()) it = inputs_.emplace(k, make_inputs(u0(key, d), x0, eps, opt_.solver)).first;
        it->second.eps = eps;
        return it->second;
    }

private:
    VerifyOptions opt_;
    std::map<std::string, std::vector<SweepRow>> sweeps_;
    std::map<std::string, TorsionSolution> u0_;
    std::map<std::string, AsymptoticInputs> inputs_;
};

inline void require_rows_ok(CriterionResult& r, const std::vector<SweepRow>& rows, const std::string& what) {
    std::size_t bad = 0;
    for (const auto& row : rows)
        if (!row.ok()) {
            ++bad;
            r.notes.push_back(what + " eps=" + format_double(row.eps) + ": " + row.status);
        }
    r.checks.push_back(compare(what + ": rows not ok", static_cast<double>(bad), "<=", 0.0));
}

// Criterion 1: solver torsion functions against closed forms.
inline void criterion_oracles(Runner& run, CriterionResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(run.options().seed);
    {
        const auto d = Domain::disk(1.0);
        const TorsionSolution u = solve_torsion(d, run.options().solver);
        double err = 0.0;
        for (const auto& x : sample_points(d, d, 100, rng)) err = std::max(err, std::abs(u.value(x) - disk_torsion(1, x)));
        r.checks.push_back(compare("disk max |u - (1-|x|^2)/4|", err, "<=", 1e-10));
    }
    {
        const auto d = Domain::ellipse(2.0, 1.0);
        const TorsionSolution u = solve_torsion(d, run.options().solver);
        double err = 0.0;
        for (const auto& x : sample_points(d, d, 100, rng))
            err = std::max(err, std::abs(u.value(x) - ellipse_torsion(2, 1, x)));
        r.checks.push_back(compare("ellipse 2x1 max |u - closed form|", err, "<=", 1e-9));
    }
    for (double eps : {1e-1, 1e-2, 1e-4, 1e-6}) {
        const PuncturedDomain pd(Domain::disk(1.0), Point::Zero(), eps);
        const TorsionSolution u = solve_torsion_punctured(pd, run.options().solver);
        double err = 0.0;
        for (const auto& x : sample_points(pd, pd.base(), 100, rng))
            err = std::max(err, std::abs(u.value(x) - annulus_torsion(eps, x.norm())));
        r.checks.push_back(compare("annulus eps=" + format_double(eps) + " max |u - closed form|", err, "<=", 1e-9));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.checks.push_back(compare("runtime seconds", secs, "<", 30.0));
}

// Criterion 2: concentric annulus, lambda_max = 0 and exact maximizer radius.
inline void criterion_annulus(Runner& run, CriterionResult& r) {
    const auto& rows = run.sweep_rows("annulus", Domain::disk(1.0), Point::Zero(), "1e-2..1e-6/1");
    require_rows_ok(r, rows, "annulus sweep");
    double lam = 0.0, rad = 0.0;
    for (const auto& row : rows) {
        lam = std::max(lam, std::abs(row.lambda_max));
        const double exact = std::sqrt((1.0 - row.eps * row.eps) / (2.0 * abs_log(row.eps)));
        rad = std::max(rad, std::abs(row.x_eps.norm() - exact));
    }
    r.checks.push_back(compare("max |lambda_max|", lam, "<=", 1e-7));
    r.checks.push_back(compare("max | |x_eps| - sqrt((1-eps^2)/(2|log eps|)) |", rad, "<=", 1e-8));
}

inline constexpr const char* kLadder = "1e-2..1e-8/2";

// Criterion 3: centered hole in the 2x1 ellipse, limit of lambda_max and the
// eigenpair at the maximizer.
inline void criterion_ellipse_limit(Runner& run, CriterionResult& r) {
    const auto d = Domain::ellipse(2.0, 1.0);
    const auto& rows = run.sweep_rows("ellipse-centered", d, Point::Zero(), kLadder);
    require_rows_ok(r, rows, "ellipse sweep");
    const AsymptoticInputs& in = run.inputs("ellipse", d, Point::Zero(), rows.back().eps);

    double min_step = std::numeric_limits<double>::infinity();
    for (std::size_t i = rows.size() - 3; i < rows.size(); ++i)
        min_step = std::min(min_step, rows[i].lambda_max - rows[i - 1].lambda_max);
    r.checks.push_back(compare("min increase of lambda_max over the last 4 rows", min_step, ">", 0.0));

    std::vector<double> eps, lam;
    for (const auto& row : rows) {
        eps.push_back(row.eps);
        lam.push_back(row.lambda_max);
    }
    const Extrapolation ex = extrapolate_log(eps, lam, 4);
    const double pred = predict_limit_lambda_max(in);
    r.checks.push_back(compare("|extrapolated lambda_max - predicted limit " + format_double(pred) + "|",
                               std::abs(ex.limit - pred), "<=", 0.02));

    const SweepRow& last = rows.back();
    const Eigenpairs p = predict_hessian_at_max(in);
    const double pair_gap = std::max(std::abs(last.lambda1 - p.lambda1), std::abs(last.lambda2 - p.lambda2));
    r.checks.push_back(compare("eigenpair at eps=" + format_double(last.eps) + " vs (" + format_double(p.lambda1) +
                                   ", " + format_double(p.lambda2) + ")",
                               pair_gap, "<=", 0.05));

    const Eigenpairs q = predict_hessian_at_max_consistent(in);
    const double q_gap = std::max(std::abs(last.lambda1 - q.lambda1), std::abs(last.lambda2 - q.lambda2));
    r.checks.push_back(compare("[info] |extrapolated lambda_max - trace-consistent limit " +
                                   format_double(q.lambda1) + "|",
                               std::abs(ex.limit - q.lambda1), "<=", 0.02, true));
    r.checks.push_back(compare("[info] eigenpair vs trace-consistent (" + format_double(q.lambda1) + ", " +
                                   format_double(q.lambda2) + ")",
                               q_gap, "<=", 0.05, true));
    r.notes.push_back("extrapolated lambda_max = " + format_double(ex.limit) + " (slope " + format_double(ex.slope) +
                      "); measured pair at eps=" + format_double(last.eps) + ": (" + format_double(last.lambda1) +
                      ", " + format_double(last.lambda2) + "), sum " + format_double(last.lambda1 + last.lambda2));
}

// Criterion 4: hole away from the maximum point.
inline void criterion_offcenter(Runner& run, CriterionResult& r) {
    const auto d = Domain::ellipse(2.0, 1.0);
    const Point x0(0.5, 0.0);
    const auto& rows = run.sweep_rows("offcenter", d, x0, kLadder);
    require_rows_ok(r, rows, "off-center sweep");
    const AsymptoticInputs& in = run.inputs("ellipse", d, x0, rows.back().eps);

    double max_step = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rows.size(); ++i)
        max_step = std::max(max_step, (rows[i].x_eps - in.y0).norm() - (rows[i - 1].x_eps - in.y0).norm());
    r.checks.push_back(compare("max change of |x_eps - y0| between rows", max_step, "<", 0.0));

    std::vector<double> eps, lam;
    for (const auto& row : rows) {
        eps.push_back(row.eps);
        lam.push_back(row.lambda_max);
    }
    const Extrapolation ex = extrapolate_log(eps, lam, 4);
    const double pred = predict_limit_lambda_max(in);
    r.checks.push_back(compare("|extrapolated lambda_max - predicted limit " + format_double(pred) + "|",
                               std::abs(ex.limit - pred), "<=", 0.02));
    r.notes.push_back("extrapolated lambda_max = " + format_double(ex.limit) + "; |x_eps| at eps=" +
                      format_double(rows.back().eps) + ": " + format_double(rows.back().x_eps.norm()));
}

// Criterion 5: maximizer distance scales like 1/sqrt|log eps| along v1.
inline void criterion_scaling(Runner& run, CriterionResult& r) {
    const auto d = Domain::ellipse(2.0, 1.0);
    const auto& rows = run.sweep_rows("ellipse-centered", d, Point::Zero(), kLadder);
    require_rows_ok(r, rows, "ellipse sweep");
    const AsymptoticInputs& in = run.inputs("ellipse", d, Point::Zero(), rows.back().eps);
    std::vector<double> eps, scaled;
    double off_axis = 0.0;
    for (const auto& row : rows) {
        eps.push_back(row.eps);
        scaled.push_back((row.x_eps - in.x0).norm() * std::sqrt(abs_log(row.eps)));
        if (row.eps <= 1e-4) off_axis = std::max(off_axis, std::abs((row.x_eps - in.x0).dot(in.hess_y0.v2)));
    }
    const Extrapolation ex = extrapolate_log(eps, scaled, 4);
    const double target = std::sqrt(-in.u0_x0 / in.hess_y0.lambda1);
    r.checks.push_back(compare("relative gap of extrapolated |x_eps| sqrt|log eps| to " + format_double(target),
                               std::abs(ex.limit - target) / target, "<=", 0.10));
    r.checks.push_back(compare("max off-axis component for eps <= 1e-4", off_axis, "<=", 1e-5));
}

// Criterion 6: two-term capacity expansion, off-center hole in the unit disk.
inline void criterion_capacity(Runner& run, CriterionResult& r) {
    const Point x0(0.3, 0.0);
    AsymptoticInputs in;
    in.x0 = x0;
    in.h_x0x0 = disk_green_regular(1.0, x0, x0);
    std::vector<std::pair<double, double>> pairs;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        in.eps = eps;
        const PuncturedDomain pd(Domain::disk(1.0), x0, eps);
        const HarmonicSolution v = capacity_numeric(pd, run.options().solver);
        if (!v.converged()) r.notes.push_back("capacity eps=" + format_double(eps) + " unconverged");
        double sup = 0.0;
        for (int k = 0; k < 64; ++k) {
            const double t = kTwoPi * k / 64;
            const Point x = x0 + 0.3 * Point(std::cos(t), std::sin(t));
            const double pred = predict_capacity(in, [&](const Point& p) { return disk_green(1.0, p, x0); }, x);
            sup = std::max(sup, std::abs(v.value(x) - pred));
        }
        pairs.emplace_back(eps, sup);
        r.notes.push_back("eps=" + format_double(eps) + " sup error " + format_double(sup));
    }
    const RateFit fit = fit_rate(pairs);
    r.checks.push_back(compare("fitted exponent p in C/|log eps|^p", fit.p, ">=", 1.7));
}

struct NearHoleFamily {
    std::string name;
    Domain domain;
    std::function<double(const Point&)> u0;
    double u0_x0;
    std::vector<TorsionSolution> solutions;
};

inline std::vector<NearHoleFamily> near_hole_families(Runner& run, const std::vector<double>& ladder) {
    std::vector<NearHoleFamily> fams;
    fams.push_back({"annulus", Domain::disk(1.0), [](const Point& x) { return disk_torsion(1, x); }, 0.25, {}});
    fams.push_back({"ellipse", Domain::ellipse(2.0, 1.0), [](const Point& x) { return ellipse_torsion(2, 1, x); },
                    0.4, {}});
    for (auto& f : fams)
        for (double eps : ladder)
            f.solutions.push_back(
                solve_torsion_punctured(PuncturedDomain(f.domain, Point::Zero(), eps), run.options().solver));
    return fams;
}

inline const std::vector<double> kDecadeLadder{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};

// Criterion 7: leading-order u_eps near the hole and the L_eps profile.
inline void criterion_u_expansion(Runner& run, CriterionResult& r, const std::vector<NearHoleFamily>& fams) {
    for (const auto& f : fams) {
        std::vector<double> gaps, floors;
        for (std::size_t i = 0; i < kDecadeLadder.size(); ++i) {
            const double eps = kDecadeLadder[i];
            const TorsionSolution& u = f.solutions[i];
            AsymptoticInputs in;
            in.eps = eps;
            in.u0_x0 = f.u0_x0;
            double gap = 0.0;
            for (int k = 0; k < 16; ++k) {
                const double t = kTwoPi * k / 16;
                const Point x = std::sqrt(eps) * Point(std::cos(t), std::sin(t));
                const double pred = f.u0(x) + std::log(x.norm()) / abs_log(eps) * f.u0_x0;
                gap = std::max(gap, std::abs(u.value(x) - pred));
            }
            gaps.push_back(gap);
            floors.push_back(10.0 * u.certificate());
        }
        std::size_t violations = 0;
        for (std::size_t i = 1; i < gaps.size(); ++i)
            if (gaps[i] > gaps[i - 1] && gaps[i] > floors[i]) ++violations;
        std::ostringstream s;
        s << f.name << " |u_eps - predict_u| at |x-x0|=sqrt(eps):";
        for (double g : gaps) s << ' ' << format_double(g);
        r.notes.push_back(s.str());
        r.checks.push_back(compare(f.name + ": increases above the 10x certificate floor",
                                   static_cast<double>(violations), "<=", 0.0));
        r.checks.push_back(compare(f.name + ": gap at eps=1e-8 / u0(x0)", gaps.back() / f.u0_x0, "<=", 0.02));
    }

    const double eps = 1e-6;
    const PuncturedDomain pd(Domain::disk(1.0), Point::Zero(), eps);
    const TorsionSolution u = solve_torsion_punctured(pd, run.options().solver);
    const DiskTorsionField u0{1.0};
    double worst = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double t = kTwoPi * k / 8;
        const Point w = 1000.0 * Point(std::cos(t), std::sin(t));
        const double l = l_epsilon_numeric(u, u0, Point::Zero(), eps, w);
        worst = std::max(worst, std::abs(l * abs_log(eps) / std::log(w.norm()) / 0.25 - 1.0));
    }
    r.checks.push_back(
        compare("annulus eps=1e-6 |w|=1000: |L_eps |log eps| / ln|w| / u0(x0) - 1|", worst, "<=", 0.02));
}

// Criterion 8: gradient and Hessian expansions, and the near-hole gradient bound.
inline void criterion_derivative_expansions(Runner& run, CriterionResult& r, const std::vector<NearHoleFamily>& fams) {
    (void)run;
    {
        const double eps = 1e-3, rad = 0.05;
        const AnnulusTorsionField exact(eps);
        const DiskTorsionField u0{1.0};
        AsymptoticInputs in;
        in.eps = eps;
        in.u0_x0 = 0.25;
        in.diameter = 2.0;
        double g_err = 0.0, h_err = 0.0;
        for (double t : {0.0, 1.0, 2.5, 4.0}) {
            const Point x = rad * Point(std::cos(t), std::sin(t));
            g_err = std::max(g_err, (predict_gradient(in, u0, x) - exact.gradient(x)).norm());
            h_err = std::max(h_err, (predict_hessian(in, u0, x) - exact.hessian(x)).cwiseAbs().maxCoeff());
        }
        r.checks.push_back(compare("annulus eps=1e-3 r=0.05 gradient prediction error", g_err, "<=", 1e-3));
        r.checks.push_back(compare("annulus eps=1e-3 r=0.05 Hessian prediction error", h_err, "<=", 1e-3));
    }
    for (const auto& f : fams) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < kDecadeLadder.size(); ++i) {
            const double eps = kDecadeLadder[i];
            const double bound = f.u0_x0 / (8.0 * eps * abs_log(eps));
            for (int k = 0; k < 16; ++k) {
                const double t = kTwoPi * k / 16;
                const Point x = 1.5 * eps * Point(std::cos(t), std::sin(t));
                worst = std::min(worst, f.solutions[i].gradient(x).norm() / bound);
            }
        }
        r.checks.push_back(
            compare(f.name + ": min |grad u_eps| / (u0(x0)/(8 eps |log eps|)) at 1.5 eps", worst, ">=", 1.0));
    }
}

// Criterion 9: the punctured disk family keeps diam/inrad bounded while
// lambda_max stays at 0, so no bound -c1 exp(-c2 diam/inrad) can hold.
inline void criterion_counterexample(Runner& run, CriterionResult& r) {
    const auto& opt = run.options();
    double max_ratio = 0.0, max_lam = 0.0, max_rhs = -std::numeric_limits<double>::infinity();
    std::size_t satisfied = 0;
    r.notes.push_back("eps, diam/inrad, lambda_max (solver), lambda_max (closed form), bound, violated");
    for (double eps : {0.02, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const PuncturedDomain pd(Domain::disk(1.0), Point::Zero(), eps);
        const TorsionSolution u = solve_torsion_punctured(pd, opt.solver);
        const SpectralReport rep = spectral_report(u, {});
        const double ratio = diameter(pd) / inradius(pd);
        const RadialTorsion exact(eps);
        const double r_star = exact.max_radius();
        const double closed = exact.derivative(r_star) / r_star;  // tangential eigenvalue
        const double rhs = theorem_a_rhs(opt.c1, opt.c2, ratio);
        const bool violated = rep.lambda_max > rhs;
        if (!violated) ++satisfied;
        max_ratio = std::max(max_ratio, ratio);
        max_lam = std::max(max_lam, std::abs(rep.lambda_max));
        max_rhs = std::max(max_rhs, rhs);
        r.notes.push_back(format_double(eps) + ", " + format_double(ratio) + ", " + format_double(rep.lambda_max) +
                          ", " + format_double(closed) + ", " + format_double(rhs) + ", " +
                          (violated ? "yes" : "no"));
    }
    r.checks.push_back(compare("max diam/inrad for eps <= 0.02", max_ratio, "<=", 4.1));
    r.checks.push_back(compare("max |lambda_max|", max_lam, "<=", 1e-7));
    r.checks.push_back(compare("max bound value (c1=" + format_double(opt.c1) + ", c2=" + format_double(opt.c2) + ")",
                               max_rhs, "<", 0.0));
    r.checks.push_back(compare("rows where the bound holds", static_cast<double>(satisfied), "<=", 0.0));
}

// Criterion 10: randomized property checks with a fixed seed.
inline void criterion_properties(Runner& run, CriterionResult& r) {
    const auto& opt = run.options();
    std::mt19937_64 rng(opt.seed);
    const auto ell = Domain::ellipse(2.0, 1.0);
    const auto star = Domain::star({1.0, 0.0, 0.1, 0.0, 0.03}, {0.0, 0.0, 0.0, 0.05});
    const PuncturedDomain pd(ell, Point(0.4, 0.1), 1e-3);

    const TorsionSolution u_ell = solve_torsion(ell, opt.solver);
    const TorsionSolution u_star = solve_torsion(star, opt.solver);
    const TorsionSolution u_pd = solve_torsion_punctured(pd, opt.solver);

    // harmonicity, by central differences of the analytic gradient since the
    // stored Hessian is trace-free by construction
    double lap = 0.0;
    for (const auto* u : {&u_ell, &u_star, &u_pd}) {
        const double step = 1e-5;
        for (const auto& x : sample_points(*u, u->base(), 50, rng, 0.95)) {
            if (u->has_hole() && (x - pd.hole_center()).norm() < 0.05) continue;
            const auto& h = u->harmonic();
            const Vector ex(step, 0), ey(0, step);
            const double l = (h.gradient(x + ex).x() - h.gradient(x - ex).x() + h.gradient(x + ey).y() -
                              h.gradient(x - ey).y()) / (2 * step);
            lap = std::max(lap, std::abs(l));
        }
    }
    r.checks.push_back(compare("max |Laplacian h| (central differences)", lap, "<=", 1e-6));

    // interior gradient bound |grad h(x)| <= (2/r) sup |h| on the circle
    double grad_ratio = 0.0;
    {
        const HarmonicSolution h = solve_dirichlet(
            ell, [](const Point& x) { return std::exp(x.x()) * std::sin(x.y()) + 0.3; }, opt.solver);
        std::uniform_real_distribution<double> frac(0.05, 0.95);
        for (const auto& x : sample_points(ell, ell, 20, rng, 0.8)) {
            const double rad = frac(rng) * ell.distance_to_boundary(x);
            double sup = 0.0;
            for (int k = 0; k < 512; ++k) {
                const double t = kTwoPi * k / 512;
                sup = std::max(sup, std::abs(h.value(x + rad * Vector(std::cos(t), std::sin(t)))));
            }
            grad_ratio = std::max(grad_ratio, h.gradient(x).norm() / (2.0 / rad * sup));
        }
    }
    r.checks.push_back(compare("max |grad h| / ((2/r) sup |h|)", grad_ratio, "<=", 1.0));

    // Green symmetry
    double sym = 0.0;
    {
        const auto pts = sample_points(ell, ell, 20, rng, 0.6);
        for (int i = 0; i < 10; ++i) {
            const auto gx = green_numeric(ell, pts[2 * i], opt.solver);
            const auto gy = green_numeric(ell, pts[2 * i + 1], opt.solver);
            sym = std::max(sym, std::abs(gx.value(pts[2 * i + 1]) - gy.value(pts[2 * i])));
        }
    }
    r.checks.push_back(compare("max |G(x,y) - G(y,x)|", sym, "<=", 1e-8));

    // trace identity at critical points
    double tr = 0.0;
    std::size_t n_crit = 0;
    for (const auto* u : {&u_ell, &u_star, &u_pd}) {
        for (const auto& c : find_critical_points(*u)) {
            tr = std::max(tr, std::abs(c.eig.lambda1 + c.eig.lambda2 + 1.0));
            ++n_crit;
        }
    }
    r.checks.push_back(compare("max |lambda1 + lambda2 + 1| over " + std::to_string(n_crit) + " critical points", tr,
                               "<=", 1e-6));

    // maximum principle: u >= 0 inside up to the certificate
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto* u : {&u_ell, &u_star, &u_pd}) {
        for (const auto& x : sample_points(*u, u->base(), 200, rng, 0.999))
            lowest = std::min(lowest, u->value(x) + u->certificate());
    }
    r.checks.push_back(compare("min (u + certificate) at interior points", lowest, ">=", 0.0));

    // analytic vs finite-difference derivatives
    double fd = 0.0;
    for (const auto* u : {&u_ell, &u_star, &u_pd}) {
        for (const auto& x : sample_points(*u, u->base(), 20, rng, 0.9)) {
            if (u->has_hole() && (x - pd.hole_center()).norm() < 0.05) continue;
            const double h = 1e-6;
            const Vector ex(h, 0), ey(0, h);
            const Vector g_fd((u->value(x + ex) - u->value(x - ex)) / (2 * h),
                              (u->value(x + ey) - u->value(x - ey)) / (2 * h));
            Matrix2 h_fd;
            h_fd.col(0) = (u->gradient(x + ex) - u->gradient(x - ex)) / (2 * h);
            h_fd.col(1) = (u->gradient(x + ey) - u->gradient(x - ey)) / (2 * h);
            fd = std::max({fd, (u->gradient(x) - g_fd).norm(), (u->hessian(x) - h_fd).cwiseAbs().maxCoeff()});
        }
    }
    r.checks.push_back(compare("max analytic vs central-difference derivative gap", fd, "<=", 1e-7));
    r.notes.push_back("seed " + std::to_string(opt.seed));
}

struct CriterionDef {
    int id;
    std::string suite;
    std::string title;
};

inline const std::vector<CriterionDef>& criterion_defs() {
    static const std::vector<CriterionDef> defs{
        {1, "oracles", "solver matches closed-form torsion functions"},
        {2, "annulus", "concentric annulus: lambda_max = 0 and exact maximizer radius"},
        {3, "ellipse-centered", "hole at the maximum point: limit of lambda_max and eigenpair at x_eps"},
        {4, "offcenter", "hole away from the maximum point: x_eps -> y0 and lambda_max -> max(lambda1, lambda2)"},
        {5, "ellipse-centered", "maximizer distance scales like sqrt(-u0(x0)/lambda1) / sqrt|log eps|"},
        {6, "capacity", "two-term capacity expansion error is O(1/|log eps|^2)"},
        {7, "expansions", "near-hole expansion of u_eps and the L_eps profile"},
        {8, "expansions", "gradient and Hessian expansions, near-hole gradient lower bound"},
        {9, "counterexample", "punctured disk violates any bound -c1 exp(-c2 diam/inrad)"},
        {10, "properties", "randomized structural properties"},
    };
    return defs;
}

}  // namespace detail

/// Runs every criterion of `suite` ("all" runs every suite). Unknown names
/// raise ConfigError.
inline std::vector<CriterionResult> verify(const std::string& suite, const VerifyOptions& opt = {}) {
    const auto& names = suite_names();
    if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
        throw ConfigError("unknown suite '" + suite + "'");
    detail::Runner run(opt);
    std::unique_ptr<std::vector<detail::NearHoleFamily>> fams;
    std::vector<CriterionResult> out;
    for (const auto& def : detail::criterion_defs()) {
        if (suite != "all" && def.suite != suite) continue;
        CriterionResult r;
        r.id = def.id;
        r.suite = def.suite;
        r.title = def.title;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            switch (def.id) {
                case 1: detail::criterion_oracles(run, r); break;
                case 2: detail::criterion_annulus(run, r); break;
                case 3: detail::criterion_ellipse_limit(run, r); break;
                case 4: detail::criterion_offcenter(run, r); break;
                case 5: detail::criterion_scaling(run, r); break;
                case 6: detail::criterion_capacity(run, r); break;
                case 7:
                case 8:
                    if (!fams)
                        fams = std::make_unique<std::vector<detail::NearHoleFamily>>(
                            detail::near_hole_families(run, detail::kDecadeLadder));
                    if (def.id == 7)
                        detail::criterion_u_expansion(run, r, *fams);
                    else
                        detail::criterion_derivative_expansions(run, r, *fams);
                    break;
                case 9: detail::criterion_counterexample(run, r); break;
                case 10: detail::criterion_properties(run, r); break;
            }
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

inline bool all_passed(const std::vector<CriterionResult>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const CriterionResult& r) { return r.passed(); });
}

namespace detail {

inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace detail

inline nlohmann::json to_json(const std::vector<CriterionResult>& rs, const std::string& suite,
                              const VerifyOptions& opt) {
    nlohmann::json j;
    j["suite"] = suite;
    j["seed"] = opt.seed;
    j["passed"] = all_passed(rs);
    j["criteria"] = nlohmann::json::array();
    for (const auto& r : rs) {
        nlohmann::json c;
        c["id"] = r.id;
        c["suite"] = r.suite;
        c["title"] = r.title;
        c["passed"] = r.passed();
        c["seconds"] = r.seconds;
        if (!r.error.empty()) c["error"] = r.error;
        c["checks"] = nlohmann::json::array();
        for (const auto& k : r.checks)
            c["checks"].push_back({{"label", k.label},
                                   {"measured", detail::number_or_null(k.measured)},
                                   {"threshold", k.threshold},
                                   {"relation", k.relation},
                                   {"passed", k.passed},
                                   {"informational", k.informational}});
        c["notes"] = r.notes;
        j["criteria"].push_back(std::move(c));
    }
    return j;
}

/// One line: verdict, id, suite, title and the first failing (or last) check.
inline std::string summary_line(const CriterionResult& r) {
    std::string s = std::string(r.passed() ? "PASS" : "FAIL") + "  [" + std::to_string(r.id) + "] " + r.suite +
                    ": " + r.title;
    if (!r.error.empty()) return s + " | error: " + r.error;
    const Check* shown = nullptr;
    for (const auto& c : r.checks)
        if (!c.passed && !c.informational) {
            shown = &c;
            break;
        }
    if (!shown && !r.checks.empty()) shown = &r.checks.back();
    if (shown)
        s += " | " + shown->label + " = " + format_double(shown->measured) + " (" + shown->relation + " " +
             format_double(shown->threshold) + ")";
    return s;
}

inline std::string detail_text(const CriterionResult& r) {
    std::string s;
    for (const auto& c : r.checks)
        s += std::string("    ") + (c.passed ? "ok  " : (c.informational ? "info" : "FAIL")) + " " + c.label + " = " +
             format_double(c.measured) + " (" + c.relation + " " + format_double(c.threshold) + ")\n";
    for (const auto& n : r.notes) s += "    - " + n + "\n";
    return s;
}

}  // namespace torsion_gap

#endif  // TORSION_GAP_VERIFY_HPP
