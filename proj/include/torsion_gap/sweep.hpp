#ifndef TORSION_GAP_SWEEP_HPP
#define TORSION_GAP_SWEEP_HPP

// Eps sweeps over a fixed domain and hole center, and their CSV/JSON output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>  // vendored nlohmann::json

#include "torsion_gap/asymptotics.hpp"
#include "torsion_gap/errors.hpp"
#include "torsion_gap/geometry.hpp"
#include "torsion_gap/harmonic_mfs.hpp"
#include "torsion_gap/literals.hpp"
#include "torsion_gap/torsion_core.hpp"

namespace torsion_gap {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline Point parse_point(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
        throw ConfigError("point literal needs 'x,y': '" + std::string(text) + "'");
    return Point(parse_double(text.substr(0, comma)), parse_double(text.substr(comma + 1)));
}

inline std::string format_point(const Point& p) { return format_double(p.x()) + "," + format_double(p.y()); }

namespace detail {

// Rounds to 15 significant digits so ladder rungs print as clean decimals.
inline double clean_decimal(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return parse_double(buf);
}

}  // namespace detail

/// "1e-2..1e-8/2" (also "/2-per-decade"): geometric ladder from the first to
/// the last value with the given number of rungs per decade. Otherwise a comma
/// separated list.
inline std::vector<double> parse_eps_ladder(std::string_view text) {
    std::vector<double> out;
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        while (!text.empty()) {
            const auto comma = text.find(',');
            out.push_back(parse_double(text.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            text.remove_prefix(comma + 1);
        }
        if (out.empty()) throw ConfigError("empty eps list");
        return out;
    }
    const double hi = parse_double(text.substr(0, dots));
    std::string_view rest = text.substr(dots + 2);
    double per_decade = 1.0;
    if (const auto slash = rest.find('/'); slash != std::string_view::npos) {
        std::string_view k = rest.substr(slash + 1);
        if (const auto suffix = k.find("-per-decade"); suffix != std::string_view::npos) {
            if (suffix + 11 != k.size()) throw ConfigError("malformed eps ladder '" + std::string(text) + "'");
            k = k.substr(0, suffix);
        }
        per_decade = parse_double(k);
        rest = rest.substr(0, slash);
    }
    const double lo = parse_double(rest);
    if (!(hi > lo && lo > 0.0)) throw ConfigError("eps ladder must run from larger to smaller positive values");
    if (!(per_decade >= 1.0) || per_decade != std::floor(per_decade))
        throw ConfigError("rungs per decade must be a positive integer");
    const double steps = per_decade * std::log10(hi / lo);
    const long n = std::lround(steps);
    if (std::abs(steps - static_cast<double>(n)) > 1e-9)
        throw ConfigError("eps ladder end points are not a whole number of steps apart");
    for (long i = 0; i <= n; ++i)
        out.push_back(detail::clean_decimal(std::pow(10.0, std::log10(hi) - static_cast<double>(i) / per_decade)));
    return out;
}

inline std::string format_eps_ladder(const std::vector<double>& eps) {
    std::string s;
    for (std::size_t i = 0; i < eps.size(); ++i) s += (i ? "," : "") + format_double(eps[i]);
    return s;
}

struct SweepConfig {
    Domain domain = Domain::disk(1.0);
    Point hole_center = Point::Zero();
    std::vector<double> eps;
    MfsConfig solver;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const {
        solver.validate();
        if (eps.empty()) throw ConfigError("sweep needs at least one eps");
        const double cap = 0.2 * inradius(domain);
        for (std::size_t i = 0; i < eps.size(); ++i) {
            if (eps[i] < kMinHoleRadius || eps[i] > cap)
                throw ConfigError("eps " + format_double(eps[i]) + " outside [1e-9, 0.2 inradius = " +
                                  format_double(cap) + "]");
            if (i > 0 && !(eps[i] < eps[i - 1])) throw ConfigError("eps values must be strictly decreasing");
        }
        if (!domain.contains(hole_center)) throw ConfigError("hole center outside the domain");
    }
};

struct SweepRow {
    double eps = kNaN;
    Point x_eps = Point(kNaN, kNaN);
    double lambda1 = kNaN;
    double lambda2 = kNaN;
    double lambda_max = kNaN;
    double pred_lambda_limit = kNaN;
    double pred_xeps_radius = kNaN;
    double boundary_residual = kNaN;
    double gradient_residual = kNaN;
    double diam_inrad = kNaN;
    std::string status = "ok";  // ok | unconverged | failed: <reason>

    bool ok() const { return status == "ok"; }
};

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

inline SweepRow sweep_row(const SweepConfig& cfg, const AsymptoticInputs& base_inputs, double eps) {
    SweepRow row;
    row.eps = eps;
    AsymptoticInputs in = base_inputs;
    in.eps = eps;
    const SpectralPrediction pred = spectral_prediction(in);
    row.pred_lambda_limit = pred.lambda_limit;
    row.pred_xeps_radius = pred.xeps_radius;
    try {
        const PuncturedDomain pd(cfg.domain, cfg.hole_center, eps);
        const TorsionSolution u = solve_torsion_punctured(pd, cfg.solver);
        CriticalSearchConfig crit;
        crit.threads = 1;
        const SpectralReport r = spectral_report(u, pred, crit);
        row.x_eps = r.x_eps;
        row.lambda1 = r.eig.lambda1;
        row.lambda2 = r.eig.lambda2;
        row.lambda_max = r.lambda_max;
        row.boundary_residual = r.boundary_residual;
        row.gradient_residual = r.gradient_residual;
        row.diam_inrad = r.diam_inrad;
        if (!u.converged()) row.status = "unconverged";
    } catch (const std::exception& e) {
        row.status = std::string("failed: ") + e.what();
    }
    return row;
}

/// One row per eps, computed independently by a worker pool and returned in
/// input order.
inline std::vector<SweepRow> sweep(const SweepConfig& cfg) {
    cfg.validate();
    const TorsionSolution u0 = solve_torsion(cfg.domain, cfg.solver);
    u0.require_converged();
    const AsymptoticInputs base = make_inputs(u0, cfg.hole_center, cfg.eps.front(), cfg.solver);

    std::vector<SweepRow> rows(cfg.eps.size());
    const unsigned n = worker_count(cfg.threads, rows.size());
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < n; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < rows.size(); i += n) rows[i] = sweep_row(cfg, base, cfg.eps[i]);
            });
    }
    return rows;
}

inline constexpr std::string_view kCsvHeader =
    "eps,xeps_x,xeps_y,lambda1,lambda2,lambda_max,pred_lambda_limit,pred_xeps_radius,boundary_residual,"
    "gradient_residual,diam_inrad";

namespace detail {

inline std::vector<double> row_values(const SweepRow& r) {
    return {r.eps,       r.x_eps.x(),         r.x_eps.y(),        r.lambda1,           r.lambda2,        r.lambda_max,
            r.pred_lambda_limit, r.pred_xeps_radius, r.boundary_residual, r.gradient_residual, r.diam_inrad};
}

inline SweepRow row_from_values(const std::vector<double>& v) {
    SweepRow r;
    r.eps = v[0];
    r.x_eps = Point(v[1], v[2]);
    r.lambda1 = v[3];
    r.lambda2 = v[4];
    r.lambda_max = v[5];
    r.pred_lambda_limit = v[6];
    r.pred_xeps_radius = v[7];
    r.boundary_residual = v[8];
    r.gradient_residual = v[9];
    r.diam_inrad = v[10];
    return r;
}

inline std::vector<std::string> csv_keys() {
    std::vector<std::string> keys;
    std::string_view h = kCsvHeader;
    while (!h.empty()) {
        const auto comma = h.find(',');
        keys.emplace_back(h.substr(0, comma));
        if (comma == std::string_view::npos) break;
        h.remove_prefix(comma + 1);
    }
    return keys;
}

inline std::string csv_field(double v) { return std::isnan(v) ? "nan" : format_double(v); }

inline double parse_csv_field(std::string_view s) {
    return s == "nan" ? kNaN : parse_double(s);
}

}  // namespace detail

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        const auto v = detail::row_values(r);
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << detail::csv_field(v[i]);
        os << '\n';
    }
}

inline std::vector<SweepRow> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw ConfigError("unexpected CSV header");
    std::vector<SweepRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> v;
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            v.push_back(detail::parse_csv_field(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (v.size() != 11) throw ConfigError("CSV row needs 11 fields");
        rows.push_back(detail::row_from_values(v));
    }
    return rows;
}

// NaN becomes null.
inline nlohmann::json rows_to_json(const std::vector<SweepRow>& rows) {
    const auto keys = detail::csv_keys();
    auto out = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json o;
        const auto v = detail::row_values(r);
        for (std::size_t i = 0; i < keys.size(); ++i) o[keys[i]] = std::isnan(v[i]) ? nlohmann::json() : nlohmann::json(v[i]);
        o["status"] = r.status;
        out.push_back(std::move(o));
    }
    return out;
}

inline std::vector<SweepRow> rows_from_json(const nlohmann::json& j) {
    const auto keys = detail::csv_keys();
    std::vector<SweepRow> rows;
    for (const auto& o : j) {
        std::vector<double> v;
        for (const auto& k : keys) v.push_back(o.at(k).is_null() ? kNaN : o.at(k).get<double>());
        SweepRow r = detail::row_from_values(v);
        r.status = o.at("status").get<std::string>();
        rows.push_back(std::move(r));
    }
    return rows;
}

enum class EmitFormat { csv, json };

inline void emit(const std::vector<SweepRow>& rows, EmitFormat format, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    if (format == EmitFormat::csv)
        write_csv(os, rows);
    else
        os << rows_to_json(rows).dump(2) << '\n';
    if (!os) throw IoError("write to '" + path + "' failed");
}

}  // namespace torsion_gap

#endif  // TORSION_GAP_SWEEP_HPP
