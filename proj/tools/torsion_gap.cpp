// torsion-gap: solve, sweep and verify from the command line.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 solver failure.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "torsion_gap/torsion_gap.hpp"

namespace tg = torsion_gap;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kSolverFailed = 3 };

// The flag value (0 = hardware concurrency), capped by TORSION_GAP_THREADS.
unsigned resolve_threads(unsigned requested) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TORSION_GAP_THREADS")) {
        const std::string s(env);
        if (!s.empty()) {
            const double cap = tg::parse_double(s);
            if (!(cap >= 1.0) || cap != static_cast<unsigned>(cap))
                throw tg::ConfigError("TORSION_GAP_THREADS must be a positive integer");
            n = std::min(n, static_cast<unsigned>(cap));
        }
    }
    return n;
}

nlohmann::json point_json(const tg::Point& p) { return {p.x(), p.y()}; }

nlohmann::json eig_json(const tg::Eigenpairs& e) {
    return {{"lambda1", e.lambda1}, {"lambda2", e.lambda2}, {"v1", point_json(e.v1)}, {"v2", point_json(e.v2)}};
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw tg::IoError("cannot open '" + path + "' for writing");
    os << j.dump(2) << '\n';
    if (!os) throw tg::IoError("write to '" + path + "' failed");
}

struct SolverFlags {
    std::size_t outer_sources = 0;
    std::size_t hole_sources = 16;
    double tolerance = 0.0;

    void add(CLI::App* app) {
        app->add_option("--outer-sources", outer_sources, "outer MFS sources (0: 64 for disks, 128 otherwise)");
        app->add_option("--hole-sources", hole_sources, "MFS sources inside the hole");
        app->add_option("--tolerance", tolerance, "boundary residual target (0: relative 1e-8)");
    }

    tg::MfsConfig config() const {
        tg::MfsConfig c;
        c.n_outer_sources = outer_sources;
        c.n_hole_sources = hole_sources;
        c.tolerance = tolerance;
        c.validate();
        return c;
    }
};

struct SolveArgs {
    std::string domain;
    std::string hole;
    std::string out;
    unsigned threads = 0;
    SolverFlags solver;
};

int run_solve(const SolveArgs& a) {
    const tg::Domain d = tg::parse_domain(a.domain);
    const tg::MfsConfig cfg = a.solver.config();
    tg::CriticalSearchConfig crit;
    crit.threads = resolve_threads(a.threads);

    const tg::TorsionSolution u0 = tg::solve_torsion(d, cfg);
    u0.require_converged();

    nlohmann::json j;
    j["domain"] = tg::format_domain(d);
    std::optional<tg::TorsionSolution> u;
    tg::SpectralPrediction pred;
    if (!a.hole.empty()) {
        const tg::HoleSpec h = tg::parse_hole(a.hole);
        if (h.eps < tg::kMinHoleRadius) throw tg::ConfigError("eps must be at least 1e-9");
        const tg::AsymptoticInputs in = tg::make_inputs(u0, h.center, h.eps, cfg);
        pred = tg::spectral_prediction(in);
        u.emplace(tg::solve_torsion_punctured(tg::PuncturedDomain(d, h.center, h.eps), cfg));
        j["hole"] = tg::format_hole(h);
        j["u0_x0"] = in.u0_x0;
        j["y0"] = point_json(in.y0);
        j["hessian_y0"] = eig_json(in.hess_y0);
    } else {
        u.emplace(u0);
        pred.lambda_limit = tg::kNaN;
        pred.xeps_radius = tg::kNaN;
    }

    const tg::SpectralReport r = tg::spectral_report(*u, pred, crit);
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
    j["eps"] = a.hole.empty() ? nlohmann::json() : nlohmann::json(r.eps);
    j["x_eps"] = point_json(r.x_eps);
    j["u_max"] = r.u_max;
    j["hessian_at_max"] = eig_json(r.eig);
    j["lambda_max"] = r.lambda_max;
    j["pred_lambda_limit"] = num(r.predicted_limit);
    j["pred_xeps_radius"] = num(r.predicted_xeps_radius);
    j["pred_xeps"] = nlohmann::json::array();
    for (const auto& p : r.predicted_xeps) j["pred_xeps"].push_back(point_json(p));
    j["boundary_residual"] = r.boundary_residual;
    j["gradient_residual"] = r.gradient_residual;
    j["diam_inrad"] = r.diam_inrad;
    j["converged"] = u->converged();
    j["maxima"] = nlohmann::json::array();
    for (const auto& m : r.maxima)
        j["maxima"].push_back({{"location", point_json(m.location)}, {"value", m.value}, {"kind", tg::to_string(m.kind)}});

    std::cout << "x_eps       " << tg::format_point(r.x_eps) << '\n'
              << "u_max       " << tg::format_double(r.u_max) << '\n'
              << "lambda1,2   " << tg::format_double(r.eig.lambda1) << ", " << tg::format_double(r.eig.lambda2) << '\n'
              << "lambda_max  " << tg::format_double(r.lambda_max) << '\n'
              << "predicted   " << tg::format_double(r.predicted_limit) << '\n'
              << "residuals   " << tg::format_double(r.boundary_residual) << " (boundary), "
              << tg::format_double(r.gradient_residual) << " (gradient)\n"
              << "diam/inrad  " << tg::format_double(r.diam_inrad) << '\n';
    if (!a.out.empty()) write_json(j, a.out);
    if (!u->converged()) {
        std::cerr << "torsion-gap: solver did not reach its tolerance (certificate "
                  << tg::format_double(u->certificate()) << ")\n";
        return kSolverFailed;
    }
    return kOk;
}

struct SweepArgs {
    std::string domain;
    std::string hole_center = "0,0";
    std::string eps;
    std::string csv;
    std::string json;
    unsigned threads = 0;
    SolverFlags solver;
};

int run_sweep(const SweepArgs& a) {
    tg::SweepConfig cfg;
    cfg.domain = tg::parse_domain(a.domain);
    cfg.hole_center = tg::parse_point(a.hole_center);
    cfg.eps = tg::parse_eps_ladder(a.eps);
    cfg.solver = a.solver.config();
    cfg.threads = resolve_threads(a.threads);
    const auto rows = tg::sweep(cfg);
    if (!a.csv.empty()) tg::emit(rows, tg::EmitFormat::csv, a.csv);
    if (!a.json.empty()) tg::emit(rows, tg::EmitFormat::json, a.json);
    if (a.csv.empty() && a.json.empty()) tg::write_csv(std::cout, rows);
    int code = kOk;
    for (const auto& r : rows)
        if (!r.ok()) {
            std::cerr << "torsion-gap: eps=" << tg::format_double(r.eps) << ": " << r.status << '\n';
            code = kSolverFailed;
        }
    return code;
}

struct VerifyArgs {
    std::string suite = "all";
    std::string json;
    unsigned threads = 0;
    std::uint64_t seed = 20240611;
    double c1 = 1.0;
    double c2 = 1.0;
    bool verbose = false;
};

int run_verify(const VerifyArgs& a) {
    tg::VerifyOptions opt;
    opt.threads = resolve_threads(a.threads);
    opt.seed = a.seed;
    opt.c1 = a.c1;
    opt.c2 = a.c2;
    const auto results = tg::verify(a.suite, opt);
    for (const auto& r : results) {
        std::cout << tg::summary_line(r) << '\n';
        if (a.verbose || !r.passed()) std::cout << tg::detail_text(r);
    }
    if (!a.json.empty()) write_json(tg::to_json(results, a.suite, opt), a.json);
    return tg::all_passed(results) ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Torsion function gap near small holes"};
    app.set_config("--config", "", "TOML file with the same keys as the flags");
    app.require_subcommand(1);

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "solve one punctured domain and report its maximizer");
    s->add_option("--domain", solve.domain, "disk:R=1 | ellipse:a=2,b=1 | star:c0=1,c2=0.1,s3=0.05")->required();
    s->add_option("--hole", solve.hole, "x=..,y=..,eps=.. (omit to solve the unpunctured domain)");
    s->add_option("--out", solve.out, "write a JSON report");
    s->add_option("--threads", solve.threads, "worker threads (0: all cores)");
    solve.solver.add(s);

    SweepArgs sw;
    auto* w = app.add_subcommand("sweep", "solve a ladder of hole radii");
    w->add_option("--domain", sw.domain, "domain literal")->required();
    w->add_option("--hole-center", sw.hole_center, "x,y")->capture_default_str();
    w->add_option("--eps", sw.eps, "1e-2..1e-8/2 (rungs per decade) or a comma list")->required();
    w->add_option("--csv", sw.csv, "write rows as CSV");
    w->add_option("--json", sw.json, "write rows as JSON");
    w->add_option("--threads", sw.threads, "worker threads (0: all cores)");
    sw.solver.add(w);

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "run acceptance suites");
    std::vector<std::string> suites = tg::suite_names();
    suites.push_back("all");
    v->add_option("--suite", ver.suite, "suite name")->check(CLI::IsMember(suites))->capture_default_str();
    v->add_option("--json", ver.json, "write a JSON report");
    v->add_option("--threads", ver.threads, "worker threads (0: all cores)");
    v->add_option("--seed", ver.seed, "seed for randomized checks")->capture_default_str();
    v->add_option("--c1", ver.c1, "c1 in the bound -c1 exp(-c2 diam/inrad)")->capture_default_str();
    v->add_option("--c2", ver.c2, "c2 in the bound -c1 exp(-c2 diam/inrad)")->capture_default_str();
    v->add_flag("-v,--verbose", ver.verbose, "print every check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*s) return run_solve(solve);
        if (*w) return run_sweep(sw);
        return run_verify(ver);
    } catch (const tg::ConfigError& e) {
        std::cerr << "torsion-gap: " << e.what() << '\n';
        return kUsage;
    } catch (const tg::DomainError& e) {
        std::cerr << "torsion-gap: " << e.what() << '\n';
        return kUsage;
    } catch (const tg::IoError& e) {
        std::cerr << "torsion-gap: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "torsion-gap: solver failure: " << e.what() << '\n';
        return kSolverFailed;
    }
}
