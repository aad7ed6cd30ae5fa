#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "torsion_gap/sweep.hpp"

using namespace torsion_gap;

TEST(EpsLadder, ParsesRanges) {
    EXPECT_EQ(parse_eps_ladder("1e-2..1e-4/1"), (std::vector<double>{1e-2, 1e-3, 1e-4}));
    const auto two = parse_eps_ladder("1e-2..1e-8/2-per-decade");
    ASSERT_EQ(two.size(), 13u);
    EXPECT_EQ(two.front(), 1e-2);
    EXPECT_EQ(two.back(), 1e-8);
    EXPECT_NEAR(two[1], std::pow(10.0, -2.5), 1e-17);
    EXPECT_EQ(parse_eps_ladder("0.1,1e-3"), (std::vector<double>{0.1, 1e-3}));
    EXPECT_EQ(parse_eps_ladder(format_eps_ladder(two)), two);
    EXPECT_THROW(parse_eps_ladder("1e-4..1e-2/1"), ConfigError);
    EXPECT_THROW(parse_eps_ladder("1e-2..1e-4/1.5"), ConfigError);
    EXPECT_THROW(parse_eps_ladder("1e-2..3e-4/1"), ConfigError);
}

TEST(SweepConfig, Validation) {
    SweepConfig cfg;
    cfg.eps = {1e-2, 1e-3};
    EXPECT_NO_THROW(cfg.validate());
    cfg.eps = {1e-3, 1e-2};
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.eps = {0.3};
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.eps = {1e-10};
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.eps = {1e-3};
    cfg.hole_center = Point(2, 0);
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Sweep, AnnulusLambdaMaxVanishes) {
    SweepConfig cfg;
    cfg.eps = {1e-2, 1e-3, 1e-4};
    const auto rows = sweep(cfg);
    ASSERT_EQ(rows.size(), 3u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].eps, cfg.eps[i]);
        EXPECT_TRUE(rows[i].ok()) << rows[i].status;
        EXPECT_NEAR(rows[i].lambda_max, 0.0, 1e-7);
        EXPECT_NEAR(rows[i].pred_lambda_limit, 0.0, 1e-12);
    }
}

TEST(Sweep, OffCenterHoleMaximizerMovesToCenter) {
    SweepConfig cfg;
    cfg.hole_center = Point(0.5, 0);
    cfg.eps = {1e-2, 1e-4, 1e-6};
    const auto rows = sweep(cfg);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].x_eps.norm(), rows[i - 1].x_eps.norm());
    EXPECT_NEAR(rows[0].pred_xeps_radius, 0.5, 1e-9);
}

TEST(Sweep, ParallelMatchesSequential) {
    SweepConfig cfg;
    cfg.domain = Domain::ellipse(2, 1);
    cfg.eps = {1e-2, 1e-3, 1e-4};
    cfg.threads = 1;
    const auto seq = sweep(cfg);
    cfg.threads = 3;
    const auto par = sweep(cfg);
    std::ostringstream a, b;
    write_csv(a, seq);
    write_csv(b, par);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Emit, HeaderOnlyForNoRows) {
    std::ostringstream os;
    write_csv(os, {});
    EXPECT_EQ(os.str(), std::string(kCsvHeader) + "\n");
}

TEST(Emit, CsvAndJsonRoundTrip) {
    SweepRow r;
    r.eps = 0.1;
    r.x_eps = Point(0.4636548, -4.9e-11);
    r.lambda1 = 1.0 / 3.0;
    r.lambda2 = -1.0;
    r.lambda_max = 1e-12;
    r.pred_lambda_limit = 0.0;
    r.pred_xeps_radius = 0.46599;
    r.boundary_residual = 3e-13;
    r.gradient_residual = kNaN;
    r.diam_inrad = 2.0 / 0.45;
    r.status = "unconverged";

    std::stringstream csv;
    write_csv(csv, {r});
    const auto back = read_csv(csv);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].lambda1, r.lambda1);
    EXPECT_EQ(back[0].x_eps, r.x_eps);
    EXPECT_TRUE(std::isnan(back[0].gradient_residual));
    EXPECT_NEAR(back[0].lambda_max, 0.0, 1e-7);

    const auto j = rows_to_json({r});
    EXPECT_TRUE(j[0]["gradient_residual"].is_null());
    const auto jb = rows_from_json(nlohmann::json::parse(j.dump()));
    ASSERT_EQ(jb.size(), 1u);
    EXPECT_EQ(jb[0].diam_inrad, r.diam_inrad);
    EXPECT_EQ(jb[0].status, "unconverged");
}

TEST(Emit, UnwritablePath) {
    EXPECT_THROW(emit({}, EmitFormat::csv, "/nonexistent-dir/out.csv"), IoError);
    const auto path = std::filesystem::temp_directory_path() / "torsion_gap_emit.json";
    emit({}, EmitFormat::json, path.string());
    std::ifstream is(path);
    EXPECT_EQ(nlohmann::json::parse(is), nlohmann::json::array());
    std::filesystem::remove(path);
}
