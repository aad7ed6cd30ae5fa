#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "torsion_gap/exact_solutions.hpp"
#include "torsion_gap/torsion_core.hpp"

using namespace torsion_gap;

TEST(SolveTorsion, DiskMatchesClosedForm) {
    const auto d = Domain::disk(1.0);
    const TorsionSolution u = solve_torsion(d);
    EXPECT_TRUE(u.converged());
    std::mt19937_64 rng(oracle::kSeed);
    for (const auto& x : oracle::interior_points(d, 100, 0.99, rng)) {
        EXPECT_NEAR(u.value(x), disk_torsion(1, x), 1e-10);
        EXPECT_LT((u.gradient(x) - disk_torsion_gradient(1, x)).norm(), 1e-9);
        EXPECT_LT((u.hessian(x) - disk_torsion_hessian(1, x)).norm(), 1e-8);
    }
}

TEST(SolveTorsion, EllipseCenterValue) {
    const TorsionSolution u = solve_torsion(Domain::ellipse(2, 1));
    EXPECT_NEAR(u.value(Point::Zero()), 0.4, 1e-9);
    EXPECT_NEAR(u.value(Point(1.2, 0.3)), ellipse_torsion(2, 1, Point(1.2, 0.3)), 1e-9);
}

TEST(SolveTorsion, StarIsPositiveAndVanishesOnBoundary) {
    const auto d = Domain::star({1.0, 0.0, 0.1, 0.0, 0.03}, {0.0, 0.0, 0.0, 0.05});
    const TorsionSolution u = solve_torsion(d);
    ASSERT_TRUE(u.converged());
    for (int k = 0; k < 64; ++k) {
        const double t = kTwoPi * (k + 0.37) / 64;
        EXPECT_NEAR(u.value(d.boundary_point(t)), 0.0, 1e-8);
    }
    std::mt19937_64 rng(oracle::kSeed);
    for (const auto& x : oracle::interior_points(d, 50, 0.95, rng)) {
        EXPECT_GT(u.value(x), 0.0);
        auto f = [&](const Point& p) { return u.value(p); };
        EXPECT_NEAR(oracle::five_point_laplacian(f, x, 1e-3), -1.0, 1e-5);
    }
}

TEST(SolveTorsionPunctured, AnnulusMatchesClosedForm) {
    const PuncturedDomain pd(Domain::disk(1.0), Point::Zero(), 0.1);
    const TorsionSolution u = solve_torsion_punctured(pd);
    for (double r : {0.2, 0.46, 0.9})
        for (double t : {0.0, 1.3, 4.0})
            EXPECT_NEAR(u.value(r * Point(std::cos(t), std::sin(t))), annulus_torsion(0.1, r), 1e-9);
    EXPECT_TRUE(u.has_hole());
}

TEST(SolveTorsionPunctured, SmallNearHole) {
    const double eps = 1e-4;
    const TorsionSolution u = solve_torsion_punctured(PuncturedDomain(Domain::ellipse(2, 1), Point::Zero(), eps));
    // leading order gives u0(x0) ln 2 / |log eps| = 0.0301 at two hole radii
    const double lead = 0.4 * std::log(2.0) / std::abs(std::log(eps));
    EXPECT_NEAR(u.value(Point(2 * eps, 0)), lead, 0.05 * lead);
    EXPECT_LE(std::abs(u.value(Point(2 * eps, 0))), 0.035);
}

TEST(SolveTorsionPunctured, RejectsHolesBelowGuardrail) {
    EXPECT_THROW(solve_torsion_punctured(PuncturedDomain(Domain::disk(1.0), Point::Zero(), 1e-10)), ConfigError);
}

TEST(Eigenpairs, OrderedAndOrthonormal) {
    Matrix2 m;
    m << -0.3, 0.1, 0.1, -0.7;
    const Eigenpairs e = eigenpairs(m);
    EXPECT_GE(e.lambda1, e.lambda2);
    EXPECT_NEAR(e.lambda1 + e.lambda2, -1.0, 1e-15);
    EXPECT_NEAR(e.v1.dot(e.v2), 0.0, 1e-15);
    EXPECT_LT((m * e.v1 - e.lambda1 * e.v1).norm(), 1e-14);
}

TEST(CriticalPoints, DiskSingleMaximum) {
    const TorsionSolution u = solve_torsion(Domain::disk(1.0));
    const auto pts = find_critical_points(u);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_LT(pts[0].location.norm(), 1e-9);
    EXPECT_EQ(pts[0].kind, CriticalKind::maximum);
    EXPECT_NEAR(pts[0].eig.lambda1, -0.5, 1e-9);
    EXPECT_NEAR(pts[0].eig.lambda2, -0.5, 1e-9);
}

TEST(CriticalPoints, AnnulusRingIsDegenerate) {
    const double eps = 0.1;
    const TorsionSolution u = solve_torsion_punctured(PuncturedDomain(Domain::disk(1.0), Point::Zero(), eps));
    const auto pts = find_critical_points(u);
    ASSERT_FALSE(pts.empty());
    const double r_star = RadialTorsion(eps).max_radius();
    for (const auto& c : pts) {
        EXPECT_NEAR(c.location.norm(), r_star, 1e-8);
        EXPECT_EQ(c.kind, CriticalKind::degenerate);
        EXPECT_NEAR(c.eig.lambda1, 0.0, 1e-7);
        EXPECT_NEAR(c.eig.lambda2, -1.0, 1e-7);
    }
    const SpectralReport r = spectral_report(u, {});
    EXPECT_NEAR(r.x_eps.x(), r_star, 1e-8);
    EXPECT_NEAR(r.x_eps.y(), 0.0, 1e-8);
}

TEST(CriticalPoints, EllipseSymmetricPairOnAxis) {
    const double eps = 1e-6;
    const TorsionSolution u = solve_torsion_punctured(PuncturedDomain(Domain::ellipse(2, 1), Point::Zero(), eps));
    const SpectralReport r = spectral_report(u, {});
    ASSERT_EQ(r.maxima.size(), 2u);
    for (const auto& m : r.maxima) {
        EXPECT_NEAR(std::abs(m.location.x()), 0.3805, 0.25 * 0.3805);
        EXPECT_LE(std::abs(m.location.y()), 1e-6);
    }
    // equal values, so the lexicographically smaller point wins
    EXPECT_LT(r.x_eps.x(), 0.0);
    EXPECT_NEAR(r.eig.lambda1 + r.eig.lambda2, -1.0, 1e-6);
}

TEST(SelectMaximum, ReportsBestCandidateWhenNoMaximum) {
    CriticalPoint saddle;
    saddle.location = Point(0.1, 0.2);
    saddle.kind = CriticalKind::saddle;
    saddle.eig.lambda1 = 0.3;
    saddle.eig.lambda2 = -1.3;
    try {
        select_maximum({saddle}, Point::Zero(), 1e-12);
        FAIL() << "expected SolverError";
    } catch (const SolverError& e) {
        EXPECT_NE(std::string(e.what()).find("maximum not found"), std::string::npos);
    }
}

TEST(SelectMaximum, RingRepresentativeJustBelowAxisCountsAsAngleZero) {
    CriticalPoint a, b;
    a.kind = b.kind = CriticalKind::degenerate;
    a.eig.lambda2 = b.eig.lambda2 = -1.0;
    a.location = Point(0.5, -1e-9);
    b.location = Point(0.0, 0.5);
    EXPECT_EQ(select_maximum({b, a}, Point::Zero(), 1e-9).location, a.location);
}

TEST(SpectralReport, AnnulusLambdaMaxIsZero) {
    const TorsionSolution u = solve_torsion_punctured(PuncturedDomain(Domain::disk(1.0), Point::Zero(), 0.01));
    const SpectralReport r = spectral_report(u, {});
    EXPECT_NEAR(r.lambda_max, 0.0, 1e-7);
    EXPECT_NEAR(r.diam_inrad, 2.0 / 0.495, 1e-6);
}

TEST(KEpsilon, DiskExamples) {
    const DiskTorsionField u0{1.0};
    EXPECT_NEAR(k_epsilon(u0, Point::Zero(), 0.1, Point(2, 0)), -0.245625, 1e-15);
    const Point w(std::cos(0.4), std::sin(0.4));
    EXPECT_NEAR(k_epsilon(u0, Point::Zero(), 0.1, w), -u0.value(0.1 * w), 1e-16);
    EXPECT_NEAR(k_epsilon(u0, Point::Zero(), 0.1, Point(1e8, 0)), -0.245, 1e-12);
    EXPECT_THROW(k_epsilon(u0, Point::Zero(), 0.1, Point(0.5, 0)), DomainError);
}

TEST(KEpsilon, DerivativesMatchFiniteDifferences) {
    const EllipseTorsionField u0{2.0, 1.0};
    const Point x0(0.3, -0.1);
    const double eps = 0.05;
    auto k = [&](const Point& w) { return k_epsilon(u0, x0, eps, w); };
    auto g = [&](const Point& w) { return k_epsilon_gradient(u0, x0, eps, w); };
    for (const Point w : {Point(1.5, 0.2), Point(-3, 4), Point(0.2, -1.7)}) {
        EXPECT_LT((k_epsilon_gradient(u0, x0, eps, w) - oracle::central_gradient(k, w, 1e-6)).norm(), 1e-9);
        EXPECT_LT((k_epsilon_hessian(u0, x0, eps, w) - oracle::central_jacobian(g, w, 1e-6)).norm(), 1e-8);
    }
}

TEST(LEpsilon, AnnulusProfile) {
    const double eps = 0.01;
    const TorsionSolution u = solve_torsion_punctured(PuncturedDomain(Domain::disk(1.0), Point::Zero(), eps));
    const DiskTorsionField u0{1.0};
    EXPECT_NEAR(l_epsilon_numeric(u, u0, Point::Zero(), eps, Point(10, 0)), 0.125, 2e-3);
    EXPECT_NEAR(l_epsilon_numeric(u, u0, Point::Zero(), eps, Point(0, 1)), 0.0, 1e-9);
}
