#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "torsion_gap/asymptotics.hpp"
#include "torsion_gap/exact_solutions.hpp"

using namespace torsion_gap;

namespace {

AsymptoticInputs disk_inputs(double eps) {
    AsymptoticInputs in;
    in.u0_x0 = 0.25;
    in.hess_y0.lambda1 = in.hess_y0.lambda2 = -0.5;
    in.eps = eps;
    in.diameter = 2.0;
    return in;
}

AsymptoticInputs ellipse_inputs(double eps, Point x0 = Point::Zero()) {
    AsymptoticInputs in;
    in.x0 = x0;
    in.u0_x0 = ellipse_torsion(2, 1, x0);
    in.grad_u0_x0 = ellipse_torsion_gradient(2, 1, x0);
    in.hess_y0.lambda1 = -0.2;
    in.hess_y0.lambda2 = -0.8;
    in.eps = eps;
    in.diameter = 4.0;
    return in;
}

}  // namespace

TEST(MakeInputs, EllipseAndDisk) {
    const TorsionSolution e = solve_torsion(Domain::ellipse(2, 1));
    const AsymptoticInputs in = make_inputs(e, Point(0.5, 0), 1e-3);
    EXPECT_NEAR(in.u0_x0, ellipse_torsion(2, 1, Point(0.5, 0)), 1e-9);
    EXPECT_LT(in.y0.norm(), 1e-9);
    EXPECT_NEAR(in.hess_y0.lambda1, -0.2, 1e-8);
    EXPECT_NEAR(in.hess_y0.lambda2, -0.8, 1e-8);
    EXPECT_NEAR(std::abs(in.hess_y0.v1.x()), 1.0, 1e-8);
    EXPECT_FALSE(in.hole_at_maximum());
    EXPECT_NEAR(in.diameter, 4.0, 1e-9);

    const TorsionSolution d = solve_torsion(Domain::disk(1.0));
    const AsymptoticInputs din = make_inputs(d, Point(0.5, 0), 1e-3);
    EXPECT_NEAR(din.h_x0x0, -std::log(0.75) / kTwoPi, 1e-12);

    const TorsionSolution p = solve_torsion_punctured(PuncturedDomain(Domain::disk(1.0), Point::Zero(), 0.1));
    EXPECT_THROW(make_inputs(p, Point::Zero(), 0.1), ConfigError);
}

TEST(AsymptoticInputs, ValidateRejectsWrongTrace) {
    AsymptoticInputs in = ellipse_inputs(1e-3);
    in.hess_y0.lambda2 = -0.7;
    EXPECT_THROW(in.validate(), ConfigError);
}

TEST(PredictCapacity, ConcentricIsExact) {
    AsymptoticInputs in = disk_inputs(0.01);
    const auto green = [](const Point& x) { return disk_green(1.0, x, Point::Zero()); };
    EXPECT_NEAR(predict_capacity(in, green, Point(0.1, 0)), 0.5, 1e-14);
    EXPECT_NEAR(predict_capacity(in, green, Point(0, 1)), 0.0, 1e-15);
}

TEST(PredictU, Examples) {
    const AsymptoticInputs in = disk_inputs(0.01);
    const DiskTorsionField u0{1.0};
    EXPECT_NEAR(predict_u(in, u0, Point(0.1, 0)), 0.1225, 1e-12);
    // exact value 0.1225125; the gap comes from the eps^2 term of the annulus constant
    EXPECT_NEAR(annulus_torsion(0.01, 0.1) - predict_u(in, u0, Point(0.1, 0)), 1.25e-5, 1e-7);
    EXPECT_NEAR(predict_u(in, u0, Point(0, 0.01)), u0.value(Point(0, 0.01)) - 0.25, 1e-15);

    const AsymptoticInputs ein = ellipse_inputs(1e-4);
    const EllipseTorsionField e0{2.0, 1.0};
    const Point x(0.006, 0.008);
    EXPECT_NEAR(predict_u(ein, e0, x), e0.value(x) - 0.2, 1e-12);
}

TEST(PredictDerivatives, AnnulusClosedForm) {
    const double eps = 1e-3, r = 0.05;
    const AsymptoticInputs in = disk_inputs(eps);
    const DiskTorsionField u0{1.0};
    const AnnulusTorsionField exact(eps);
    const Point x(r, 0);
    EXPECT_NEAR(predict_gradient(in, u0, x).x(), 0.6988, 1e-4);
    EXPECT_LT((predict_gradient(in, u0, x) - exact.gradient(x)).norm(), 1e-3);
    const Matrix2 h = predict_hessian(in, u0, Point(0.03, 0.04));
    EXPECT_NEAR(h.trace(), -1.0, 1e-12);
    EXPECT_LT((h - exact.hessian(Point(0.03, 0.04))).cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_THROW(predict_gradient(in, u0, Point(5 * eps, 0)), RangeError);
    EXPECT_THROW(predict_hessian(in, u0, Point(0.5, 0)), RangeError);
}

TEST(PredictDerivatives, GradientMatchesFiniteDifferencesOfPredictU) {
    const AsymptoticInputs in = ellipse_inputs(1e-4, Point(0.2, 0.1));
    const EllipseTorsionField e0{2.0, 1.0};
    auto f = [&](const Point& p) { return predict_u(in, e0, p); };
    auto g = [&](const Point& p) { return predict_gradient(in, e0, p); };
    for (const Point x : {Point(0.25, 0.1), Point(0.2, 0.3), Point(0.1, 0.05)}) {
        EXPECT_LT((predict_gradient(in, e0, x) - oracle::central_gradient(f, x, 1e-6)).norm(), 1e-8);
        EXPECT_LT((predict_hessian(in, e0, x) - oracle::central_jacobian(g, x, 1e-6)).norm(), 1e-6);
    }
}

TEST(PredictXeps, Examples) {
    const XepsPrediction a = predict_xeps(disk_inputs(0.1));
    EXPECT_NEAR(a.radius, std::sqrt(0.5 / std::log(10.0)), 1e-12);
    EXPECT_TRUE(a.ring);

    const XepsPrediction e = predict_xeps(ellipse_inputs(1e-4));
    ASSERT_EQ(e.points.size(), 2u);
    EXPECT_NEAR(e.radius, 0.465990601784656, 1e-12);
    EXPECT_NEAR(std::abs(e.points[0].x()), 0.465990601784656, 1e-12);
    EXPECT_EQ(e.points[0].y(), 0.0);
    EXPECT_FALSE(e.ring);

    AsymptoticInputs off = ellipse_inputs(1e-4, Point(0.5, 0));
    const XepsPrediction o = predict_xeps(off);
    ASSERT_EQ(o.points.size(), 1u);
    EXPECT_EQ(o.points[0], Point::Zero());
}

TEST(PredictLimit, Examples) {
    EXPECT_EQ(predict_limit_lambda_max(-0.5, -0.5, true), 0.0);
    EXPECT_NEAR(predict_limit_lambda_max(-0.2, -0.8, true), -0.2, 1e-15);
    EXPECT_NEAR(predict_limit_lambda_max(-0.2, -0.8, false), -0.2, 1e-15);
    EXPECT_NEAR(predict_limit_lambda_max(ellipse_inputs(1e-4)), -0.2, 1e-15);
}

TEST(PredictHessianAtMax, Examples) {
    const Eigenpairs e = predict_hessian_at_max(ellipse_inputs(1e-4));
    EXPECT_NEAR(e.lambda1, -0.2, 1e-15);
    EXPECT_NEAR(e.lambda2, -0.6, 1e-15);
    const Eigenpairs d = predict_hessian_at_max(disk_inputs(1e-4));
    EXPECT_EQ(d.lambda1, -0.5);
    EXPECT_EQ(d.lambda2, 0.0);
    EXPECT_THROW(predict_hessian_at_max(ellipse_inputs(1e-4, Point(0.5, 0))), DomainError);
}

TEST(PredictHessianAtMax, MaxOfPairEqualsLimit) {
    std::mt19937_64 rng(oracle::kSeed);
    std::uniform_real_distribution<double> u(-1.0, -0.5);
    for (int i = 0; i < 100; ++i) {
        AsymptoticInputs in = disk_inputs(1e-3);
        in.hess_y0.lambda2 = u(rng);
        in.hess_y0.lambda1 = -1.0 - in.hess_y0.lambda2;
        const Eigenpairs p = predict_hessian_at_max(in);
        EXPECT_NEAR(std::max(p.lambda1, p.lambda2), predict_limit_lambda_max(in), 1e-15);
    }
}

TEST(PredictHessianAtMax, TraceConsistentVariant) {
    const Eigenpairs e = predict_hessian_at_max_consistent(ellipse_inputs(1e-4));
    EXPECT_NEAR(e.lambda1, -0.4, 1e-15);
    EXPECT_NEAR(e.lambda2, -0.6, 1e-15);
    EXPECT_NEAR(e.lambda1 + e.lambda2, -1.0, 1e-15);
    const Eigenpairs d = predict_hessian_at_max_consistent(disk_inputs(1e-4));
    EXPECT_EQ(d.lambda1, 0.0);
    EXPECT_EQ(d.lambda2, -1.0);

    // the same pair as the closed-form annulus Hessian at its maximizer
    const double eps = 1e-6;
    const AnnulusTorsionField exact(eps);
    const Eigenpairs ex = eigenpairs(exact.hessian(Point(exact.radial.max_radius(), 0)));
    EXPECT_NEAR(ex.lambda1, d.lambda1, 1e-12);
    EXPECT_NEAR(ex.lambda2, d.lambda2, 1e-12);
}

TEST(ConvexBoundRhs, Examples) {
    EXPECT_NEAR(theorem_a_rhs(1, 1, Domain::disk(1.0)), -std::exp(-2.0), 1e-12);
    EXPECT_NEAR(theorem_a_rhs(1, 1, PuncturedDomain(Domain::disk(1.0), Point::Zero(), 0.1)), -std::exp(-2 / 0.45),
                1e-9);
    EXPECT_THROW(theorem_a_rhs(0, 1, 2.0), ConfigError);
}
