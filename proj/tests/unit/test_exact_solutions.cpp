#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "torsion_gap/exact_solutions.hpp"

using namespace torsion_gap;
using oracle::central_gradient;
using oracle::five_point_laplacian;

TEST(ExactSolutions, DiskTorsion) {
    EXPECT_DOUBLE_EQ(disk_torsion(1, Point(0, 0)), 0.25);
    EXPECT_DOUBLE_EQ(disk_torsion(1, Point(1, 0)), 0.0);
    const Matrix2 h = disk_torsion_hessian(1, Point(0, 0));
    EXPECT_DOUBLE_EQ(h(0, 0), -0.5);
    EXPECT_DOUBLE_EQ(h(1, 1), -0.5);
    EXPECT_DOUBLE_EQ(h.trace(), -1.0);
}

TEST(ExactSolutions, EllipseTorsion) {
    EXPECT_NEAR(ellipse_torsion(2, 1, Point(0, 0)), 0.4, 1e-16);
    const Matrix2 h = ellipse_torsion_hessian(2, 1, Point(0, 0));
    EXPECT_NEAR(h(0, 0), -0.2, 1e-16);
    EXPECT_NEAR(h(1, 1), -0.8, 1e-16);
    EXPECT_EQ(h(0, 1), 0.0);
    EXPECT_NEAR(ellipse_torsion(2, 1, Point(2, 0)), 0.0, 1e-16);
    for (const Point x : {Point(0.1, 0.2), Point(-0.5, 0.3)})
        EXPECT_NEAR(ellipse_torsion(1, 1, x), disk_torsion(1, x), 1e-16);
}

TEST(ExactSolutions, AnnulusTorsion) {
    EXPECT_NEAR(annulus_torsion(0.1, 1.0), 0.0, 1e-16);
    const RadialTorsion rt(0.1);
    // mpmath: A = 0.10748788427105, r* = 0.46365479458549, u(r*) = 0.11363925975594
    EXPECT_NEAR(rt.A, 0.107487884271055, 1e-14);
    EXPECT_NEAR(rt.max_radius(), 0.463654794585486, 1e-14);
    EXPECT_NEAR(rt.value(rt.max_radius()), 0.113639259755943, 1e-14);
    EXPECT_NEAR(rt.derivative(rt.max_radius()), 0.0, 1e-15);
    EXPECT_NEAR(rt.second_derivative(rt.max_radius()), -1.0, 1e-14);

    // mpmath: A = 0.0542813815568827, u(0.1) = 0.2475 - A ln 10 = 0.1225125
    EXPECT_NEAR(RadialTorsion(0.01).A, 0.0542813815568827, 1e-15);
    EXPECT_NEAR(annulus_torsion(0.01, 0.1), 0.1225125, 1e-12);

    EXPECT_THROW(annulus_torsion(0.1, 0.05), DomainError);
    EXPECT_THROW(annulus_torsion(0.1, 1.5), DomainError);
    EXPECT_GT(RadialTorsion(0.3).A, 0.0);
}

TEST(ExactSolutions, AnnulusBoundaryValuesVanish) {
    for (int k = 1; k <= 8; ++k) {
        const double eps = std::pow(10.0, -k);
        EXPECT_NEAR(annulus_torsion(eps, eps), 0.0, 1e-15) << eps;
        EXPECT_EQ(annulus_torsion(eps, 1.0), 0.0);
    }
}

TEST(ExactSolutions, ClosedFormsSolveTorsionEquation) {
    std::mt19937_64 rng(oracle::kSeed);
    const AnnulusTorsionField ann(0.1);
    const EllipseTorsionField ell{2.0, 1.0};
    const DiskTorsionField disk{1.0};
    auto pts = oracle::interior_points(Domain::ellipse(2, 1), 100, 0.9, rng);
    for (const auto& x : pts) {
        auto f = [&](const Point& p) { return ell.value(p); };
        EXPECT_NEAR(-five_point_laplacian(f, x, 1e-4), 1.0, 1e-5);
    }
    pts = oracle::interior_points(Domain::disk(1), 100, 0.9, rng);
    for (const auto& x : pts) {
        auto f = [&](const Point& p) { return disk.value(p); };
        EXPECT_NEAR(-five_point_laplacian(f, x, 1e-4), 1.0, 1e-5);
        if (x.norm() > 0.15) {
            auto g = [&](const Point& p) { return ann.value(p); };
            EXPECT_NEAR(-five_point_laplacian(g, x, 1e-4), 1.0, 1e-5);
            EXPECT_NEAR(ann.hessian(x).trace(), -1.0, 1e-13);
            EXPECT_LT((ann.gradient(x) - central_gradient(g, x, 1e-6)).norm(), 1e-8);
        }
    }
}

TEST(ExactSolutions, DiskGreen) {
    // mpmath: -ln(0.5)/(2 pi) = 0.110317800076326, -ln(0.75)/(2 pi) = 0.0457860238696217
    EXPECT_NEAR(disk_green(1, Point(0.5, 0), Point(0, 0)), 0.110317800076326, 1e-14);
    EXPECT_NEAR(disk_green_regular(1, Point(0.5, 0), Point(0.5, 0)), 0.0457860238696217, 1e-14);
    EXPECT_NEAR(disk_green_regular(1, Point(0.3, -0.7), Point(0, 0)), 0.0, 1e-16);
    EXPECT_NEAR(disk_green_regular(2, Point(0.3, -0.7), Point(0, 0)), -std::log(2.0) / kTwoPi, 1e-15);
    EXPECT_THROW(disk_green(1, Point(0.2, 0), Point(0.2, 0)), SingularityError);
}

TEST(ExactSolutions, DiskGreenSymmetryAndBoundary) {
    std::mt19937_64 rng(oracle::kSeed + 1);
    std::uniform_real_distribution<double> ang(0, kTwoPi);
    const auto pts = oracle::interior_points(Domain::disk(1), 200, 1.0, rng);
    for (int i = 0; i < 100; ++i) {
        const Point& x = pts[2 * i];
        const Point& y = pts[2 * i + 1];
        EXPECT_NEAR(disk_green(1, x, y), disk_green(1, y, x), 1e-12);
        const double t = ang(rng);
        EXPECT_NEAR(disk_green(1, Point(std::cos(t), std::sin(t)), y), 0.0, 1e-12);
    }
}

TEST(ExactSolutions, G0) {
    EXPECT_NEAR(g0(Point(2, 0), Point(1, 0)), 0.0, 1e-16);
    // mpmath: ln(17/8)/(4 pi) = 0.0599832541557441
    EXPECT_NEAR(g0(Point(2, 0), Point(0, 2)), 0.0599832541557441, 1e-14);
    EXPECT_DOUBLE_EQ(g0(Point(2, 0), Point(0, 2)), g0(Point(0, 2), Point(2, 0)));
    EXPECT_THROW(g0(Point(2, 0), Point(2, 0)), SingularityError);
}

TEST(ExactSolutions, G0NormalDerivative) {
    EXPECT_NEAR(g0_normal_derivative(Point(2, 0), Point(1, 0)), -0.477464829275686, 1e-14);
    EXPECT_NEAR(g0_normal_derivative(Point(1 + 1e-9, 0), Point(0, 1)), 0.0, 1e-8);
    // central difference of g0 along -s at s = (0,1), step 1e-5
    const Point w(2, 0), s(0, 1);
    const Vector nu = -s;
    const double h = 1e-5;
    const double fd = (g0(w, s + h * nu) - g0(w, s - h * nu)) / (2 * h);
    EXPECT_NEAR(fd, -0.0954929658551372, 1e-6);
    EXPECT_NEAR(g0_normal_derivative(w, s), -0.0954929658551372, 1e-14);
}

TEST(ExactSolutions, CapacityConcentric) {
    EXPECT_NEAR(capacity_concentric(0.01, Point(0.1, 0)), 0.5, 1e-15);
    EXPECT_EQ(capacity_concentric(0.01, Point(0, 1)), 0.0);
    EXPECT_NEAR(capacity_concentric(0.01, Point(0, 0.01)), 1.0, 1e-15);
    // two-term Green expansion with H(0,0) = 0 on the unit disk
    for (double eps : {1e-2, 1e-4, 1e-8}) {
        for (double r : {0.05, 0.3, 0.9}) {
            const Point x(r, 0);
            const double pred = -(kTwoPi / std::log(eps)) * disk_green(1, x, Point(0, 0));
            EXPECT_NEAR(capacity_concentric(eps, x), pred, 1e-14);
        }
    }
}

TEST(ExactSolutions, PoissonReconstruction) {
    const DiskTorsionField u0{1.0};
    const double rec = disk_poisson_reconstruct([&](const Point& y) { return u0.value(y); },
                                                [](const Point&) { return -1.0; }, Point(0.3, 0), 256);
    EXPECT_NEAR(rec, 0.2275, 1e-6);
    for (const Point s : {Point(0, 0), Point(0.6, -0.2), Point(-0.1, 0.85)}) {
        const double one = disk_poisson_reconstruct([](const Point&) { return 1.0; },
                                                    [](const Point&) { return 0.0; }, s, 256);
        EXPECT_NEAR(one, 1.0, 1e-10);
    }
    const double lin = disk_poisson_reconstruct([](const Point& y) { return y.x(); }, [](const Point&) { return 0.0; },
                                                Point(0.3, 0), 128);
    EXPECT_NEAR(lin, 0.3, 1e-8);
    // phi = x^3 y (Laplacian 6xy) at an off-axis point
    const Point s(0.2, 0.4);
    const double cub = disk_poisson_reconstruct([](const Point& y) { return y.x() * y.x() * y.x() * y.y(); },
                                                [](const Point& y) { return 6 * y.x() * y.y(); }, s, 256);
    EXPECT_NEAR(cub, s.x() * s.x() * s.x() * s.y(), 1e-8);
}

TEST(ExactSolutions, PoissonReconstructionConverges) {
    const DiskTorsionField u0{1.0};
    double prev = 1.0;
    for (std::size_t n : {8, 16, 32, 64}) {
        const double err = std::abs(disk_poisson_reconstruct([&](const Point& y) { return u0.value(y); },
                                                             [](const Point&) { return -1.0; }, Point(0.5, 0.3), n) -
                                    u0.value(Point(0.5, 0.3)));
        EXPECT_LT(err, prev);
        prev = err;
    }
}
