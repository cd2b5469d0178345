#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "orbitfol/errors.hpp"
#include "orbitfol/flow.hpp"
#include "test_support.hpp"

using namespace orbitfol;
using namespace orbitfol::testing;

namespace {

AffineField screw(double l1, double l2) { return l1 * catalog::rotation_r3(2) + l2 * catalog::translation_r3(2); }

Vector screw_closed_form(const Vector& p0, double l1, double l2, double t)
{
    return vec({p0(0) * std::cos(l1 * t) + p0(1) * std::sin(l1 * t),
                -p0(0) * std::sin(l1 * t) + p0(1) * std::cos(l1 * t), l2 * t + p0(2)});
}

} // namespace

TEST(Flow, ExpmOfSmallMatrices)
{
    EXPECT_TRUE(expm(Matrix::Zero(3, 3)).isIdentity(0.0));
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    const Matrix e = expm(d);
    EXPECT_NEAR(e(0, 0), std::exp(1.0), 1e-15);
    EXPECT_NEAR(e(1, 1), std::exp(-2.0), 1e-15);

    Matrix rot(2, 2);
    rot << 0, -30, 30, 0;
    const Matrix r = expm(rot);
    EXPECT_NEAR(r(0, 0), std::cos(30.0), 1e-12);
    EXPECT_NEAR(r(1, 0), std::sin(30.0), 1e-12);
}

TEST(Flow, TranslationIsExact)
{
    const AffineField f(Matrix::Zero(3, 3), vec({0.1, -0.3, 2.5}));
    const Vector p = vec({1.25, -7.0, 0.5});
    for (double t : {0.0, 0.5, 1.0, -4.0})
        EXPECT_EQ(flow_affine(f, p, t), p + t * f.offset());
}

TEST(Flow, ScrewMatchesClosedForm)
{
    const Vector p0 = vec({0.3, -1.2, 0.7});
    for (const auto& [l1, l2] : {std::pair{2.0, 3.0}, std::pair{1.0, 0.0}, std::pair{0.0, 1.0}})
        for (double t : {0.1, 1.0, std::numbers::pi})
            EXPECT_LE((flow_affine(screw(l1, l2), p0, t) - screw_closed_form(p0, l1, l2, t)).cwiseAbs().maxCoeff(),
                      1e-12);
}

TEST(Flow, HopfPeriod)
{
    const Vector p = vec({1, 0, 0, 0});
    EXPECT_LE((flow_affine(catalog::hopf(), p, 2.0 * std::numbers::pi) - p).norm(), 1e-10);
}

TEST(Flow, GroupLaw)
{
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + trial % 2;
        const AffineField f = random_killing(n, rng);
        const Vector p = rng.normal_vector(n);
        const double s = rng.uniform(-10, 10);
        const double t = rng.uniform(-10, 10);
        const Vector composed = flow_affine(f, flow_affine(f, p, s), t);
        const Vector direct = flow_affine(f, p, s + t);
        EXPECT_LE((composed - direct).cwiseAbs().maxCoeff(), 1e-11 * (1.0 + direct.norm()));
    }
}

TEST(Flow, TorusFlowsCommute)
{
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector p = rng.normal_vector(4);
        const double t = rng.uniform(-5, 5);
        const double s = rng.uniform(-5, 5);
        const Vector a = flow_affine(catalog::torus_x(), flow_affine(catalog::torus_y(), p, s), t);
        const Vector b = flow_affine(catalog::torus_y(), flow_affine(catalog::torus_x(), p, t), s);
        EXPECT_LE((a - b).norm(), 1e-10);
    }
}

TEST(Flow, NumericFlow)
{
    const Vector p = vec({0.2, 0.4, -1});
    EXPECT_EQ(flow_numeric(ExprField::parse({"0", "0", "0"}), p, 3.0), p);
    EXPECT_LE((flow_numeric(screw(2, 3), p, 1.0, 1e-3) - flow_affine(screw(2, 3), p, 1.0)).norm(), 1e-10);
    EXPECT_LE((flow_numeric(ExprField::parse({"2*y", "-2*x", "3"}), p, 1.0) - flow_affine(screw(2, 3), p, 1.0)).norm(),
              1e-10);
    EXPECT_THROW(flow_numeric(screw(1, 1), p, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(flow_numeric(ExprField::parse({"1/x", "0", "0"}), vec({0, 0, 0}), 1.0), EvaluationError);
}

TEST(Flow, Rk4ConvergenceOrder)
{
    const AffineField x = catalog::torus_x();
    const Vector p = vec({0.6, 0.0, 0.8, 0.0});
    const double t = 2.0;
    const Vector exact = flow_affine(x, p, t);
    const double coarse = (flow_numeric(x, p, t, 1e-2) - exact).norm();
    const double fine = (flow_numeric(x, p, t, 5e-3) - exact).norm();
    const double ratio = coarse / fine;
    EXPECT_GE(ratio, 12.0);
    EXPECT_LE(ratio, 20.0);
}

TEST(Flow, TrajectorySampling)
{
    const Trajectory line = trajectory(catalog::translation_r3(2), Vector::Zero(3), 0.0, 1.0, 3);
    ASSERT_EQ(line.points.size(), 3u);
    EXPECT_EQ(line.points[0], vec({0, 0, 0}));
    EXPECT_EQ(line.points[1], vec({0, 0, 0.5}));
    EXPECT_EQ(line.points[2], vec({0, 0, 1}));
    EXPECT_EQ(line.integrator, Integrator::Exact);

    const Trajectory circle = trajectory(catalog::rotation_r3(0), vec({0, 1, 0}), 0.0, 2.0 * std::numbers::pi, 100);
    for (const auto& q : circle.points)
        EXPECT_NEAR(q(1) * q(1) + q(2) * q(2), 1.0, 1e-12);

    const Vector s3 = vec({0.5, -0.5, 0.1, 0.7});
    for (const auto& q : trajectory(catalog::torus_x(), s3, -1.0, 5.0, 64).points)
        EXPECT_NEAR(q.squaredNorm(), 1.0, 1e-10);

    const Trajectory shifted = trajectory(catalog::translation_r3(0), Vector::Zero(3), 2.0, 3.0, 2);
    EXPECT_EQ(shifted.points.front(), Vector::Zero(3));
    EXPECT_EQ(shifted.points.back(), vec({1, 0, 0}));

    EXPECT_THROW(trajectory(catalog::translation_r3(0), Vector::Zero(3), 0.0, 1.0, 1), std::invalid_argument);
    EXPECT_THROW(trajectory(catalog::translation_r3(0), Vector::Zero(3), 1.0, 0.0, 5), std::invalid_argument);
}

TEST(Flow, TrajectoryIntegratorSelection)
{
    const Trajectory affine = trajectory(ExprField::parse({"y", "-x", "1"}), vec({1, 0, 0}), 0.0, 1.0, 5);
    EXPECT_EQ(affine.integrator, Integrator::Exact);
    const Trajectory nonlinear = trajectory(ExprField::parse({"-y*z", "x*z", "0"}), vec({1, 0, 1}), 0.0, 1.0, 5, 1e-3);
    EXPECT_EQ(nonlinear.integrator, Integrator::Rk4);
    // With z = 1 fixed the field is a unit rotation: compare with the closed form.
    EXPECT_LE((nonlinear.points.back() - vec({std::cos(1.0), std::sin(1.0), 1})).norm(), 1e-10);
}

TEST(Flow, IsometrySpotcheck)
{
    const std::vector<std::pair<Vector, Vector>> pair = {{vec({1, 0, 0}), vec({0, 1, 0})}};
    const std::vector<double> t07 = {0.7};
    const IsometryReport rot = isometry_spotcheck(catalog::rotation_r3(2), pair, t07);
    EXPECT_TRUE(rot.pass);
    EXPECT_LT(rot.max_deviation, 1e-12);

    const std::vector<double> t1 = {1.0};
    const IsometryReport dilation = isometry_spotcheck(AffineField(Matrix::Identity(3, 3), Vector::Zero(3)), pair, t1);
    EXPECT_FALSE(dilation.pass);
    EXPECT_NEAR(dilation.max_deviation, (std::numbers::e - 1.0) * std::sqrt(2.0), 1e-12);

    Rng rng(6);
    std::vector<std::pair<Vector, Vector>> pairs;
    for (int k = 0; k < 20; ++k)
        pairs.emplace_back(rng.normal_vector(4), rng.normal_vector(4));
    const std::vector<double> times = {0.3, 1.7};
    EXPECT_TRUE(isometry_spotcheck(catalog::torus_x(), pairs, times).pass);
}

TEST(Flow, TrajectoryCsv)
{
    std::ostringstream out;
    write_trajectory_csv(out, trajectory(catalog::translation_r3(2), Vector::Zero(3), 0.0, 1.0, 3));
    EXPECT_EQ(out.str(), "t,x1,x2,x3\n0,0,0,0\n0.5,0,0,0.5\n1,0,0,1\n");
}
