#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hclab/weights.hpp"

using namespace hclab;

namespace {

// Brute-force midpoint sum of w over a 2D ball, polar grid around the ball center.
double brute_ball_mass_2d(const HomogeneousWeight& w, const Ball& B, int nr = 800, int na = 800) {
    double s = 0.0;
    const double dr = B.radius / nr, da = 2.0 * std::numbers::pi / na;
    for (int i = 0; i < nr; ++i) {
        const double rho = (i + 0.5) * dr;
        for (int j = 0; j < na; ++j) {
            const double a = (j + 0.5) * da;
            const double x[2] = {B.center[0] + rho * std::cos(a), B.center[1] + rho * std::sin(a)};
            s += w(x) * rho * dr * da;
        }
    }
    return s;
}

} // namespace

TEST(BuildWeight, SphereConstants) {
    EXPECT_DOUBLE_EQ(power_weight(0.0, 1).sphere_constant(), 2.0);
    EXPECT_NEAR(power_weight(0.0, 2).sphere_constant(), 2.0 * std::numbers::pi, 1e-14);

    // Reference: integral of |cos| over one period by a fine midpoint rule.
    double ref = 0.0;
    const int cells = 200000;
    for (int i = 0; i < cells; ++i) ref += std::abs(std::cos((i + 0.5) * 2.0 * std::numbers::pi / cells));
    ref *= 2.0 * std::numbers::pi / cells;
    auto w = build_weight(1.0, ProfileTerm::axis_power(), 2);
    EXPECT_NEAR(ref, 4.0, 1e-8);
    EXPECT_NEAR(w.sphere_constant(), 4.0, 1e-13);
}

TEST(BuildWeight, Errors) {
    try {
        build_weight(0.0, ProfileTerm::constant(-1.0), 2);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::non_positive_profile);
    }
    try {
        build_weight(-1.5, ProfileTerm::axis_power(), 2);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::non_finite_sphere_constant);
    }
    EXPECT_THROW(AngularTable(2, {1.0, 0.0, 1.0, 1.0}, 4), error);
}

TEST(BuildWeight, LocalIntegrabilityFlag) {
    EXPECT_TRUE(power_weight(-0.5, 1).locally_integrable());
    EXPECT_FALSE(power_weight(-1.0, 1).locally_integrable());
    EXPECT_TRUE(power_weight(-1.5, 2).locally_integrable());
}

TEST(BuildWeight, HomogeneityOfEveryProfile) {
    std::vector<double> table{1.0, 2.0, 3.0, 1.5, 0.5, 2.5, 1.0, 4.0};
    std::vector<HomogeneousWeight> ws{
        power_weight(0.7, 2, 3.0), build_weight(1.3, ProfileTerm::axis_power(), 2),
        build_weight(0.0, ProfileTerm::tabulated(AngularTable(2, table, 8)), 2),
        build_weight(-0.5, ProfileTerm::axis_power(2.0), 3), power_weight(-0.3, 1, 2.0)};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const auto& w : ws) {
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> x(static_cast<std::size_t>(w.dimension()));
            for (double& v : x) v = u(rng);
            double t = u(rng);
            if (t == 0.0) t = 1.0;
            std::vector<double> tx = x;
            for (double& v : tx) v *= t;
            EXPECT_NEAR(w(tx), std::pow(std::abs(t), w.alpha()) * w(x), 1e-11 * (1.0 + std::abs(w(tx))));
        }
    }
}

TEST(BuildWeight, TabulatedProfilesAreEven) {
    AngularTable t2(2, {1.0, 2.0, 3.0, 5.0, 7.0, 11.0}, 6);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < 100; ++i) {
        const double a = ang(rng);
        const double th[2] = {std::cos(a), std::sin(a)};
        const double mth[2] = {-th[0], -th[1]};
        EXPECT_NEAR(t2(th), t2(mth), 1e-12);
    }
    std::vector<double> vals;
    for (int i = 0; i <= 4; ++i)
        for (int k = 0; k < 6; ++k) vals.push_back(1.0 + i + 0.3 * k);
    AngularTable t3(3, vals, 6, 4);
    std::uniform_real_distribution<double> z(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double c = z(rng), a = ang(rng), s = std::sqrt(1 - c * c);
        const double th[3] = {s * std::cos(a), s * std::sin(a), c};
        const double mth[3] = {-th[0], -th[1], -th[2]};
        EXPECT_NEAR(t3(th), t3(mth), 1e-12);
    }
}

TEST(BuildWeight, TabulatedSphereConstant) {
    auto w2 = build_weight(0.0, ProfileTerm::tabulated(AngularTable(2, std::vector<double>(16, 3.0), 16)), 2);
    EXPECT_NEAR(w2.sphere_constant(), 6.0 * std::numbers::pi, 1e-13);
    std::vector<double> vals(5 * 8, 2.0);
    auto w3 = build_weight(0.0, ProfileTerm::tabulated(AngularTable(3, vals, 8, 4)), 3);
    EXPECT_NEAR(w3.sphere_constant(), 8.0 * std::numbers::pi, 1e-12);
}

TEST(BuildWeight, SphereConstantIsAdditive) {
    auto w1 = build_weight(1.0, ProfileTerm::axis_power(), 2);
    auto w2 = power_weight(1.0, 2, 2.0);
    auto w = combine(0.5, w1, 3.0, w2);
    EXPECT_NEAR(w.sphere_constant(), 0.5 * w1.sphere_constant() + 3.0 * w2.sphere_constant(), 1e-12);
    const double x[2] = {0.3, -1.2};
    EXPECT_NEAR(w(x), 0.5 * w1(x) + 3.0 * w2(x), 1e-12);
    EXPECT_THROW(combine(1.0, w1, 1.0, power_weight(0.5, 2)), error);
}

TEST(BallMass, OneDimensionalClosedForms) {
    EXPECT_DOUBLE_EQ(ball_mass(power_weight(0.0, 1), Ball({0.0}, 1.0)), 2.0);
    const auto w = power_weight(1.0, 1);
    auto ref = integrate_adaptive([](double x) { return std::abs(x); }, 0.0, 2.0, QuadratureConfig{});
    EXPECT_NEAR(ref.value, 2.0, 1e-12);
    EXPECT_NEAR(ball_mass(w, Ball({1.0}, 1.0)), ref.value, 1e-12);
    // Interval straddling the origin.
    EXPECT_NEAR(ball_mass(w, Ball({0.5}, 1.0)), 0.5 * (1.5 * 1.5 + 0.5 * 0.5), 1e-14);
}

TEST(BallMass, NonIntegrableAtOrigin) {
    try {
        ball_mass(power_weight(-2.0, 1), Ball({0.0}, 1.0));
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::non_integrable);
    }
    // Away from the origin the same weight is fine.
    EXPECT_NEAR(ball_mass(power_weight(-2.0, 1), Ball({3.0}, 1.0)), 0.5 - 0.25, 1e-14);
}

TEST(BallMass, TwoDimensionalAgainstBruteForce) {
    for (const auto& w : {power_weight(0.0, 2), power_weight(1.0, 2), build_weight(1.0, ProfileTerm::axis_power(), 2)}) {
        for (const Ball& B : {Ball({2.0, 0.5}, 1.0), Ball({0.3, -0.2}, 1.0), Ball({0.0, 0.0}, 1.5)}) {
            const double brute = brute_ball_mass_2d(w, B);
            EXPECT_NEAR(ball_mass(w, B), brute, 2e-5 * brute);
        }
    }
    EXPECT_NEAR(ball_mass(power_weight(0.0, 2), Ball({5.0, -1.0}, 0.5)), std::numbers::pi * 0.25, 1e-10);
}

TEST(BallMass, Homogeneity) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0), lam(0.1, 5.0), rad(0.1, 3.0);
    for (const auto& w : {power_weight(0.5, 1), power_weight(1.5, 2), build_weight(0.5, ProfileTerm::axis_power(), 2)}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> c(static_cast<std::size_t>(w.dimension()));
            for (double& v : c) v = u(rng);
            const double r = rad(rng), l = lam(rng);
            std::vector<double> lc = c;
            for (double& v : lc) v *= l;
            const double base = ball_mass(w, Ball(c, r));
            const double scaled = ball_mass(w, Ball(lc, l * r));
            EXPECT_NEAR(scaled, std::pow(l, w.dimension() + w.alpha()) * base, 1e-8 * scaled);
        }
    }
}

TEST(DoublingRatio, Examples) {
    {
        auto [centers, radii] = default_doubling_samples(1);
        EXPECT_NEAR(doubling_ratio_scan(power_weight(0.0, 1), centers, radii), 2.0, 1e-12);
    }
    EXPECT_NEAR(doubling_ratio_scan(power_weight(1.0, 1), {{0.0}}, {0.5, 1.0, 3.0}), 4.0, 1e-12);
    {
        auto [centers, radii] = default_doubling_samples(2);
        radii = {0.25, 1.0, 4.0};
        EXPECT_NEAR(doubling_ratio_scan(power_weight(0.0, 2), centers, radii), 4.0, 1e-9);
    }
    // Off-centre balls give at least the centred ratio 2^(n+alpha).
    auto [centers, radii] = default_doubling_samples(1);
    EXPECT_GE(doubling_ratio_scan(power_weight(1.0, 1), centers, radii), 4.0 - 1e-12);
}

TEST(Lemma1Check, Examples) {
    auto a = lemma1_check(power_weight(0.0, 1), 0.5);
    EXPECT_NEAR(a.lhs, 4.0, 1e-9);
    EXPECT_DOUBLE_EQ(a.rhs, 4.0);
    auto b = lemma1_check(power_weight(1.0, 1), 1.0);
    EXPECT_NEAR(b.lhs, 2.0, 1e-9);
    EXPECT_DOUBLE_EQ(b.rhs, 2.0);
    auto c = lemma1_check(power_weight(0.0, 2), 1.0);
    EXPECT_NEAR(c.lhs, 2.0 * std::numbers::pi, 1e-9);
    EXPECT_NEAR(c.rhs, 2.0 * std::numbers::pi, 1e-14);
    EXPECT_THROW(lemma1_check(power_weight(0.0, 1), 0.0), error);
}

TEST(Lemma1Check, IdentityAcrossWeightsAndEps) {
    std::vector<HomogeneousWeight> ws{power_weight(0.0, 1), power_weight(1.0, 1), power_weight(-0.5, 1, 3.0),
                                      build_weight(1.0, ProfileTerm::axis_power(), 2), power_weight(2.0, 3)};
    for (const auto& w : ws)
        for (double eps : {0.1, 0.5, 1.0, 2.0}) {
            auto r = lemma1_check(w, eps);
            EXPECT_LE(std::abs(r.lhs - r.rhs), 10.0 * r.error_estimate + 1e-12 * r.rhs) << eps;
            EXPECT_LE(std::abs(r.mirror_lhs - r.rhs), 10.0 * r.error_estimate + 1e-12 * r.rhs) << eps;
            EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-8 * r.rhs);
        }
}
