#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hclab/kernels.hpp"

using namespace hclab;

namespace {

// Midpoint rule after t = u^m, which smooths endpoint singularities of order > -1.
template <class F>
double substituted_midpoint(const F& f, int m, long cells) {
    double s = 0.0;
    const double h = 1.0 / static_cast<double>(cells);
    for (long i = 0; i < cells; ++i) {
        const double u = (static_cast<double>(i) + 0.5) * h;
        s += f(std::pow(u, m)) * m * std::pow(u, m - 1);
    }
    return s * h;
}

const CurveSpec identity = CurveSpec::power(1.0, 1.0);

} // namespace

TEST(CurveBounds, Examples) {
    EXPECT_TRUE(validate_curve_bounds(CurveSpec::power(1.0, 2.0), 2.0, 2.0, 64));
    EXPECT_TRUE(validate_curve_bounds(CurveSpec::reciprocal(), -1.0, -1.0, 64));
    EXPECT_TRUE(validate_curve_bounds(identity, 2.0, 1.0, 64));
    EXPECT_FALSE(validate_curve_bounds(identity, 0.5, 0.25, 64));
    EXPECT_THROW(validate_curve_bounds(identity, 1.0, 1.0, 1), error);
}

TEST(CurveBounds, ExponentRuleMatchesSampledGrid) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> e(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        double g = e(rng);
        if (g == 0.0) g = 1.0;
        const auto s = CurveSpec::power(i % 2 ? 1.0 : -1.0, g);
        const double b = e(rng), c = e(rng);
        EXPECT_EQ(validate_curve_bounds(s, b, c), sampled_curve_bounds(s, b, c, 256)) << g << " " << b << " " << c;
    }
}

TEST(CurveSpec, SignPattern) {
    const auto s = CurveSpec::sign_changing(1.0, {0.5}, {1, -1});
    EXPECT_EQ(s(0.25), 0.25);
    EXPECT_EQ(s(0.75), -0.75);
    EXPECT_TRUE(s.changes_sign());
    EXPECT_FALSE(identity.changes_sign());
    EXPECT_DOUBLE_EQ(CurveSpec::reciprocal()(0.25), 4.0);
    EXPECT_THROW(CurveSpec::power(1.0, 0.0), error);
    EXPECT_THROW(CurveSpec::sign_changing(1.0, {1.5}, {1, -1}), error);
}

TEST(LpConstant, Examples) {
    EXPECT_NEAR(lp_constant(KernelSpec::constant(1.0), identity, 1, 0.0, 2.0).value, 2.0, 1e-14);
    EXPECT_NEAR(lp_constant(KernelSpec::constant(1.0), identity, 1, 0.5, 2.0).value, 4.0, 1e-14);
    EXPECT_NEAR(lp_constant(KernelSpec::power(1.0, 1.5), identity, 2, 1.0, 2.0).value, 1.0, 1e-14);

    // 2(1-t) against t^{-1/2}: reference via t = u^2.
    const auto psi = KernelSpec::product(1.0, 0.0, 2.0);
    const double ref = substituted_midpoint([](double t) { return 2.0 * (1.0 - t) / std::sqrt(t); }, 2, 200000);
    EXPECT_NEAR(ref, 8.0 / 3.0, 1e-9);
    const auto c = lp_constant(psi, identity, 1, 0.0, 2.0);
    EXPECT_NEAR(c.value, 8.0 / 3.0, 1e-13);
    EXPECT_EQ(c.method, "closed_form:beta");
    const auto q = lp_constant(psi, identity, 1, 0.0, 2.0, {}, true);
    EXPECT_EQ(q.method, "quadrature");
    EXPECT_NEAR(q.value, 8.0 / 3.0, 1e-10);
}

TEST(LpConstant, DivergentIsInfiniteVerdict) {
    const auto c = lp_constant(KernelSpec::constant(1.0), identity, 1, 1.0, 1.0);
    EXPECT_TRUE(c.is_infinite());
    EXPECT_FALSE(std::isfinite(c.value));
    EXPECT_TRUE(lp_constant(KernelSpec::riemann_liouville(0.5), CurveSpec::power(1.0, 2.0), 2, 0.0, 1.0).is_infinite());
}

TEST(InfiniteLpConstant, Examples) {
    const auto psi = KernelSpec::gamma(1.0, 1.0, 1.0);
    const auto c = infinite_lp_constant(psi, identity, 1, 0.0, 2.0);
    EXPECT_NEAR(c.value, std::sqrt(std::numbers::pi) / 2.0, 1e-14);
    const auto q = infinite_lp_constant(psi, identity, 1, 0.0, 2.0, {}, true);
    EXPECT_NEAR(q.value, std::sqrt(std::numbers::pi) / 2.0, 1e-9);

    const auto compact = KernelSpec::product(1.0, 0.5, 3.0);
    EXPECT_DOUBLE_EQ(infinite_lp_constant(compact, identity, 2, 0.5, 3.0).value,
                     lp_constant(compact, identity, 2, 0.5, 3.0).value);

    EXPECT_TRUE(infinite_lp_constant(KernelSpec::constant(1.0).on_half_line(), identity, 1, 0.0, 2.0).is_infinite());
}

TEST(CesaroConstant, Examples) {
    EXPECT_NEAR(cesaro_constant(KernelSpec::constant(1.0), identity, 1, 0.0, 2.0).value, 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(cesaro_constant(KernelSpec::constant(1.0), identity, 1, 1.0, 2.0).value, 1.0, 1e-14);
    const double ref = substituted_midpoint([](double t) { return std::sqrt(t); }, 1, 100000);
    EXPECT_NEAR(ref, 2.0 / 3.0, 1e-8);
}

TEST(CesaroConstant, EqualsLpConstantOfEffectiveKernel) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const auto psi = KernelSpec::product(0.5 + u(rng), 2.0 * u(rng), 0.5 + 2.0 * u(rng));
        const auto s = CurveSpec::power(1.0, 0.5 + u(rng));
        const int n = 1 + static_cast<int>(3 * u(rng));
        const double alpha = 2.0 * u(rng), p = 1.0 + 3.0 * u(rng);
        const auto a = cesaro_constant(psi, s, n, alpha, p);
        const auto b = lp_constant(psi.times_power(s.gamma() * n), s, n, alpha, p);
        EXPECT_EQ(a.value, b.value);
        EXPECT_EQ(a.finite, b.finite);
    }
}

TEST(BmoConstant, Examples) {
    EXPECT_DOUBLE_EQ(bmo_constant(KernelSpec::constant(1.0)).value, 1.0);
    for (double beta : {0.3, 1.0, 2.5, 7.0})
        EXPECT_NEAR(bmo_constant(KernelSpec::riemann_liouville(beta)).value, 1.0, 1e-13) << beta;
    EXPECT_TRUE(bmo_constant(KernelSpec::power(1.0, -1.0)).is_infinite());
}

TEST(SignedBmoFactor, Examples) {
    const auto one = KernelSpec::constant(1.0);
    EXPECT_DOUBLE_EQ(signed_bmo_factor(one, identity).value, 1.0);
    EXPECT_DOUBLE_EQ(signed_bmo_factor(one, CurveSpec::power(-1.0, 1.0)).value, -1.0);
    EXPECT_NEAR(signed_bmo_factor(one, CurveSpec::sign_changing(1.0, {0.5}, {1, -1})).value, 0.0, 1e-15);
    // 2t with sign flip at 1/2: 1/4 - 3/4.
    EXPECT_NEAR(signed_bmo_factor(KernelSpec::power(2.0, 1.0), CurveSpec::sign_changing(1.0, {0.5}, {1, -1})).value,
                -0.5, 1e-14);
}

TEST(CommutatorConstant, Examples) {
    const double ref = substituted_midpoint([](double t) { return std::log(1.0 / t) / std::sqrt(t); }, 4, 400000);
    EXPECT_NEAR(ref, 4.0, 1e-6);
    auto c = commutator_constant(KernelSpec::constant(1.0), identity, 1, 0.0, 2.0);
    EXPECT_NEAR(c.necessity.value, 4.0, 1e-13);
    EXPECT_NEAR(c.bound.value, 8.0, 1e-13);

    auto z = commutator_constant(KernelSpec::constant(0.0), identity, 1, 0.0, 2.0);
    EXPECT_EQ(z.necessity.value, 0.0);
    EXPECT_EQ(z.bound.value, 0.0);

    const double ref2 = substituted_midpoint([](double t) { return t * (2.0 + 2.0 * std::log(1.0 / t)); }, 1, 200000);
    EXPECT_NEAR(ref2, 1.5, 1e-8);
    auto d = commutator_constant(KernelSpec::power(1.0, 2.0), CurveSpec::power(1.0, 2.0), 1, 0.0, 2.0);
    EXPECT_NEAR(d.bound.value, 1.5, 1e-13);
    EXPECT_NEAR(d.necessity.value, 0.5, 1e-13);
}

TEST(CommutatorConstant, TabulatedUsesQuadrature) {
    auto c = commutator_constant(KernelSpec::tabulated({1.0, 1.0, 1.0}), identity, 1, 0.0, 2.0);
    EXPECT_EQ(c.necessity.method, "quadrature");
    EXPECT_NEAR(c.necessity.value, 4.0, 1e-9);
    EXPECT_NEAR(c.bound.value, 8.0, 1e-9);
}

TEST(KernelProperties, ScalingMonotonicityConsistency) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const auto psi = KernelSpec::product(0.2 + u(rng), 3.0 * u(rng) - 0.5, 0.3 + 2.0 * u(rng));
        const auto s = CurveSpec::power(1.0, 0.5 + u(rng));
        const int n = 1 + i % 3;
        const double alpha = 1.5 * u(rng), p = 1.5 + 2.0 * u(rng), c = 3.0 * u(rng);
        const auto base = lp_constant(psi, s, n, alpha, p);
        if (base.is_infinite()) continue;
        EXPECT_NEAR(lp_constant(psi.scaled(c), s, n, alpha, p).value, c * base.value, 1e-13 * (1.0 + c * base.value));
        const auto looser = lp_constant(psi, s, n, alpha, p + 0.5);
        EXPECT_LE(looser.value, base.value * (1.0 + 1e-14));
        const auto comm = commutator_constant(psi, s, n, alpha, p);
        EXPECT_GE(comm.bound.value, 2.0 * base.value * (1.0 - 1e-14));
    }
}

TEST(KernelProperties, ClosedFormAgreesWithQuadrature) {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int compared = 0;
    while (compared < 50) {
        const auto psi = KernelSpec::product(0.2 + u(rng), 2.0 * u(rng) - 0.4, 0.2 + 3.0 * u(rng));
        const auto s = CurveSpec::power(1.0, 0.3 + u(rng));
        const double alpha = u(rng), p = 1.0 + 3.0 * u(rng);
        const auto closed = lp_constant(psi, s, 1, alpha, p);
        const auto quad = lp_constant(psi, s, 1, alpha, p, {}, true);
        EXPECT_EQ(closed.finite, quad.finite);
        if (!closed.finite) continue;
        EXPECT_NE(closed.method, quad.method);
        EXPECT_NEAR(quad.value, closed.value, 1e-8 * closed.value);
        ++compared;
    }
}

TEST(KernelSpec, Evaluation) {
    EXPECT_DOUBLE_EQ(KernelSpec::riemann_liouville(3.0)(0.5), 0.75);
    EXPECT_EQ(KernelSpec::constant(1.0)(1.5), 0.0);
    EXPECT_NEAR(KernelSpec::gamma(1.0, 1.0, 1.0)(2.0), 2.0 * std::exp(-2.0), 1e-15);
    EXPECT_DOUBLE_EQ(KernelSpec::tabulated({0.0, 2.0})(0.25), 0.5);
    EXPECT_THROW(KernelSpec::tabulated({1.0, -1.0}), error);
    EXPECT_THROW(KernelSpec::riemann_liouville(0.0), error);
}
