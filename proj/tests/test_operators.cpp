#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hclab/operators.hpp"
#include "hclab/spaces.hpp"

using namespace hclab;

namespace {

OperatorSpec u_spec(KernelSpec psi = KernelSpec::constant(1.0), CurveSpec s = CurveSpec::power(1.0, 1.0), int n = 1) {
    OperatorSpec op;
    op.psi = psi;
    op.s = s;
    op.n = n;
    return op;
}

// Composite midpoint rule after t = u^m; independent of the adaptive integrators.
template <class F>
double midpoint(const F& f, double a, double b, int cells = 200000) {
    double s = 0.0;
    const double h = (b - a) / cells;
    for (int i = 0; i < cells; ++i) s += f(a + (i + 0.5) * h);
    return s * h;
}

TestFunction random_radial(std::mt19937_64& rng, int n, int depth, bool positive = false) {
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 3);
    switch (pick(rng)) {
    case 0: return outer_power(u(rng), u(rng));
    case 1: return inner_power(0.5 * n * u(rng), u(rng));  // origin exponent > -n/2
    case 2: return ball_indicator(0.5 + 2.0 * u(rng));
    case 3: return radial_power(2.0 * u(rng) - 0.5);
    case 4: return (positive ? u(rng) : 2.0 * u(rng) - 1.0) * random_radial(rng, n, depth - 1, positive);
    case 5: return random_radial(rng, n, depth - 1, positive) + random_radial(rng, n, depth - 1, positive);
    default: return dilate(0.5 + 2.0 * u(rng), random_radial(rng, n, depth - 1, positive));
    }
}

std::vector<KernelSpec> sample_kernels() {
    return {KernelSpec::constant(1.0), KernelSpec::riemann_liouville(0.5), KernelSpec::power(2.0, 1.0),
            KernelSpec::product(1.0, 0.5, 2.0), KernelSpec::tabulated({1.0, 3.0, 0.5, 2.0})};
}

} // namespace

TEST(ApplyU, ConstantGivesKernelMass) {
    for (const auto& psi : sample_kernels()) {
        for (const auto& s : {CurveSpec::power(1.0, 1.0), CurveSpec::power(-1.0, 2.0), CurveSpec::reciprocal()}) {
            const double mass = kernel_integral(psi, 0.0, 1.0).value;
            EXPECT_NEAR(apply_U(u_spec(psi, s), constant_function(2.5), std::vector<double>{1.7}), 2.5 * mass,
                        1e-12);
        }
    }
}

TEST(ApplyU, BallIndicatorMeasuresSet) {
    EXPECT_NEAR(apply_U(u_spec(), ball_indicator(), std::vector<double>{2.0}), 0.5, 1e-12);
    EXPECT_NEAR(apply_U(u_spec(), ball_indicator(), std::vector<double>{-4.0}), 0.25, 1e-12);
    EXPECT_NEAR(apply_U(u_spec(), ball_indicator(), std::vector<double>{0.5}), 1.0, 1e-12);
    // s = t^2: {t : t^2 |x| < 1} = [0, |x|^{-1/2}).
    EXPECT_NEAR(apply_U(u_spec(KernelSpec::constant(1.0), CurveSpec::power(1.0, 2.0)), ball_indicator(),
                        std::vector<double>{9.0}),
                1.0 / 3.0, 1e-12);
}

TEST(ApplyU, SignWitnessUsesSignedMass) {
    const auto f0 = sign_witness();
    for (const auto& psi : sample_kernels()) {
        const double mass = kernel_integral(psi, 0.0, 1.0).value;
        for (double x : {-3.0, 0.2, 5.0}) {
            const std::vector<double> pt{x};
            EXPECT_NEAR(apply_U(u_spec(psi), f0, pt), f0(pt) * mass, 1e-12);
        }
    }
    // Sign change of s at 1/2: the signed factor is int_0^{1/2} psi - int_{1/2}^1 psi.
    const auto s = CurveSpec::sign_changing(1.0, {0.5}, {1, -1});
    const auto psi = KernelSpec::power(2.0, 1.0);
    EXPECT_NEAR(apply_U(u_spec(psi, s), f0, std::vector<double>{2.0}), 0.25 - 0.75, 1e-12);
    // Same value through the generic path: f0 times a cutoff that is 1 on the relevant set.
    const auto cut = f0 * ball_indicator(100.0);
    EXPECT_NEAR(apply_U(u_spec(psi, s), cut, std::vector<double>{2.0}), -0.5, 1e-10);
}

TEST(ApplyU, RadialPowerHomogeneity) {
    const auto f = radial_power(-0.5);
    for (double g : {0.5, 1.0, 1.5}) {
        const auto psi = KernelSpec::riemann_liouville(1.5);
        const std::vector<double> x{3.0};
        // int t^{-g lambda} psi, lambda = 0.5.
        const double expected = f(x) * kernel_integral(psi.times_power(-0.5 * g), 0.0, 1.0).value;
        EXPECT_NEAR(apply_U(u_spec(psi, CurveSpec::power(1.0, g)), f, x), expected, 1e-12);
    }
}

TEST(ApplyU, DivergentPointValue) {
    try {
        apply_U(u_spec(), radial_power(-1.0), std::vector<double>{1.0});
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::divergent_point_value);
    }
    // The same singularity through the generic path (cutoff keeps it non-homogeneous).
    EXPECT_THROW(apply_U(u_spec(), inner_power(1.2, 0.1), std::vector<double>{0.5}), error);
    // A kernel blowing up at 0 is harmless when f vanishes there.
    const auto psi = KernelSpec::power(1.0, -1.5);
    EXPECT_NEAR(apply_U(u_spec(psi), outer_power(0.5, 0.5), std::vector<double>{4.0}),
                midpoint([](double t) { return std::pow(4.0 * t, -1.0) * std::pow(t, -1.5); }, 0.25, 1.0), 1e-8);
}

TEST(ApplyU, GenericPathAgainstMidpointOracle) {
    // f_eps with psi = RL(2), s = t^2 at x = 3: integrand nonzero for t > 3^{-1/2}.
    const auto f = outer_power(0.5, 0.1);
    const auto psi = KernelSpec::riemann_liouville(2.0);
    const double x = 3.0;
    const double oracle = midpoint(
        [&](double t) { return std::pow(t * t * x, -0.6) * 2.0 * (1.0 - t); }, 1.0 / std::sqrt(x), 1.0);
    EXPECT_NEAR(apply_U(u_spec(psi, CurveSpec::power(1.0, 2.0)), f, std::vector<double>{x}), oracle, 1e-10);
    // Reciprocal curve: |1/t| x > 1 for every t, f(x/t) = (x/t)^{-0.6}.
    const double rec = apply_U(u_spec(KernelSpec::constant(1.0), CurveSpec::reciprocal()), f, std::vector<double>{3.0});
    EXPECT_NEAR(rec, std::pow(3.0, -0.6) / 1.6, 1e-11);
    // g_eps with a log-free singular origin.
    const auto g = inner_power(0.5, 0.1);
    const double gv = apply_U(u_spec(), g, std::vector<double>{0.5});
    EXPECT_NEAR(gv, std::pow(0.5, -0.4) / 0.6, 1e-10);
}

TEST(ApplyV, Examples) {
    const auto op = u_spec();
    EXPECT_NEAR(apply_V(op, constant_function(1.0), std::vector<double>{0.7}), 0.5, 1e-14);
    EXPECT_NEAR(apply_V(op, sign_witness(), std::vector<double>{-2.0}), -0.5, 1e-14);
    auto op2 = u_spec(KernelSpec::riemann_liouville(0.5), CurveSpec::power(1.0, 1.0), 2);
    // int t^2 * 0.5 (1-t)^{-1/2} dt = 0.5 B(3, 1/2) = 8/15.
    EXPECT_NEAR(apply_V(op2, constant_function(1.0), std::vector<double>{1.0, 0.0}), 8.0 / 15.0, 1e-13);
}

TEST(ApplyV, BitIdenticalToEffectiveKernel) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    const std::vector<TestFunction> fs{outer_power(0.5, 0.2), ball_indicator(), sign_witness(), log_symbol()};
    for (int i = 0; i < 50; ++i) {
        const int n = 1 + i % 3;
        const auto psi = KernelSpec::product(u(rng), u(rng) - 0.5, u(rng));
        const auto s = CurveSpec::power(1.0, u(rng));
        auto op = u_spec(psi, s, n);
        auto eff = u_spec(psi.times_power(s.gamma() * n), s, n);
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        x[0] = u(rng);
        const auto& f = fs[static_cast<std::size_t>(i) % fs.size()];
        EXPECT_EQ(apply_V(op, f, x), apply_U(eff, f, x));
    }
}

TEST(ApplyUInfinite, Examples) {
    OperatorSpec op;
    op.kind = OperatorKind::infinite;
    op.psi = KernelSpec::gamma(1.0, 0.0, 1.0);
    EXPECT_NEAR(apply_U_infinite(op, constant_function(3.0), std::vector<double>{2.0}), 3.0, 1e-12);

    // f = |x|^{-1/2} 1_{|x|>1}, x = 1: Gamma(1/2, 1).
    const double oracle = midpoint([](double v) {
        // t = 1 + (v / (1 - v))^2 maps (0,1) onto (1, inf).
        const double w = v / (1.0 - v);
        const double t = 1.0 + w * w;
        return std::pow(t, -0.5) * std::exp(-t) * 2.0 * w / ((1.0 - v) * (1.0 - v));
    }, 0.0, 1.0, 400000);
    const double v = apply_U_infinite(op, outer_power(0.4, 0.1), std::vector<double>{1.0});
    EXPECT_NEAR(v, oracle, 1e-9);
    EXPECT_NEAR(v, 0.278805585280661, 1e-10);

    // Compact support gives apply_U.
    op.psi = KernelSpec::riemann_liouville(1.5);
    const auto f = outer_power(0.5, 0.25);
    const std::vector<double> x{2.5};
    EXPECT_EQ(apply_U_infinite(op, f, x), apply_U(op, f, x));
}

TEST(ApplyH, Examples) {
    const std::vector<double> x2{2.0, 0.0};
    EXPECT_NEAR(apply_H_radial(ball_indicator(), 2, x2), 0.25, 1e-13);
    EXPECT_NEAR(apply_U(u_spec(KernelSpec::power(2.0, 1.0), CurveSpec::power(1.0, 1.0), 2), ball_indicator(), x2),
                0.25, 1e-13);
    EXPECT_NEAR(apply_H_radial(constant_function(1.0), 3, std::vector<double>{0.0, 1.0, 1.0}), 1.0, 1e-14);
    EXPECT_NEAR(apply_H_radial(radial_power(1.0), 1, std::vector<double>{3.0}), 1.5, 1e-13);
    EXPECT_NEAR(apply_U(u_spec(), radial_power(1.0), std::vector<double>{3.0}), 1.5, 1e-13);
    try {
        apply_H_radial(sign_witness(), 1, std::vector<double>{1.0});
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::non_radial_input);
    }
}

TEST(ApplyH, MatchesUOnRandomRadialDescriptors) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.2, 4.0);
    for (int n = 1; n <= 3; ++n) {
        OperatorSpec op = u_spec(KernelSpec::power(n, n - 1.0), CurveSpec::power(1.0, 1.0), n);
        for (int i = 0; i < 20; ++i) {
            const auto f = random_radial(rng, n, 2);
            std::vector<double> x(static_cast<std::size_t>(n), 0.0);
            x[static_cast<std::size_t>(i) % n] = u(rng);
            const double h = apply_H_radial(f, n, x);
            const double v = apply_U(op, f, x);
            EXPECT_NEAR(h, v, 1e-9 * std::max(1.0, std::abs(v))) << f.describe();
        }
    }
}

TEST(Commutator, ConstantSymbolVanishes) {
    auto op = u_spec(KernelSpec::riemann_liouville(0.5));
    op.b = constant_function(4.0);
    for (const auto& f : {outer_power(0.5, 0.1), sign_witness(), log_symbol(), ball_indicator()})
        for (double x : {-2.0, 0.3, 3.0}) EXPECT_EQ(apply_commutator(op, f, std::vector<double>{x}), 0.0);
}

TEST(Commutator, IndicatorSymbol) {
    auto op = u_spec();
    op.b = ball_indicator();
    for (double x : {1.5, 2.0, -4.0, 10.0})
        EXPECT_NEAR(apply_commutator(op, ball_indicator(), std::vector<double>{x}), -1.0 / std::abs(x), 1e-12);
    // Inside the ball b(x) = b(tx) = 1.
    EXPECT_NEAR(apply_commutator(op, ball_indicator(), std::vector<double>{0.5}), 0.0, 1e-14);
}

TEST(Commutator, LogSymbolOnExtremalFunction) {
    auto op = u_spec();
    op.b = log_symbol();
    const auto f = extremal_outer(1, 0.0, 2.0, 0.1);
    const double x = 2.0, mu = 0.6, c = 1.0 - mu;
    // -|x|^{-mu} int_{1/2}^1 t^{-mu} log t dt with antiderivative t^c(1/c^2 - ln t / c).
    auto F = [&](double t) { return std::pow(t, c) * (1.0 / (c * c) - std::log(t) / c); };
    const double expected = std::pow(x, -mu) * (F(1.0) - F(0.5));
    EXPECT_NEAR(apply_commutator(op, f, std::vector<double>{x}), expected, 1e-11);
    const auto k = outer_set_log_integral(KernelSpec::constant(1.0), CurveSpec::power(1.0, 1.0), mu, 0.5);
    EXPECT_NEAR(std::pow(x, -mu) * k.value, expected, 1e-12);
}

TEST(Commutator, FusedMatchesSplitForm) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.3, 3.0);
    const std::vector<TestFunction> symbols{log_symbol(), ball_indicator(1.5), sign_witness(), radial_power(0.5)};
    const std::vector<TestFunction> fs{outer_power(0.5, 0.2), ball_indicator(), inner_power(0.3, 0.2),
                                       constant_function(1.0)};
    for (int i = 0; i < 40; ++i) {
        auto op = u_spec(KernelSpec::riemann_liouville(u(rng)), CurveSpec::power(1.0, u(rng)));
        op.b = symbols[static_cast<std::size_t>(i) % symbols.size()];
        const auto& f = fs[static_cast<std::size_t>(i / 4) % fs.size()];
        const std::vector<double> x{(i % 2 ? -1.0 : 1.0) * u(rng)};
        const double fused = apply_commutator(op, f, x);
        const double split = (*op.b)(x)*apply_U(op, f, x) - apply_U(op, *op.b * f, x);
        EXPECT_NEAR(fused, split, 1e-9 * std::max(1.0, std::abs(split))) << op.b->describe() << " " << f.describe();
    }
}

TEST(Properties, Linearity) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const std::vector<TestFunction> fs{outer_power(0.5, 0.1), inner_power(0.2, 0.3), ball_indicator(2.0),
                                       log_symbol(), sign_witness()};
    const auto op = u_spec(KernelSpec::product(1.0, 0.5, 1.5), CurveSpec::power(1.0, 1.5));
    for (int i = 0; i < 30; ++i) {
        const auto& f = fs[static_cast<std::size_t>(i) % fs.size()];
        const auto& g = fs[static_cast<std::size_t>(i / 5) % fs.size()];
        const double a = u(rng), b = u(rng);
        const std::vector<double> x{u(rng) * 2.0 + (i % 2 ? 0.1 : -0.1)};
        const double lhs = apply_U(op, a * f + b * g, x);
        const double rhs = a * apply_U(op, f, x) + b * apply_U(op, g, x);
        EXPECT_NEAR(lhs, rhs, 1e-9 * (1.0 + std::abs(rhs)));
    }
}

TEST(Properties, PositivityAndDilation) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 40; ++i) {
        const int n = 1 + i % 2;
        const auto f = random_radial(rng, n, 2);
        const auto psi = KernelSpec::riemann_liouville(u(rng));
        // gamma < 1 keeps t^{gamma e} integrable for every origin exponent e > -1 of the generator.
        const auto op = u_spec(psi, CurveSpec::power(1.0, 0.1 + 0.3 * u(rng)), n);
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        x[0] = u(rng);
        const double lam = u(rng);
        const double lhs = apply_U(op, dilate(lam, f), x);
        std::vector<double> lx = x;
        for (double& v : lx) v *= lam;
        const double rhs = apply_U(op, f, lx);
        EXPECT_NEAR(lhs, rhs, 1e-9 * (1.0 + std::abs(rhs))) << f.describe();
        const auto pos = random_radial(rng, n, 2, true);
        EXPECT_GE(apply_U(op, pos, x), 0.0) << pos.describe();
    }
}

TEST(Properties, MinkowskiUpperBound) {
    QuadratureConfig cfg;
    const auto w = power_weight(0.0, 1);
    for (const auto& psi : {KernelSpec::constant(1.0), KernelSpec::riemann_liouville(2.0)}) {
        const auto op = u_spec(psi);
        const double C = lp_constant(psi, op.s, 1, 0.0, 2.0).value;
        for (const auto& f : {extremal_outer(1, 0.0, 2.0, 0.25), extremal_inner(1, 0.0, 2.0, 0.25), ball_indicator(),
                              ball_indicator(3.0) - 0.5 * ball_indicator(), outer_power(0.5, 0.25) * sign_witness()}) {
            const double nf = lp_norm(f, w, 2.0, cfg);
            const double nu = lp_norm(operator_image(op, f, cfg), w, 2.0, cfg);
            EXPECT_LE(nu, C * nf * (1.0 + 10.0 * cfg.rel_tol)) << f.describe();
            EXPECT_GT(nu, 0.0);
        }
    }
}

TEST(Properties, ImageOfBallIndicatorHasExactNorm) {
    // U 1_B(x) = min(1, 1/|x|) for psi = 1, s = t: L^2 norm^2 = 2 + 2 = 4.
    const auto img = operator_image(u_spec(), ball_indicator());
    EXPECT_NEAR(lp_norm(img, power_weight(0.0, 1), 2.0), 2.0, 1e-9);
}

TEST(SetIntegrals, AgreeWithClosedForms) {
    const auto one = KernelSpec::constant(1.0);
    const auto id = CurveSpec::power(1.0, 1.0);
    // int_{tau}^1 t^{-mu} dt and int_0^tau t^{-mu} dt.
    EXPECT_NEAR(outer_set_integral(one, id, 0.6, 0.25).value, (1.0 - std::pow(0.25, 0.4)) / 0.4, 1e-14);
    EXPECT_NEAR(inner_set_integral(one, id, 0.6, 0.25).value, std::pow(0.25, 0.4) / 0.4, 1e-14);
    EXPECT_NEAR(outer_set_integral(one, id, 0.6, 2.0).value, 0.0, 0.0);
    // s = 1/t: |s| > tau for all t when tau <= 1.
    EXPECT_NEAR(outer_set_integral(one, CurveSpec::reciprocal(), 0.5, 0.5).value, 2.0 / 3.0, 1e-14);
    const auto rl = KernelSpec::riemann_liouville(2.5);
    const double mu = 0.3;
    const double oracle = midpoint([&](double t) { return std::pow(t, -2.0 * mu) * rl(t); }, std::sqrt(0.2), 1.0);
    EXPECT_NEAR(outer_set_integral(rl, CurveSpec::power(1.0, 2.0), mu, 0.2).value, oracle, 1e-9);
}

TEST(ApplyOnGrid, MatchesPointwise) {
    const auto op = u_spec(KernelSpec::riemann_liouville(0.5));
    const auto f = outer_power(0.5, 0.1);
    std::vector<std::vector<double>> xs;
    for (int i = 1; i <= 16; ++i) xs.push_back({0.5 * i});
    const auto vals = apply_on_grid(op, f, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(vals[i], apply_U(op, f, xs[i]));
}
