#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hclab/functions.hpp"

using namespace hclab;

namespace {

// Descriptors drawn at random from homogeneous primitives and combinators.
TestFunction random_homogeneous(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    switch (pick(rng)) {
    case 0: return sign_witness();
    case 1: return angular_witness(AngularFunction::abs_first_power(std::abs(u(rng))));
    case 2: return radial_power(u(rng));
    case 3: return constant_function(u(rng));
    case 4: return u(rng) * random_homogeneous(rng, depth - 1);
    case 5: return random_homogeneous(rng, depth - 1) * random_homogeneous(rng, depth - 1);
    default: return dilate(1.0 + std::abs(u(rng)), random_homogeneous(rng, depth - 1));
    }
}

} // namespace

TEST(BuildFunction, Examples) {
    FunctionParams prm;
    prm.n = 1;
    prm.alpha = 0.0;
    prm.p = 2.0;
    prm.eps = 0.1;
    const auto f = build_function("outer", prm);
    EXPECT_DOUBLE_EQ(f({2.0}), std::pow(2.0, -0.6));
    EXPECT_EQ(f({0.5}), 0.0);
    EXPECT_EQ(sign_witness()({-3.0}), -1.0);
    EXPECT_EQ(ball_indicator()({2.0}), 0.0);
    EXPECT_EQ(ball_indicator()({0.0, 0.5}), 1.0);
}

TEST(BuildFunction, ParamOutOfRange) {
    for (double eps : {0.0, 1.0, -0.2, 1.5}) {
        try {
            outer_power(0.5, eps);
            FAIL() << eps;
        } catch (const error& e) {
            EXPECT_EQ(e.code(), errc::param_out_of_range);
        }
        EXPECT_THROW(inner_power(0.5, eps), error);
    }
    EXPECT_THROW(build_function("nonsense"), error);
    EXPECT_THROW(ball_indicator(0.0), error);
}

TEST(Evaluate, Examples) {
    EXPECT_NEAR(log_symbol()({std::numbers::e}), 1.0, 1e-15);
    EXPECT_NEAR(log_symbol()({0.0, -std::numbers::e}), 1.0, 1e-15);
    EXPECT_EQ((sign_witness() * ball_indicator())({0.5}), 1.0);
    const auto f1 = angular_witness(AngularFunction::sign_first());
    EXPECT_EQ(f1({-2.0, 0.0}), -1.0);
    EXPECT_EQ(f1({0.3, 5.0}), 1.0);
}

TEST(Evaluate, UndefinedAtOrigin) {
    for (const auto& f : {log_symbol(), angular_witness(AngularFunction::sign_first()), radial_power(-1.0),
                          inner_power(0.5, 0.1)}) {
        try {
            f({0.0, 0.0});
            FAIL() << f.describe();
        } catch (const error& e) {
            EXPECT_EQ(e.code(), errc::undefined_at_origin);
        }
    }
    EXPECT_EQ(outer_power(0.5, 0.1)({0.0}), 0.0);
    EXPECT_EQ(radial_power(2.0)({0.0}), 0.0);
}

TEST(HomogeneityInfo, Examples) {
    EXPECT_EQ(*sign_witness().homogeneity_info(), (Homogeneity{0.0, 1}));
    EXPECT_EQ(*angular_witness(AngularFunction::abs_first_power(1.0)).homogeneity_info(), (Homogeneity{0.0, 0}));
    EXPECT_FALSE(outer_power(0.5, 0.1).homogeneity_info());
    EXPECT_FALSE(inner_power(0.5, 0.1).homogeneity_info());
    EXPECT_FALSE(ball_indicator().homogeneity_info());
    EXPECT_FALSE(log_symbol().homogeneity_info());
    EXPECT_EQ(*(radial_power(1.5) * sign_witness()).homogeneity_info(), (Homogeneity{1.5, 1}));
    EXPECT_FALSE((radial_power(1.0) + constant_function(1.0)).homogeneity_info());
    EXPECT_EQ(*(radial_power(1.0) + 3.0 * radial_power(1.0)).homogeneity_info(), (Homogeneity{1.0, 0}));
}

TEST(HomogeneityInfo, DilationIdentityOnRandomDescriptors) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int checked = 0;
    for (int d = 0; d < 40; ++d) {
        const auto f = random_homogeneous(rng, 3);
        const auto h = f.homogeneity_info();
        ASSERT_TRUE(h) << f.describe();
        for (int i = 0; i < 25; ++i) {
            double x[2] = {u(rng), u(rng)};
            double t = u(rng);
            if (t == 0.0) t = 0.5;
            const double lhs = f.at_scaled(t, x);
            const double rhs = (h->parity == 1 && t < 0 ? -1.0 : 1.0) * std::pow(std::abs(t), h->degree) * f(x);
            EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(rhs))) << f.describe();
            ++checked;
        }
    }
    EXPECT_EQ(checked, 1000);
}

TEST(Metadata, Breakpoints) {
    const auto f = outer_power(0.5, 0.1) + ball_indicator(2.0);
    EXPECT_EQ(f.meta().breakpoints, (std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(dilate(4.0, f).meta().breakpoints, (std::vector<double>{0.25, 0.5}));
    EXPECT_TRUE(f.meta().radial);
    EXPECT_FALSE((f * sign_witness()).meta().radial);
}

TEST(Metadata, EndBehaviour) {
    const auto fe = outer_power(0.5, 0.1);
    EXPECT_TRUE(fe.meta().origin.vanishes);
    EXPECT_DOUBLE_EQ(*fe.meta().tail.exact_power, -0.6);
    const auto ge = inner_power(0.5, 0.1);
    EXPECT_TRUE(ge.meta().tail.vanishes);
    EXPECT_DOUBLE_EQ(*ge.meta().origin.exact_power, -0.4);
    const auto both = fe + ge;
    EXPECT_DOUBLE_EQ(*both.meta().origin.exact_power, -0.4);
    EXPECT_DOUBLE_EQ(*both.meta().tail.exact_power, -0.6);
    const auto prod = log_symbol() * fe;
    EXPECT_TRUE(prod.meta().origin.vanishes);
    EXPECT_FALSE(prod.meta().tail.exact_power);
    EXPECT_TRUE(prod.meta().tail.has_log);
    EXPECT_DOUBLE_EQ(prod.meta().tail.order, -0.6);
}

TEST(Metadata, SumsAndProductsEvaluateExactly) {
    const auto f = 2.0 * log_symbol() + radial_power(2.0) * sign_witness();
    const double x[2] = {-1.5, 2.0};
    const double r = std::hypot(x[0], x[1]);
    EXPECT_DOUBLE_EQ(f(x), 2.0 * std::log(r) + r * r * -1.0);
    EXPECT_DOUBLE_EQ(dilate(3.0, f)(x), f(std::vector<double>{-4.5, 6.0}));
}

TEST(Descriptor, RoundTrip) {
    std::vector<TestFunction> fs{outer_power(0.5, 0.1),
                                 inner_power(1.0 / 3.0, 0.125),
                                 sign_witness() * ball_indicator(2.5),
                                 angular_witness(AngularFunction::abs_first_power(0.7)),
                                 dilate(2.0, log_symbol()) + (-0.1) * radial_power(1e-3),
                                 angular_witness(AngularFunction::tabulated(AngularTable(2, {1, 2, 3, 4}, 4))),
                                 constant_function(0.1)};
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const auto& f : fs) {
        const auto g = parse_function(f.describe());
        EXPECT_EQ(g.describe(), f.describe());
        for (int i = 0; i < 20; ++i) {
            const double x[2] = {u(rng), u(rng)};
            EXPECT_EQ(f(x), g(x));
        }
    }
    EXPECT_DOUBLE_EQ(parse_function("outer(3/4, 1/10)").parameter(0), 0.75);
    EXPECT_THROW(parse_function("outer(1)"), error);
    EXPECT_THROW(parse_function("wat()"), error);
    EXPECT_THROW(parse_function("sum(log(), "), error);
}

TEST(Evaluate, RadialValueRequiresRadial) {
    EXPECT_DOUBLE_EQ(outer_power(0.5, 0.5).radial_value(4.0), 0.25);
    try {
        sign_witness().radial_value(1.0);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::non_radial_input);
    }
}
