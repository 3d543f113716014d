#pragma once

/**
 * @file functions.hpp
 * @brief Test functions as immutable descriptor trees with exact metadata.
 *
 * Metadata travels with every node:
 *  - homogeneity (lambda, kappa): f(tx) = sgn(t)^kappa |t|^lambda f(x) for all t != 0;
 *  - radial flag and the radii where the function is not smooth;
 *  - behaviour of f(r theta) below the first and beyond the last radius:
 *    identically zero, or C(theta) r^e exactly, or only a leading order.
 * Spaces and operators use these to pick exact polar and 1D reductions.
 */

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hclab/error.hpp"
#include "hclab/text.hpp"
#include "hclab/weights.hpp"

namespace hclab {

enum class FunctionKind {
    outer_power,
    inner_power,
    sign_witness,
    angular_witness,
    log_symbol,
    ball_indicator,
    radial_power,
    constant,
    opaque,
    sum,
    scale,
    product,
    dilate
};

/// phi on the unit sphere for the angular witness phi(x/|x|).
struct AngularFunction {
    enum class Kind { sign_first, abs_first_power, table };
    Kind kind = Kind::sign_first;
    double q = 1.0;
    std::shared_ptr<const AngularTable> table;

    static AngularFunction sign_first() { return {Kind::sign_first, 0.0, nullptr}; }
    static AngularFunction abs_first_power(double q) {
        require(q >= 0.0, errc::param_out_of_range, "angular power must be nonnegative");
        return {Kind::abs_first_power, q, nullptr};
    }
    static AngularFunction tabulated(AngularTable t) {
        return {Kind::table, 0.0, std::make_shared<const AngularTable>(std::move(t))};
    }

    /// 1 if phi(-theta) = -phi(theta), 0 if even.
    int parity() const { return kind == Kind::sign_first ? 1 : 0; }

    /// theta need not be normalised; only its direction matters.
    double operator()(std::span<const double> theta) const {
        switch (kind) {
        case Kind::sign_first: return theta[0] > 0.0 ? 1.0 : (theta[0] < 0.0 ? -1.0 : 0.0);
        case Kind::abs_first_power: return std::pow(std::abs(theta[0]) / norm(theta), q);
        case Kind::table: {
            require(static_cast<int>(theta.size()) == table->dimension(), errc::invalid_argument,
                    "angular table dimension does not match the point");
            const double r = norm(theta);
            double unit[3] = {0.0, 0.0, 0.0};
            for (std::size_t i = 0; i < theta.size(); ++i) unit[i] = theta[i] / r;
            return (*table)(std::span<const double>(unit, theta.size()));
        }
        }
        return 0.0;
    }
};

struct Homogeneity {
    double degree = 0.0;
    int parity = 0;
    friend bool operator==(const Homogeneity&, const Homogeneity&) = default;
};

/// f(r theta) near r = 0 (or r = inf) along every ray.
struct EndBehaviour {
    bool vanishes = false;              // identically zero on the end region
    std::optional<double> exact_power;  // f(r theta) = C(theta) r^e exactly on the end region
    double order = 0.0;                 // leading power (logs ignored); NaN if unknown
    bool has_log = false;
};

struct FunctionMeta {
    std::optional<Homogeneity> homogeneity;
    bool radial = false;
    std::optional<int> parity;  // f(-x) = (-1)^parity f(x)
    std::vector<double> breakpoints;  // radii, increasing
    EndBehaviour origin;
    EndBehaviour tail;
    bool singular_at_origin = false;
    bool structured = true;  // false once an opaque node is involved
};

class TestFunction;

namespace detail {
struct FunctionNode;
}

class TestFunction {
public:
    using PointFn = std::function<double(std::span<const double>)>;
    using RadialFn = std::function<double(double)>;

    TestFunction() : TestFunction(constant_node(0.0)) {}

    FunctionKind kind() const;
    const FunctionMeta& meta() const;
    const std::vector<TestFunction>& children() const;
    double parameter(std::size_t i) const;
    const AngularFunction& angular() const;

    double operator()(std::span<const double> x) const { return at_scaled(1.0, x); }
    double operator()(std::initializer_list<double> x) const {
        return at_scaled(1.0, std::span<const double>(x.begin(), x.size()));
    }
    /// f(t x) without materialising t x.
    double at_scaled(double t, std::span<const double> x) const;
    /// Profile value f(r e_1) of a radial function.
    double radial_value(double r) const;
    /// f(r theta) along a ray; theta is a unit vector.
    double on_ray(double r, std::span<const double> theta) const { return at_scaled(r, theta); }

    std::optional<Homogeneity> homogeneity_info() const { return meta().homogeneity; }
    std::string describe() const;

    // Primitive factories.
    friend TestFunction outer_power(double a, double eps);
    friend TestFunction inner_power(double a, double eps);
    friend TestFunction sign_witness();
    friend TestFunction angular_witness(AngularFunction phi);
    friend TestFunction log_symbol();
    friend TestFunction ball_indicator(double radius);
    friend TestFunction radial_power(double lambda);
    friend TestFunction constant_function(double c);
    friend TestFunction opaque_function(PointFn f, std::string name, FunctionMeta meta);
    friend TestFunction opaque_radial(RadialFn f, std::string name, FunctionMeta meta);
    friend TestFunction operator+(const TestFunction& f, const TestFunction& g);
    friend TestFunction operator*(double c, const TestFunction& f);
    friend TestFunction operator*(const TestFunction& f, const TestFunction& g);
    friend TestFunction dilate(double lambda, const TestFunction& f);

private:
    explicit TestFunction(std::shared_ptr<const detail::FunctionNode> n) : node_(std::move(n)) {}
    static std::shared_ptr<const detail::FunctionNode> constant_node(double c);
    double eval(double t, std::span<const double> x, double r) const;

    std::shared_ptr<const detail::FunctionNode> node_;
};

namespace detail {

struct FunctionNode {
    FunctionKind kind = FunctionKind::constant;
    double p0 = 0.0, p1 = 0.0;
    AngularFunction angular;
    std::vector<TestFunction> children;
    TestFunction::PointFn point_fn;
    TestFunction::RadialFn radial_fn;
    std::string name;
    FunctionMeta meta;
};

inline EndBehaviour power_end(double e) { return {false, e, e, false}; }
inline EndBehaviour zero_end(bool at_origin) {
    const double inf = std::numeric_limits<double>::infinity();
    return {true, 0.0, at_origin ? inf : -inf, false};
}

inline std::vector<double> merge_breakpoints(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

inline EndBehaviour sum_end(const EndBehaviour& a, const EndBehaviour& b, bool at_origin) {
    if (a.vanishes) return b;
    if (b.vanishes) return a;
    EndBehaviour e;
    e.order = at_origin ? std::min(a.order, b.order) : std::max(a.order, b.order);
    e.has_log = a.has_log || b.has_log;
    if (a.exact_power && b.exact_power && *a.exact_power == *b.exact_power) e.exact_power = a.exact_power;
    return e;
}

inline EndBehaviour product_end(const EndBehaviour& a, const EndBehaviour& b, bool at_origin) {
    if (a.vanishes) return a;
    if (b.vanishes) return b;
    EndBehaviour e;
    e.order = a.order + b.order;
    e.has_log = a.has_log || b.has_log;
    if (a.exact_power && b.exact_power) e.exact_power = *a.exact_power + *b.exact_power;
    (void)at_origin;
    return e;
}

} // namespace detail

inline std::shared_ptr<const detail::FunctionNode> TestFunction::constant_node(double c) {
    auto n = std::make_shared<detail::FunctionNode>();
    n->kind = FunctionKind::constant;
    n->p0 = c;
    n->meta.homogeneity = Homogeneity{0.0, 0};
    n->meta.radial = true;
    n->meta.parity = 0;
    n->meta.origin = c == 0.0 ? detail::zero_end(true) : detail::power_end(0.0);
    n->meta.tail = c == 0.0 ? detail::zero_end(false) : detail::power_end(0.0);
    return n;
}

inline FunctionKind TestFunction::kind() const { return node_->kind; }
inline const FunctionMeta& TestFunction::meta() const { return node_->meta; }
inline const std::vector<TestFunction>& TestFunction::children() const { return node_->children; }
inline const AngularFunction& TestFunction::angular() const { return node_->angular; }
inline double TestFunction::parameter(std::size_t i) const { return i == 0 ? node_->p0 : node_->p1; }

inline double TestFunction::at_scaled(double t, std::span<const double> x) const {
    return eval(t, x, std::abs(t) * norm(x));
}

inline double TestFunction::radial_value(double r) const {
    require(meta().radial, errc::non_radial_input, "radial profile requested for a non-radial function");
    const double e1 = 1.0;
    return eval(r, std::span<const double>(&e1, 1), std::abs(r));
}

/// r = |t x| is passed down so nodes never rebuild the point.
inline double TestFunction::eval(double t, std::span<const double> x, double r) const {
    const auto& n = *node_;
    switch (n.kind) {
    case FunctionKind::outer_power: return r > 1.0 ? std::pow(r, -n.p0 - n.p1) : 0.0;
    case FunctionKind::inner_power: {
        if (r >= 1.0) return 0.0;
        const double e = -n.p0 + n.p1;
        if (r == 0.0 && e < 0.0) fail(errc::undefined_at_origin, "inner power family is singular at 0");
        return std::pow(r, e);
    }
    case FunctionKind::sign_witness: {
        const double v = t * x[0];
        return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
    case FunctionKind::angular_witness: {
        if (r == 0.0) fail(errc::undefined_at_origin, "angular witness is undefined at 0");
        const double value = n.angular(x);
        return (t < 0.0 && n.angular.parity() == 1) ? -value : value;
    }
    case FunctionKind::log_symbol:
        if (r == 0.0) fail(errc::undefined_at_origin, "log|x| is undefined at 0");
        return std::log(r);
    case FunctionKind::ball_indicator: return r < n.p0 ? 1.0 : 0.0;
    case FunctionKind::radial_power:
        if (r == 0.0) {
            if (n.p0 < 0.0) fail(errc::undefined_at_origin, "negative power is singular at 0");
            return n.p0 == 0.0 ? 1.0 : 0.0;
        }
        return std::pow(r, n.p0);
    case FunctionKind::constant: return n.p0;
    case FunctionKind::opaque: {
        if (n.radial_fn) return n.radial_fn(r);
        std::vector<double> p(x.begin(), x.end());
        for (double& v : p) v *= t;
        return n.point_fn(p);
    }
    case FunctionKind::sum: {
        double s = 0.0;
        for (const auto& c : n.children) s += c.eval(t, x, r);
        return s;
    }
    case FunctionKind::scale: return n.p0 == 0.0 ? 0.0 : n.p0 * n.children[0].eval(t, x, r);
    case FunctionKind::product: {
        double s = 1.0;
        for (const auto& c : n.children) {
            s *= c.eval(t, x, r);
            if (s == 0.0) return 0.0;  // cutoffs win over singular factors
        }
        return s;
    }
    case FunctionKind::dilate: return n.children[0].eval(t * n.p0, x, r * n.p0);
    }
    return 0.0;
}

namespace detail {
inline std::shared_ptr<detail::FunctionNode> make_node(FunctionKind k) {
    auto n = std::make_shared<detail::FunctionNode>();
    n->kind = k;
    return n;
}
} // namespace detail

/// |x|^{-a-eps} 1_{|x|>1}
inline TestFunction outer_power(double a, double eps) {
    require(eps > 0.0 && eps < 1.0, errc::param_out_of_range, "extremal family needs 0 < eps < 1");
    auto n = detail::make_node(FunctionKind::outer_power);
    n->p0 = a;
    n->p1 = eps;
    n->meta.radial = true;
    n->meta.parity = 0;
    n->meta.breakpoints = {1.0};
    n->meta.origin = detail::zero_end(true);
    n->meta.tail = detail::power_end(-a - eps);
    return TestFunction(n);
}

/// |x|^{-a+eps} 1_{|x|<1}
inline TestFunction inner_power(double a, double eps) {
    require(eps > 0.0 && eps < 1.0, errc::param_out_of_range, "extremal family needs 0 < eps < 1");
    auto n = detail::make_node(FunctionKind::inner_power);
    n->p0 = a;
    n->p1 = eps;
    n->meta.radial = true;
    n->meta.parity = 0;
    n->meta.breakpoints = {1.0};
    n->meta.origin = detail::power_end(-a + eps);
    n->meta.tail = detail::zero_end(false);
    n->meta.singular_at_origin = -a + eps < 0.0;
    return TestFunction(n);
}

/// sgn x_1
inline TestFunction sign_witness() {
    auto n = detail::make_node(FunctionKind::sign_witness);
    n->meta.homogeneity = Homogeneity{0.0, 1};
    n->meta.parity = 1;
    n->meta.origin = detail::power_end(0.0);
    n->meta.tail = detail::power_end(0.0);
    return TestFunction(n);
}

/// phi(x/|x|)
inline TestFunction angular_witness(AngularFunction phi) {
    auto n = detail::make_node(FunctionKind::angular_witness);
    n->meta.homogeneity = Homogeneity{0.0, phi.parity()};
    n->meta.parity = phi.parity();
    n->meta.origin = detail::power_end(0.0);
    n->meta.tail = detail::power_end(0.0);
    n->meta.singular_at_origin = true;
    n->angular = std::move(phi);
    return TestFunction(n);
}

/// log|x|
inline TestFunction log_symbol() {
    auto n = detail::make_node(FunctionKind::log_symbol);
    n->meta.radial = true;
    n->meta.parity = 0;
    n->meta.origin = {false, std::nullopt, 0.0, true};
    n->meta.tail = {false, std::nullopt, 0.0, true};
    n->meta.singular_at_origin = true;
    return TestFunction(n);
}

/// 1_{|x| < radius}
inline TestFunction ball_indicator(double radius = 1.0) {
    require(radius > 0.0, errc::param_out_of_range, "ball radius must be positive");
    auto n = detail::make_node(FunctionKind::ball_indicator);
    n->p0 = radius;
    n->meta.radial = true;
    n->meta.parity = 0;
    n->meta.breakpoints = {radius};
    n->meta.origin = detail::power_end(0.0);
    n->meta.tail = detail::zero_end(false);
    return TestFunction(n);
}

/// |x|^lambda
inline TestFunction radial_power(double lambda) {
    auto n = detail::make_node(FunctionKind::radial_power);
    n->p0 = lambda;
    n->meta.homogeneity = Homogeneity{lambda, 0};
    n->meta.radial = true;
    n->meta.parity = 0;
    n->meta.origin = detail::power_end(lambda);
    n->meta.tail = detail::power_end(lambda);
    n->meta.singular_at_origin = lambda < 0.0;
    return TestFunction(n);
}

inline TestFunction constant_function(double c) { return TestFunction(TestFunction::constant_node(c)); }

/// Escape hatch. `meta` is trusted as declared; structured fast paths stay off.
inline TestFunction opaque_function(TestFunction::PointFn f, std::string name, FunctionMeta meta = {}) {
    auto n = detail::make_node(FunctionKind::opaque);
    n->point_fn = std::move(f);
    n->name = std::move(name);
    meta.radial = false;
    meta.structured = false;
    if (!meta.homogeneity) {
        meta.origin.order = meta.tail.order = std::numeric_limits<double>::quiet_NaN();
    }
    n->meta = std::move(meta);
    return TestFunction(n);
}

/// Opaque radial profile r -> f(r); `meta` declares breakpoints and end behaviour.
inline TestFunction opaque_radial(TestFunction::RadialFn f, std::string name, FunctionMeta meta = {}) {
    auto n = detail::make_node(FunctionKind::opaque);
    n->radial_fn = std::move(f);
    n->name = std::move(name);
    meta.radial = true;
    meta.parity = 0;
    meta.structured = false;
    n->meta = std::move(meta);
    return TestFunction(n);
}

inline TestFunction operator+(const TestFunction& f, const TestFunction& g) {
    auto n = detail::make_node(FunctionKind::sum);
    n->children = {f, g};
    const auto &a = f.meta(), &b = g.meta();
    if (a.homogeneity && b.homogeneity && *a.homogeneity == *b.homogeneity) n->meta.homogeneity = a.homogeneity;
    n->meta.radial = a.radial && b.radial;
    if (a.parity && b.parity && *a.parity == *b.parity) n->meta.parity = a.parity;
    n->meta.breakpoints = detail::merge_breakpoints(a.breakpoints, b.breakpoints);
    n->meta.origin = detail::sum_end(a.origin, b.origin, true);
    n->meta.tail = detail::sum_end(a.tail, b.tail, false);
    n->meta.singular_at_origin = a.singular_at_origin || b.singular_at_origin;
    n->meta.structured = a.structured && b.structured;
    return TestFunction(n);
}

inline TestFunction operator*(double c, const TestFunction& f) {
    auto n = detail::make_node(FunctionKind::scale);
    n->p0 = c;
    n->children = {f};
    n->meta = f.meta();
    if (c == 0.0) {
        n->meta.origin = detail::zero_end(true);
        n->meta.tail = detail::zero_end(false);
        n->meta.breakpoints.clear();
    }
    return TestFunction(n);
}

inline TestFunction operator-(const TestFunction& f, const TestFunction& g) { return f + (-1.0) * g; }

inline TestFunction operator*(const TestFunction& f, const TestFunction& g) {
    auto n = detail::make_node(FunctionKind::product);
    n->children = {f, g};
    const auto &a = f.meta(), &b = g.meta();
    if (a.homogeneity && b.homogeneity)
        n->meta.homogeneity = Homogeneity{a.homogeneity->degree + b.homogeneity->degree,
                                          (a.homogeneity->parity + b.homogeneity->parity) % 2};
    n->meta.radial = a.radial && b.radial;
    if (a.parity && b.parity) n->meta.parity = (*a.parity + *b.parity) % 2;
    n->meta.breakpoints = detail::merge_breakpoints(a.breakpoints, b.breakpoints);
    n->meta.origin = detail::product_end(a.origin, b.origin, true);
    n->meta.tail = detail::product_end(a.tail, b.tail, false);
    n->meta.singular_at_origin = (a.singular_at_origin && !b.origin.vanishes) ||
                                 (b.singular_at_origin && !a.origin.vanishes);
    n->meta.structured = a.structured && b.structured;
    return TestFunction(n);
}

/// x -> f(lambda x), lambda > 0.
inline TestFunction dilate(double lambda, const TestFunction& f) {
    require(lambda > 0.0, errc::param_out_of_range, "dilation factor must be positive");
    auto n = detail::make_node(FunctionKind::dilate);
    n->p0 = lambda;
    n->children = {f};
    n->meta = f.meta();
    for (double& b : n->meta.breakpoints) b /= lambda;
    return TestFunction(n);
}

/// Outer extremal family for exponent a = (n + alpha)/p.
inline TestFunction extremal_outer(int n, double alpha, double p, double eps) {
    return outer_power((n + alpha) / p, eps);
}
inline TestFunction extremal_inner(int n, double alpha, double p, double eps) {
    return inner_power((n + alpha) / p, eps);
}

inline std::string TestFunction::describe() const {
    const auto& n = *node_;
    auto join = [&](std::string head) {
        std::string s = head + "(";
        for (std::size_t i = 0; i < n.children.size(); ++i) s += (i ? ", " : "") + n.children[i].describe();
        return s + ")";
    };
    switch (n.kind) {
    case FunctionKind::outer_power: return "outer(" + format_real(n.p0) + ", " + format_real(n.p1) + ")";
    case FunctionKind::inner_power: return "inner(" + format_real(n.p0) + ", " + format_real(n.p1) + ")";
    case FunctionKind::sign_witness: return "sign()";
    case FunctionKind::angular_witness:
        switch (n.angular.kind) {
        case AngularFunction::Kind::sign_first: return "angular_sign()";
        case AngularFunction::Kind::abs_first_power: return "angular_abs(" + format_real(n.angular.q) + ")";
        case AngularFunction::Kind::table: {
            const auto& t = *n.angular.table;
            std::string s = "angular_table(" + std::to_string(t.dimension()) + ", " + std::to_string(t.n_azimuth()) +
                            ", " + std::to_string(t.n_polar());
            for (double v : t.values()) s += ", " + format_real(v);
            return s + ")";
        }
        }
        return "angular()";
    case FunctionKind::log_symbol: return "log()";
    case FunctionKind::ball_indicator: return "ball(" + format_real(n.p0) + ")";
    case FunctionKind::radial_power: return "power(" + format_real(n.p0) + ")";
    case FunctionKind::constant: return "const(" + format_real(n.p0) + ")";
    case FunctionKind::opaque: return "opaque(" + n.name + ")";
    case FunctionKind::sum: return join("sum");
    case FunctionKind::scale: return "scale(" + format_real(n.p0) + ", " + n.children[0].describe() + ")";
    case FunctionKind::product: return join("product");
    case FunctionKind::dilate: return "dilate(" + format_real(n.p0) + ", " + n.children[0].describe() + ")";
    }
    return "?";
}

namespace detail {

class DescriptorParser {
public:
    explicit DescriptorParser(std::string_view s) : s_(s) {}

    TestFunction parse_all() {
        auto f = parse();
        skip();
        if (pos_ != s_.size()) error("trailing text");
        return f;
    }

private:
    [[noreturn]] void error(const std::string& what) const {
        fail(errc::config_parse, "function descriptor '" + std::string(s_) + "': " + what + " at offset " +
                                     std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::string identifier() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (start == pos_) error("expected a name");
        return std::string(s_.substr(start, pos_ - start));
    }
    double number() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ')') ++pos_;
        if (start == pos_) error("expected a number");
        return parse_real(s_.substr(start, pos_ - start));
    }
    std::vector<double> numbers() {
        std::vector<double> out;
        if (eat(')')) return out;
        do out.push_back(number());
        while (eat(','));
        if (!eat(')')) error("expected ')'");
        return out;
    }
    std::vector<TestFunction> functions() {
        std::vector<TestFunction> out;
        do out.push_back(parse());
        while (eat(','));
        if (!eat(')')) error("expected ')'");
        return out;
    }
    void arity(const std::vector<double>& v, std::size_t k, const std::string& name) {
        if (v.size() != k) error(name + " takes " + std::to_string(k) + " argument(s)");
    }

    TestFunction parse() {
        const auto name = identifier();
        if (!eat('(')) error("expected '('");
        if (name == "sum" || name == "product") {
            auto fs = functions();
            TestFunction f = fs.front();
            for (std::size_t i = 1; i < fs.size(); ++i) f = name == "sum" ? f + fs[i] : f * fs[i];
            return f;
        }
        if (name == "scale" || name == "dilate") {
            const double c = number();
            if (!eat(',')) error("expected ','");
            auto f = parse();
            if (!eat(')')) error("expected ')'");
            return name == "scale" ? c * f : dilate(c, f);
        }
        const auto v = numbers();
        if (name == "outer") return arity(v, 2, name), outer_power(v[0], v[1]);
        if (name == "inner") return arity(v, 2, name), inner_power(v[0], v[1]);
        if (name == "sign") return arity(v, 0, name), sign_witness();
        if (name == "angular_sign") return arity(v, 0, name), angular_witness(AngularFunction::sign_first());
        if (name == "angular_abs") return arity(v, 1, name), angular_witness(AngularFunction::abs_first_power(v[0]));
        if (name == "angular_table") {
            if (v.size() < 3) error("angular_table needs dimension and grid sizes");
            std::vector<double> vals(v.begin() + 3, v.end());
            return angular_witness(AngularFunction::tabulated(
                AngularTable(static_cast<int>(v[0]), std::move(vals), static_cast<int>(v[1]), static_cast<int>(v[2]))));
        }
        if (name == "log") return arity(v, 0, name), log_symbol();
        if (name == "ball") return v.empty() ? ball_indicator(1.0) : (arity(v, 1, name), ball_indicator(v[0]));
        if (name == "power") return arity(v, 1, name), radial_power(v[0]);
        if (name == "const") return arity(v, 1, name), constant_function(v[0]);
        error("unknown function '" + name + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Inverse of TestFunction::describe for every non-opaque descriptor.
inline TestFunction parse_function(std::string_view text) { return detail::DescriptorParser(text).parse_all(); }

struct FunctionParams {
    int n = 1;
    double alpha = 0.0;
    double p = 2.0;
    double eps = 0.1;
    double lambda = 0.0;
    double radius = 1.0;
    double c = 1.0;
};

/// Named primitive with parameters; the extremal families take a = (n + alpha)/p.
inline TestFunction build_function(std::string_view kind, const FunctionParams& prm = {}) {
    require(prm.n >= 1 && prm.p >= 1.0, errc::param_out_of_range, "need n >= 1 and p >= 1");
    if (kind == "outer" || kind == "f_eps") return extremal_outer(prm.n, prm.alpha, prm.p, prm.eps);
    if (kind == "inner" || kind == "g_eps") return extremal_inner(prm.n, prm.alpha, prm.p, prm.eps);
    if (kind == "sign" || kind == "f0") return sign_witness();
    if (kind == "angular_sign" || kind == "f1") return angular_witness(AngularFunction::sign_first());
    if (kind == "log") return log_symbol();
    if (kind == "ball") return ball_indicator(prm.radius);
    if (kind == "power") return radial_power(prm.lambda);
    if (kind == "const") return constant_function(prm.c);
    fail(errc::param_out_of_range, "unknown function kind '" + std::string(kind) + "'");
}

} // namespace hclab
