#pragma once

// Pointwise application of U_{psi,s}, V_{psi,s}, the infinite-horizon operator,
// the n-dimensional Hardy operator on radial functions, and commutators.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hclab/error.hpp"
#include "hclab/functions.hpp"
#include "hclab/kernels.hpp"
#include "hclab/parallel.hpp"
#include "hclab/quadrature.hpp"
#include "hclab/weights.hpp"

namespace hclab {

enum class OperatorKind { hardy_cesaro, cesaro, infinite, ndim_hardy };

inline std::string to_string(OperatorKind k) {
    switch (k) {
    case OperatorKind::hardy_cesaro: return "U";
    case OperatorKind::cesaro: return "V";
    case OperatorKind::infinite: return "U_inf";
    case OperatorKind::ndim_hardy: return "H";
    }
    return "?";
}

struct OperatorSpec {
    OperatorKind kind = OperatorKind::hardy_cesaro;
    KernelSpec psi = KernelSpec::constant(1.0);
    CurveSpec s = CurveSpec::power(1.0, 1.0);
    int n = 1;
    std::optional<TestFunction> b;

    /// Kernel and curve of the equivalent U-type integral.
    KernelSpec effective_kernel() const {
        switch (kind) {
        case OperatorKind::hardy_cesaro: return psi.on_unit_interval();
        case OperatorKind::cesaro: return cesaro_kernel(psi, s, n).on_unit_interval();
        case OperatorKind::infinite: return psi;
        case OperatorKind::ndim_hardy: return KernelSpec::power(n, n - 1.0);
        }
        return psi;
    }
    CurveSpec effective_curve() const { return kind == OperatorKind::ndim_hardy ? CurveSpec::power(1.0, 1.0) : s; }

    std::string describe() const {
        std::string out = to_string(kind) + "[n=" + std::to_string(n);
        if (kind != OperatorKind::ndim_hardy) out += ", psi=" + psi.describe() + ", s=" + s.describe();
        if (b) out += ", b=" + b->describe();
        return out + "]";
    }
};

/// Pointwise value with its quadrature diagnostics.
struct PointValue {
    double value = 0.0;
    double error_estimate = 0.0;
    std::string method;
};

namespace detail {

/// t in (0, upper) with |s(t)| |x| = rho for some descriptor radius rho.
inline std::vector<double> curve_breakpoints(const CurveSpec& s, const std::vector<double>& radii, double r,
                                             double upper) {
    std::vector<double> out;
    if (r == 0.0) return out;
    for (double rho : radii) {
        const double t = std::pow(rho / r, 1.0 / s.gamma());
        if (t > 0.0 && t < upper) out.push_back(t);
    }
    for (double t : s.breakpoints())
        if (t < upper) out.push_back(t);
    return out;
}

/// Panels [a, b] with 0 < a << b are cut at a 8^j: power profiles then stay resolved over many decades.
inline std::vector<double> graded(const std::vector<double>& points) {
    std::vector<double> out{points.front()};
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double a = points[i - 1], b = points[i];
        if (a > 0.0)
            for (double t = 8.0 * a; t < b / 2.0; t *= 8.0) out.push_back(t);
        out.push_back(b);
    }
    return out;
}

/// int_0^upper f(s(t) x) psi(t) dt by panels between the exact breakpoints.
inline PointValue apply_kernel(const KernelSpec& psi, const CurveSpec& s, const TestFunction& f,
                               std::span<const double> x, const QuadratureConfig& cfg) {
    const double upper = psi.upper_limit();
    const double r = norm(x);

    if (const auto h = f.homogeneity_info(); h && r > 0.0) {
        const double fx = f(x);
        if (fx == 0.0) return {0.0, 0.0, "homogeneous"};
        const auto k = psi.times_power(s.gamma() * h->degree);
        PointValue out{0.0, 0.0, "homogeneous"};
        for (auto [lo, hi] : s.sign_pieces(upper)) {
            const auto piece = kernel_integral(k, lo, hi, cfg);
            if (piece.is_infinite())
                fail(errc::divergent_point_value, "operator integral diverges (" + piece.method + ")");
            const double sign = (h->parity == 1 && s.sign(0.5 * (lo + std::min(hi, lo + 1.0))) < 0) ? -1.0 : 1.0;
            out.value += sign * piece.value;
            out.error_estimate += piece.error_estimate;
            if (piece.method != "closed_form") out.method = "homogeneous:" + piece.method;
        }
        out.value *= fx;
        out.error_estimate *= std::abs(fx);
        return out;
    }

    const auto& m = f.meta();
    auto integrand = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double w = psi(t);
        if (w == 0.0) return 0.0;
        const double v = f.at_scaled(s(t), x);
        return v == 0.0 ? 0.0 : v * w;
    };

    std::vector<double> points{0.0};
    const double finite_upper = std::isinf(upper) ? 1.0 : upper;
    for (double t : curve_breakpoints(s, m.breakpoints, r, upper)) points.push_back(t);
    std::sort(points.begin(), points.end());
    const double last_finite = std::max(finite_upper, points.back());
    points.push_back(last_finite);

    // Behaviour of f(s(t) x) as t -> 0 is f's origin (gamma > 0) or tail (gamma < 0) end.
    std::optional<double> first_hint;
    const EndBehaviour& end = s.gamma() > 0.0 ? m.origin : m.tail;
    if (r > 0.0 && !end.vanishes) {
        const double k0 = psi.exponent_at_zero() + s.gamma() * end.order;
        if (std::isnan(k0)) {
            first_hint = 0.0;
        } else if (k0 <= -1.0) {
            const double t_ref = points.size() > 2 ? points[1] : 0.5 * finite_upper;
            bool vanishes = true;
            for (int j = 1; j <= 60 && vanishes; ++j) vanishes = f.at_scaled(s(std::ldexp(t_ref, -j)), x) == 0.0;
            if (!vanishes) fail(errc::divergent_point_value, "operator integrand is not integrable at t = 0");
        } else if (k0 < 0.0 || end.has_log) {
            first_hint = std::max(k0 - (end.has_log ? 0.1 : 0.0), -0.999);
        }
    } else if (r == 0.0 && psi.exponent_at_zero() <= -1.0) {
        fail(errc::divergent_point_value, "kernel is not integrable at t = 0");
    } else if (r == 0.0 && psi.exponent_at_zero() < 0.0) {
        first_hint = psi.exponent_at_zero();
    }
    std::optional<double> last_hint;
    if (!std::isinf(upper)) {
        const double k1 = psi.exponent_at_one();
        if (k1 <= -1.0) fail(errc::divergent_point_value, "kernel is not integrable at t = 1");
        if (k1 < 0.0) last_hint = k1;
    }

    // Near t = 1 the kernel is evaluated from u = 1 - t so (1-t)^c keeps full precision.
    auto mirrored = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double t = 1.0 - u;
        const double w = psi.at(t, u);
        if (w == 0.0) return 0.0;
        const double v = f.at_scaled(s(t), x);
        return v == 0.0 ? 0.0 : v * w;
    };
    IntegralResult total;
    if (last_hint) {
        if (points[points.size() - 2] < 0.5) points.insert(points.end() - 1, 0.5);
        const double a = points[points.size() - 2];
        points.pop_back();
        total = integrate_adaptive(mirrored, 0.0, 1.0 - a, cfg.with_hint(last_hint));
    }
    total += integrate_panels(integrand, graded(points), cfg.with_hint(std::nullopt), first_hint);
    std::string method = "quadrature";
    if (std::isinf(upper)) {
        auto tail = integrate_improper(integrand, last_finite, cfg.with_hint(std::nullopt));
        if (tail.status == IntegralStatus::divergence_suspected)
            fail(errc::divergent_point_value, "operator integral diverges as t -> inf");
        total += tail;
        method = "quadrature:improper";
    }
    if (!total.converged) fail(errc::non_convergence, "operator quadrature did not converge");
    return {total.value, total.error_estimate, method};
}

} // namespace detail

/// int_0^1 f(s(t) x) psi(t) dt
inline PointValue apply_U_detailed(const OperatorSpec& spec, const TestFunction& f, std::span<const double> x,
                                   const QuadratureConfig& cfg = {}) {
    return detail::apply_kernel(spec.psi.on_unit_interval(), spec.s, f, x, cfg);
}
inline double apply_U(const OperatorSpec& spec, const TestFunction& f, std::span<const double> x,
                      const QuadratureConfig& cfg = {}) {
    return apply_U_detailed(spec, f, x, cfg).value;
}

/// V_{psi,s} = U_{|s|^n psi, s}
inline double apply_V(const OperatorSpec& spec, const TestFunction& f, std::span<const double> x,
                      const QuadratureConfig& cfg = {}) {
    OperatorSpec u = spec;
    u.kind = OperatorKind::hardy_cesaro;
    u.psi = cesaro_kernel(spec.psi, spec.s, spec.n);
    return apply_U(u, f, x, cfg);
}

/// int_0^inf f(s(t) x) psi(t) dt; a kernel supported in [0,1] gives apply_U.
inline double apply_U_infinite(const OperatorSpec& spec, const TestFunction& f, std::span<const double> x,
                               const QuadratureConfig& cfg = {}) {
    return detail::apply_kernel(spec.psi, spec.s, f, x, cfg).value;
}

/// Average of a radial f over the ball B(0,|x|), from the radial profile.
inline double apply_H_radial(const TestFunction& f, int n, std::span<const double> x, const QuadratureConfig& cfg = {}) {
    require(n >= 1, errc::invalid_argument, "dimension must be >= 1");
    require(f.meta().radial, errc::non_radial_input, "the Hardy operator is applied to radial functions only");
    const double r = norm(x);
    if (r == 0.0) return f.radial_value(0.0);
    const auto& m = f.meta();
    auto g = [&](double rho) { return rho <= 0.0 ? 0.0 : f.radial_value(rho) * std::pow(rho, n - 1); };

    std::vector<double> points{0.0};
    for (double b : m.breakpoints)
        if (b < r) points.push_back(b);
    points.push_back(r);
    std::optional<double> hint;
    if (!m.origin.vanishes) {
        const double k0 = n - 1 + m.origin.order;
        if (std::isnan(k0))
            hint = 0.0;
        else if (k0 <= -1.0)
            fail(errc::divergent_point_value, "f is not integrable near the origin");
        else if (k0 < 0.0 || m.origin.has_log)
            hint = std::max(k0 - (m.origin.has_log ? 0.1 : 0.0), -0.999);
    }
    const auto total = integrate_panels(g, points, cfg.with_hint(std::nullopt), hint);
    if (!total.converged) fail(errc::non_convergence, "radial average did not converge");
    return n * total.value / std::pow(r, n);
}

/// Commutator b U f - U(b f), evaluated as the single integral of (b(x) - b(s(t)x)) f(s(t)x) psi(t).
inline double apply_commutator(const OperatorSpec& spec, const TestFunction& f, std::span<const double> x,
                               const QuadratureConfig& cfg = {}) {
    require(spec.b.has_value(), errc::invalid_argument, "commutator needs a symbol b");
    const TestFunction& b = *spec.b;
    const TestFunction fused = b(x) * f - b * f;
    return detail::apply_kernel(spec.effective_kernel(), spec.effective_curve(), fused, x, cfg).value;
}

/// Dispatch on the operator kind; a symbol switches to the commutator.
inline double apply(const OperatorSpec& spec, const TestFunction& f, std::span<const double> x,
                    const QuadratureConfig& cfg = {}) {
    if (spec.b) return apply_commutator(spec, f, x, cfg);
    switch (spec.kind) {
    case OperatorKind::hardy_cesaro: return apply_U(spec, f, x, cfg);
    case OperatorKind::cesaro: return apply_V(spec, f, x, cfg);
    case OperatorKind::infinite: return apply_U_infinite(spec, f, x, cfg);
    case OperatorKind::ndim_hardy: return apply_H_radial(f, spec.n, x, cfg);
    }
    return 0.0;
}

/// Values at many points; results are placed by index.
inline std::vector<double> apply_on_grid(const OperatorSpec& spec, const TestFunction& f,
                                         const std::vector<std::vector<double>>& xs, const QuadratureConfig& cfg = {}) {
    return parallel_map<double>(xs.size(), [&](std::size_t i) { return apply(spec, f, xs[i], cfg); });
}

/// The image x -> (T f)(x) as a test function; radial input gives a radial image.
inline TestFunction operator_image(const OperatorSpec& spec, const TestFunction& f, const QuadratureConfig& cfg = {}) {
    const auto& m = f.meta();
    FunctionMeta meta;
    meta.breakpoints = m.breakpoints;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    meta.origin.order = meta.tail.order = nan;
    const auto psi = spec.effective_kernel();
    const double g = spec.effective_curve().gamma();
    if (g > 0.0 && psi.support() == KernelSupport::unit_interval) {
        // |s(t) x| <= |x|: the image keeps f's origin region; the tail also sees f near 0.
        meta.origin = m.origin;
        meta.tail.order = std::max(m.tail.order, -(1.0 + psi.exponent_at_zero()) / g);
        meta.tail.has_log = m.tail.has_log;
        if (spec.b) {
            meta.origin.exact_power.reset();
            meta.origin.has_log = meta.tail.has_log = true;
        }
    }
    const std::string name = spec.describe() + "(" + f.describe() + ")";
    if (m.radial) {
        const int n = spec.n;
        return opaque_radial(
            [spec, f, cfg, n, decay = meta.tail.order](double r) {
                std::vector<double> x(static_cast<std::size_t>(n), 0.0);
                x[0] = r;
                // absolute tolerance follows the known decay so tail values keep relative accuracy
                QuadratureConfig local = cfg;
                if (r > 1.0 && std::isfinite(decay) && decay < 0.0)
                    local.abs_tol = std::max(cfg.abs_tol * std::pow(r, decay), 1e-300);
                return apply(spec, f, x, local);
            },
            name, meta);
    }
    meta.origin.order = meta.tail.order = nan;
    return opaque_function([spec, f, cfg](std::span<const double> x) { return apply(spec, f, x, cfg); }, name, meta);
}

/// int over {t : |s(t)| > tau} of |s|^{-mu} psi
inline ConstantValue outer_set_integral(const KernelSpec& psi, const CurveSpec& s, double mu, double tau,
                                        const QuadratureConfig& cfg = {}) {
    const auto k = psi.on_unit_interval().times_power(-s.gamma() * mu);
    const double t = std::clamp(std::pow(tau, 1.0 / s.gamma()), 0.0, 1.0);
    return s.gamma() > 0.0 ? kernel_integral(k, t, 1.0, cfg) : kernel_integral(k, 0.0, t, cfg);
}

/// int over {t : |s(t)| < tau} of |s|^{-mu} psi
inline ConstantValue inner_set_integral(const KernelSpec& psi, const CurveSpec& s, double mu, double tau,
                                        const QuadratureConfig& cfg = {}) {
    const auto k = psi.on_unit_interval().times_power(-s.gamma() * mu);
    const double t = std::clamp(std::pow(tau, 1.0 / s.gamma()), 0.0, 1.0);
    return s.gamma() > 0.0 ? kernel_integral(k, 0.0, t, cfg) : kernel_integral(k, t, 1.0, cfg);
}

/// int over {t : |s(t)| > tau} of |s|^{-mu} log(1/|s|) psi
inline ConstantValue outer_set_log_integral(const KernelSpec& psi, const CurveSpec& s, double mu, double tau,
                                            const QuadratureConfig& cfg = {}) {
    const auto k = psi.on_unit_interval().times_power(-s.gamma() * mu);
    const double t = std::clamp(std::pow(tau, 1.0 / s.gamma()), 0.0, 1.0);
    // log(1/|s(t)|) = gamma ln(1/t).
    auto v = s.gamma() > 0.0 ? kernel_log_integral(k, t, 1.0, cfg) : kernel_log_integral(k, 0.0, t, cfg);
    if (v.is_infinite()) return v;
    v.value *= s.gamma();
    v.error_estimate *= std::abs(s.gamma());
    return v;
}

} // namespace hclab
