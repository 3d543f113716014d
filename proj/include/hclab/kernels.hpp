#pragma once

/**
 * @file kernels.hpp
 * @brief Kernel psi and curve s descriptors and the sharp constants built from them.
 *
 * Every kernel has the shape
 *
 *     psi(t) = scale * t^b * (1-t)^c * exp(-rate t) * table(t),
 *
 * on [0,1] (or [0,inf) with c = 0), where the table factor is optional.
 * Every curve has |s(t)| = t^gamma with a piecewise constant sign, so all
 * weighted integrals of psi against powers of |s| stay in the same family and
 * reduce to Beta/Gamma identities whenever no table is present.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "hclab/error.hpp"
#include "hclab/quadrature.hpp"

namespace hclab {

enum class KernelFamily { constant, power, riemann_liouville, product, gamma, tabulated };
enum class KernelSupport { unit_interval, half_line };

inline std::string to_string(KernelFamily f) {
    switch (f) {
    case KernelFamily::constant: return "constant";
    case KernelFamily::power: return "power";
    case KernelFamily::riemann_liouville: return "riemann_liouville";
    case KernelFamily::product: return "product";
    case KernelFamily::gamma: return "gamma";
    case KernelFamily::tabulated: return "tabulated";
    }
    return "?";
}

class KernelSpec {
public:
    static KernelSpec constant(double c) {
        require(c >= 0.0, errc::invalid_argument, "constant kernel must be nonnegative");
        return KernelSpec(KernelFamily::constant, c, 0.0, 0.0, 0.0);
    }
    /// a t^b
    static KernelSpec power(double a, double b) {
        require(a >= 0.0, errc::invalid_argument, "power kernel scale must be nonnegative");
        return KernelSpec(KernelFamily::power, a, b, 0.0, 0.0);
    }
    /// beta (1-t)^(beta-1)
    static KernelSpec riemann_liouville(double beta) {
        require(beta > 0.0, errc::invalid_argument, "Riemann-Liouville order must be positive");
        return KernelSpec(KernelFamily::riemann_liouville, beta, 0.0, beta - 1.0, 0.0);
    }
    /// a t^b * beta (1-t)^(beta-1)
    static KernelSpec product(double a, double b, double beta) {
        require(a >= 0.0 && beta > 0.0, errc::invalid_argument, "product kernel needs a >= 0, beta > 0");
        return KernelSpec(KernelFamily::product, a * beta, b, beta - 1.0, 0.0);
    }
    /// a t^b e^(-rate t) on [0, inf)
    static KernelSpec gamma(double a, double b, double rate) {
        require(a >= 0.0 && rate >= 0.0, errc::invalid_argument, "gamma kernel needs a >= 0, rate >= 0");
        KernelSpec k(KernelFamily::gamma, a, b, 0.0, rate);
        k.support_ = KernelSupport::half_line;
        return k;
    }
    /// Piecewise-linear nonnegative table on a uniform grid of [0,1].
    static KernelSpec tabulated(std::vector<double> values) {
        require(values.size() >= 2, errc::invalid_argument, "kernel table needs at least two nodes");
        for (double v : values)
            require(std::isfinite(v) && v >= 0.0, errc::invalid_argument, "kernel table must be nonnegative");
        KernelSpec k(KernelFamily::tabulated, 1.0, 0.0, 0.0, 0.0);
        k.table_ = std::make_shared<const std::vector<double>>(std::move(values));
        return k;
    }

    KernelFamily family() const { return family_; }
    KernelSupport support() const { return support_; }
    double scale() const { return scale_; }
    double t_exponent() const { return b_; }
    double one_minus_exponent() const { return c_; }
    double rate() const { return rate_; }
    bool has_table() const { return static_cast<bool>(table_); }
    const std::vector<double>& table() const { return *table_; }
    double upper_limit() const {
        return support_ == KernelSupport::unit_interval ? 1.0 : std::numeric_limits<double>::infinity();
    }

    /// psi(t) * t^e
    KernelSpec times_power(double e) const {
        KernelSpec k = *this;
        k.b_ += e;
        return k;
    }
    /// psi(t) * (1-t)^e
    KernelSpec times_one_minus_power(double e) const {
        KernelSpec k = *this;
        k.c_ += e;
        return k;
    }
    KernelSpec scaled(double factor) const {
        require(factor >= 0.0, errc::invalid_argument, "kernel scale factor must be nonnegative");
        KernelSpec k = *this;
        k.scale_ *= factor;
        return k;
    }
    /// Same formula, read on [0, inf). Only meaningful without a (1-t) factor.
    KernelSpec on_half_line() const {
        require(c_ == 0.0 && !table_, errc::invalid_argument, "only (1-t)-free, untabulated kernels extend to [0,inf)");
        KernelSpec k = *this;
        k.support_ = KernelSupport::half_line;
        return k;
    }
    /// psi restricted to [0,1], i.e. compactly supported.
    KernelSpec on_unit_interval() const {
        KernelSpec k = *this;
        k.support_ = KernelSupport::unit_interval;
        return k;
    }

    double operator()(double t) const { return at(t, 1.0 - t); }

    /// psi(t) with 1 - t supplied exactly by the caller.
    double at(double t, double one_minus_t) const {
        if (t < 0.0 || t > upper_limit()) return 0.0;
        if (scale_ == 0.0) return 0.0;
        double v = scale_;
        if (b_ != 0.0) v *= std::pow(t, b_);
        if (c_ != 0.0) v *= std::pow(one_minus_t, c_);
        if (rate_ != 0.0) v *= std::exp(-rate_ * t);
        if (table_) v *= table_value(t);
        return v;
    }

    /// Exponent k with psi(t) ~ t^k as t -> 0 (infinity if psi vanishes near 0).
    double exponent_at_zero() const {
        if (!table_) return b_;
        const auto& tab = *table_;
        if (tab[0] > 0.0) return b_;
        if (tab[1] > 0.0) return b_ + 1.0;
        return std::numeric_limits<double>::infinity();
    }
    /// Exponent k with psi(t) ~ (1-t)^k as t -> 1.
    double exponent_at_one() const {
        if (!table_) return c_;
        const auto& tab = *table_;
        if (tab.back() > 0.0) return c_;
        if (tab[tab.size() - 2] > 0.0) return c_ + 1.0;
        return std::numeric_limits<double>::infinity();
    }

    std::string describe() const {
        std::string s = to_string(family_) + "(scale=" + std::to_string(scale_) + ", b=" + std::to_string(b_) +
                        ", c=" + std::to_string(c_) + ", rate=" + std::to_string(rate_);
        if (table_) s += ", table[" + std::to_string(table_->size()) + "]";
        return s + (support_ == KernelSupport::half_line ? ", [0,inf))" : ", [0,1])");
    }

    friend bool operator==(const KernelSpec& a, const KernelSpec& b) {
        const bool tables = (!a.table_ && !b.table_) || (a.table_ && b.table_ && *a.table_ == *b.table_);
        return a.family_ == b.family_ && a.support_ == b.support_ && a.scale_ == b.scale_ && a.b_ == b.b_ &&
               a.c_ == b.c_ && a.rate_ == b.rate_ && tables;
    }

private:
    KernelSpec(KernelFamily f, double scale, double b, double c, double rate)
        : family_(f), scale_(scale), b_(b), c_(c), rate_(rate) {}

    double table_value(double t) const {
        const auto& tab = *table_;
        const double pos = std::clamp(t, 0.0, 1.0) * static_cast<double>(tab.size() - 1);
        const std::size_t i = std::min(static_cast<std::size_t>(pos), tab.size() - 2);
        const double frac = pos - static_cast<double>(i);
        return (1.0 - frac) * tab[i] + frac * tab[i + 1];
    }

    KernelFamily family_;
    KernelSupport support_ = KernelSupport::unit_interval;
    double scale_;
    double b_;
    double c_;
    double rate_;
    std::shared_ptr<const std::vector<double>> table_;
};

enum class CurveFamily { power, reciprocal, sign_changing };

inline std::string to_string(CurveFamily f) {
    switch (f) {
    case CurveFamily::power: return "power";
    case CurveFamily::reciprocal: return "reciprocal";
    case CurveFamily::sign_changing: return "sign_changing";
    }
    return "?";
}

/// Parameter curve s with |s(t)| = t^gamma and sign pattern given by breakpoints.
class CurveSpec {
public:
    /// sigma t^gamma
    static CurveSpec power(double sigma, double gamma) {
        require(sigma == 1.0 || sigma == -1.0, errc::invalid_argument, "curve sign must be +1 or -1");
        return CurveSpec(CurveFamily::power, gamma, {}, {static_cast<int>(sigma)});
    }
    /// 1/t
    static CurveSpec reciprocal() { return CurveSpec(CurveFamily::reciprocal, -1.0, {}, {1}); }
    /// sigma(t) t^gamma with sigma = signs[i] on [breakpoints[i-1], breakpoints[i]).
    static CurveSpec sign_changing(double gamma, std::vector<double> breakpoints, std::vector<int> signs) {
        require(signs.size() == breakpoints.size() + 1, errc::invalid_argument, "need one sign per piece");
        for (std::size_t i = 0; i < breakpoints.size(); ++i) {
            require(breakpoints[i] > 0.0 && breakpoints[i] < 1.0, errc::invalid_argument,
                    "sign breakpoints must lie in (0,1)");
            if (i > 0) require(breakpoints[i] > breakpoints[i - 1], errc::invalid_argument, "breakpoints must increase");
        }
        for (int s : signs) require(s == 1 || s == -1, errc::invalid_argument, "signs must be +1 or -1");
        return CurveSpec(CurveFamily::sign_changing, gamma, std::move(breakpoints), std::move(signs));
    }

    CurveFamily family() const { return family_; }
    double gamma() const { return gamma_; }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<int>& signs() const { return signs_; }
    bool changes_sign() const {
        return std::any_of(signs_.begin(), signs_.end(), [&](int s) { return s != signs_.front(); });
    }

    int sign(double t) const {
        const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        return signs_[static_cast<std::size_t>(it - breaks_.begin())];
    }
    double abs_value(double t) const { return std::pow(t, gamma_); }
    double operator()(double t) const { return sign(t) * abs_value(t); }

    /// Pieces [lo, hi] of [0, upper] on which the sign is constant.
    std::vector<std::pair<double, double>> sign_pieces(double upper = 1.0) const {
        std::vector<std::pair<double, double>> out;
        double lo = 0.0;
        for (double b : breaks_) {
            if (b >= upper) break;
            out.emplace_back(lo, b);
            lo = b;
        }
        out.emplace_back(lo, upper);
        return out;
    }

    std::optional<std::pair<double, double>> envelope;  // (beta_env, gamma_env) when claimed

    std::string describe() const {
        return to_string(family_) + "(gamma=" + std::to_string(gamma_) + ", sign changes=" +
               std::to_string(breaks_.size()) + ")";
    }

    friend bool operator==(const CurveSpec& a, const CurveSpec& b) {
        return a.family_ == b.family_ && a.gamma_ == b.gamma_ && a.breaks_ == b.breaks_ && a.signs_ == b.signs_ &&
               a.envelope == b.envelope;
    }

private:
    CurveSpec(CurveFamily f, double gamma, std::vector<double> breaks, std::vector<int> signs)
        : family_(f), gamma_(gamma), breaks_(std::move(breaks)), signs_(std::move(signs)) {
        require(gamma_ != 0.0 && std::isfinite(gamma_), errc::invalid_argument, "curve exponent must be nonzero");
    }

    CurveFamily family_;
    double gamma_;
    std::vector<double> breaks_;
    std::vector<int> signs_;
};

/// t^beta <= |s(t)| <= t^gamma on (0,1]. Exact: compares the exponent of |s|.
inline bool validate_curve_bounds(const CurveSpec& s, double beta, double gamma, int grid = 64) {
    require(grid >= 2, errc::invalid_argument, "grid must have at least two points");
    const double g = s.gamma();
    return gamma <= g && g <= beta;
}

/// Sampled version of the same check on a log-spaced grid of (0,1].
inline bool sampled_curve_bounds(const CurveSpec& s, double beta, double gamma, int grid = 64) {
    require(grid >= 2, errc::invalid_argument, "grid must have at least two points");
    for (int i = 0; i < grid; ++i) {
        const double t = std::pow(10.0, -8.0 * i / (grid - 1));
        const double v = std::abs(s(t));
        const double tol = 1e-12 * v;
        if (std::pow(t, beta) > v + tol || v > std::pow(t, gamma) + tol) return false;
    }
    return true;
}

/// A real constant or the tagged verdict "infinite".
struct ConstantValue {
    double value = 0.0;
    bool finite = true;
    std::string method = "closed_form";
    double error_estimate = 0.0;

    static ConstantValue infinite(std::string why = "exponent") {
        return {std::numeric_limits<double>::infinity(), false, "divergent:" + why, 0.0};
    }
    bool is_infinite() const { return !finite; }
};

namespace detail {

inline ConstantValue from_integral(const IntegralResult& r) {
    if (r.status == IntegralStatus::divergence_suspected) return ConstantValue::infinite("quadrature");
    return {r.value, true, r.converged ? "quadrature" : "quadrature:unconverged", r.error_estimate};
}

inline std::optional<double> negative_hint(double k) {
    if (k <= 0.0 && k > -1.0) return k;
    return std::nullopt;
}

/// Integral of t^(A-1) over [lo, hi] within [0, 1].
inline double power_integral(double A, double lo, double hi) {
    if (A == 0.0) return std::log(hi / lo);
    if (lo == 0.0) return std::pow(hi, A) / A;
    // Difference of powers through exp/expm1 keeps small intervals accurate.
    const double log_hi = std::log(hi), log_lo = std::log(lo);
    return std::exp(A * log_hi) * -std::expm1(A * (log_lo - log_hi)) / A;
}

} // namespace detail

namespace detail {

/// int_0^m t^k g(t) [ln 1/t] dt through t = u^q, q = 1/(1+k); g must be regular at 0.
template <class G>
IntegralResult power_end_integral(const G& g, double k, double m, bool log_weight, const QuadratureConfig& cfg) {
    const double q = 1.0 / (1.0 + k);
    const double upper = std::pow(m, 1.0 + k);
    auto integrand = [&](double u) {
        const double v = q * g(std::pow(u, q));
        return log_weight ? v * q * -std::log(u) : v;
    };
    return integrate_adaptive(integrand, 0.0, upper, cfg.with_hint(log_weight ? std::optional<double>(0.0) : std::nullopt));
}

/// Quadrature for int_lo^hi psi(t) [ln 1/t] dt, hi finite; power factors at 0 and 1 are removed analytically.
inline IntegralResult kernel_quadrature(const KernelSpec& psi, double lo, double hi, bool log_weight,
                                        const QuadratureConfig& cfg) {
    const bool table_zero_at_0 = psi.has_table() && psi.table().front() == 0.0;
    const bool table_zero_at_1 = psi.has_table() && psi.table().back() == 0.0;
    const bool sing0 = lo == 0.0 && psi.t_exponent() < 0.0 && !table_zero_at_0;
    const bool sing1 = psi.support() == KernelSupport::unit_interval && hi == 1.0 && psi.one_minus_exponent() < 0.0 &&
                       !table_zero_at_1;
    auto weight = [log_weight](double t) { return log_weight ? -std::log(t) : 1.0; };
    auto plain = [&](double a, double b) {
        std::optional<double> hint;
        if (a == 0.0 && (log_weight || psi.exponent_at_zero() < 0.0))
            hint = std::min(0.0, detail::negative_hint(psi.exponent_at_zero()).value_or(0.0));
        if (b == 1.0 && psi.support() == KernelSupport::unit_interval)
            hint = min_hint(hint, negative_hint(psi.exponent_at_one()));
        return integrate_adaptive([&](double t) { return t <= 0.0 ? 0.0 : psi(t) * weight(t); }, a, b,
                                  cfg.with_hint(hint));
    };
    if (!sing0 && !sing1) return plain(lo, hi);

    const double mid = 0.5 * (lo + hi);
    IntegralResult total;
    if (sing0) {
        const auto reg = psi.times_power(-psi.t_exponent());
        total += power_end_integral([&](double t) { return reg(t); }, psi.t_exponent(), mid, log_weight, cfg);
    } else {
        total += plain(lo, mid);
    }
    if (sing1) {
        const auto reg = psi.times_one_minus_power(-psi.one_minus_exponent());
        if (log_weight) {
            // ln(1/t) = (1-t) * (ln(1/t) / (1-t)) adds one power at t = 1.
            auto g = [&](double s) { return reg(1.0 - s) * (s == 0.0 ? 1.0 : -std::log1p(-s) / s); };
            total += power_end_integral(g, psi.one_minus_exponent() + 1.0, 1.0 - mid, false, cfg);
        } else {
            total += power_end_integral([&](double s) { return reg(1.0 - s); }, psi.one_minus_exponent(), 1.0 - mid,
                                        false, cfg);
        }
    } else {
        total += plain(mid, hi);
    }
    return total;
}

} // namespace detail

/// Integral of psi over [lo, hi] (hi may be infinite on the half-line support).
inline ConstantValue kernel_integral(const KernelSpec& psi, double lo, double hi, const QuadratureConfig& cfg = {},
                                     bool force_quadrature = false) {
    hi = std::min(hi, psi.upper_limit());
    require(lo >= 0.0 && lo <= hi, errc::invalid_argument, "kernel integral needs 0 <= lo <= hi");
    if (lo == hi || psi.scale() == 0.0) return {0.0, true, "closed_form", 0.0};

    const double A = psi.t_exponent() + 1.0;
    const double B = psi.one_minus_exponent() + 1.0;
    const bool touches_zero = lo == 0.0;
    const bool touches_one = psi.support() == KernelSupport::unit_interval && hi == 1.0;
    if (touches_zero && psi.exponent_at_zero() <= -1.0) return ConstantValue::infinite("t->0");
    if (touches_one && psi.exponent_at_one() <= -1.0) return ConstantValue::infinite("t->1");

    if (std::isinf(hi)) {
        if (psi.rate() == 0.0) return ConstantValue::infinite("t->inf");
        if (!force_quadrature && !psi.has_table()) {
            const double lam = psi.rate();
            double v = 0.0;
            if (lo == 0.0)
                v = boost::math::tgamma(A) / std::pow(lam, A);
            else
                v = boost::math::tgamma(A, lam * lo) / std::pow(lam, A);
            return {psi.scale() * v, true, "closed_form:gamma", 0.0};
        }
        const auto head = lo < 1.0 ? detail::kernel_quadrature(psi, lo, 1.0, false, cfg) : IntegralResult{};
        auto tail = integrate_improper(psi, std::max(lo, 1.0), cfg.with_hint(std::nullopt));
        if (tail.status == IntegralStatus::divergence_suspected) return ConstantValue::infinite("quadrature");
        tail += head;
        return detail::from_integral(tail);
    }

    if (!force_quadrature && !psi.has_table() && psi.rate() == 0.0) {
        if (psi.one_minus_exponent() == 0.0 && (lo > 0.0 || A > 0.0))
            return {psi.scale() * detail::power_integral(A, lo, hi), true, "closed_form:power", 0.0};
        if (A > 0.0 && B > 0.0) {
            double v = 0.0;
            if (lo == 0.0 && hi == 1.0)
                v = boost::math::beta(A, B);
            else if (lo == 0.0)
                v = boost::math::beta(A, B) * boost::math::ibeta(A, B, hi);
            else if (hi == 1.0)
                v = boost::math::beta(A, B) * boost::math::ibetac(A, B, lo);
            else
                v = boost::math::beta(A, B) * (boost::math::ibeta(A, B, hi) - boost::math::ibeta(A, B, lo));
            return {psi.scale() * v, true, "closed_form:beta", 0.0};
        }
    }

    return detail::from_integral(detail::kernel_quadrature(psi, lo, hi, false, cfg));
}

inline ConstantValue kernel_integral(const KernelSpec& psi, const QuadratureConfig& cfg = {},
                                     bool force_quadrature = false) {
    return kernel_integral(psi, 0.0, psi.upper_limit(), cfg, force_quadrature);
}

/// Integral of psi(t) ln(1/t) over [lo, hi] within [0, 1].
inline ConstantValue kernel_log_integral(const KernelSpec& psi, double lo, double hi, const QuadratureConfig& cfg = {},
                                         bool force_quadrature = false) {
    require(psi.support() == KernelSupport::unit_interval, errc::invalid_argument,
            "log moments are taken on [0,1] only");
    require(lo >= 0.0 && lo <= hi && hi <= 1.0, errc::invalid_argument, "log integral needs 0 <= lo <= hi <= 1");
    if (lo == hi || psi.scale() == 0.0) return {0.0, true, "closed_form", 0.0};
    if (lo == 0.0 && psi.exponent_at_zero() <= -1.0) return ConstantValue::infinite("t->0");
    if (hi == 1.0 && psi.exponent_at_one() <= -1.0) {
        // ln(1/t) ~ (1-t) near 1 softens the endpoint by one power.
        if (psi.exponent_at_one() <= -2.0) return ConstantValue::infinite("t->1");
    }
    const double A = psi.t_exponent() + 1.0;
    const double B = psi.one_minus_exponent() + 1.0;
    if (!force_quadrature && !psi.has_table() && psi.rate() == 0.0 && lo == 0.0 && hi == 1.0 && A > 0.0 && B > 0.0) {
        const double v = boost::math::beta(A, B) * (boost::math::digamma(A + B) - boost::math::digamma(A));
        return {psi.scale() * v, true, "closed_form:digamma", 0.0};
    }
    return detail::from_integral(detail::kernel_quadrature(psi, lo, hi, true, cfg));
}

/// (n + alpha) / p
inline double lp_exponent(int n, double alpha, double p) {
    require(n >= 1, errc::invalid_argument, "dimension must be >= 1");
    require(p >= 1.0, errc::invalid_argument, "p must be >= 1");
    return (n + alpha) / p;
}

/// Norm of U_{psi,s} on L^p(w), w in W_alpha:  int_0^1 |s(t)|^{-(n+alpha)/p} psi(t) dt.
inline ConstantValue lp_constant(const KernelSpec& psi, const CurveSpec& s, int n, double alpha, double p,
                                 const QuadratureConfig& cfg = {}, bool force_quadrature = false) {
    const auto k = psi.on_unit_interval().times_power(-s.gamma() * lp_exponent(n, alpha, p));
    return kernel_integral(k, 0.0, 1.0, cfg, force_quadrature);
}

/// Upper bound for the infinite-horizon operator: the same integral over [0, inf).
inline ConstantValue infinite_lp_constant(const KernelSpec& psi, const CurveSpec& s, int n, double alpha, double p,
                                          const QuadratureConfig& cfg = {}, bool force_quadrature = false) {
    const auto k = psi.times_power(-s.gamma() * lp_exponent(n, alpha, p));
    return kernel_integral(k, 0.0, k.upper_limit(), cfg, force_quadrature);
}

/// Effective kernel |s(t)|^n psi(t) of the Cesaro companion V_{psi,s}.
inline KernelSpec cesaro_kernel(const KernelSpec& psi, const CurveSpec& s, int n) {
    return psi.times_power(s.gamma() * n);
}

/// Norm of V_{psi,s} on L^p(w); evaluated as lp_constant of the effective kernel.
inline ConstantValue cesaro_constant(const KernelSpec& psi, const CurveSpec& s, int n, double alpha, double p,
                                     const QuadratureConfig& cfg = {}) {
    return lp_constant(cesaro_kernel(psi, s, n), s, n, alpha, p, cfg);
}

/// int_0^1 psi
inline ConstantValue bmo_constant(const KernelSpec& psi, const QuadratureConfig& cfg = {}) {
    return kernel_integral(psi.on_unit_interval(), 0.0, 1.0, cfg);
}

/// int_0^1 sgn(s(t)) psi(t) dt
inline ConstantValue signed_bmo_factor(const KernelSpec& psi, const CurveSpec& s, const QuadratureConfig& cfg = {}) {
    ConstantValue total{0.0, true, "closed_form", 0.0};
    const auto k = psi.on_unit_interval();
    for (auto [lo, hi] : s.sign_pieces(1.0)) {
        const auto piece = kernel_integral(k, lo, hi, cfg);
        if (piece.is_infinite()) return piece;
        total.value += s.sign(0.5 * (lo + hi)) * piece.value;
        total.error_estimate += piece.error_estimate;
        if (piece.method != "closed_form" && total.method == "closed_form") total.method = piece.method;
    }
    return total;
}

struct CommutatorConstants {
    /// int_0^1 |s|^{-(n+alpha)/p} |log 1/|s|| psi
    ConstantValue necessity;
    /// int_0^1 |s|^{-(n+alpha)/p} psi (2 + |log 1/|s||)
    ConstantValue bound;
};

inline CommutatorConstants commutator_constant(const KernelSpec& psi, const CurveSpec& s, int n, double alpha,
                                               double p, const QuadratureConfig& cfg = {}) {
    const auto k = psi.on_unit_interval().times_power(-s.gamma() * lp_exponent(n, alpha, p));
    auto log_part = kernel_log_integral(k, 0.0, 1.0, cfg);
    CommutatorConstants out;
    if (log_part.is_infinite()) {
        out.necessity = log_part;
    } else {
        // |log 1/|s(t)|| = |gamma| ln(1/t) on (0,1).
        log_part.value *= std::abs(s.gamma());
        log_part.error_estimate *= std::abs(s.gamma());
        out.necessity = log_part;
    }
    const auto base = kernel_integral(k, 0.0, 1.0, cfg);
    if (base.is_infinite() || out.necessity.is_infinite()) {
        out.bound = base.is_infinite() ? base : out.necessity;
    } else {
        out.bound = {2.0 * base.value + out.necessity.value, true,
                     base.method == out.necessity.method ? base.method : base.method + "+" + out.necessity.method,
                     2.0 * base.error_estimate + out.necessity.error_estimate};
    }
    return out;
}

} // namespace hclab
