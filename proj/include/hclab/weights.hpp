#pragma once

/**
 * @file weights.hpp
 * @brief Absolutely homogeneous weights w(tx) = |t|^alpha w(x).
 *
 * A weight is |x|^alpha times an even angular profile on S_n, stored as a
 * positive combination of profile terms so that sums of weights of the
 * same degree stay in the class.
 */

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hclab/error.hpp"
#include "hclab/quadrature.hpp"

namespace hclab {

struct Ball {
    std::vector<double> center;
    double radius = 1.0;

    Ball() = default;
    Ball(std::vector<double> c, double r) : center(std::move(c)), radius(r) {
        require(radius > 0.0, errc::invalid_argument, "ball radius must be positive");
    }
    int dimension() const { return static_cast<int>(center.size()); }
};

/// Euclidean norm without overflow for |x| near the double range.
inline double norm(std::span<const double> x) {
    if (x.size() == 1) return std::abs(x[0]);
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    if (m == 0.0 || !std::isfinite(m)) return m;
    if (m < 1e150 && m > 1e-150) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    }
    double s = 0.0;
    for (double v : x) s += (v / m) * (v / m);
    return m * std::sqrt(s);
}

/// Piecewise-linear table on S_2 (angle grid) or S_3 (latitude-longitude grid),
/// symmetrised so that phi(-theta) = phi(theta).
class AngularTable {
public:
    /// n = 2: `values` has `n_azimuth` entries at angles 2 pi k / n_azimuth.
    /// n = 3: `values` is (n_polar + 1) rows (polar angle 0..pi) of `n_azimuth` columns.
    AngularTable(int n, std::vector<double> values, int n_azimuth, int n_polar = 0)
        : n_(n), n_az_(n_azimuth), n_pol_(n_polar), values_(std::move(values)) {
        require(n == 2 || n == 3, errc::invalid_argument, "tabulated profiles exist for n = 2 and n = 3 only");
        require(n_az_ >= 2 && n_az_ % 2 == 0, errc::invalid_argument, "azimuth grid size must be even");
        const std::size_t expected = n == 2 ? static_cast<std::size_t>(n_az_)
                                            : static_cast<std::size_t>((n_pol_ + 1) * n_az_);
        require(n == 2 || n_pol_ >= 1, errc::invalid_argument, "polar grid size must be >= 1");
        require(values_.size() == expected, errc::invalid_argument, "table size does not match grid");
        for (double v : values_)
            require(std::isfinite(v) && v > 0.0, errc::non_positive_profile, "tabulated profile must be positive");
        symmetrise();
    }

    int dimension() const { return n_; }
    const std::vector<double>& values() const { return values_; }
    int n_azimuth() const { return n_az_; }
    int n_polar() const { return n_pol_; }

    double operator()(std::span<const double> theta) const {
        if (n_ == 2) return azimuth_interp(0, std::atan2(theta[1], theta[0]));
        const double pol = std::acos(std::clamp(theta[2], -1.0, 1.0));
        const double az = std::atan2(theta[1], theta[0]);
        const double pos = pol / std::numbers::pi * n_pol_;
        const int i = std::min(static_cast<int>(pos), n_pol_ - 1);
        const double frac = pos - i;
        return (1.0 - frac) * azimuth_interp(i, az) + frac * azimuth_interp(i + 1, az);
    }

    /// Exact integral of the piecewise-linear angle table over S_2.
    double exact_circle_integral() const {
        double s = 0.0;
        for (double v : values_) s += v;
        return s * 2.0 * std::numbers::pi / n_az_;
    }

private:
    double& at(int row, int col) { return values_[static_cast<std::size_t>(row * n_az_ + col)]; }
    double at(int row, int col) const { return values_[static_cast<std::size_t>(row * n_az_ + col)]; }

    double azimuth_interp(int row, double angle) const {
        double pos = angle / (2.0 * std::numbers::pi) * n_az_;
        if (pos < 0) pos += n_az_;
        int k = static_cast<int>(pos);
        const double frac = pos - k;
        k %= n_az_;
        return (1.0 - frac) * at(row, k) + frac * at(row, (k + 1) % n_az_);
    }

    void symmetrise() {
        const int half = n_az_ / 2;
        if (n_ == 2) {
            for (int k = 0; k < half; ++k) {
                const double avg = 0.5 * (at(0, k) + at(0, k + half));
                at(0, k) = at(0, k + half) = avg;
            }
            return;
        }
        // Antipode of (polar i, azimuth k) is (n_pol - i, k + half).
        std::vector<double> sym(values_.size());
        for (int i = 0; i <= n_pol_; ++i)
            for (int k = 0; k < n_az_; ++k)
                sym[static_cast<std::size_t>(i * n_az_ + k)] =
                    0.5 * (at(i, k) + at(n_pol_ - i, (k + half) % n_az_));
        values_ = std::move(sym);
        // Poles are single points.
        for (int row : {0, n_pol_}) {
            double mean = 0.0;
            for (int k = 0; k < n_az_; ++k) mean += at(row, k);
            mean /= n_az_;
            for (int k = 0; k < n_az_; ++k) at(row, k) = mean;
        }
    }

    int n_;
    int n_az_;
    int n_pol_;
    std::vector<double> values_;
};

enum class ProfileKind { constant, axis_power, tabulated };

/// One term of the angular profile: coef * {1 | |theta_1|^alpha | table(theta)}.
struct ProfileTerm {
    ProfileKind kind = ProfileKind::constant;
    double coef = 1.0;
    std::shared_ptr<const AngularTable> table;
    double sphere_integral = 0.0;  // of the term without coef

    static ProfileTerm constant(double c) { return {ProfileKind::constant, c, nullptr, 0.0}; }
    static ProfileTerm axis_power(double c = 1.0) { return {ProfileKind::axis_power, c, nullptr, 0.0}; }
    static ProfileTerm tabulated(AngularTable t, double c = 1.0) {
        return {ProfileKind::tabulated, c, std::make_shared<const AngularTable>(std::move(t)), 0.0};
    }
};

inline std::string to_string(ProfileKind k) {
    switch (k) {
    case ProfileKind::constant: return "constant";
    case ProfileKind::axis_power: return "axis_power";
    case ProfileKind::tabulated: return "tabulated";
    }
    return "?";
}

/// Integral of |theta_1|^alpha over S_n.
inline double axis_power_sphere_integral(double alpha, int n) {
    if (n == 1) return 2.0;
    require(alpha > -1.0, errc::non_finite_sphere_constant, "|x_1|^alpha needs alpha > -1 to be integrable on S_n");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * (n - 1)) * std::tgamma(0.5 * (alpha + 1.0)) /
           std::tgamma(0.5 * (n + alpha));
}

class HomogeneousWeight {
public:
    HomogeneousWeight() : HomogeneousWeight(0.0, {ProfileTerm::constant(1.0)}, 1) {}

    HomogeneousWeight(double alpha, std::vector<ProfileTerm> terms, int n,
                      const QuadratureConfig& cfg = {})
        : alpha_(alpha), n_(n), terms_(std::move(terms)) {
        require(n_ >= 1, errc::invalid_argument, "dimension must be >= 1");
        require(!terms_.empty(), errc::invalid_argument, "weight needs at least one profile term");
        c_omega_ = 0.0;
        for (auto& t : terms_) {
            require(std::isfinite(t.coef) && t.coef > 0.0, errc::non_positive_profile,
                    "profile coefficients must be positive");
            switch (t.kind) {
            case ProfileKind::constant: t.sphere_integral = sphere_area(n_); break;
            case ProfileKind::axis_power: t.sphere_integral = axis_power_sphere_integral(alpha_, n_); break;
            case ProfileKind::tabulated:
                require(n_ >= 2 && t.table && t.table->dimension() == n_, errc::invalid_argument,
                        "tabulated profile dimension must match the weight (n >= 2)");
                if (n_ == 2) {
                    t.sphere_integral = t.table->exact_circle_integral();
                } else {
                    auto table = t.table;
                    t.sphere_integral = sphere_mc_integrate(
                        [&](std::span<const double> th) { return (*table)(th); }, n_, cfg.mc_samples, cfg.rng_seed).value;
                }
                break;
            }
            c_omega_ += t.coef * t.sphere_integral;
        }
        require(std::isfinite(c_omega_) && c_omega_ > 0.0, errc::non_finite_sphere_constant,
                "sphere constant must be finite and positive");
    }

    double alpha() const { return alpha_; }
    int dimension() const { return n_; }
    double sphere_constant() const { return c_omega_; }
    bool locally_integrable() const { return alpha_ > -n_; }
    const std::vector<ProfileTerm>& terms() const { return terms_; }

    /// True when w(x) = c |x|^alpha, i.e. the profile is constant.
    bool is_radial() const {
        return n_ == 1 || std::all_of(terms_.begin(), terms_.end(),
                                      [](const ProfileTerm& t) { return t.kind == ProfileKind::constant; });
    }

    /// Angular profile at a unit vector.
    double angular(std::span<const double> theta) const {
        double s = 0.0;
        for (const auto& t : terms_) {
            switch (t.kind) {
            case ProfileKind::constant: s += t.coef; break;
            case ProfileKind::axis_power: s += t.coef * (n_ == 1 ? 1.0 : std::pow(std::abs(theta[0]), alpha_)); break;
            case ProfileKind::tabulated: s += t.coef * (*t.table)(theta); break;
            }
        }
        return s;
    }

    double operator()(std::span<const double> x) const {
        const double r = norm(x);
        if (r == 0.0) return alpha_ > 0 ? 0.0 : (alpha_ == 0 ? 1.0 : std::numeric_limits<double>::infinity());
        if (is_radial()) return std::pow(r, alpha_) * (c_omega_ / sphere_area(n_));
        std::vector<double> theta(x.begin(), x.end());
        for (double& v : theta) v /= r;
        return std::pow(r, alpha_) * angular(theta);
    }

    /// theta * a + lambda * b for weights of equal degree and dimension.
    friend HomogeneousWeight combine(double theta, const HomogeneousWeight& a, double lambda,
                                     const HomogeneousWeight& b) {
        require(theta > 0 && lambda > 0, errc::invalid_argument, "combination coefficients must be positive");
        require(a.alpha_ == b.alpha_ && a.n_ == b.n_, errc::invalid_argument,
                "combined weights must share degree and dimension");
        HomogeneousWeight out = a;
        for (auto& t : out.terms_) t.coef *= theta;
        for (auto t : b.terms_) {
            t.coef *= lambda;
            out.terms_.push_back(t);
        }
        out.c_omega_ = theta * a.c_omega_ + lambda * b.c_omega_;
        return out;
    }

private:
    double alpha_;
    int n_;
    std::vector<ProfileTerm> terms_;
    double c_omega_ = 0.0;
};

inline HomogeneousWeight build_weight(double alpha, ProfileTerm profile, int n, const QuadratureConfig& cfg = {}) {
    if (n == 1)
        require(profile.kind != ProfileKind::tabulated, errc::invalid_argument,
                "in one dimension the weight is c|x|^alpha");
    return HomogeneousWeight(alpha, {std::move(profile)}, n, cfg);
}

/// w(x) = c |x|^alpha.
inline HomogeneousWeight power_weight(double alpha, int n, double c = 1.0) {
    return build_weight(alpha, ProfileTerm::constant(c), n);
}

namespace detail {

/// Integral of rho^(e-1) over [lo, hi], e = n + alpha.
inline double radial_moment(double lo, double hi, double e) {
    if (hi <= lo) return 0.0;
    if (e == 0.0) return std::log(hi / lo);
    if (lo == 0.0) return std::pow(hi, e) / e;
    return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

/// Signed antiderivative of |x|^alpha (alpha != -1).
inline double abs_power_antiderivative(double x, double alpha) {
    const double v = std::pow(std::abs(x), alpha + 1.0) / (alpha + 1.0);
    return x < 0 ? -v : v;
}

/// Radial extent [rho1, rho2] of the ray {rho theta} inside a ball; empty if rho2 <= rho1.
inline std::pair<double, double> ray_ball_interval(std::span<const double> theta, const Ball& B) {
    double tc = 0.0, cc = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        tc += theta[i] * B.center[i];
        cc += B.center[i] * B.center[i];
    }
    const double disc = tc * tc - cc + B.radius * B.radius;
    if (disc <= 0.0) return {0.0, 0.0};
    const double sq = std::sqrt(disc);
    const double hi = tc + sq;
    const double lo = std::max(0.0, tc - sq);
    if (hi <= 0.0) return {0.0, 0.0};
    return {lo, hi};
}

/// Angles in [0, 2pi) where rays are tangent to a 2D ball not containing the origin.
inline std::vector<double> tangent_angles(const Ball& B) {
    std::vector<double> pts{0.0, 2.0 * std::numbers::pi};
    const double c = std::hypot(B.center[0], B.center[1]);
    if (c == 0.0) return pts;
    const double phi = std::atan2(B.center[1], B.center[0]);
    auto wrap = [](double a) {
        a = std::fmod(a, 2.0 * std::numbers::pi);
        return a < 0 ? a + 2.0 * std::numbers::pi : a;
    };
    if (c >= B.radius) {
        const double half = std::asin(std::min(1.0, B.radius / c));
        pts.push_back(wrap(phi - half));
        pts.push_back(wrap(phi + half));
    }
    pts.push_back(wrap(phi));
    return pts;
}

inline bool closure_contains_origin(const Ball& B) { return norm(B.center) <= B.radius; }

} // namespace detail

/// w(B) = integral of w over the ball B.
inline double ball_mass(const HomogeneousWeight& w, const Ball& B, const QuadratureConfig& cfg = {}) {
    require(B.dimension() == w.dimension(), errc::invalid_argument, "ball and weight dimensions differ");
    const int n = w.dimension();
    const double alpha = w.alpha();
    const double e = n + alpha;
    if (detail::closure_contains_origin(B))
        require(e > 0.0, errc::non_integrable, "weight is not integrable near the origin (alpha <= -n)");

    if (norm(B.center) == 0.0) return w.sphere_constant() * std::pow(B.radius, e) / e;

    if (n == 1) {
        const double c = 0.5 * w.sphere_constant();
        const double lo = B.center[0] - B.radius, hi = B.center[0] + B.radius;
        if (alpha == -1.0) return c * std::log(std::abs(hi) / std::abs(lo));
        return c * (detail::abs_power_antiderivative(hi, alpha) - detail::abs_power_antiderivative(lo, alpha));
    }

    auto angular_mass = [&](std::span<const double> theta) {
        auto [lo, hi] = detail::ray_ball_interval(theta, B);
        if (hi <= lo) return 0.0;
        return w.angular(theta) * detail::radial_moment(lo, hi, e);
    };

    if (n == 2) {
        auto f = [&](double a) {
            const double th[2] = {std::cos(a), std::sin(a)};
            return angular_mass(th);
        };
        return integrate_panels(f, detail::tangent_angles(B), cfg.with_hint(0.5)).value;
    }
    return sphere_mc_integrate(angular_mass, n, cfg.mc_samples, cfg.rng_seed).value;
}

/// Largest w(B(x,2r)) / w(B(x,r)) over the sampled balls: an empirical lower bound
/// for the doubling constant.
inline double doubling_ratio_scan(const HomogeneousWeight& w, const std::vector<std::vector<double>>& centers,
                                  const std::vector<double>& radii, const QuadratureConfig& cfg = {}) {
    require(!centers.empty() && !radii.empty(), errc::invalid_argument, "need sample centers and radii");
    double best = 0.0;
    for (const auto& c : centers)
        for (double r : radii) {
            const double small = ball_mass(w, Ball(c, r), cfg);
            const double big = ball_mass(w, Ball(c, 2.0 * r), cfg);
            best = std::max(best, big / small);
        }
    return best;
}

/// Default doubling samples: radii 2^-10..2^10, centers 0 and +-2^k e_1 for k = -4..4.
inline std::pair<std::vector<std::vector<double>>, std::vector<double>> default_doubling_samples(int n) {
    std::vector<double> radii;
    for (int k = -10; k <= 10; ++k) radii.push_back(std::ldexp(1.0, k));
    std::vector<std::vector<double>> centers{std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    for (int k = -4; k <= 4; ++k)
        for (double sgn : {1.0, -1.0}) {
            std::vector<double> c(static_cast<std::size_t>(n), 0.0);
            c[0] = sgn * std::ldexp(1.0, k);
            centers.push_back(c);
        }
    return {centers, radii};
}

struct HomogeneityIdentityCheck {
    double lhs = 0.0;         // integral over |x| > 1 of w / |x|^(n+alpha+eps)
    double mirror_lhs = 0.0;  // integral over |x| < 1 of w / |x|^(n+alpha-eps)
    double rhs = 0.0;         // c_w / eps
    double error_estimate = 0.0;
};

/// Both sides of  int_{|x|>1} w |x|^{-n-alpha-eps} = int_{|x|<1} w |x|^{-n-alpha+eps} = c_w / eps,
/// the left sides evaluated by radial quadrature.
inline HomogeneityIdentityCheck lemma1_check(const HomogeneousWeight& w, double eps, const QuadratureConfig& cfg = {}) {
    require(eps > 0.0, errc::invalid_argument, "eps must be positive");
    const double c = w.sphere_constant();
    auto outer = integrate_improper([eps](double r) { return std::pow(r, -1.0 - eps); }, 1.0,
                                    cfg.with_hint(eps - 1.0 > -1.0 && eps < 1.0 ? std::optional(eps - 1.0) : std::nullopt));
    auto inner = integrate_adaptive([eps](double r) { return std::pow(r, eps - 1.0); }, 0.0, 1.0,
                                    cfg.with_hint(eps < 1.0 ? std::optional(eps - 1.0) : std::nullopt));
    HomogeneityIdentityCheck out;
    out.lhs = c * outer.value;
    out.mirror_lhs = c * inner.value;
    out.rhs = c / eps;
    out.error_estimate = c * std::max(outer.error_estimate, inner.error_estimate);
    return out;
}

} // namespace hclab
