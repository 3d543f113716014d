#pragma once

/**
 * @file spaces.hpp
 * @brief L^p(w) norms, weighted mean oscillation and the centred maximal average.
 *
 * All integrals are taken in polar form about the origin,
 *
 *     int g w dx = int_{S_n} w(theta) int_I g(r theta) r^{n-1+alpha} dr dsigma,
 *
 * so the origin is always an endpoint of a radial segment and descriptor
 * breakpoints are radii. The sphere is two points for n = 1, an angle
 * quadrature for n = 2 and Monte Carlo for n >= 3.
 */

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "hclab/error.hpp"
#include "hclab/functions.hpp"
#include "hclab/parallel.hpp"
#include "hclab/quadrature.hpp"
#include "hclab/weights.hpp"

namespace hclab {

struct NormResult {
    double value = 0.0;
    double pth_power = 0.0;
    double error_estimate = 0.0;  // on pth_power
    std::string method;
};

namespace detail {

/// Metadata orders are upper bounds on the singularity; sums such as 1 - 1_B may cancel exactly.
inline bool probe_vanishes(const TestFunction& f, std::span<const double> theta, double r_ref, bool toward_zero) {
    for (int j = 1; j <= 60; ++j) {
        const double r = toward_zero ? std::ldexp(r_ref, -j) : std::ldexp(r_ref, j);
        if (f.on_ray(r, theta) != 0.0) return false;
    }
    return true;
}

/// r^k |f(r theta)|^p over [0, inf) along one ray, split at descriptor radii, with exact power-law ends.
/// With `signed_values` the integrand is r^k f(r theta) and p must be 1.
inline IntegralResult ray_power_integral(const TestFunction& f, std::span<const double> theta, double k, double p,
                                         const QuadratureConfig& cfg, bool signed_values = false) {
    const auto& m = f.meta();
    std::vector<double> bps = m.breakpoints;
    if (bps.empty()) bps = {1.0};
    auto value = [&](double r) {
        const double v = f.on_ray(r, theta);
        return signed_values ? v : std::pow(std::abs(v), p);
    };
    auto g = [&](double r) { return r <= 0.0 ? 0.0 : std::pow(r, k) * value(r); };

    IntegralResult total;
    total.converged = true;

    // Origin piece [0, b1].
    const double b1 = bps.front();
    if (!m.origin.vanishes) {
        if (m.origin.exact_power) {
            const double e = *m.origin.exact_power;
            const double r0 = 0.5 * b1;
            const double coef = value(r0) / std::pow(r0, p * e);
            const double q = k + p * e;
            if (coef != 0.0) {
                if (q <= -1.0) fail(errc::divergent_norm, "norm diverges at the origin");
                IntegralResult piece;
                piece.value = coef * std::pow(b1, q + 1.0) / (q + 1.0);
                piece.converged = true;
                total += piece;
            }
        } else {
            const double q = k + p * std::min(m.origin.order, 0.0);
            const bool vanishes = !std::isnan(q) && q <= -1.0 && probe_vanishes(f, theta, b1, true);
            if (!vanishes) {
                if (!std::isnan(q) && q <= -1.0) fail(errc::divergent_norm, "norm diverges at the origin");
                std::optional<double> hint;
                if (std::isnan(q) || q < 0.0 || m.origin.has_log) hint = std::isnan(q) ? 0.0 : std::min(q, 0.0);
                total += integrate_adaptive(g, 0.0, b1, cfg.with_hint(hint));
            }
        }
    }
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) total += integrate_adaptive(g, bps[i], bps[i + 1], cfg);

    // Tail piece [b_last, inf).
    const double bl = bps.back();
    if (!m.tail.vanishes) {
        if (m.tail.exact_power) {
            const double e = *m.tail.exact_power;
            const double r0 = 2.0 * bl;
            const double coef = value(r0) / std::pow(r0, p * e);
            const double q = k + p * e;
            if (coef != 0.0) {
                if (q >= -1.0) fail(errc::divergent_norm, "norm diverges at infinity");
                IntegralResult piece;
                // B^{q+1}/(-q-1) through exp/log so that q -> -1 keeps full precision.
                piece.value = coef * std::exp((q + 1.0) * std::log(bl)) / (-q - 1.0);
                piece.converged = true;
                total += piece;
            }
        } else {
            const double q = k + p * m.tail.order;
            const bool vanishes = !std::isnan(q) && q >= -1.0 && probe_vanishes(f, theta, bl, false);
            if (!vanishes) {
                if (!std::isnan(q) && q >= -1.0) fail(errc::divergent_norm, "norm diverges at infinity");
                auto tail = integrate_improper(g, bl, cfg);
                if (tail.status == IntegralStatus::divergence_suspected) {
                    // A known decay order proves convergence; the mass then sits beyond reach of doubles.
                    if (!std::isnan(q))
                        fail(errc::non_convergence, "tail decays too slowly to integrate (order " + format_real(q) + ")");
                    fail(errc::divergent_norm, "norm diverges at infinity (quadrature)");
                }
                total += tail;
            }
        }
    }
    return total;
}

/// Angle breakpoints for n = 2: axes, where sign and angular witnesses jump.
inline std::vector<double> axis_angles() {
    const double pi = std::numbers::pi;
    return {0.0, 0.5 * pi, pi, 1.5 * pi, 2.0 * pi};
}

inline std::vector<double> merge_angles(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end(), [](double x, double y) { return std::abs(x - y) < 1e-15; }), a.end());
    return a;
}

} // namespace detail

namespace detail {

/// int |f|^p w (or int f w when signed, p = 1) in polar coordinates about the origin.
inline IntegralResult polar_integral(const TestFunction& f, const HomogeneousWeight& w, double p, bool signed_values,
                                     const QuadratureConfig& cfg, std::string& method) {
    const int n = w.dimension();
    const double k = n - 1 + w.alpha();
    IntegralResult total;
    if (f.meta().radial) {
        const double e1[1] = {1.0};
        total = ray_power_integral(f, e1, k, p, cfg, signed_values);
        total.value *= w.sphere_constant();
        total.error_estimate *= w.sphere_constant();
        method = "radial";
    } else if (n == 1) {
        for (double s : {1.0, -1.0}) {
            const double th[1] = {s};
            auto r = ray_power_integral(f, th, k, p, cfg, signed_values);
            r.value *= w.angular(th);
            r.error_estimate *= w.angular(th);
            total += r;
        }
        method = "two-rays";
    } else if (n == 2) {
        auto angle = [&](double a) {
            const double th[2] = {std::cos(a), std::sin(a)};
            return w.angular(th) * ray_power_integral(f, th, k, p, cfg, signed_values).value;
        };
        total = integrate_panels(angle, axis_angles(), cfg);
        method = "polar";
    } else {
        total = sphere_mc_integrate(
            [&](std::span<const double> th) {
                return w.angular(th) * ray_power_integral(f, th, k, p, cfg, signed_values).value;
            },
            n, cfg.mc_samples, cfg.rng_seed);
        method = "polar-mc";
    }
    return total;
}

} // namespace detail

/// (int |f|^p w)^{1/p}; throws DivergentNorm when the integral is infinite.
inline NormResult lp_norm_detailed(const TestFunction& f, const HomogeneousWeight& w, double p,
                                   const QuadratureConfig& cfg = {}) {
    require(p >= 1.0, errc::invalid_argument, "p must be >= 1");
    NormResult out;
    const auto total = detail::polar_integral(f, w, p, false, cfg, out.method);
    out.pth_power = total.value;
    out.error_estimate = total.error_estimate;
    out.value = std::pow(total.value, 1.0 / p);
    return out;
}

/// int f w over R^n; throws DivergentNorm when f w is not integrable.
inline IntegralResult weighted_integral(const TestFunction& f, const HomogeneousWeight& w,
                                        const QuadratureConfig& cfg = {}) {
    std::string method;
    return detail::polar_integral(f, w, 1.0, true, cfg, method);
}

inline double lp_norm(const TestFunction& f, const HomogeneousWeight& w, double p, const QuadratureConfig& cfg = {}) {
    return lp_norm_detailed(f, w, p, cfg).value;
}

/// Sampled surrogate for the supremum over all balls.
struct BallFamily {
    std::vector<std::vector<double>> centers;
    double r_min = std::ldexp(1.0, -10);
    double r_max = std::ldexp(1.0, 10);
    int count = 41;
    bool include_centered_at_origin = true;

    std::vector<double> radii() const {
        require(r_min > 0.0 && r_max >= r_min && count >= 1, errc::invalid_argument,
                "ball family needs 0 < r_min <= r_max and count >= 1");
        if (count == 1) return {r_min};
        std::vector<double> out(static_cast<std::size_t>(count));
        const double step = std::log(r_max / r_min) / (count - 1);
        for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = r_min * std::exp(step * i);
        out.back() = r_max;
        return out;
    }

    std::vector<Ball> balls(int n) const {
        std::vector<std::vector<double>> cs = centers;
        const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
        if (include_centered_at_origin && std::find(cs.begin(), cs.end(), origin) == cs.end())
            cs.insert(cs.begin(), origin);
        std::vector<Ball> out;
        for (const auto& c : cs) {
            require(static_cast<int>(c.size()) == n, errc::invalid_argument, "ball center has the wrong dimension");
            for (double r : radii()) out.emplace_back(c, r);
        }
        return out;
    }

    /// Centers {0, +-2^k e_1 : k = k_lo..k_hi}; radii 2^-10..2^10 with 41 points.
    static BallFamily default_family(int n, int k_lo = -5, int k_hi = 13) {
        BallFamily fam;
        for (int k = k_lo; k <= k_hi; ++k)
            for (double s : {1.0, -1.0}) {
                std::vector<double> c(static_cast<std::size_t>(n), 0.0);
                c[0] = s * std::ldexp(1.0, k);
                fam.centers.push_back(c);
            }
        return fam;
    }

    /// Twice as dense: radii at half steps, centers at half-integer powers added.
    BallFamily refined() const {
        BallFamily out = *this;
        out.count = 2 * count - 1;
        std::vector<std::vector<double>> extra;
        for (const auto& c : centers) {
            std::vector<double> mid = c;
            for (double& v : mid) v *= std::sqrt(2.0);
            extra.push_back(mid);
        }
        out.centers.insert(out.centers.end(), extra.begin(), extra.end());
        return out;
    }
};

namespace detail {

/// int_lo^hi h(f(r theta)) r^k dr with h(v) = v or |v - shift|^q; splits at radii and at level crossings.
inline double ray_segment_integral(const TestFunction& f, std::span<const double> theta, double lo, double hi, double k,
                                   bool oscillation, double shift, double q, const QuadratureConfig& cfg) {
    if (!(hi > lo)) return 0.0;
    const auto& meta = f.meta();
    auto value = [&](double r) { return f.on_ray(r, theta); };
    auto h = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double v = value(r);
        const double core = oscillation ? std::pow(std::abs(v - shift), q) : v;
        return core == 0.0 ? 0.0 : core * std::pow(r, k);
    };

    std::vector<double> pts{lo};
    for (double b : meta.breakpoints)
        if (b > lo && b < hi) pts.push_back(b);
    pts.push_back(hi);

    if (oscillation) {
        // Level crossings of f - shift inside each smooth piece.
        std::vector<double> roots;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double a = pts[i], b = pts[i + 1];
            constexpr int samples = 24;
            std::vector<double> xs;
            for (int j = 1; j < samples; ++j) {
                const double u = static_cast<double>(j) / samples;
                xs.push_back(a == 0.0 ? b * std::pow(1e-12, 1.0 - u) : a + (b - a) * u);
            }
            double prev_x = xs.front(), prev = value(prev_x) - shift;
            for (std::size_t j = 1; j < xs.size(); ++j) {
                const double x = xs[j], cur = value(x) - shift;
                if (prev == 0.0) roots.push_back(prev_x);
                else if ((prev < 0.0) != (cur < 0.0) && cur != 0.0) {
                    std::uintmax_t iters = 100;
                    auto [r1, r2] = boost::math::tools::toms748_solve(
                        [&](double r) { return value(r) - shift; }, prev_x, x, prev, cur,
                        boost::math::tools::eps_tolerance<double>(52), iters);
                    roots.push_back(0.5 * (r1 + r2));
                }
                prev_x = x;
                prev = cur;
            }
        }
        pts.insert(pts.end(), roots.begin(), roots.end());
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    }

    std::optional<double> first_hint;
    if (lo == 0.0 && !meta.origin.vanishes) {
        const double order = std::isnan(meta.origin.order) ? 0.0 : std::min(meta.origin.order, 0.0);
        const double e = k + (oscillation ? q : 1.0) * order;
        if (e <= -1.0) fail(errc::non_integrable_on_ball, "integrand is not integrable near the origin");
        if (e < 0.0 || meta.origin.has_log || std::isnan(meta.origin.order)) first_hint = std::min(e, 0.0);
    }
    return integrate_panels(h, pts, cfg, first_hint, std::nullopt).value;
}

/// int_B h(f) w over a ball, in polar form about the origin.
inline double ball_integral(const TestFunction& f, const HomogeneousWeight& w, const Ball& B, bool oscillation,
                            double shift, double q, const QuadratureConfig& cfg) {
    const int n = w.dimension();
    const double k = n - 1 + w.alpha();
    auto along = [&](std::span<const double> th) {
        auto [lo, hi] = ray_ball_interval(th, B);
        if (hi <= lo) return 0.0;
        return w.angular(th) * ray_segment_integral(f, th, lo, hi, k, oscillation, shift, q, cfg);
    };
    if (n == 1) {
        double s = 0.0;
        for (double sgn : {1.0, -1.0}) {
            const double th[1] = {sgn};
            s += along(th);
        }
        return s;
    }
    if (n == 2) {
        auto angle = [&](double a) {
            const double th[2] = {std::cos(a), std::sin(a)};
            return along(th);
        };
        return integrate_panels(angle, merge_angles(tangent_angles(B), axis_angles()), cfg.with_hint(0.5)).value;
    }
    return sphere_mc_integrate(along, n, cfg.mc_samples, cfg.rng_seed).value;
}

inline double checked_ball_mass(const HomogeneousWeight& w, const Ball& B, const QuadratureConfig& cfg) {
    try {
        return ball_mass(w, B, cfg);
    } catch (const error& e) {
        if (e.code() == errc::non_integrable) fail(errc::non_integrable_on_ball, e.what());
        throw;
    }
}

} // namespace detail

struct BallOscillation {
    Ball ball;
    double mean = 0.0;
    double oscillation = 0.0;
};

/// Weighted mean f_{B,w} and ((1/w(B)) int_B |f - f_{B,w}|^q w)^{1/q}.
inline BallOscillation ball_oscillation(const TestFunction& f, const HomogeneousWeight& w, const Ball& B, double q = 1.0,
                                        const QuadratureConfig& cfg = {}) {
    require(q >= 1.0, errc::invalid_argument, "oscillation exponent must be >= 1");
    require(B.dimension() == w.dimension(), errc::invalid_argument, "ball and weight dimensions differ");
    const double mass = detail::checked_ball_mass(w, B, cfg);
    BallOscillation out{B, 0.0, 0.0};
    out.mean = detail::ball_integral(f, w, B, false, 0.0, 1.0, cfg) / mass;
    const double osc = detail::ball_integral(f, w, B, true, out.mean, q, cfg) / mass;
    out.oscillation = std::pow(std::max(osc, 0.0), 1.0 / q);
    return out;
}

struct BmoEstimate {
    double value = 0.0;
    Ball argmax;
    std::size_t balls = 0;
};

/// Largest sampled mean oscillation: a lower bound for the BMO(w) (or BMO^q(w)) seminorm.
inline BmoEstimate bmo_estimate_detailed(const TestFunction& f, const HomogeneousWeight& w, const BallFamily& fam,
                                         double exponent = 1.0, const QuadratureConfig& cfg = {}) {
    const auto balls = fam.balls(w.dimension());
    const auto osc = parallel_map<double>(balls.size(), [&](std::size_t i) {
        return ball_oscillation(f, w, balls[i], exponent, cfg).oscillation;
    });
    BmoEstimate out;
    out.balls = balls.size();
    for (std::size_t i = 0; i < balls.size(); ++i)
        if (i == 0 || osc[i] > out.value) {
            out.value = osc[i];
            out.argmax = balls[i];
        }
    return out;
}

inline double bmo_estimate(const TestFunction& f, const HomogeneousWeight& w, const BallFamily& fam,
                           double exponent = 1.0, const QuadratureConfig& cfg = {}) {
    return bmo_estimate_detailed(f, w, fam, exponent, cfg).value;
}

/// max_r (1/w(B(x,r))) int_{B(x,r)} |f| w: centred-ball lower bound for M_w f(x).
inline double maximal_estimate(const TestFunction& f, const HomogeneousWeight& w, std::span<const double> x,
                               const std::vector<double>& radii, const QuadratureConfig& cfg = {}) {
    require(!radii.empty(), errc::invalid_argument, "need at least one radius");
    require(static_cast<int>(x.size()) == w.dimension(), errc::invalid_argument, "point has the wrong dimension");
    const auto vals = parallel_map<double>(radii.size(), [&](std::size_t i) {
        const Ball B(std::vector<double>(x.begin(), x.end()), radii[i]);
        const double mass = detail::checked_ball_mass(w, B, cfg);
        return detail::ball_integral(f, w, B, true, 0.0, 1.0, cfg) / mass;
    });
    return *std::max_element(vals.begin(), vals.end());
}

} // namespace hclab
