#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hclab {

enum class errc {
    invalid_argument,
    non_convergence,
    non_finite,
    divergence_suspected,
    insufficient_points,
    non_positive_profile,
    non_finite_sphere_constant,
    non_integrable,
    param_out_of_range,
    undefined_at_origin,
    divergent_norm,
    non_integrable_on_ball,
    divergent_point_value,
    non_radial_input,
    hypothesis_violated,
    config_parse,
    io,
};

inline std::string_view to_string(errc c) {
    switch (c) {
    case errc::invalid_argument: return "InvalidArgument";
    case errc::non_convergence: return "NonConvergence";
    case errc::non_finite: return "NonFinite";
    case errc::divergence_suspected: return "DivergenceSuspected";
    case errc::insufficient_points: return "InsufficientPoints";
    case errc::non_positive_profile: return "NonPositiveProfile";
    case errc::non_finite_sphere_constant: return "NonFiniteSphereConstant";
    case errc::non_integrable: return "NonIntegrable";
    case errc::param_out_of_range: return "ParamOutOfRange";
    case errc::undefined_at_origin: return "UndefinedAtOrigin";
    case errc::divergent_norm: return "DivergentNorm";
    case errc::non_integrable_on_ball: return "NonIntegrableOnBall";
    case errc::divergent_point_value: return "DivergentPointValue";
    case errc::non_radial_input: return "NonRadialInput";
    case errc::hypothesis_violated: return "HypothesisViolated";
    case errc::config_parse: return "ConfigParseError";
    case errc::io: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace hclab
