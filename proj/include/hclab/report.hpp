#pragma once

// Report serialization: CSV sweep tables, JSON documents, SVG ratio plots.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hclab/error.hpp"
#include "hclab/experiments.hpp"
#include "hclab/text.hpp"

namespace hclab {

enum class ReportFormat { csv, json, svg };

inline std::string to_string(ReportFormat f) {
    switch (f) {
    case ReportFormat::csv: return "csv";
    case ReportFormat::json: return "json";
    case ReportFormat::svg: return "svg";
    }
    return "?";
}

inline ReportFormat parse_format(std::string_view s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    if (s == "svg") return ReportFormat::svg;
    fail(errc::config_parse, "unknown report format '" + std::string(s) + "'");
}

inline constexpr const char* report_schema = "hclab/1";

/// Header, one row per sweep point, then "limit,<extrapolated>,<constant>" when the sweep is non-empty.
inline std::string report_csv(const ExperimentReport& rep) {
    std::string out = "eps,ratio,lower_bound\n";
    for (const auto& pt : rep.sweep_points)
        out += format_real(pt.eps) + "," + format_real(pt.ratio) + "," + format_real(pt.lower_bound) + "\n";
    if (!rep.sweep_points.empty()) {
        out += "limit,";
        if (rep.extrapolated_limit) out += format_real(*rep.extrapolated_limit);
        out += "," + format_real(rep.theoretical_constant.value) + "\n";
    }
    return out;
}

namespace detail {

/// Non-finite doubles become null; JSON has no infinity.
inline nlohmann::ordered_json json_real(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

inline nlohmann::ordered_json json_constant(const ConstantValue& c) {
    nlohmann::ordered_json j;
    j["value"] = json_real(c.value);
    j["finite"] = c.finite;
    j["method"] = c.method;
    j["error_estimate"] = json_real(c.error_estimate);
    return j;
}

inline nlohmann::ordered_json json_named(const std::vector<NamedValue>& vs) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& v : vs) j[v.name] = json_real(v.value);
    return j;
}

inline std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace detail

/// Everything except "timestamp" is a function of the inputs.
inline nlohmann::ordered_json report_json_body(const ExperimentReport& rep) {
    nlohmann::ordered_json j;
    j["schema"] = report_schema;
    j["experiment"] = rep.experiment;
    j["bundle"] = rep.bundle;
    j["theoretical_constant"] = detail::json_constant(rep.theoretical_constant);
    auto pts = nlohmann::ordered_json::array();
    for (const auto& pt : rep.sweep_points)
        pts.push_back({{"eps", detail::json_real(pt.eps)},
                       {"ratio", detail::json_real(pt.ratio)},
                       {"lower_bound", detail::json_real(pt.lower_bound)}});
    j["sweep_points"] = pts;
    j["extrapolated_limit"] = rep.extrapolated_limit ? detail::json_real(*rep.extrapolated_limit) : nullptr;
    j["monotone"] = rep.monotone;
    j["verdict"] = to_string(rep.verdict);
    j["tolerances"] = detail::json_named(rep.tolerances);
    j["values"] = detail::json_named(rep.values);
    j["notes"] = rep.notes;
    return j;
}

inline nlohmann::ordered_json timestamp_json(double runtime_seconds) {
    return {{"utc", detail::utc_now()}, {"runtime_seconds", runtime_seconds}};
}

inline std::string report_json(const ExperimentReport& rep) {
    auto j = report_json_body(rep);
    j["timestamp"] = timestamp_json(rep.runtime_seconds);
    return j.dump(2) + "\n";
}

/// Ratio and lower bound against eps on a log axis; the constant is the only <line> element.
inline std::string report_svg(const ExperimentReport& rep) {
    constexpr double W = 640, H = 400, L = 70, R = 20, T = 30, B = 50;
    std::vector<double> ys;
    for (const auto& pt : rep.sweep_points) {
        if (std::isfinite(pt.ratio)) ys.push_back(pt.ratio);
        if (std::isfinite(pt.lower_bound)) ys.push_back(pt.lower_bound);
    }
    const bool has_constant = rep.theoretical_constant.finite && std::isfinite(rep.theoretical_constant.value);
    if (has_constant) ys.push_back(rep.theoretical_constant.value);
    double y_lo = ys.empty() ? 0.0 : *std::min_element(ys.begin(), ys.end());
    double y_hi = ys.empty() ? 1.0 : *std::max_element(ys.begin(), ys.end());
    if (y_hi - y_lo < 1e-12 * std::max(1.0, std::abs(y_hi))) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    double x_lo = 0.0, x_hi = 1.0;
    if (!rep.sweep_points.empty()) {
        x_lo = x_hi = std::log2(rep.sweep_points.front().eps);
        for (const auto& pt : rep.sweep_points) {
            x_lo = std::min(x_lo, std::log2(pt.eps));
            x_hi = std::max(x_hi, std::log2(pt.eps));
        }
        if (x_hi == x_lo) {
            x_lo -= 1.0;
            x_hi += 1.0;
        }
    }
    const auto px = [&](double eps) { return L + (std::log2(eps) - x_lo) / (x_hi - x_lo) * (W - L - R); };
    const auto py = [&](double y) { return T + (y_hi - y) / (y_hi - y_lo) * (H - T - B); };
    const auto num = [](double v) {
        std::ostringstream os;
        os.precision(6);
        os << v;
        return os.str();
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
        << W << ' ' << H << "\">\n";
    svg << "<title>" << rep.experiment << ": ratio vs eps</title>\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<path class=\"axes\" d=\"M" << L << ' ' << T << " V" << H - B << " H" << W - R
        << "\" stroke=\"black\" fill=\"none\"/>\n";
    svg << "<text x=\"" << (W + L - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">eps (log2 scale)</text>\n";
    svg << "<text x=\"14\" y=\"" << (H - B + T) / 2 << "\" transform=\"rotate(-90 14 " << (H - B + T) / 2
        << ")\" text-anchor=\"middle\">ratio</text>\n";
    svg << "<text x=\"" << L - 6 << "\" y=\"" << py(y_hi - pad) + 4 << "\" text-anchor=\"end\">" << num(y_hi - pad)
        << "</text>\n";
    svg << "<text x=\"" << L - 6 << "\" y=\"" << py(y_lo + pad) + 4 << "\" text-anchor=\"end\">" << num(y_lo + pad)
        << "</text>\n";
    if (has_constant) {
        const double y = py(rep.theoretical_constant.value);
        svg << "<line class=\"constant\" x1=\"" << L << "\" y1=\"" << y << "\" x2=\"" << W - R << "\" y2=\"" << y
            << "\" stroke=\"red\" stroke-dasharray=\"6 4\"/>\n";
        svg << "<text x=\"" << W - R << "\" y=\"" << y - 6 << "\" text-anchor=\"end\" fill=\"red\">constant "
            << num(rep.theoretical_constant.value) << "</text>\n";
    }
    const auto polyline = [&](const char* cls, const char* colour, auto get) {
        std::ostringstream pts;
        for (const auto& pt : rep.sweep_points)
            if (std::isfinite(get(pt))) pts << px(pt.eps) << ',' << py(get(pt)) << ' ';
        if (pts.str().empty()) return;
        svg << "<polyline class=\"" << cls << "\" points=\"" << pts.str() << "\" stroke=\"" << colour
            << "\" fill=\"none\"/>\n";
        for (const auto& pt : rep.sweep_points)
            if (std::isfinite(get(pt)))
                svg << "<circle cx=\"" << px(pt.eps) << "\" cy=\"" << py(get(pt)) << "\" r=\"3\" fill=\"" << colour
                    << "\"/>\n";
    };
    polyline("ratio", "blue", [](const SweepPoint& p) { return p.ratio; });
    polyline("lower_bound", "gray", [](const SweepPoint& p) { return p.lower_bound; });
    svg << "</svg>\n";
    return svg.str();
}

inline std::string render_report(const ExperimentReport& rep, ReportFormat f) {
    switch (f) {
    case ReportFormat::csv: return report_csv(rep);
    case ReportFormat::json: return report_json(rep);
    case ReportFormat::svg: return report_svg(rep);
    }
    return {};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io, "cannot open " + path.string() + " for writing");
    out << text;
    if (!out) fail(errc::io, "write failed for " + path.string());
}

/// Writes <dir>/<stem>.<ext> and returns the path.
inline std::filesystem::path emit_report(const ExperimentReport& rep, ReportFormat f, const std::filesystem::path& dir,
                                         const std::string& stem) {
    const auto path = dir / (stem + "." + to_string(f));
    write_text_file(path, render_report(rep, f));
    return path;
}

} // namespace hclab
