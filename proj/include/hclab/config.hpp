#pragma once

// Run configurations: INI text with sections [experiment], [weight], [kernel], [curve], [sweep], [family],
// [quadrature], [output]. Numbers accept rational literals; lists are separated by ';'.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hclab/error.hpp"
#include "hclab/experiments.hpp"
#include "hclab/functions.hpp"
#include "hclab/kernels.hpp"
#include "hclab/quadrature.hpp"
#include "hclab/report.hpp"
#include "hclab/spaces.hpp"
#include "hclab/text.hpp"
#include "hclab/weights.hpp"

namespace hclab {

struct ExperimentSection {
    std::string kind = "sharpness";  // constant apply norm bmo sharpness commutator adjoint hardy-demo
    std::string op = "U";            // U V U_inf H
    double p = 2.0;
    double b_param = 1.0;            // hardy-demo exponent b
    std::string function;            // descriptor: apply, norm, adjoint (f), hardy-demo
    std::string partner;             // descriptor: adjoint (g)
    std::string symbol;              // descriptor: commutator b
    std::string mode = "necessity";  // commutator: necessity | bound
    std::vector<std::string> witnesses;
    std::vector<double> points;      // radii along e_1 for apply
    friend bool operator==(const ExperimentSection&, const ExperimentSection&) = default;
};

struct WeightSection {
    int n = 1;
    double alpha = 0.0;
    std::string profile = "constant";  // constant | axis_power
    double coef = 1.0;
    friend bool operator==(const WeightSection&, const WeightSection&) = default;
};

struct KernelSection {
    std::string family = "constant";  // constant power riemann_liouville product gamma tabulated
    double scale = 1.0;
    double b = 0.0;
    double beta = 1.0;
    double rate = 0.0;
    std::vector<double> table;
    friend bool operator==(const KernelSection&, const KernelSection&) = default;
};

struct CurveSection {
    std::string family = "power";  // power | reciprocal | sign_changing
    double sign = 1.0;
    double gamma = 1.0;
    std::vector<double> breakpoints;
    std::vector<double> signs;
    friend bool operator==(const CurveSection&, const CurveSection&) = default;
};

struct SweepSection {
    std::vector<double> epsilons = default_epsilons();
    friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct FamilySection {
    int k_lo = -5;
    int k_hi = 13;
    double r_min = std::ldexp(1.0, -10);
    double r_max = std::ldexp(1.0, 10);
    int count = 41;
    bool centered = true;
    friend bool operator==(const FamilySection&, const FamilySection&) = default;
};

struct QuadratureSection {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;
    long mc_samples = 20000;
    std::uint64_t seed = 0x5eedULL;
    friend bool operator==(const QuadratureSection&, const QuadratureSection&) = default;
};

struct OutputSection {
    std::string dir = ".";
    std::string stem;  // empty: the experiment name
    std::vector<std::string> formats{"json"};
    friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

struct RunConfig {
    ExperimentSection experiment;
    WeightSection weight;
    KernelSection kernel;
    CurveSection curve;
    SweepSection sweep;
    FamilySection family;
    QuadratureSection quadrature;
    OutputSection output;
    friend bool operator==(const RunConfig&, const RunConfig&) = default;

    KernelSpec kernel_spec() const {
        const auto& k = kernel;
        if (k.family == "constant") return KernelSpec::constant(k.scale);
        if (k.family == "power") return KernelSpec::power(k.scale, k.b);
        if (k.family == "riemann_liouville") return KernelSpec::riemann_liouville(k.beta);
        if (k.family == "product") return KernelSpec::product(k.scale, k.b, k.beta);
        if (k.family == "gamma") return KernelSpec::gamma(k.scale, k.b, k.rate);
        if (k.family == "tabulated") return KernelSpec::tabulated(k.table);
        fail(errc::config_parse, "unknown kernel family '" + k.family + "'");
    }

    CurveSpec curve_spec() const {
        const auto& c = curve;
        if (c.family == "power") return CurveSpec::power(c.sign, c.gamma);
        if (c.family == "reciprocal") return CurveSpec::reciprocal();
        if (c.family == "sign_changing") {
            std::vector<int> signs;
            for (double s : c.signs) signs.push_back(static_cast<int>(s));
            return CurveSpec::sign_changing(c.gamma, c.breakpoints, signs);
        }
        fail(errc::config_parse, "unknown curve family '" + c.family + "'");
    }

    HomogeneousWeight weight_spec() const {
        require(weight.n >= 1, errc::config_parse, "weight.n must be >= 1");
        if (weight.profile == "constant") return power_weight(weight.alpha, weight.n, weight.coef);
        if (weight.profile == "axis_power")
            return build_weight(weight.alpha, ProfileTerm::axis_power(weight.coef), weight.n);
        fail(errc::config_parse, "unknown weight profile '" + weight.profile + "'");
    }

    BallFamily ball_family() const {
        auto fam = BallFamily::default_family(weight.n, family.k_lo, family.k_hi);
        fam.r_min = family.r_min;
        fam.r_max = family.r_max;
        fam.count = family.count;
        fam.include_centered_at_origin = family.centered;
        return fam;
    }

    QuadratureConfig quadrature_config() const {
        QuadratureConfig q;
        q.rel_tol = quadrature.rel_tol;
        q.abs_tol = quadrature.abs_tol;
        q.max_subdivisions = quadrature.max_subdivisions;
        q.mc_samples = quadrature.mc_samples;
        q.rng_seed = quadrature.seed;
        q.validate();
        return q;
    }

    SweepPlan sweep_plan() const {
        SweepPlan plan;
        plan.epsilons = sweep.epsilons;
        plan.psi = kernel_spec();
        plan.s = curve_spec();
        plan.w = weight_spec();
        plan.p = experiment.p;
        plan.validate();
        return plan;
    }

    std::vector<ReportFormat> report_formats() const {
        std::vector<ReportFormat> out;
        for (const auto& f : output.formats) out.push_back(parse_format(f));
        return out;
    }
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(';', start), text.size());
        const auto item = trim(std::string_view(text).substr(start, end - start));
        if (!item.empty()) out.emplace_back(item);
        start = end + 1;
    }
    return out;
}

inline std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "; " : "") + items[i];
    return out;
}

inline std::string join_reals(const std::vector<double>& v) {
    std::vector<std::string> items;
    for (double x : v) items.push_back(format_real(x));
    return join_list(items);
}

/// Reads keys of one section and rejects any key it did not consume.
class SectionReader {
public:
    SectionReader(const boost::property_tree::ptree& root, std::string name) : name_(std::move(name)) {
        if (auto child = root.get_child_optional(name_)) tree_ = &*child;
    }
    void finish() const {
        if (!tree_) return;
        for (const auto& [key, _] : *tree_)
            if (!used_.count(key)) fail(errc::config_parse, "unknown key '" + key + "' in [" + name_ + "]");
    }

    void text(const char* key, std::string& out) {
        if (auto v = raw(key)) out = std::string(trim(*v));
    }
    void real(const char* key, double& out) {
        if (auto v = raw(key)) out = parse_real(*v);
    }
    void integer(const char* key, int& out) { out = static_cast<int>(checked_integer(key, out)); }
    void integer(const char* key, long& out) { out = static_cast<long>(checked_integer(key, out)); }
    void unsigned64(const char* key, std::uint64_t& out) {
        if (auto v = raw(key)) {
            const auto s = std::string(trim(*v));
            std::size_t pos = std::string::npos;
            if (!s.empty() && s.front() != '-') {
                try {
                    out = std::stoull(s, &pos, 0);
                } catch (const std::exception&) {
                    pos = std::string::npos;
                }
            }
            if (pos != s.size()) fail(errc::config_parse, key_name(key) + " is not an unsigned integer: '" + s + "'");
        }
    }
    void boolean(const char* key, bool& out) {
        if (auto v = raw(key)) {
            const auto s = trim(*v);
            if (s == "true" || s == "1") out = true;
            else if (s == "false" || s == "0") out = false;
            else fail(errc::config_parse, key_name(key) + " must be true or false");
        }
    }
    void texts(const char* key, std::vector<std::string>& out) {
        if (auto v = raw(key)) out = split_list(*v);
    }
    void reals(const char* key, std::vector<double>& out) {
        if (auto v = raw(key)) {
            out.clear();
            for (const auto& item : split_list(*v)) out.push_back(parse_real(item));
        }
    }

private:
    std::optional<std::string> raw(const char* key) {
        if (!tree_) return std::nullopt;
        used_.insert(key);
        auto v = tree_->get_optional<std::string>(boost::property_tree::ptree::path_type(key, '\0'));
        return v ? std::optional<std::string>(*v) : std::nullopt;
    }
    std::string key_name(const char* key) const { return name_ + "." + key; }
    double checked_integer(const char* key, double current) {
        double v = current;
        real(key, v);
        if (v != std::floor(v) || !std::isfinite(v)) fail(errc::config_parse, key_name(key) + " must be an integer");
        return v;
    }

    const boost::property_tree::ptree* tree_ = nullptr;
    std::string name_;
    std::set<std::string> used_;
};

} // namespace detail

inline RunConfig parse_config_text(const std::string& text) {
    boost::property_tree::ptree root;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, root);
    } catch (const boost::property_tree::ini_parser_error& e) {
        fail(errc::config_parse, std::string("line ") + std::to_string(e.line()) + ": " + e.message());
    }
    static const std::set<std::string> sections{"experiment", "weight", "kernel", "curve",
                                                "sweep", "family", "quadrature", "output"};
    for (const auto& [name, child] : root) {
        if (!sections.count(name)) fail(errc::config_parse, "unknown section [" + name + "]");
        if (!child.data().empty()) fail(errc::config_parse, "key '" + name + "' outside any section");
    }

    RunConfig c;
    {
        detail::SectionReader r(root, "experiment");
        auto& e = c.experiment;
        r.text("kind", e.kind);
        r.text("operator", e.op);
        r.real("p", e.p);
        r.real("b_param", e.b_param);
        r.text("function", e.function);
        r.text("partner", e.partner);
        r.text("symbol", e.symbol);
        r.text("mode", e.mode);
        r.texts("witnesses", e.witnesses);
        r.reals("points", e.points);
        r.finish();
    }
    {
        detail::SectionReader r(root, "weight");
        r.integer("n", c.weight.n);
        r.real("alpha", c.weight.alpha);
        r.text("profile", c.weight.profile);
        r.real("coef", c.weight.coef);
        r.finish();
    }
    {
        detail::SectionReader r(root, "kernel");
        r.text("family", c.kernel.family);
        r.real("scale", c.kernel.scale);
        r.real("b", c.kernel.b);
        r.real("beta", c.kernel.beta);
        r.real("rate", c.kernel.rate);
        r.reals("table", c.kernel.table);
        r.finish();
    }
    {
        detail::SectionReader r(root, "curve");
        r.text("family", c.curve.family);
        r.real("sign", c.curve.sign);
        r.real("gamma", c.curve.gamma);
        r.reals("breakpoints", c.curve.breakpoints);
        r.reals("signs", c.curve.signs);
        r.finish();
    }
    {
        detail::SectionReader r(root, "sweep");
        r.reals("epsilons", c.sweep.epsilons);
        r.finish();
    }
    {
        detail::SectionReader r(root, "family");
        r.integer("k_lo", c.family.k_lo);
        r.integer("k_hi", c.family.k_hi);
        r.real("r_min", c.family.r_min);
        r.real("r_max", c.family.r_max);
        r.integer("count", c.family.count);
        r.boolean("centered", c.family.centered);
        r.finish();
    }
    {
        detail::SectionReader r(root, "quadrature");
        r.real("rel_tol", c.quadrature.rel_tol);
        r.real("abs_tol", c.quadrature.abs_tol);
        r.integer("max_subdivisions", c.quadrature.max_subdivisions);
        r.integer("mc_samples", c.quadrature.mc_samples);
        r.unsigned64("seed", c.quadrature.seed);
        r.finish();
    }
    {
        detail::SectionReader r(root, "output");
        r.text("dir", c.output.dir);
        r.text("stem", c.output.stem);
        r.texts("formats", c.output.formats);
        r.finish();
    }
    for (const auto& f : c.output.formats) parse_format(f);
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::config_parse, "cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Every key written explicitly; parse_config_text inverts it exactly.
inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream o;
    const auto r = [](double v) { return format_real(v); };
    const auto& e = c.experiment;
    o << "[experiment]\nkind = " << e.kind << "\noperator = " << e.op << "\np = " << r(e.p)
      << "\nb_param = " << r(e.b_param) << "\nfunction = " << e.function << "\npartner = " << e.partner
      << "\nsymbol = " << e.symbol << "\nmode = " << e.mode << "\nwitnesses = " << detail::join_list(e.witnesses)
      << "\npoints = " << detail::join_reals(e.points) << "\n\n";
    o << "[weight]\nn = " << c.weight.n << "\nalpha = " << r(c.weight.alpha) << "\nprofile = " << c.weight.profile
      << "\ncoef = " << r(c.weight.coef) << "\n\n";
    o << "[kernel]\nfamily = " << c.kernel.family << "\nscale = " << r(c.kernel.scale) << "\nb = " << r(c.kernel.b)
      << "\nbeta = " << r(c.kernel.beta) << "\nrate = " << r(c.kernel.rate)
      << "\ntable = " << detail::join_reals(c.kernel.table) << "\n\n";
    o << "[curve]\nfamily = " << c.curve.family << "\nsign = " << r(c.curve.sign) << "\ngamma = " << r(c.curve.gamma)
      << "\nbreakpoints = " << detail::join_reals(c.curve.breakpoints)
      << "\nsigns = " << detail::join_reals(c.curve.signs) << "\n\n";
    o << "[sweep]\nepsilons = " << detail::join_reals(c.sweep.epsilons) << "\n\n";
    o << "[family]\nk_lo = " << c.family.k_lo << "\nk_hi = " << c.family.k_hi << "\nr_min = " << r(c.family.r_min)
      << "\nr_max = " << r(c.family.r_max) << "\ncount = " << c.family.count
      << "\ncentered = " << (c.family.centered ? "true" : "false") << "\n\n";
    o << "[quadrature]\nrel_tol = " << r(c.quadrature.rel_tol) << "\nabs_tol = " << r(c.quadrature.abs_tol)
      << "\nmax_subdivisions = " << c.quadrature.max_subdivisions << "\nmc_samples = " << c.quadrature.mc_samples
      << "\nseed = " << c.quadrature.seed << "\n\n";
    o << "[output]\ndir = " << c.output.dir << "\nstem = " << c.output.stem
      << "\nformats = " << detail::join_list(c.output.formats) << "\n";
    return o.str();
}

} // namespace hclab
