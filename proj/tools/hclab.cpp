// hclab: batch front end for the operator experiments.
// Exit status: 0 sharp-confirmed or bound-only, 2 violated, 1 on any error.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "acceptance.hpp"
#include "hclab/config.hpp"
#include "hclab/experiments.hpp"
#include "hclab/operators.hpp"
#include "hclab/report.hpp"

namespace {

using namespace hclab;

struct Options {
    std::string config;
    std::string out;
    std::vector<std::string> formats;
    std::optional<std::uint64_t> seed;
    std::optional<double> rel_tol;
};

RunConfig resolve(const Options& o) {
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (o.seed) c.quadrature.seed = *o.seed;
    if (o.rel_tol) c.quadrature.rel_tol = *o.rel_tol;
    if (!o.out.empty()) c.output.dir = o.out;
    if (!o.formats.empty()) c.output.formats = o.formats;
    c.report_formats();
    return c;
}

OperatorKind operator_kind(const std::string& op) {
    if (op == "U") return OperatorKind::hardy_cesaro;
    if (op == "V") return OperatorKind::cesaro;
    if (op == "U_inf") return OperatorKind::infinite;
    if (op == "H") return OperatorKind::ndim_hardy;
    fail(errc::config_parse, "unknown operator '" + op + "' (U, V, U_inf, H)");
}

OperatorSpec operator_spec(const RunConfig& c) {
    OperatorSpec op;
    op.kind = operator_kind(c.experiment.op);
    op.psi = c.kernel_spec();
    op.s = c.curve_spec();
    op.n = c.weight.n;
    return op;
}

/// Norm of the configured operator on L^p(w).
ConstantValue operator_constant(const RunConfig& c, const QuadratureConfig& q) {
    const auto w = c.weight_spec();
    const int n = w.dimension();
    const double alpha = w.alpha(), p = c.experiment.p;
    switch (operator_kind(c.experiment.op)) {
    case OperatorKind::hardy_cesaro: return lp_constant(c.kernel_spec(), c.curve_spec(), n, alpha, p, q);
    case OperatorKind::cesaro: return cesaro_constant(c.kernel_spec(), c.curve_spec(), n, alpha, p, q);
    case OperatorKind::infinite: return infinite_lp_constant(c.kernel_spec(), c.curve_spec(), n, alpha, p, q);
    case OperatorKind::ndim_hardy:
        return lp_constant(KernelSpec::power(n, n - 1.0), CurveSpec::power(1.0, 1.0), n, alpha, p, q);
    }
    return ConstantValue::infinite("operator");
}

TestFunction required_function(const std::string& text, const char* key) {
    require(!text.empty(), errc::config_parse, std::string("experiment.") + key + " is required");
    return parse_function(text);
}

void add_constant_value(ExperimentReport& rep, const std::string& name, const ConstantValue& v) {
    rep.values.push_back({name, v.value});
}

ExperimentReport run_constant(const RunConfig& c, const QuadratureConfig& q) {
    ExperimentReport rep;
    rep.experiment = "constant";
    const auto w = c.weight_spec();
    const auto psi = c.kernel_spec();
    const auto s = c.curve_spec();
    rep.bundle = hclab::detail::bundle_text(psi, s, w, c.experiment.p) + "; operator=" + c.experiment.op;
    rep.theoretical_constant = operator_constant(c, q);
    const int n = w.dimension();
    const double alpha = w.alpha(), p = c.experiment.p;
    add_constant_value(rep, "lp_constant", lp_constant(psi, s, n, alpha, p, q));
    add_constant_value(rep, "cesaro_constant", cesaro_constant(psi, s, n, alpha, p, q));
    add_constant_value(rep, "bmo_constant", bmo_constant(psi, q));
    add_constant_value(rep, "signed_bmo_factor", signed_bmo_factor(psi, s, q));
    const auto comm = commutator_constant(psi, s, n, alpha, p, q);
    add_constant_value(rep, "commutator_necessity", comm.necessity);
    add_constant_value(rep, "commutator_bound", comm.bound);
    rep.tolerances = {{"rel_tol", q.rel_tol}, {"abs_tol", q.abs_tol}};
    rep.verdict = Verdict::bound_only;
    return rep;
}

ExperimentReport run_apply(const RunConfig& c, const QuadratureConfig& q) {
    ExperimentReport rep;
    rep.experiment = "apply";
    const auto f = required_function(c.experiment.function, "function");
    const auto op = operator_spec(c);
    rep.bundle = op.describe() + "; f=" + f.describe();
    rep.theoretical_constant = operator_constant(c, q);
    const std::vector<double> radii = c.experiment.points.empty() ? std::vector<double>{0.5, 1.0, 2.0}
                                                                   : c.experiment.points;
    for (double r : radii) {
        std::vector<double> x(static_cast<std::size_t>(c.weight.n), 0.0);
        x[0] = r;
        rep.values.push_back({"x=" + format_real(r), apply(op, f, x, q)});
    }
    rep.tolerances = {{"rel_tol", q.rel_tol}, {"abs_tol", q.abs_tol}};
    rep.verdict = Verdict::bound_only;
    return rep;
}

ExperimentReport run_norm(const RunConfig& c, const QuadratureConfig& q) {
    ExperimentReport rep;
    rep.experiment = "norm";
    const auto f = required_function(c.experiment.function, "function");
    const auto w = c.weight_spec();
    const auto op = operator_spec(c);
    const double p = c.experiment.p;
    rep.bundle = op.describe() + "; f=" + f.describe() + "; p=" + format_real(p);
    rep.theoretical_constant = operator_constant(c, q);
    const auto nf = lp_norm_detailed(f, w, p, q);
    const double nu = lp_norm(operator_image(op, f, q), w, p, q);
    const double ratio = nf.value > 0.0 ? nu / nf.value : 0.0;
    rep.values = {{"norm_f", nf.value}, {"norm_image", nu}, {"ratio", ratio}};
    rep.notes.push_back("norm method: " + nf.method);
    rep.tolerances = {{"rel_tol", q.rel_tol}, {"bound_rel_tol", 10.0 * q.rel_tol}};
    const bool exceeds = rep.theoretical_constant.finite &&
                         ratio > rep.theoretical_constant.value * (1.0 + 10.0 * q.rel_tol) + 10.0 * q.abs_tol;
    rep.verdict = exceeds ? Verdict::violated : Verdict::bound_only;
    return rep;
}

std::vector<TestFunction> witnesses(const RunConfig& c) {
    std::vector<TestFunction> out;
    for (const auto& d : c.experiment.witnesses) out.push_back(parse_function(d));
    if (out.empty()) out.push_back(c.weight.n == 1 ? sign_witness() : angular_witness(AngularFunction::sign_first()));
    return out;
}

ExperimentReport run_bmo(const RunConfig& c, const QuadratureConfig& q) {
    return bmo_bound_experiment(c.kernel_spec(), c.curve_spec(), c.weight_spec(), witnesses(c), c.ball_family(), q);
}

ExperimentReport run_sharpness(const RunConfig& c, const QuadratureConfig& q) {
    const auto kind = operator_kind(c.experiment.op);
    require(kind == OperatorKind::hardy_cesaro || kind == OperatorKind::cesaro, errc::config_parse,
            "sharpness sweeps take operator U or V");
    return sharpness_sweep(c.sweep_plan(), kind, q);
}

ExperimentReport run_commutator(const RunConfig& c, const QuadratureConfig& q) {
    const auto b = c.experiment.symbol.empty() ? log_symbol() : parse_function(c.experiment.symbol);
    const auto plan = c.sweep_plan();
    if (c.experiment.mode == "necessity") return commutator_necessity_sweep(plan, b, q);
    require(c.experiment.mode == "bound", errc::config_parse, "experiment.mode must be necessity or bound");
    std::vector<TestFunction> fs;
    for (const auto& d : c.experiment.witnesses) fs.push_back(parse_function(d));
    // The f_eps family is always swept through the radial reduction.
    if (fs.empty()) fs.push_back(ball_indicator());
    const auto fam = c.ball_family();
    return commutator_bound_check(plan.psi, plan.s, b, fs, plan.w, plan.p, plan, &fam, q);
}

ExperimentReport run_adjoint(const RunConfig& c, const QuadratureConfig& q) {
    hclab::detail::Stopwatch clock;
    const auto f = c.experiment.function.empty() ? ball_indicator() : parse_function(c.experiment.function);
    const auto g = c.experiment.partner.empty() ? ball_indicator() : parse_function(c.experiment.partner);
    const auto w = c.weight_spec();
    const auto psi = c.kernel_spec();
    const auto s = c.curve_spec();
    const double p = c.experiment.p;
    ExperimentReport rep;
    rep.experiment = "adjoint";
    rep.bundle = hclab::detail::bundle_text(psi, s, w, p) + "; f=" + f.describe() + "; g=" + g.describe();
    rep.theoretical_constant = lp_constant(psi, s, w.dimension(), w.alpha(), p, q);
    const auto r = adjointness_check(f, g, psi, s, w, p, q);
    const double tol = 1e-6 * (1.0 + std::abs(r.lhs));
    rep.values = {{"lhs", r.lhs}, {"rhs", r.rhs}, {"residual", r.residual}};
    rep.tolerances = {{"rel_tol", q.rel_tol}, {"residual_tol", tol}};
    rep.verdict = r.residual <= tol ? Verdict::bound_only : Verdict::violated;
    rep.runtime_seconds = clock.seconds();
    return rep;
}

ExperimentReport run_hardy(const RunConfig& c, const QuadratureConfig& q) {
    const double p = c.experiment.p, b = c.experiment.b_param;
    auto rep = hardy_demo_sweep(p, b, c.sweep.epsilons, q);
    if (!c.experiment.function.empty()) {
        const auto demo = hardy_inequality_demo(parse_function(c.experiment.function), p, b, q);
        rep.values.push_back({"lhs", demo.lhs});
        rep.values.push_back({"rhs", demo.rhs});
        rep.values.push_back({"constant_times_rhs", demo.constant * demo.rhs});
        if (!demo.holds) rep.verdict = Verdict::violated;
    }
    return rep;
}

ExperimentReport run_experiment(const std::string& kind, const RunConfig& c) {
    const auto q = c.quadrature_config();
    if (kind == "constant") return run_constant(c, q);
    if (kind == "apply") return run_apply(c, q);
    if (kind == "norm") return run_norm(c, q);
    if (kind == "bmo") return run_bmo(c, q);
    if (kind == "sharpness") return run_sharpness(c, q);
    if (kind == "commutator") return run_commutator(c, q);
    if (kind == "adjoint") return run_adjoint(c, q);
    if (kind == "hardy-demo") return run_hardy(c, q);
    fail(errc::config_parse, "unknown experiment kind '" + kind + "'");
}

std::string constant_text(const ConstantValue& v) {
    if (v.is_infinite()) return "infinite (" + v.method + ")";
    return format_real(v.value) + " (" + v.method + ")";
}

int run_command(const std::string& kind, const Options& o) {
    const auto c = resolve(o);
    const auto t0 = std::chrono::steady_clock::now();
    auto rep = run_experiment(kind.empty() ? c.experiment.kind : kind, c);
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << rep.experiment << ": " << rep.bundle << "\n";
    std::cout << "  constant: " << constant_text(rep.theoretical_constant) << "\n";
    if (rep.extrapolated_limit) std::cout << "  extrapolated limit: " << format_real(*rep.extrapolated_limit) << "\n";
    for (const auto& v : rep.values) std::cout << "  " << v.name << " = " << format_real(v.value) << "\n";
    for (const auto& n : rep.notes) std::cout << "  note: " << n << "\n";
    std::cout << "  verdict: " << to_string(rep.verdict) << "\n";
    const std::string stem = c.output.stem.empty() ? rep.experiment : c.output.stem;
    for (auto f : c.report_formats()) std::cout << "  wrote " << emit_report(rep, f, c.output.dir, stem).string() << "\n";
    return rep.verdict == Verdict::violated ? 2 : 0;
}

int run_check_all(const Options& o) {
    const auto c = resolve(o);
    const auto q = c.quadrature_config();
    const auto seed = c.quadrature.seed;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<acceptance::CriterionResult> results;
    for (int id = 1; id < acceptance::criterion_count; ++id) {
        results.push_back(acceptance::run_criterion(id, seed, q));
        std::cout << acceptance::summary_line(results.back()) << std::endl;
    }
    std::cout << "criterion 10 is checked by the acceptance binary (it runs this command twice)" << std::endl;
    auto doc = acceptance::results_json(results, seed);
    auto stamp = timestamp_json(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    for (const auto& r : results) stamp["criteria_runtime_seconds"][std::to_string(r.id)] = r.runtime_seconds;
    doc["timestamp"] = stamp;
    for (auto f : c.report_formats()) {
        require(f == ReportFormat::json, errc::config_parse, "check-all writes json only");
        const auto path = std::filesystem::path(c.output.dir) / "check-all.json";
        write_text_file(path, doc.dump(2) + "\n");
        std::cout << "wrote " << path.string() << "\n";
    }
    return doc["verdict"] == "pass" ? 0 : 2;
}

void add_common(CLI::App* cmd, Options& o, bool needs_config) {
    auto* opt = cmd->add_option("--config", o.config, "experiment config (INI)")->check(CLI::ExistingFile);
    if (needs_config) opt->required();
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--format", o.formats, "report format: csv, json or svg (repeatable)")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    cmd->add_option("--seed", o.seed, "seed for Monte Carlo quadrature and random draws");
    cmd->add_option("--rel-tol", o.rel_tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hardy-Cesaro operator experiments"};
    app.require_subcommand(1);
    Options opts;
    std::string chosen;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"constant", "operator norm and related constants of a bundle"},
        {"apply", "evaluate the operator on a function at points"},
        {"norm", "weighted norms of a function and its image"},
        {"bmo", "BMO bound experiment over witnesses"},
        {"sharpness", "sweep of the extremal family against the norm"},
        {"commutator", "commutator necessity sweep or bound check"},
        {"adjoint", "duality residual between U and its companion"},
        {"hardy-demo", "weighted one-dimensional Hardy inequality"},
        {"run", "run the experiment named in the config"}};
    for (const auto& [name, help] : commands) {
        auto* cmd = app.add_subcommand(name, help);
        add_common(cmd, opts, name == "run");
        cmd->callback([&chosen, n = name] { chosen = n; });
    }
    auto* all = app.add_subcommand("check-all", "run acceptance criteria 1-9 and write check-all.json");
    add_common(all, opts, false);
    all->callback([&chosen] { chosen = "check-all"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    try {
        if (chosen == "check-all") return run_check_all(opts);
        return run_command(chosen == "run" ? std::string() : chosen, opts);
    } catch (const std::exception& e) {
        std::cerr << "hclab " << chosen << ": " << e.what() << "\n";
        return 1;
    }
}
