// confgruss: command-line front end for the conformable Grüss toolkit.

#include "confgruss/conformable.hpp"
#include "confgruss/error.hpp"
#include "confgruss/gruss.hpp"
#include "confgruss/pompeiu.hpp"
#include "confgruss/report.hpp"
#include "confgruss/sweep.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace confgruss;

namespace {

struct Options {
    double alpha = 1.0;
    double a = 1.0;
    double b = 2.0;
    std::string f = "x";
    std::string g = "x";
    std::optional<std::string> variant;
    std::optional<double> abs_tol;
    std::optional<double> rel_tol;
    std::optional<std::uint64_t> seed;
    long trials = 1000;
    std::string config;
    std::string out;
    std::string format = "json";
    // subcommand specific
    double x = 1.0;
    std::optional<double> eps;
    std::optional<double> tol;
    std::string theorem;
    std::string input;
};

struct Outcome {
    Json body;
    int exit_code = kExitOk;
    std::string csv;  // preformatted CSV, if the command has a natural row layout
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--alpha", o.alpha, "order α in (0, 1]");
    cmd->add_option("--a", o.a, "left endpoint");
    cmd->add_option("--b", o.b, "right endpoint");
    cmd->add_option("--f", o.f, "expression in x");
    cmd->add_option("--g", o.g, "expression in x");
    cmd->add_option("--variant", o.variant, "paper|corrected|safe|all")
        ->check(CLI::IsMember({"paper", "corrected", "safe", "all"}));
    cmd->add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--trials", o.trials, "number of fuzz trials");
    cmd->add_option("--config", o.config, "JSON config file");
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
}

std::vector<Variant> selected_variants(const Options& o) {
    if (!o.variant || *o.variant == "all") return {Variant::Paper, Variant::Corrected, Variant::Safe};
    return {variant_from_name(*o.variant)};
}

bool wants_paper(const Options& o) { return !o.variant || *o.variant == "all" || *o.variant == "paper"; }
bool wants_corrected(const Options& o) { return !o.variant || *o.variant != "paper"; }

SweepConfig base_config(const Options& o) {
    SweepConfig c = o.config.empty() ? SweepConfig::desk_suite() : load_sweep_config(o.config);
    if (o.abs_tol) c.tolerances.abs_tol = *o.abs_tol;
    if (o.rel_tol) c.tolerances.rel_tol = *o.rel_tol;
    if (o.seed) c.seed = *o.seed;
    if (o.variant || o.config.empty()) c.variants = selected_variants(o);
    c.tolerances.validate();
    return c;
}

Json case_json(const Options& o, bool with_g) {
    Json j{{"f", o.f}};
    if (with_g) j["g"] = o.g;
    j["alpha"] = o.alpha;
    j["a"] = o.a;
    j["b"] = o.b;
    return j;
}

Json estimate_json(const Estimate& e) {
    return Json{{"value", e.value}, {"error", e.error}, {"converged", e.converged}};
}

int estimate_exit(std::initializer_list<Estimate> es) {
    for (const auto& e : es)
        if (!e.converged) return kExitNonConvergence;
    return kExitOk;
}

Outcome cmd_integrate(const Options& o) {
    const SweepConfig c = base_config(o);
    ExpressionFn f = parse_expr(o.f);
    AlphaInterval ctx(o.alpha, o.a, o.b);
    QuadResult r = alpha_integral(f, ctx, c.tolerances);
    Json j = case_json(o, false);
    j["tolerances"] = to_json(c.tolerances);
    j["result"] = to_json(r);
    return {j, r.converged ? kExitOk : kExitNonConvergence, {}};
}

Outcome cmd_deriv(const Options& o) {
    ExpressionFn f = parse_expr(o.f);
    validate_alpha(o.alpha);
    if (!(o.x > 0.0)) throw ConfigError("x: must be positive, got " + format_double(o.x));
    double eps = o.eps.value_or(default_limit_eps(o.x));
    double d = conf_deriv(f, o.x, o.alpha);
    double lim = conf_deriv_limit(f, o.x, o.alpha, eps);
    Json j{{"f", o.f}, {"alpha", o.alpha}, {"x", o.x}, {"eps", eps}};
    j["conf_deriv"] = d;
    j["conf_deriv_limit"] = lim;
    j["abs_diff"] = std::abs(d - lim);
    j["rel_diff"] = std::abs(d - lim) / std::max(std::abs(d), 1e-300);
    return {j, kExitOk, {}};
}

Outcome cmd_mvt(const Options& o) {
    ExpressionFn f = parse_expr(o.f);
    validate_alpha(o.alpha);
    double q = pompeiu_quotient(f, o.a, o.b, o.alpha);
    double x1 = std::min(o.a, o.b), x2 = std::max(o.a, o.b);
    double tol = o.tol.value_or(1e-10 * std::max(1.0, std::abs(q)));
    double threshold = 1e-8 * std::max(1.0, std::abs(q));
    Json j{{"f", o.f}, {"alpha", o.alpha}, {"x1", x1}, {"x2", x2}, {"quotient", q}, {"tol", tol},
           {"threshold", threshold}};
    int code = kExitOk;
    if (wants_corrected(o)) {
        MeanValueResult r = find_xi(f, x1, x2, o.alpha, tol);
        j["result"] = to_json(r);
        j["phi_at_xi"] = phi(f, r.xi, o.alpha);
        bool pass = r.residual <= threshold;
        j["pass"] = pass;
        if (!pass) code = kExitAssertion;
    }
    if (wants_paper(o)) {
        FindXiOptions lit;
        lit.form = PhiForm::PaperLiteral;
        MeanValueResult r = find_xi(f, x1, x2, o.alpha, tol, lit);
        j["paper_literal"] = to_json(r);
        j["paper_literal_pass"] = r.residual <= threshold;
    }
    return {j, code, {}};
}

Outcome cmd_k(const Options& o) {
    const SweepConfig c = base_config(o);
    ExpressionFn f = parse_expr(o.f), g = parse_expr(o.g);
    AlphaInterval ctx(o.alpha, o.a, o.b);
    GrussMoments m = compute_moments(f, g, ctx, c.tolerances);
    Json j = case_json(o, true);
    Estimate k = functional_K(m, ctx), kc = functional_K_corrected(m, ctx);
    if (wants_paper(o)) j["K"] = estimate_json(k);
    if (wants_corrected(o)) j["K_corrected"] = estimate_json(kc);
    return {j, estimate_exit({k, kc}), {}};
}

Outcome cmd_h(const Options& o) {
    const SweepConfig c = base_config(o);
    ExpressionFn f = parse_expr(o.f), g = parse_expr(o.g);
    AlphaInterval ctx(o.alpha, o.a, o.b);
    Estimate h = functional_H(f, g, ctx, c.tolerances);
    Json j = case_json(o, true);
    j["H"] = estimate_json(h);
    return {j, estimate_exit({h}), {}};
}

Outcome cmd_identities(const Options& o) {
    const SweepConfig c = base_config(o);
    ExpressionFn f = parse_expr(o.f), g = parse_expr(o.g);
    AlphaInterval ctx(o.alpha, o.a, o.b);
    std::vector<IdentityReport> reports{identity_K(f, g, ctx, c.tolerances),
                                        identity_H(f, g, ctx, c.tolerances),
                                        moment_C_crosscheck(ctx, c.tolerances),
                                        kernel_alpha1_agreement(o.a, o.b)};
    Json j = case_json(o, true);
    Json arr = Json::array();
    bool failed = false, nonconv = false;
    for (const auto& r : reports) {
        arr.push_back(to_json(r));
        failed = failed || !r.pass;
        nonconv = nonconv || !r.converged;
    }
    j["identities"] = arr;
    j["kernels_at_a"] = {{"paper", kernel_eval(o.a, ctx, KernelForm::Paper)},
                         {"corrected", kernel_eval(o.a, ctx, KernelForm::Corrected)}};
    TrialRecord rec;
    rec.trial_id = "single";
    rec.f = o.f;
    rec.g = o.g;
    rec.alpha = o.alpha;
    rec.a = o.a;
    rec.b = o.b;
    rec.identities = reports;
    std::ostringstream csv;
    write_csv(csv, {rec});
    return {j, failed ? kExitAssertion : nonconv ? kExitNonConvergence : kExitOk, csv.str()};
}

Outcome cmd_verify(const Options& o) {
    const SweepConfig c = base_config(o);
    Theorem th;
    if (o.theorem == "thm31")
        th = Theorem::Thm31;
    else if (o.theorem == "thm32")
        th = Theorem::Thm32;
    else
        throw ConfigError("theorem: expected thm31 or thm32, got '" + o.theorem + "'");
    ExpressionFn f = parse_expr(o.f), g = parse_expr(o.g);
    AlphaInterval ctx(o.alpha, o.a, o.b);
    CaseAnalysis an = analyze_case(f, g, ctx, c.tolerances);
    TrialRecord rec;
    rec.trial_id = "single";
    rec.f = o.f;
    rec.g = o.g;
    rec.alpha = o.alpha;
    rec.a = o.a;
    rec.b = o.b;
    for (Variant v : selected_variants(o))
        rec.bounds.push_back(th == Theorem::Thm31 ? bound_thm31(f, g, ctx, c.tolerances, v, an)
                                                  : bound_thm32(f, g, ctx, c.tolerances, v, an));
    Json j = case_json(o, true);
    j["theorem"] = theorem_name(th);
    j["sup_phi_f"] = to_json(an.sup_f);
    j["sup_phi_g"] = to_json(an.sup_g);
    Json bounds = Json::array();
    for (const auto& b : rec.bounds) bounds.push_back(to_json(b));
    j["bounds"] = bounds;
    std::ostringstream csv;
    write_csv(csv, {rec});
    return {j, sweep_exit_code({rec}), csv.str()};
}

Outcome cmd_sweep(const Options& o) {
    const SweepConfig c = base_config(o);
    c.validate();
    std::vector<TrialRecord> records = run_sweep(c);
    std::ostringstream csv;
    write_csv(csv, records);
    return {sweep_report_json(c, records), sweep_exit_code(records), csv.str()};
}

Outcome cmd_fuzz(const Options& o) {
    const SweepConfig c = base_config(o);
    c.validate();
    FuzzSummary s = fuzz_search(o.seed.value_or(c.seed), o.trials, c);
    return {fuzz_report_json(c, s), s.exit_code(), {}};
}

Outcome cmd_report(const Options& o) {
    std::ifstream in(o.input);
    if (!in) throw ConfigError("input: cannot open '" + o.input + "'");
    Json report;
    try {
        report = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("input: invalid JSON: ") + e.what());
    }
    std::vector<TrialRecord> records = records_from_report(report);
    if (records.empty()) throw ConfigError("input: report has no records");
    SweepConfig c = report.contains("config") ? sweep_config_from_json(report["config"])
                                              : SweepConfig::desk_suite();
    std::ostringstream csv;
    write_csv(csv, records);
    return {sweep_report_json(c, records), sweep_exit_code(records), csv.str()};
}

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    } else if (j.is_number_float()) {
        out << prefix << ',' << format_double(j.get<double>()) << '\n';
    } else if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s.find_first_of(",\"") != std::string::npos) {
            std::string q = "\"";
            for (char ch : s) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
            s = q + "\"";
        }
        out << prefix << ',' << s << '\n';
    } else {
        out << prefix << ',' << j.dump() << '\n';
    }
}

void write_output(const Options& o, const Outcome& res) {
    std::ostringstream text;
    if (o.format == "csv") {
        if (!res.csv.empty()) {
            text << res.csv;
        } else {
            text << "key,value\n";
            flatten(res.body, "", text);
        }
    } else {
        text << res.body.dump(2) << '\n';
    }
    if (o.out.empty()) {
        std::cout << text.str();
        return;
    }
    std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("out: cannot write '" + o.out + "'");
    file << text.str();
    if (!file) throw ConfigError("out: write to '" + o.out + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conformable calculus, Pompeiu mean values and Grüss-type bounds"};
    app.require_subcommand(1);
    Options o;

    auto* integrate = app.add_subcommand("integrate", "α-integral of f over [a,b]");
    auto* deriv = app.add_subcommand("deriv", "conformable derivative at x against its limit quotient");
    auto* mvt = app.add_subcommand("mvt", "mean value point ξ between x1 = a and x2 = b");
    auto* k = app.add_subcommand("k", "Grüss functional K[f,g]");
    auto* h = app.add_subcommand("h", "functional H[f,g]");
    auto* ids = app.add_subcommand("check-identities", "double-integral identities for K and H");
    auto* verify = app.add_subcommand("verify", "bound check: thm31 or thm32");
    auto* sweep = app.add_subcommand("sweep", "run a sweep config (desk suite by default)");
    auto* fuzz = app.add_subcommand("fuzz", "seeded counterexample search");
    auto* report = app.add_subcommand("report", "re-emit a sweep report as JSON or CSV");

    for (auto* cmd : {integrate, deriv, mvt, k, h, ids, verify, sweep, fuzz, report}) add_common(cmd, o);
    deriv->add_option("--x", o.x, "evaluation point");
    deriv->add_option("--eps", o.eps, "limit step ε");
    mvt->add_option("--tol", o.tol, "bisection tolerance");
    verify->add_option("theorem", o.theorem, "thm31|thm32")
        ->required()
        ->check(CLI::IsMember({"thm31", "thm32"}));
    report->add_option("input", o.input, "sweep report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        Outcome res;
        if (*integrate) res = cmd_integrate(o);
        else if (*deriv) res = cmd_deriv(o);
        else if (*mvt) res = cmd_mvt(o);
        else if (*k) res = cmd_k(o);
        else if (*h) res = cmd_h(o);
        else if (*ids) res = cmd_identities(o);
        else if (*verify) res = cmd_verify(o);
        else if (*sweep) res = cmd_sweep(o);
        else if (*fuzz) res = cmd_fuzz(o);
        else res = cmd_report(o);
        write_output(o, res);
        return res.exit_code;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAssertion;
    }
}
