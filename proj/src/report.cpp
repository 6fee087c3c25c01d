#include "confgruss/report.hpp"

#include "confgruss/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace confgruss {

namespace {

Json library_json() { return Json{{"name", kLibraryName}, {"version", kLibraryVersion}}; }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }


Theorem theorem_from_name(std::string_view n) {
    if (n == "thm31") return Theorem::Thm31;
    if (n == "thm32") return Theorem::Thm32;
    throw ConfigError("theorem: unknown name '" + std::string(n) + "'");
}

IdentityName identity_from_name(std::string_view n) {
    for (IdentityName id : {IdentityName::IdentityK, IdentityName::IdentityH,
                            IdentityName::MomentCCrosscheck, IdentityName::KernelAlpha1Agreement})
        if (identity_name(id) == n) return id;
    throw ConfigError("identity: unknown name '" + std::string(n) + "'");
}

XiStatus xi_status_from_name(std::string_view n) {
    for (XiStatus s : {XiStatus::Bracketed, XiStatus::ScanMin, XiStatus::DegenerateConstantPhi})
        if (xi_status_name(s) == n) return s;
    throw ConfigError("status: unknown name '" + std::string(n) + "'");
}

MeanValueResult mean_value_from_json(const Json& j) {
    MeanValueResult r;
    r.xi = j.at("xi").get<double>();
    r.residual = j.at("residual").get<double>();
    r.quotient = j.at("quotient").get<double>();
    if (!j.at("bracket").is_null())
        r.bracket = std::pair{j["bracket"][0].get<double>(), j["bracket"][1].get<double>()};
    r.status = xi_status_from_name(j.at("status").get<std::string>());
    return r;
}

// Runs `fn`, turning JSON type/lookup errors into ConfigError tagged with `field`.
template <class Fn>
auto field(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string(name) + ": " + e.what());
    }
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ReportFormat report_format_from_name(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw ConfigError("format: expected json or csv, got '" + std::string(name) + "'");
}

Json to_json(const QuadratureSpec& spec) {
    return Json{{"abs_tol", spec.abs_tol},
                {"rel_tol", spec.rel_tol},
                {"max_subdivisions", spec.max_subdivisions},
                {"base_rule", base_rule_name(spec.base_rule)}};
}

Json to_json(const CorpusConstraints& c) {
    Json ops = Json::array();
    for (Op op : c.allowed_ops.members()) ops.push_back(op_name(op));
    return Json{{"interval", {c.a, c.b}},
                {"max_depth", c.max_depth},
                {"magnitude_cap", c.magnitude_cap},
                {"allowed_ops", ops},
                {"max_retries", c.max_retries}};
}

Json to_json(const SweepConfig& config) {
    Json j;
    j["alphas"] = config.alphas;
    Json intervals = Json::array();
    for (auto [a, b] : config.intervals) intervals.push_back({a, b});
    j["intervals"] = intervals;
    if (const auto* pairs = std::get_if<std::vector<FunctionPair>>(&config.functions)) {
        Json fs = Json::array();
        for (const auto& p : *pairs) fs.push_back({{"f", p.f}, {"g", p.g}});
        j["functions"] = fs;
    } else {
        const auto& d = std::get<CorpusDraw>(config.functions);
        j["functions"] = {{"seed", d.seed}, {"count", d.count}, {"constraints", to_json(d.constraints)}};
    }
    Json variants = Json::array();
    for (Variant v : config.variants) variants.push_back(variant_name(v));
    j["variants"] = variants;
    j["tolerances"] = to_json(config.tolerances);
    Json checks = Json::array();
    for (Check c : config.checks) checks.push_back(check_name(c));
    j["checks"] = checks;
    j["seed"] = config.seed;
    return j;
}

Json to_json(const BoundReport& r) {
    return Json{{"theorem", theorem_name(r.theorem)},
                {"variant", variant_name(r.variant)},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"margin", r.margin},
                {"holds", r.holds},
                {"quad_error", r.quad_error},
                {"converged", r.converged},
                {"notes", r.notes}};
}

Json to_json(const IdentityReport& r) {
    return Json{{"name", identity_name(r.name)},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"abs_residual", r.abs_residual},
                {"rel_residual", r.rel_residual},
                {"atol", r.atol},
                {"rtol", r.rtol},
                {"quad_error", r.quad_error},
                {"converged", r.converged},
                {"pass", r.pass}};
}

Json to_json(const MeanValueResult& r) {
    Json bracket = r.bracket ? Json{r.bracket->first, r.bracket->second} : Json(nullptr);
    return Json{{"xi", r.xi},
                {"residual", r.residual},
                {"quotient", r.quotient},
                {"bracket", bracket},
                {"status", xi_status_name(r.status)}};
}

Json to_json(const SupNormResult& r) {
    return Json{{"value", r.value},
                {"arg", r.arg},
                {"grid_points", r.grid_points},
                {"refined", r.refined},
                {"rerun_4x", r.rerun_4x}};
}

Json to_json(const QuadResult& r) {
    return Json{{"value", r.value},
                {"error_estimate", r.error_estimate},
                {"evaluations", r.evaluations},
                {"converged", r.converged}};
}

Json to_json(const TrialRecord& r) {
    Json j;
    j["trial_id"] = r.trial_id;
    j["index"] = r.index;
    j["f"] = r.f;
    j["g"] = r.g;
    j["alpha"] = r.alpha;
    j["a"] = r.a;
    j["b"] = r.b;
    Json bounds = Json::array();
    for (const auto& b : r.bounds) bounds.push_back(to_json(b));
    j["bounds"] = bounds;
    Json ids = Json::array();
    for (const auto& i : r.identities) ids.push_back(to_json(i));
    j["identities"] = ids;
    Json mvt = Json::array();
    for (const auto& m : r.mvt) {
        mvt.push_back(Json{{"function", m.function},
                           {"x1", m.x1},
                           {"x2", m.x2},
                           {"tol", m.tol},
                           {"threshold", m.threshold},
                           {"result", to_json(m.result)},
                           {"paper_literal", to_json(m.paper_literal)},
                           {"pass", m.pass}});
    }
    j["mvt"] = mvt;
    j["error"] = r.error ? Json(*r.error) : Json(nullptr);
    return j;
}

Json to_json(const FuzzSummary& s) {
    Json j;
    j["seed"] = s.seed;
    j["trials"] = s.trials;
    Json margins = Json::array();
    for (const auto& m : s.margins) {
        margins.push_back(Json{{"theorem", theorem_name(m.theorem)},
                               {"variant", variant_name(m.variant)},
                               {"evaluated", m.evaluated},
                               {"holds_false", m.holds_false},
                               {"min_margin", number_or_null(m.min_margin)},
                               {"min_relative_margin", number_or_null(m.min_relative_margin)},
                               {"min_margin_trial", m.min_margin_trial}});
    }
    j["margins"] = margins;
    j["safe_violations"] = s.safe_violations();
    Json viol = Json::array();
    for (const auto& v : s.violations) {
        viol.push_back(Json{{"trial_id", v.trial_id},
                            {"replay", {{"seed", s.seed}, {"trial_index", v.index}}},
                            {"f", v.f},
                            {"g", v.g},
                            {"alpha", v.alpha},
                            {"a", v.a},
                            {"b", v.b},
                            {"theorem", theorem_name(v.theorem)},
                            {"variant", variant_name(v.variant)},
                            {"lhs", v.lhs},
                            {"rhs", v.rhs},
                            {"margin", v.margin},
                            {"quad_error", v.quad_error}});
    }
    j["violations"] = viol;
    j["report_only_violations_omitted"] = s.report_only_violations_omitted;
    j["generation_failures"] = s.generation_failures;
    j["trial_errors"] = s.trial_errors;
    j["identity_failures"] = s.identity_failures;
    j["mvt_failures"] = s.mvt_failures;
    j["max_mvt_residual_ratio"] = s.max_mvt_residual_ratio;
    j["nonconverged_trials"] = s.nonconverged_trials;
    Json errors = Json::array();
    for (const auto& e : s.errors) {
        errors.push_back(Json{{"trial_id", e.trial_id},
                              {"replay", {{"seed", s.seed}, {"trial_index", e.index}}},
                              {"f", e.f},
                              {"g", e.g},
                              {"alpha", e.alpha},
                              {"a", e.a},
                              {"b", e.b},
                              {"message", e.message}});
    }
    j["errors"] = errors;
    j["exit_code"] = s.exit_code();
    return j;
}

SweepConfig sweep_config_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    SweepConfig c = SweepConfig::desk_suite();
    if (j.contains("alphas"))
        c.alphas = field("alphas", [&] { return j["alphas"].get<std::vector<double>>(); });
    if (j.contains("intervals")) {
        c.intervals = field("intervals", [&] {
            std::vector<std::pair<double, double>> out;
            for (const auto& iv : j["intervals"]) {
                if (!iv.is_array() || iv.size() != 2)
                    throw ConfigError("intervals: each entry must be [a, b]");
                out.emplace_back(iv[0].get<double>(), iv[1].get<double>());
            }
            return out;
        });
    }
    if (j.contains("tolerances")) {
        const Json& t = j["tolerances"];
        field("tolerances", [&] {
            if (t.contains("abs_tol")) c.tolerances.abs_tol = t["abs_tol"].get<double>();
            if (t.contains("rel_tol")) c.tolerances.rel_tol = t["rel_tol"].get<double>();
            if (t.contains("max_subdivisions"))
                c.tolerances.max_subdivisions = t["max_subdivisions"].get<int>();
            if (t.contains("base_rule"))
                c.tolerances.base_rule = base_rule_from_name(t["base_rule"].get<std::string>());
            return 0;
        });
    }
    if (j.contains("variants")) {
        c.variants = field("variants", [&] {
            std::vector<Variant> out;
            for (const auto& v : j["variants"]) {
                std::string name = v.get<std::string>();
                if (name == "all") return std::vector<Variant>{Variant::Paper, Variant::Corrected, Variant::Safe};
                out.push_back(variant_from_name(name));
            }
            return out;
        });
    }
    if (j.contains("checks")) {
        c.checks = field("checks", [&] {
            std::vector<Check> out;
            for (const auto& v : j["checks"]) out.push_back(check_from_name(v.get<std::string>()));
            return out;
        });
    }
    if (j.contains("seed")) c.seed = field("seed", [&] { return j["seed"].get<std::uint64_t>(); });
    if (j.contains("functions")) {
        const Json& fs = j["functions"];
        if (fs.is_array()) {
            c.functions = field("functions", [&] {
                std::vector<FunctionPair> pairs;
                for (const auto& p : fs) {
                    if (p.is_array() && p.size() == 2)
                        pairs.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
                    else
                        pairs.push_back({p.at("f").get<std::string>(), p.at("g").get<std::string>()});
                }
                return pairs;
            });
        } else if (fs.is_object()) {
            CorpusDraw draw;
            // Default screening interval: the hull of the configured intervals.
            draw.constraints.a = std::numeric_limits<double>::infinity();
            draw.constraints.b = 0.0;
            for (auto [a, b] : c.intervals) {
                draw.constraints.a = std::min(draw.constraints.a, a);
                draw.constraints.b = std::max(draw.constraints.b, b);
            }
            field("functions", [&] {
                if (fs.contains("seed")) draw.seed = fs["seed"].get<std::uint64_t>();
                if (fs.contains("count")) draw.count = fs["count"].get<int>();
                if (fs.contains("constraints")) {
                    const Json& k = fs["constraints"];
                    if (k.contains("interval")) {
                        draw.constraints.a = k["interval"].at(0).get<double>();
                        draw.constraints.b = k["interval"].at(1).get<double>();
                    }
                    if (k.contains("max_depth")) draw.constraints.max_depth = k["max_depth"].get<int>();
                    if (k.contains("magnitude_cap"))
                        draw.constraints.magnitude_cap = k["magnitude_cap"].get<double>();
                    if (k.contains("max_retries"))
                        draw.constraints.max_retries = k["max_retries"].get<int>();
                    if (k.contains("allowed_ops")) {
                        OpSet ops;
                        for (const auto& o : k["allowed_ops"]) {
                            auto op = op_from_name(o.get<std::string>());
                            if (!op)
                                throw ConfigError("functions.constraints.allowed_ops: unknown op '" +
                                                  o.get<std::string>() + "'");
                            ops = ops.with(*op);
                        }
                        draw.constraints.allowed_ops = ops;
                    }
                }
                return 0;
            });
            c.functions = draw;
        } else {
            throw ConfigError("functions: expected an array of pairs or a corpus object");
        }
    }
    c.validate();
    return c;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return sweep_config_from_json(j);
}

TrialRecord trial_record_from_json(const Json& j) {
    TrialRecord r;
    r.trial_id = j.at("trial_id").get<std::string>();
    r.index = j.at("index").get<std::uint64_t>();
    r.f = j.at("f").get<std::string>();
    r.g = j.at("g").get<std::string>();
    r.alpha = j.at("alpha").get<double>();
    r.a = j.at("a").get<double>();
    r.b = j.at("b").get<double>();
    for (const auto& b : j.at("bounds")) {
        BoundReport br;
        br.theorem = theorem_from_name(b.at("theorem").get<std::string>());
        br.variant = variant_from_name(b.at("variant").get<std::string>());
        br.lhs = b.at("lhs").get<double>();
        br.rhs = b.at("rhs").get<double>();
        br.margin = b.at("margin").get<double>();
        br.holds = b.at("holds").get<bool>();
        br.quad_error = b.at("quad_error").get<double>();
        br.converged = b.at("converged").get<bool>();
        br.notes = b.at("notes").get<std::vector<std::string>>();
        r.bounds.push_back(br);
    }
    for (const auto& i : j.at("identities")) {
        IdentityReport ir;
        ir.name = identity_from_name(i.at("name").get<std::string>());
        ir.lhs = i.at("lhs").get<double>();
        ir.rhs = i.at("rhs").get<double>();
        ir.abs_residual = i.at("abs_residual").get<double>();
        ir.rel_residual = i.at("rel_residual").get<double>();
        ir.atol = i.at("atol").get<double>();
        ir.rtol = i.at("rtol").get<double>();
        ir.quad_error = i.at("quad_error").get<double>();
        ir.converged = i.at("converged").get<bool>();
        ir.pass = i.at("pass").get<bool>();
        r.identities.push_back(ir);
    }
    for (const auto& m : j.at("mvt")) {
        MvtRecord mr;
        mr.function = m.at("function").get<std::string>();
        mr.x1 = m.at("x1").get<double>();
        mr.x2 = m.at("x2").get<double>();
        mr.tol = m.at("tol").get<double>();
        mr.threshold = m.at("threshold").get<double>();
        mr.result = mean_value_from_json(m.at("result"));
        mr.paper_literal = mean_value_from_json(m.at("paper_literal"));
        mr.pass = m.at("pass").get<bool>();
        r.mvt.push_back(mr);
    }
    if (!j.at("error").is_null()) r.error = j["error"].get<std::string>();
    return r;
}

Json sweep_report_json(const SweepConfig& config, const std::vector<TrialRecord>& records) {
    Json report;
    report["library"] = library_json();
    report["config"] = to_json(config);
    Json recs = Json::array();
    Json per_trial = Json::object();
    double total = 0.0;
    for (const auto& r : records) {
        recs.push_back(to_json(r));
        per_trial[r.trial_id] = r.wall_time;
        total += r.wall_time;
    }
    report["records"] = recs;
    report["exit_code"] = sweep_exit_code(records);
    report["timing"] = Json{{"note", "wall-clock seconds; excluded from determinism comparisons"},
                            {"total_trial_seconds", total},
                            {"trials", per_trial}};
    return report;
}

Json fuzz_report_json(const SweepConfig& config, const FuzzSummary& summary) {
    Json report;
    report["library"] = library_json();
    report["config"] = to_json(config);
    report["summary"] = to_json(summary);
    report["timing"] = Json{{"note", "wall-clock seconds; excluded from determinism comparisons"},
                            {"wall_time", summary.wall_time}};
    return report;
}

std::vector<TrialRecord> records_from_report(const Json& report) {
    std::vector<TrialRecord> out;
    try {
        for (const auto& r : report.at("records")) out.push_back(trial_record_from_json(r));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("report: malformed records: ") + e.what());
    }
    return out;
}

void write_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        const std::string prefix = r.trial_id + ',' + csv_quote(r.f) + ',' + csv_quote(r.g) + ',' +
                                   format_double(r.alpha) + ',' + format_double(r.a) + ',' +
                                   format_double(r.b) + ',';
        if (r.error) {
            out << prefix << "error,,,,,false,," << '\n';
            continue;
        }
        for (const auto& b : r.bounds) {
            out << prefix << theorem_name(b.theorem) << ',' << variant_name(b.variant) << ','
                << format_double(b.lhs) << ',' << format_double(b.rhs) << ','
                << format_double(b.margin) << ',' << (b.holds ? "true" : "false") << ",,"
                << format_double(b.quad_error) << '\n';
        }
        for (const auto& i : r.identities) {
            out << prefix << identity_name(i.name) << ",," << format_double(i.lhs) << ','
                << format_double(i.rhs) << ",," << (i.pass ? "true" : "false") << ','
                << format_double(i.abs_residual) << ',' << format_double(i.quad_error) << '\n';
        }
        for (const auto& m : r.mvt) {
            out << prefix << "mvt," << m.function << ",," << format_double(m.result.quotient) << ",," << (m.pass ? "true" : "false") << ','
                << format_double(m.result.residual) << ",\n";
        }
    }
}

void emit_report(const SweepConfig& config, const std::vector<TrialRecord>& records,
                 ReportFormat format, const std::filesystem::path& path) {
    if (records.empty()) throw ConfigError("emit_report: no records to write");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("emit_report: cannot write '" + path.string() + "'");
    if (format == ReportFormat::Json)
        out << sweep_report_json(config, records).dump(2) << '\n';
    else
        write_csv(out, records);
    if (!out) throw std::runtime_error("emit_report: write to '" + path.string() + "' failed");
}

}  // namespace confgruss
