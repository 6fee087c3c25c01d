#include "confgruss/sweep.hpp"

#include "confgruss/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <thread>

namespace confgruss {

namespace {

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned workers = std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

constexpr double kMvtTolFactor = 1e-10;
constexpr double kMvtAssertFactor = 1e-8;

MvtRecord run_mvt(const std::string& which, const ExpressionFn& fn, double alpha, double x1,
                  double x2) {
    MvtRecord rec;
    rec.function = which;
    rec.x1 = x1;
    rec.x2 = x2;
    double q = pompeiu_quotient(fn, x1, x2, alpha);
    rec.tol = kMvtTolFactor * std::max(1.0, std::abs(q));
    rec.threshold = kMvtAssertFactor * std::max(1.0, std::abs(q));
    rec.result = find_xi(fn, x1, x2, alpha, rec.tol);
    FindXiOptions literal;
    literal.form = PhiForm::PaperLiteral;
    rec.paper_literal = find_xi(fn, x1, x2, alpha, rec.tol, literal);
    rec.pass = rec.result.residual <= rec.threshold;
    return rec;
}

void require_nonempty(const std::vector<double>& v, const char* field) {
    if (v.empty()) throw ConfigError(std::string(field) + ": must not be empty");
}

}  // namespace

std::string_view check_name(Check c) {
    switch (c) {
        case Check::Thm31: return "thm31";
        case Check::Thm32: return "thm32";
        case Check::IdentityK: return "identity_K";
        case Check::IdentityH: return "identity_H";
        case Check::Mvt: return "mvt";
    }
    return "?";
}

Check check_from_name(std::string_view name) {
    for (Check c : {Check::Thm31, Check::Thm32, Check::IdentityK, Check::IdentityH, Check::Mvt})
        if (check_name(c) == name) return c;
    throw ConfigError("checks: unknown check '" + std::string(name) + "'");
}

void SweepConfig::validate() const {
    require_nonempty(alphas, "alphas");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0 && alphas[i] <= 1.0)) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "alphas[%zu]: alpha must lie in (0, 1], got %.17g", i,
                          alphas[i]);
            throw ConfigError(buf);
        }
    }
    if (intervals.empty()) throw ConfigError("intervals: must not be empty");
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        auto [a, b] = intervals[i];
        if (!(a > 0.0 && a < b && std::isfinite(b))) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "intervals[%zu]: must satisfy 0 < a < b, got [%.17g, %.17g]",
                          i, a, b);
            throw ConfigError(buf);
        }
    }
    if (const auto* pairs = std::get_if<std::vector<FunctionPair>>(&functions)) {
        if (pairs->empty()) throw ConfigError("functions: must not be empty");
        for (std::size_t i = 0; i < pairs->size(); ++i) {
            try {
                parse_expr((*pairs)[i].f);
                parse_expr((*pairs)[i].g);
            } catch (const ParseError& e) {
                throw ConfigError("functions[" + std::to_string(i) + "]: " + e.what());
            }
        }
    } else {
        const auto& draw = std::get<CorpusDraw>(functions);
        if (draw.count < 1) throw ConfigError("functions.count: must be >= 1");
        try {
            draw.constraints.validate();
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("functions.") + e.what());
        }
    }
    if (variants.empty()) throw ConfigError("variants: must not be empty");
    if (checks.empty()) throw ConfigError("checks: at least one check must be selected");
    tolerances.validate();
}

bool SweepConfig::has_check(Check c) const {
    return std::find(checks.begin(), checks.end(), c) != checks.end();
}

SweepConfig SweepConfig::desk_suite() {
    SweepConfig c;
    c.alphas = {0.25, 0.5, 0.75, 1.0};
    c.intervals = {{1.0, 2.0}, {1.0, 4.0}, {0.5, 3.0}, {2.0, 5.0}};
    CorpusDraw draw;
    draw.seed = 1;
    draw.count = 25;
    draw.constraints.a = 0.5;
    draw.constraints.b = 5.0;
    c.functions = draw;
    c.variants = {Variant::Paper, Variant::Corrected, Variant::Safe};
    c.checks = {Check::Thm31, Check::Thm32, Check::IdentityK, Check::IdentityH, Check::Mvt};
    c.seed = 0;
    return c;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::string make_trial_id(std::uint64_t seed, std::uint64_t index) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "s%llu-t%06llu", static_cast<unsigned long long>(seed),
                  static_cast<unsigned long long>(index));
    return buf;
}

bool TrialRecord::assertion_failed() const {
    if (error) return true;
    for (const auto& b : bounds)
        if (b.variant == Variant::Safe && !b.holds) return true;
    for (const auto& i : identities)
        if (!i.pass) return true;
    for (const auto& m : mvt)
        if (!m.pass) return true;
    return false;
}

bool TrialRecord::nonconverged() const {
    for (const auto& b : bounds)
        if (!b.converged) return true;
    for (const auto& i : identities)
        if (!i.converged) return true;
    return false;
}

TrialRecord run_trial(const SweepConfig& config, std::uint64_t index, const std::string& f_text,
                      const std::string& g_text, double alpha, double a, double b) {
    auto start = std::chrono::steady_clock::now();
    TrialRecord rec;
    rec.index = index;
    rec.trial_id = make_trial_id(config.seed, index);
    rec.f = f_text;
    rec.g = g_text;
    rec.alpha = alpha;
    rec.a = a;
    rec.b = b;
    try {
        const ExpressionFn f = parse_expr(f_text);
        const ExpressionFn g = parse_expr(g_text);
        const AlphaInterval ctx(alpha, a, b);
        const QuadratureSpec& spec = config.tolerances;

        if (config.has_check(Check::Thm31) || config.has_check(Check::Thm32)) {
            CaseAnalysis an = analyze_case(f, g, ctx, spec);
            for (Check th : {Check::Thm31, Check::Thm32}) {
                if (!config.has_check(th)) continue;
                for (Variant v : config.variants)
                    rec.bounds.push_back(th == Check::Thm31 ? bound_thm31(f, g, ctx, spec, v, an)
                                                            : bound_thm32(f, g, ctx, spec, v, an));
            }
        }
        if (config.has_check(Check::IdentityK)) rec.identities.push_back(identity_K(f, g, ctx, spec));
        if (config.has_check(Check::IdentityH)) rec.identities.push_back(identity_H(f, g, ctx, spec));
        if (config.has_check(Check::Mvt)) {
            std::mt19937_64 rng(derive_seed(config.seed, index));
            std::uniform_real_distribution<double> point(a, b);
            for (const auto& [name, fn] : {std::pair{"f", &f}, std::pair{"g", &g}}) {
                double x1 = point(rng), x2 = point(rng);
                while (x1 == x2) x2 = point(rng);
                if (x2 < x1) std::swap(x1, x2);
                rec.mvt.push_back(run_mvt(name, *fn, alpha, x1, x2));
            }
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    rec.wall_time = seconds_since(start);
    return rec;
}

std::vector<TrialRecord> run_sweep(const SweepConfig& config) {
    config.validate();

    std::vector<FunctionPair> pairs;
    std::vector<std::optional<std::string>> pair_errors;
    if (const auto* given = std::get_if<std::vector<FunctionPair>>(&config.functions)) {
        pairs = *given;
        pair_errors.assign(pairs.size(), std::nullopt);
    } else {
        const auto& draw = std::get<CorpusDraw>(config.functions);
        for (int i = 0; i < draw.count; ++i) {
            try {
                ExpressionFn f = sample_function(derive_seed(draw.seed, 2 * i), draw.constraints);
                ExpressionFn g = sample_function(derive_seed(draw.seed, 2 * i + 1), draw.constraints);
                pairs.push_back({f.source_text(), g.source_text()});
                pair_errors.emplace_back();
            } catch (const GenerationError& e) {
                pairs.push_back({"", ""});
                pair_errors.emplace_back(e.what());
            }
        }
    }

    struct Job {
        std::size_t pair;
        double alpha, a, b;
    };
    std::vector<Job> jobs;
    for (std::size_t p = 0; p < pairs.size(); ++p)
        for (double alpha : config.alphas)
            for (auto [a, b] : config.intervals) jobs.push_back({p, alpha, a, b});

    std::vector<TrialRecord> records(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const Job& j = jobs[i];
        if (pair_errors[j.pair]) {
            TrialRecord rec;
            rec.index = i;
            rec.trial_id = make_trial_id(config.seed, i);
            rec.alpha = j.alpha;
            rec.a = j.a;
            rec.b = j.b;
            rec.error = *pair_errors[j.pair];
            records[i] = std::move(rec);
            return;
        }
        records[i] = run_trial(config, i, pairs[j.pair].f, pairs[j.pair].g, j.alpha, j.a, j.b);
    });
    std::sort(records.begin(), records.end(),
              [](const TrialRecord& l, const TrialRecord& r) { return l.trial_id < r.trial_id; });
    return records;
}

int sweep_exit_code(const std::vector<TrialRecord>& records) {
    bool failed = false, nonconv = false;
    for (const auto& r : records) {
        failed = failed || r.assertion_failed();
        nonconv = nonconv || r.nonconverged();
    }
    if (failed) return kExitAssertion;
    if (nonconv) return kExitNonConvergence;
    return kExitOk;
}

long FuzzSummary::safe_violations() const {
    long n = 0;
    for (const auto& m : margins)
        if (m.variant == Variant::Safe) n += m.holds_false;
    return n;
}

int FuzzSummary::exit_code() const {
    if (safe_violations() > 0 || identity_failures > 0 || mvt_failures > 0 || trial_errors > 0)
        return kExitAssertion;
    if (nonconverged_trials > 0) return kExitNonConvergence;
    return kExitOk;
}

FuzzSummary fuzz_search(std::uint64_t seed, long trials, const SweepConfig& config) {
    if (trials < 1) throw ConfigError("trials: must be >= 1");
    config.validate();
    auto start = std::chrono::steady_clock::now();

    const auto [amin_it, amax_it] = std::minmax_element(config.alphas.begin(), config.alphas.end());
    double left_lo = std::numeric_limits<double>::infinity(), left_hi = 0.0;
    double width_lo = std::numeric_limits<double>::infinity(), width_hi = 0.0;
    for (auto [a, b] : config.intervals) {
        left_lo = std::min(left_lo, a);
        left_hi = std::max(left_hi, a);
        width_lo = std::min(width_lo, b - a);
        width_hi = std::max(width_hi, b - a);
    }
    CorpusConstraints base_constraints;
    if (const auto* draw = std::get_if<CorpusDraw>(&config.functions))
        base_constraints = draw->constraints;

    SweepConfig trial_config = config;
    trial_config.seed = seed;

    struct Outcome {
        TrialRecord record;
        bool generation_failed = false;
    };
    std::vector<Outcome> outcomes(static_cast<std::size_t>(trials));
    parallel_for(outcomes.size(), [&](std::size_t i) {
        std::mt19937_64 rng(derive_seed(seed, i));
        auto uniform = [&](double lo, double hi) {
            return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
        };
        const std::uint64_t f_seed = rng(), g_seed = rng();
        const double alpha = uniform(*amin_it, *amax_it);
        const double a = uniform(left_lo, left_hi);
        const double b = a + uniform(width_lo, width_hi);
        CorpusConstraints cons = base_constraints;
        cons.a = a;
        cons.b = b;
        Outcome& out = outcomes[i];
        try {
            ExpressionFn f = sample_function(f_seed, cons);
            ExpressionFn g = sample_function(g_seed, cons);
            out.record = run_trial(trial_config, i, f.source_text(), g.source_text(), alpha, a, b);
        } catch (const GenerationError& e) {
            out.generation_failed = true;
            out.record.trial_id = make_trial_id(seed, i);
            out.record.index = i;
            out.record.alpha = alpha;
            out.record.a = a;
            out.record.b = b;
            out.record.error = e.what();
        }
    });

    FuzzSummary s;
    s.seed = seed;
    s.trials = trials;
    auto slot = [&](Theorem th, Variant v) -> ExtremeMargin& {
        for (auto& m : s.margins)
            if (m.theorem == th && m.variant == v) return m;
        ExtremeMargin m;
        m.theorem = th;
        m.variant = v;
        m.min_margin = std::numeric_limits<double>::infinity();
        m.min_relative_margin = std::numeric_limits<double>::infinity();
        s.margins.push_back(m);
        return s.margins.back();
    };
    for (Check th : {Check::Thm31, Check::Thm32})
        if (config.has_check(th))
            for (Variant v : config.variants)
                slot(th == Check::Thm31 ? Theorem::Thm31 : Theorem::Thm32, v);

    constexpr std::size_t kMaxErrors = 50;
    auto record_error = [&](const TrialRecord& r) {
        if (s.errors.size() < kMaxErrors)
            s.errors.push_back({r.trial_id, r.index, r.f, r.g, r.alpha, r.a, r.b, *r.error});
    };
    for (const Outcome& o : outcomes) {
        const TrialRecord& r = o.record;
        if (o.generation_failed) {
            ++s.generation_failures;
            record_error(r);
            continue;
        }
        if (r.error) {
            ++s.trial_errors;
            record_error(r);
            continue;
        }
        if (r.nonconverged()) ++s.nonconverged_trials;
        for (const auto& b : r.bounds) {
            ExtremeMargin& m = slot(b.theorem, b.variant);
            ++m.evaluated;
            double denom = std::max(std::abs(b.lhs), std::abs(b.rhs));
            double rel = denom > 0.0 ? b.margin / denom : 0.0;
            if (b.margin < m.min_margin) {
                m.min_margin = b.margin;
                m.min_margin_trial = r.trial_id;
            }
            m.min_relative_margin = std::min(m.min_relative_margin, rel);
            if (b.holds) continue;
            ++m.holds_false;
            if (b.variant != Variant::Safe && m.holds_false > kMaxReportOnlyViolationsPerKind) {
                ++s.report_only_violations_omitted;
                continue;
            }
            s.violations.push_back({r.trial_id, r.index, r.f, r.g, r.alpha, r.a, r.b, b.theorem,
                                    b.variant, b.lhs, b.rhs, b.margin, b.quad_error});
        }
        for (const auto& id : r.identities)
            if (!id.pass) ++s.identity_failures;
        for (const auto& mv : r.mvt) {
            if (!mv.pass) ++s.mvt_failures;
            s.max_mvt_residual_ratio =
                std::max(s.max_mvt_residual_ratio, mv.result.residual / mv.threshold);
        }
    }
    for (auto& m : s.margins) {
        if (m.evaluated == 0) {
            m.min_margin = 0.0;
            m.min_relative_margin = 0.0;
        }
    }
    s.wall_time = seconds_since(start);
    return s;
}

}  // namespace confgruss
