#pragma once

// Parameter sweeps and seeded counterexample search over the bound checks.

#include "confgruss/corpus.hpp"
#include "confgruss/gruss.hpp"
#include "confgruss/pompeiu.hpp"
#include "confgruss/quadrature.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace confgruss {

inline constexpr std::string_view kLibraryName = "confgruss";
inline constexpr std::string_view kLibraryVersion = "0.1.0";

enum class Check { Thm31, Thm32, IdentityK, IdentityH, Mvt };
std::string_view check_name(Check c);
Check check_from_name(std::string_view name);  // throws ConfigError

struct FunctionPair {
    std::string f;
    std::string g;
};

/// Functions drawn from the corpus: pair i uses seeds derived from (seed, 2i) and (seed, 2i+1).
struct CorpusDraw {
    std::uint64_t seed = 1;
    int count = 25;
    CorpusConstraints constraints;
};

struct SweepConfig {
    std::vector<double> alphas;
    std::vector<std::pair<double, double>> intervals;
    std::variant<std::vector<FunctionPair>, CorpusDraw> functions;
    std::vector<Variant> variants;
    QuadratureSpec tolerances;
    std::vector<Check> checks;
    std::uint64_t seed = 0;  // trial ids and mean-value point draws

    /// Throws ConfigError naming the offending field.
    void validate() const;

    bool has_check(Check c) const;

    /// α ∈ {0.25, 0.5, 0.75, 1}, intervals {[1,2], [1,4], [0.5,3], [2,5]},
    /// 25 corpus pairs screened on [0.5, 5], every check and variant.
    static SweepConfig desk_suite();
};

/// Deterministic 64-bit seed for stream `stream` of `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

std::string make_trial_id(std::uint64_t seed, std::uint64_t index);

struct MvtRecord {
    std::string function;  // "f" or "g"
    double x1 = 0.0;
    double x2 = 0.0;
    double tol = 0.0;        // requested bisection tolerance
    double threshold = 0.0;  // asserted residual bound 1e-8 * max(1, |Q|)
    MeanValueResult result;
    MeanValueResult paper_literal;  // same search with the literal φ, diagnostic only
    bool pass = false;
};

struct TrialRecord {
    std::string trial_id;
    std::uint64_t index = 0;
    std::string f;
    std::string g;
    double alpha = 0.0;
    double a = 0.0;
    double b = 0.0;
    std::vector<BoundReport> bounds;
    std::vector<IdentityReport> identities;
    std::vector<MvtRecord> mvt;
    std::optional<std::string> error;
    double wall_time = 0.0;  // seconds; never part of determinism comparisons

    bool assertion_failed() const;  // safe bound, identity or mvt failure, or an error
    bool nonconverged() const;
};

/// Runs every check of `config` on one (f, g, α, [a,b]). Exceptions from the
/// functions are captured in `error`.
TrialRecord run_trial(const SweepConfig& config, std::uint64_t index, const std::string& f,
                      const std::string& g, double alpha, double a, double b);

/// functions × alphas × intervals, returned in trial_id order.
std::vector<TrialRecord> run_sweep(const SweepConfig& config);

struct ExtremeMargin {
    Theorem theorem = Theorem::Thm31;
    Variant variant = Variant::Safe;
    long evaluated = 0;
    long holds_false = 0;
    double min_margin = 0.0;
    double min_relative_margin = 0.0;  // margin / max(|lhs|, |rhs|)
    std::string min_margin_trial;
};

struct Violation {
    std::string trial_id;
    std::uint64_t index = 0;
    std::string f;
    std::string g;
    double alpha = 0.0;
    double a = 0.0;
    double b = 0.0;
    Theorem theorem = Theorem::Thm31;
    Variant variant = Variant::Safe;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double quad_error = 0.0;
};

struct TrialError {
    std::string trial_id;
    std::uint64_t index = 0;
    std::string f;  // empty when generation failed
    std::string g;
    double alpha = 0.0;
    double a = 0.0;
    double b = 0.0;
    std::string message;
};

struct FuzzSummary {
    std::uint64_t seed = 0;
    long trials = 0;
    std::vector<ExtremeMargin> margins;
    std::vector<Violation> violations;  // all safe violations; report-only ones capped per kind
    long report_only_violations_omitted = 0;
    long generation_failures = 0;
    long trial_errors = 0;
    long identity_failures = 0;
    long mvt_failures = 0;
    long nonconverged_trials = 0;
    double max_mvt_residual_ratio = 0.0;  // residual / (1e-8 max(1,|Q|))
    std::vector<TrialError> errors;  // capped
    double wall_time = 0.0;

    long safe_violations() const;
    int exit_code() const;
};

inline constexpr int kMaxReportOnlyViolationsPerKind = 50;

/// Per trial: f and g from sample_function, α uniform over [min α, max α],
/// a uniform over the configured left endpoints, width uniform over the
/// configured widths. Deterministic in (seed, trial index).
FuzzSummary fuzz_search(std::uint64_t seed, long trials, const SweepConfig& config);

/// Exit status: 0 all asserted checks passed, 1 an assertion failed,
/// 2 numerical non-convergence (and nothing failed).
int sweep_exit_code(const std::vector<TrialRecord>& records);

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitUsage = 64;

}  // namespace confgruss
