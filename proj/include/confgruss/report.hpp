#pragma once

// JSON and CSV serialization of sweep and fuzz results.
//
// JSON numbers use the shortest representation that reads back to the same
// double; CSV numbers are printed with 17 significant digits. Wall-clock
// timings live only under the top-level "timing" key.

#include "confgruss/sweep.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace confgruss {

using Json = nlohmann::ordered_json;

enum class ReportFormat { Json, Csv };
ReportFormat report_format_from_name(std::string_view name);  // throws ConfigError

Json to_json(const QuadratureSpec& spec);
Json to_json(const CorpusConstraints& c);
Json to_json(const SweepConfig& config);
Json to_json(const BoundReport& r);
Json to_json(const IdentityReport& r);
Json to_json(const MeanValueResult& r);
Json to_json(const SupNormResult& r);
Json to_json(const QuadResult& r);
Json to_json(const TrialRecord& r);  // without wall_time
Json to_json(const FuzzSummary& s);  // without wall_time

/// Parses a config file body; field names mirror SweepConfig. Missing fields
/// fall back to the desk suite. Throws ConfigError naming the bad field.
SweepConfig sweep_config_from_json(const Json& j);
SweepConfig load_sweep_config(const std::filesystem::path& path);

TrialRecord trial_record_from_json(const Json& j);

/// {"library", "config", "records", "timing"}
Json sweep_report_json(const SweepConfig& config, const std::vector<TrialRecord>& records);
/// {"library", "config", "summary", "timing"}
Json fuzz_report_json(const SweepConfig& config, const FuzzSummary& summary);

/// Reads back the records array of a sweep report.
std::vector<TrialRecord> records_from_report(const Json& report);

inline constexpr std::string_view kCsvHeader =
    "trial_id,f,g,alpha,a,b,check,variant,lhs,rhs,margin,holds,residual,quad_error";

/// One row per (trial, check[, variant]); see README for the row kinds.
void write_csv(std::ostream& out, const std::vector<TrialRecord>& records);

/// Throws ConfigError on empty records, std::runtime_error when `path`
/// cannot be written.
void emit_report(const SweepConfig& config, const std::vector<TrialRecord>& records,
                 ReportFormat format, const std::filesystem::path& path);

std::string format_double(double v);  // %.17g

}  // namespace confgruss
