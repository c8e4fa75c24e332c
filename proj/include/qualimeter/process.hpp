#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qualimeter/aggregate.hpp"
#include "qualimeter/core.hpp"

namespace qualimeter::process {

struct Objective {
    std::string id;
    std::string text;
    std::string linked_requirement;
};

struct MeasurementContext {
    std::vector<Objective> objectives;
    std::string scope_boundaries;
    std::vector<std::string> dependencies;
    std::string environment;
    std::vector<std::string> improvement_notes; // lessons learned feed-forward
};

struct CollectionSettings {
    std::int64_t frequency_seconds = 0;
    std::string frequency_text; // as written, e.g. "24h"
    std::string storage_path = "measurements/records.jsonl";
};

struct AnalysisSettings {
    std::optional<AggOp> operator_override;
    std::string criteria_notes;
};

struct EvaluationPlan {
    std::string plan_id;
    std::string created_at;
    std::string lifecycle_stage;
    std::string model_path;
    std::string model_id;
    std::string model_hash; // sha-256 of the canonical serialized model
    MeasurementContext context;
    CollectionSettings collection;
    AnalysisSettings analysis;
    std::map<std::string, std::vector<std::string>> iso25040_map;
};

struct MeasurementRecord {
    std::int64_t ts = 0; // epoch seconds, UTC
    std::string ts_text;
    std::string metric_path; // "<leaf-path>/<metric-name>"
    double value = 0;
    std::string source;
};

struct MetricReading {
    std::string metric_path;
    std::vector<MeasurementRecord> history; // records at or before as_of
    std::optional<double> latest_raw;
    std::optional<double> indicator;
    std::optional<Verdict> verdict;
    std::optional<ReferenceComparison> vs_reference;
    agg::Dispersion dispersion;
};

struct TrendForecast {
    double forecast_score = 0;
    double slope = 0;
    double intercept = 0;
    std::size_t n = 0;
};

struct EvaluationReport {
    std::string plan_id;
    std::string model_id;
    std::string model_hash;
    std::string as_of;
    agg::ScoredNode scored_tree;
    std::map<std::string, int> verdict_summary;
    std::vector<MetricReading> metrics;
    std::optional<TrendForecast> prediction;
    std::vector<std::string> recommendations;
};

struct IngestResult {
    std::size_t accepted = 0;
    std::vector<std::string> diagnostics; // one line per rejected record
};

// --- initial phase ---

MeasurementContext init_phase(std::vector<Objective> objectives,
                              std::string scope_boundaries,
                              std::vector<std::string> dependencies,
                              std::string environment,
                              std::vector<std::string> lessons);

// `ID: text [-> linked-requirement]` lines, # comments.
std::vector<Objective> parse_objectives(const std::string& text);

std::string context_to_json(const MeasurementContext& ctx);
MeasurementContext context_from_json(const std::string& json_text);

// --- planning phase ---

EvaluationPlan plan_phase(const MeasurementContext& ctx,
                          const QualityModel& model,
                          const std::string& model_path,
                          const std::string& lifecycle_stage,
                          const CollectionSettings& collection);

// "90s", "30m", "24h", "7d" -> seconds. Throws InvalidFrequency.
std::int64_t parse_frequency(const std::string& text);

std::string plan_to_json(const EvaluationPlan& plan);
EvaluationPlan plan_from_json(const std::string& json_text);

// Fig. 2 activity names; returns the ones the plan's map leaves uncovered.
std::vector<std::string> iso25040_coverage(const EvaluationPlan& plan);
const std::vector<std::string>& iso25040_activities();

// --- execution phase ---

// Validates and appends record lines to the append-only store. Malformed
// records are skipped with line-numbered diagnostics.
IngestResult ingest(const QualityModel& model, const std::string& records_text,
                    const std::string& store_path);

// Parses one store/input line; throws BadTimestamp / UnknownMetricPath /
// NonNumericValue.
MeasurementRecord parse_record_line(const QualityModel& model,
                                    const std::string& line);

std::vector<MeasurementRecord> load_records(const QualityModel& model,
                                            const std::string& store_path);

EvaluationReport execute_cycle(const EvaluationPlan& plan,
                               const QualityModel& model,
                               const std::vector<MeasurementRecord>& records,
                               std::int64_t as_of);

// OLS over (seconds since first sample, score); forecast at the last
// timestamp + horizon, clamped to [0,1]. Needs >= 2 distinct timestamps.
TrendForecast predict_trend(
    const std::vector<std::pair<std::int64_t, double>>& series,
    std::int64_t horizon_seconds);

// --- report rendering ---

std::string render_dashboard_json(const EvaluationReport& report);
std::string render_summary_md(const EvaluationReport& report);
std::string render_detailed_json(const EvaluationReport& report);

// Writes dashboard.json, summary.md and detailed.json under dir.
void write_report(const EvaluationReport& report, const std::string& dir);

// --- shared plumbing ---

std::int64_t parse_timestamp(const std::string& text); // ISO-8601 UTC
std::string format_timestamp(std::int64_t epoch_seconds);
std::string sha256_hex(const std::string& data);
std::string model_hash(const QualityModel& model);

// "quality/sw/reliability/defect-density" -> all metric paths of the model.
std::set<std::string> metric_paths(const QualityModel& model);

} // namespace qualimeter::process
