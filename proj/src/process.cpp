#include "qualimeter/process.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "qualimeter/qmdl.hpp"
#include "qualimeter/rules.hpp"

#include "json.hpp"

namespace qualimeter::process {

using nlohmann::json;

// ---------------------------------------------------------------- plumbing

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error(Errc::IoError, "digest computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

std::string model_hash(const QualityModel& model) {
    return sha256_hex(qmdl::serialize(model));
}

std::int64_t parse_timestamp(const std::string& text) {
    int y, mo, d, h, mi, s;
    int n = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h,
                    &mi, &s, &n) != 6)
        throw Error(Errc::BadTimestamp, "bad timestamp '" + text + "'");
    std::string rest = text.substr(static_cast<size_t>(n));
    if (!rest.empty() && rest[0] == '.') {
        size_t i = 1;
        while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i])))
            ++i;
        if (i == 1) throw Error(Errc::BadTimestamp, "bad timestamp '" + text + "'");
        rest = rest.substr(i);
    }
    if (rest != "Z" && rest != "+00:00")
        throw Error(Errc::BadTimestamp,
                    "timestamp '" + text + "' must be UTC (Z or +00:00)");
    std::chrono::year_month_day ymd{std::chrono::year{y},
                                    std::chrono::month{static_cast<unsigned>(mo)},
                                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60)
        throw Error(Errc::BadTimestamp, "bad timestamp '" + text + "'");
    auto days = std::chrono::sys_days(ymd).time_since_epoch().count();
    return static_cast<std::int64_t>(days) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::chrono::sys_days sd{std::chrono::days{days}};
    std::chrono::year_month_day ymd{sd};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                  int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()),
                  int(rem / 3600), int((rem / 60) % 60), int(rem % 60));
    return buf;
}

std::int64_t parse_frequency(const std::string& text) {
    if (text.empty())
        throw Error(Errc::InvalidFrequency, "empty collection frequency");
    size_t used = 0;
    double value = 0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw Error(Errc::InvalidFrequency, "bad frequency '" + text + "'");
    }
    std::string unit = text.substr(used);
    std::int64_t mult;
    if (unit == "s") mult = 1;
    else if (unit == "m") mult = 60;
    else if (unit == "h") mult = 3600;
    else if (unit == "d") mult = 86400;
    else
        throw Error(Errc::InvalidFrequency,
                    "frequency unit must be one of s/m/h/d: '" + text + "'");
    double seconds = value * double(mult);
    if (!(seconds > 0))
        throw Error(Errc::InvalidFrequency,
                    "collection frequency must be positive");
    return static_cast<std::int64_t>(seconds);
}

namespace {

void collect_metric_paths(const Characteristic& node, const std::string& path,
                          std::set<std::string>& out) {
    for (const auto& m : node.metrics) out.insert(path + "/" + m.name);
    for (const auto& c : node.children)
        collect_metric_paths(c, path.empty() ? c.name : path + "/" + c.name, out);
}

} // namespace

std::set<std::string> metric_paths(const QualityModel& model) {
    std::set<std::string> out;
    collect_metric_paths(model.root, "", out);
    return out;
}

// ------------------------------------------------------------ initial phase

std::vector<Objective> parse_objectives(const std::string& text) {
    std::vector<Objective> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);

        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw Error(Errc::NoObjectives,
                        "objectives line " + std::to_string(lineno) +
                            ": expected 'ID: text [-> requirement]'");
        Objective obj;
        obj.id = line.substr(0, colon);
        std::string body = line.substr(colon + 1);
        auto arrow = body.rfind("->");
        if (arrow != std::string::npos) {
            obj.linked_requirement = body.substr(arrow + 2);
            body = body.substr(0, arrow);
        }
        auto trim = [](std::string s) {
            auto b2 = s.find_first_not_of(" \t");
            if (b2 == std::string::npos) return std::string();
            auto e2 = s.find_last_not_of(" \t");
            return s.substr(b2, e2 - b2 + 1);
        };
        obj.id = trim(obj.id);
        obj.text = trim(body);
        obj.linked_requirement = trim(obj.linked_requirement);
        if (obj.id.empty() || obj.text.empty())
            throw Error(Errc::NoObjectives,
                        "objectives line " + std::to_string(lineno) +
                            ": empty id or text");
        out.push_back(std::move(obj));
    }
    return out;
}

MeasurementContext init_phase(std::vector<Objective> objectives,
                              std::string scope_boundaries,
                              std::vector<std::string> dependencies,
                              std::string environment,
                              std::vector<std::string> lessons) {
    if (objectives.empty())
        throw Error(Errc::NoObjectives, "at least one measurement objective "
                                        "is required");
    std::set<std::string> ids;
    for (const auto& o : objectives)
        if (!ids.insert(o.id).second)
            throw Error(Errc::DuplicateObjectiveId,
                        "duplicate objective id '" + o.id + "'");
    MeasurementContext ctx;
    ctx.objectives = std::move(objectives);
    ctx.scope_boundaries = std::move(scope_boundaries);
    ctx.dependencies = std::move(dependencies);
    ctx.environment = std::move(environment);
    ctx.improvement_notes = std::move(lessons);
    return ctx;
}

namespace {

json context_json(const MeasurementContext& ctx) {
    json objectives = json::array();
    for (const auto& o : ctx.objectives)
        objectives.push_back({{"id", o.id},
                              {"text", o.text},
                              {"linked_requirement", o.linked_requirement}});
    return json{{"objectives", objectives},
                {"scope_boundaries", ctx.scope_boundaries},
                {"dependencies", ctx.dependencies},
                {"environment", ctx.environment},
                {"improvement_notes", ctx.improvement_notes}};
}

MeasurementContext context_from(const json& j) {
    MeasurementContext ctx;
    for (const auto& o : j.at("objectives")) {
        Objective obj;
        obj.id = o.at("id").get<std::string>();
        obj.text = o.at("text").get<std::string>();
        obj.linked_requirement = o.value("linked_requirement", "");
        ctx.objectives.push_back(std::move(obj));
    }
    ctx.scope_boundaries = j.value("scope_boundaries", "");
    ctx.dependencies = j.value("dependencies", std::vector<std::string>{});
    ctx.environment = j.value("environment", "");
    ctx.improvement_notes =
        j.value("improvement_notes", std::vector<std::string>{});
    return ctx;
}

} // namespace

std::string context_to_json(const MeasurementContext& ctx) {
    return context_json(ctx).dump(2) + "\n";
}

MeasurementContext context_from_json(const std::string& json_text) {
    try {
        return context_from(json::parse(json_text));
    } catch (const json::exception& e) {
        throw Error(Errc::IoError, std::string("bad context file: ") + e.what());
    }
}

// ----------------------------------------------------------- planning phase

const std::vector<std::string>& iso25040_activities() {
    static const std::vector<std::string> activities = {
        "establish-requirements", "specify-evaluation", "design-evaluation",
        "execute-evaluation", "conclude-evaluation"};
    return activities;
}

EvaluationPlan plan_phase(const MeasurementContext& ctx,
                          const QualityModel& model,
                          const std::string& model_path,
                          const std::string& lifecycle_stage,
                          const CollectionSettings& collection) {
    if (ctx.objectives.empty())
        throw Error(Errc::NoObjectives, "context carries no objectives");
    if (collection.frequency_seconds <= 0)
        throw Error(Errc::InvalidFrequency,
                    "collection frequency must be positive");
    auto violations = rules::check(model, rules::default_ruleset());
    if (rules::has_errors(violations))
        throw Error(Errc::ModelRuleViolations,
                    "model has derivation-rule errors; fix them before planning");

    EvaluationPlan plan;
    plan.lifecycle_stage = lifecycle_stage;
    plan.model_path = model_path;
    plan.model_id = model.id;
    plan.model_hash = model_hash(model);
    plan.context = ctx;
    plan.collection = collection;
    plan.iso25040_map = {
        {"establish-requirements",
         {"initial:collect-objectives", "initial:define-context",
          "initial:process-improvement"}},
        {"specify-evaluation", {"planning:model-and-measurement-specification"}},
        {"design-evaluation",
         {"planning:collection-and-storage", "planning:analysis-and-criteria"}},
        {"execute-evaluation",
         {"execution:collect", "execution:store", "execution:analyze-assess"}},
        {"conclude-evaluation", {"execution:report", "execution:communicate"}},
    };

    std::string fingerprint = plan.model_hash + "|" + lifecycle_stage + "|" +
                              std::to_string(collection.frequency_seconds) +
                              "|" + collection.storage_path + "|" +
                              context_json(ctx).dump();
    plan.plan_id = "plan-" + sha256_hex(fingerprint).substr(0, 16);
    plan.created_at = format_timestamp(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    return plan;
}

std::string plan_to_json(const EvaluationPlan& plan) {
    json j{{"plan_id", plan.plan_id},
           {"created_at", plan.created_at},
           {"lifecycle_stage", plan.lifecycle_stage},
           {"model",
            {{"path", plan.model_path},
             {"id", plan.model_id},
             {"hash", plan.model_hash}}},
           {"context", context_json(plan.context)},
           {"collection",
            {{"frequency_seconds", plan.collection.frequency_seconds},
             {"frequency", plan.collection.frequency_text},
             {"storage_path", plan.collection.storage_path}}},
           {"analysis",
            {{"operator_override",
              plan.analysis.operator_override
                  ? json(agg_op_name(*plan.analysis.operator_override))
                  : json(nullptr)},
             {"criteria_notes", plan.analysis.criteria_notes}}},
           {"iso25040_map", plan.iso25040_map}};
    return j.dump(2) + "\n";
}

EvaluationPlan plan_from_json(const std::string& json_text) {
    try {
        json j = json::parse(json_text);
        EvaluationPlan plan;
        plan.plan_id = j.at("plan_id").get<std::string>();
        plan.created_at = j.value("created_at", "");
        plan.lifecycle_stage = j.value("lifecycle_stage", "");
        plan.model_path = j.at("model").at("path").get<std::string>();
        plan.model_id = j.at("model").value("id", "");
        plan.model_hash = j.at("model").at("hash").get<std::string>();
        plan.context = context_from(j.at("context"));
        plan.collection.frequency_seconds =
            j.at("collection").at("frequency_seconds").get<std::int64_t>();
        plan.collection.frequency_text = j.at("collection").value("frequency", "");
        plan.collection.storage_path =
            j.at("collection").at("storage_path").get<std::string>();
        if (j.contains("analysis")) {
            const auto& a = j.at("analysis");
            if (a.contains("operator_override") &&
                !a.at("operator_override").is_null()) {
                std::string name = a.at("operator_override").get<std::string>();
                for (AggOp op :
                     {AggOp::WeightedArithmeticMean, AggOp::WeightedGeometricMean,
                      AggOp::WeightedHarmonicMean, AggOp::WeightedMedian,
                      AggOp::Min, AggOp::Max})
                    if (name == agg_op_name(op))
                        plan.analysis.operator_override = op;
                if (!plan.analysis.operator_override)
                    throw Error(Errc::IoError,
                                "unknown operator override '" + name + "'");
            }
            plan.analysis.criteria_notes = a.value("criteria_notes", "");
        }
        if (j.contains("iso25040_map"))
            plan.iso25040_map =
                j.at("iso25040_map")
                    .get<std::map<std::string, std::vector<std::string>>>();
        return plan;
    } catch (const json::exception& e) {
        throw Error(Errc::IoError, std::string("bad plan file: ") + e.what());
    }
}

std::vector<std::string> iso25040_coverage(const EvaluationPlan& plan) {
    std::vector<std::string> missing;
    for (const auto& activity : iso25040_activities()) {
        auto it = plan.iso25040_map.find(activity);
        if (it == plan.iso25040_map.end() || it->second.empty())
            missing.push_back(activity);
    }
    return missing;
}

// ---------------------------------------------------------- execution phase

MeasurementRecord parse_record_line(const QualityModel& model,
                                    const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception&) {
        throw Error(Errc::NonNumericValue, "not a JSON record");
    }
    if (!j.is_object())
        throw Error(Errc::NonNumericValue, "record is not a JSON object");

    MeasurementRecord rec;
    if (!j.contains("ts") || !j.at("ts").is_string())
        throw Error(Errc::BadTimestamp, "missing or non-string 'ts'");
    rec.ts_text = j.at("ts").get<std::string>();
    rec.ts = parse_timestamp(rec.ts_text);

    if (!j.contains("metric") || !j.at("metric").is_string())
        throw Error(Errc::UnknownMetricPath, "missing or non-string 'metric'");
    rec.metric_path = j.at("metric").get<std::string>();
    if (!metric_paths(model).count(rec.metric_path))
        throw Error(Errc::UnknownMetricPath,
                    "'" + rec.metric_path + "' does not name a metric of model '" +
                        model.id + "'");

    if (!j.contains("value") || !j.at("value").is_number())
        throw Error(Errc::NonNumericValue, "missing or non-numeric 'value'");
    rec.value = j.at("value").get<double>();
    rec.source = j.value("source", "unknown");
    return rec;
}

IngestResult ingest(const QualityModel& model, const std::string& records_text,
                    const std::string& store_path) {
    std::filesystem::path store(store_path);
    if (store.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(store.parent_path(), ec);
    }
    std::ofstream out(store, std::ios::app);
    if (!out)
        throw Error(Errc::StoreUnwritable,
                    "cannot open store '" + store_path + "' for append");

    IngestResult result;
    std::istringstream in(records_text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            parse_record_line(model, line);
        } catch (const Error& e) {
            result.diagnostics.push_back("line " + std::to_string(lineno) +
                                         ": " + e.what());
            continue;
        }
        out << line << "\n";
        ++result.accepted;
    }
    out.flush();
    if (!out)
        throw Error(Errc::StoreUnwritable,
                    "write to store '" + store_path + "' failed");
    return result;
}

std::vector<MeasurementRecord> load_records(const QualityModel& model,
                                            const std::string& store_path) {
    std::ifstream in(store_path);
    if (!in)
        throw Error(Errc::IoError, "cannot open records '" + store_path + "'");
    std::vector<MeasurementRecord> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_record_line(model, line));
        } catch (const Error& e) {
            throw Error(Errc::IoError, store_path + " line " +
                                           std::to_string(lineno) + ": " +
                                           e.what());
        }
    }
    return out;
}

TrendForecast predict_trend(
    const std::vector<std::pair<std::int64_t, double>>& series,
    std::int64_t horizon_seconds) {
    std::set<std::int64_t> distinct;
    for (const auto& [t, v] : series) distinct.insert(t);
    if (distinct.size() < 2)
        throw Error(Errc::InsufficientHistory,
                    "trend prediction needs at least 2 distinct timestamps");

    std::int64_t t0 = *distinct.begin();
    double n = double(series.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [t, v] : series) {
        double x = double(t - t0);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    double denom = n * sxx - sx * sx;
    TrendForecast f;
    f.n = series.size();
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    std::int64_t t_last = *distinct.rbegin();
    double x_forecast = double(t_last - t0 + horizon_seconds);
    f.forecast_score =
        std::clamp(f.intercept + f.slope * x_forecast, 0.0, 1.0);
    return f;
}

namespace {

struct LeafMetrics {
    const Characteristic* leaf;
    std::string path;
};

void collect_leaves(const Characteristic& node, const std::string& path,
                    std::vector<LeafMetrics>& out) {
    if (node.is_leaf()) {
        out.push_back({&node, path});
        return;
    }
    for (const auto& c : node.children)
        collect_leaves(c, path.empty() ? c.name : path + "/" + c.name, out);
}

// Latest record per metric at or before as_of -> per-leaf indicators.
std::map<std::string, double> leaf_indicators_at(
    const QualityModel& model, const std::vector<LeafMetrics>& leaves,
    const std::map<std::string, std::vector<const MeasurementRecord*>>& by_metric,
    std::int64_t as_of, AggOp op) {
    std::map<std::string, double> out;
    for (const auto& lm : leaves) {
        std::vector<double> indicators;
        for (const auto& m : lm.leaf->metrics) {
            std::string mp = lm.path + "/" + m.name;
            auto it = by_metric.find(mp);
            if (it == by_metric.end()) continue;
            const MeasurementRecord* latest = nullptr;
            for (const MeasurementRecord* r : it->second)
                if (r->ts <= as_of && (!latest || r->ts >= latest->ts))
                    latest = r;
            if (!latest) continue;
            indicators.push_back(normalize_value(m, latest->value));
        }
        if (indicators.empty()) continue;
        std::vector<double> weights(indicators.size(), 1.0);
        out[lm.path] = agg::aggregate(indicators, weights, op);
    }
    return out;
}

} // namespace

EvaluationReport execute_cycle(const EvaluationPlan& plan,
                               const QualityModel& model,
                               const std::vector<MeasurementRecord>& records,
                               std::int64_t as_of) {
    if (plan.model_hash != model_hash(model))
        throw Error(Errc::ModelHashMismatch,
                    "model content no longer matches the plan's model hash");

    QualityModel working = model;
    if (plan.analysis.operator_override)
        working.aggregation = *plan.analysis.operator_override;
    AggOp op = working.aggregation;

    std::map<std::string, std::vector<const MeasurementRecord*>> by_metric;
    for (const auto& r : records) by_metric[r.metric_path].push_back(&r);

    std::vector<LeafMetrics> leaves;
    collect_leaves(working.root, "", leaves);

    EvaluationReport report;
    report.plan_id = plan.plan_id;
    report.model_id = model.id;
    report.model_hash = plan.model_hash;
    report.as_of = format_timestamp(as_of);
    report.scored_tree =
        agg::rollup(working, leaf_indicators_at(working, leaves, by_metric,
                                                as_of, op));

    // per-metric readings with full history up to as_of
    for (const auto& lm : leaves) {
        for (const auto& m : lm.leaf->metrics) {
            MetricReading reading;
            reading.metric_path = lm.path + "/" + m.name;
            auto it = by_metric.find(reading.metric_path);
            if (it != by_metric.end()) {
                for (const MeasurementRecord* r : it->second)
                    if (r->ts <= as_of) reading.history.push_back(*r);
                std::stable_sort(reading.history.begin(), reading.history.end(),
                                 [](const MeasurementRecord& a,
                                    const MeasurementRecord& b) {
                                     return a.ts < b.ts;
                                 });
            }
            if (!reading.history.empty()) {
                reading.latest_raw = reading.history.back().value;
                reading.indicator = normalize_value(m, *reading.latest_raw);
                if (m.thresholds) {
                    VerdictResult v =
                        evaluate_thresholds(*m.thresholds, *reading.indicator);
                    reading.verdict = v.verdict;
                    reading.vs_reference = v.vs_reference;
                }
                std::vector<double> history_indicators;
                for (const auto& r : reading.history)
                    history_indicators.push_back(normalize_value(m, r.value));
                reading.dispersion = agg::dispersion(history_indicators);
            }
            report.metrics.push_back(std::move(reading));
        }
    }

    // verdict summary over gated leaves of the scored tree
    std::function<void(const agg::ScoredNode&)> count_verdicts =
        [&](const agg::ScoredNode& node) {
            if (node.verdict)
                ++report.verdict_summary[verdict_name(*node.verdict)];
            for (const auto& c : node.children) count_verdicts(c);
        };
    count_verdicts(report.scored_tree);

    // recommendations from per-metric verdicts, deterministic order
    for (const auto& reading : report.metrics) {
        if (reading.verdict == Verdict::Rejected)
            report.recommendations.push_back("address " + reading.metric_path +
                                             " before the gate: indicator is at "
                                             "or below the reject level");
        else if (reading.verdict == Verdict::Marginal)
            report.recommendations.push_back(
                "monitor " + reading.metric_path +
                ": indicator sits between reject and accept levels");
    }
    if (report.recommendations.empty() && report.scored_tree.has_data())
        report.recommendations.push_back(
            "all gated metrics at or above the acceptance level");

    // prediction, only when the purpose grants the predict capability
    if (purpose_capabilities(working.purpose).count(Capability::Predict)) {
        std::set<std::int64_t> stamps;
        for (const auto& r : records)
            if (r.ts <= as_of) stamps.insert(r.ts);
        std::vector<std::pair<std::int64_t, double>> series;
        for (std::int64_t t : stamps) {
            auto indicators =
                leaf_indicators_at(working, leaves, by_metric, t, op);
            if (indicators.empty()) continue;
            agg::ScoredNode scored = agg::rollup(working, indicators);
            if (scored.has_data()) series.emplace_back(t, *scored.score);
        }
        std::set<std::int64_t> distinct;
        for (const auto& [t, v] : series) distinct.insert(t);
        if (distinct.size() >= 2) {
            std::int64_t horizon = plan.collection.frequency_seconds > 0
                                       ? plan.collection.frequency_seconds
                                       : 86400;
            report.prediction = predict_trend(series, horizon);
        }
    }
    return report;
}

// --------------------------------------------------------- report rendering

namespace {

json number(double v) { return json::parse(qmdl::format_number(v)); }

json dashboard_node(const agg::ScoredNode& node) {
    json j;
    j["name"] = node.name;
    j["score"] = node.score ? number(*node.score) : json(nullptr);
    j["verdict"] = node.verdict ? json(verdict_name(*node.verdict)) : json(nullptr);
    json children = json::array();
    for (const auto& c : node.children) children.push_back(dashboard_node(c));
    j["children"] = std::move(children);
    return j;
}

json detailed_node(const agg::ScoredNode& node) {
    json j;
    j["name"] = node.name;
    j["path"] = node.path;
    j["weight"] = number(node.weight);
    j["score"] = node.score ? number(*node.score) : json(nullptr);
    j["verdict"] = node.verdict ? json(verdict_name(*node.verdict)) : json(nullptr);
    j["contributing_count"] = node.contributing_count;
    json children = json::array();
    for (const auto& c : node.children) children.push_back(detailed_node(c));
    j["children"] = std::move(children);
    return j;
}

} // namespace

std::string render_dashboard_json(const EvaluationReport& report) {
    json j = dashboard_node(report.scored_tree);
    return j.dump(2) + "\n";
}

std::string render_detailed_json(const EvaluationReport& report) {
    json metrics = json::array();
    for (const auto& reading : report.metrics) {
        json records = json::array();
        for (const auto& r : reading.history)
            records.push_back({{"ts", r.ts_text},
                               {"value", number(r.value)},
                               {"source", r.source}});
        json m{{"metric", reading.metric_path},
               {"records", std::move(records)},
               {"latest_raw",
                reading.latest_raw ? number(*reading.latest_raw) : json(nullptr)},
               {"indicator",
                reading.indicator ? number(*reading.indicator) : json(nullptr)},
               {"verdict", reading.verdict ? json(verdict_name(*reading.verdict))
                                           : json(nullptr)},
               {"vs_reference",
                reading.vs_reference
                    ? json(*reading.vs_reference == ReferenceComparison::Below
                               ? "below"
                               : "at-or-above")
                    : json(nullptr)}};
        if (!reading.history.empty())
            m["dispersion"] = {{"variance", number(reading.dispersion.variance)},
                               {"stddev", number(reading.dispersion.stddev)},
                               {"n", reading.dispersion.n}};
        else
            m["dispersion"] = nullptr;
        metrics.push_back(std::move(m));
    }

    json j{{"plan_id", report.plan_id},
           {"model", report.model_id},
           {"model_hash", report.model_hash},
           {"as_of", report.as_of},
           {"verdict_summary", report.verdict_summary},
           {"metrics", std::move(metrics)},
           {"tree", detailed_node(report.scored_tree)},
           {"recommendations", report.recommendations}};
    if (report.prediction)
        j["prediction"] = {{"forecast_score", number(report.prediction->forecast_score)},
                           {"slope", report.prediction->slope},
                           {"intercept", number(report.prediction->intercept)},
                           {"n", report.prediction->n}};
    else
        j["prediction"] = nullptr;
    return j.dump(2) + "\n";
}

std::string render_summary_md(const EvaluationReport& report) {
    std::ostringstream os;
    os << "# Quality gate summary\n\n";
    os << "- plan: " << (report.plan_id.empty() ? "(ad hoc)" : report.plan_id)
       << "\n";
    os << "- model: " << report.model_id << "\n";
    os << "- model hash: " << report.model_hash << "\n";
    os << "- as of: " << report.as_of << "\n";
    if (report.scored_tree.has_data())
        os << "- root score: " << qmdl::format_number(*report.scored_tree.score)
           << "\n";
    else
        os << "- root score: no data\n";
    os << "\n## Verdicts\n\n";
    if (report.verdict_summary.empty()) {
        os << "No gated metrics produced a verdict.\n";
    } else {
        os << "| verdict | count |\n|---|---|\n";
        for (const auto& [name, count] : report.verdict_summary)
            os << "| " << name << " | " << count << " |\n";
    }
    if (report.prediction) {
        os << "\n## Prediction\n\n";
        os << "- forecast score: "
           << qmdl::format_number(report.prediction->forecast_score) << "\n";
        os << "- slope per second: " << report.prediction->slope << "\n";
        os << "- samples: " << report.prediction->n << "\n";
    }
    os << "\n## Recommendations\n\n";
    if (report.recommendations.empty())
        os << "- no data available yet\n";
    else
        for (const auto& r : report.recommendations) os << "- " << r << "\n";
    return os.str();
}

void write_report(const EvaluationReport& report, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    auto write = [&](const char* name, const std::string& content) {
        std::ofstream out(std::filesystem::path(dir) / name,
                          std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(Errc::IoError, std::string("cannot write ") + name +
                                           " under '" + dir + "'");
        out << content;
    };
    write("dashboard.json", render_dashboard_json(report));
    write("summary.md", render_summary_md(report));
    write("detailed.json", render_detailed_json(report));
}

} // namespace qualimeter::process
