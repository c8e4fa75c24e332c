#include "qualimeter/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>

#include "qualimeter/rules.hpp"

namespace qualimeter::agg {

double aggregate(std::span<const double> values, std::span<const double> weights,
                 AggOp op) {
    if (values.empty())
        throw Error(Errc::EmptyInput, "aggregate over empty input");
    if (values.size() != weights.size())
        throw Error(Errc::LengthMismatch, "values and weights differ in length");
    double wsum = 0;
    for (double w : weights) {
        if (w <= 0)
            throw Error(Errc::NonPositiveWeight, "aggregation weight must be > 0");
        wsum += w;
    }

    switch (op) {
    case AggOp::WeightedArithmeticMean: {
        double acc = 0;
        for (size_t i = 0; i < values.size(); ++i)
            acc += (weights[i] / wsum) * values[i];
        return acc;
    }
    case AggOp::WeightedGeometricMean: {
        double acc = 0;
        for (size_t i = 0; i < values.size(); ++i) {
            if (values[i] == 0.0) return 0.0;
            acc += (weights[i] / wsum) * std::log(values[i]);
        }
        return std::exp(acc);
    }
    case AggOp::WeightedHarmonicMean: {
        double acc = 0;
        for (size_t i = 0; i < values.size(); ++i) {
            if (values[i] == 0.0) return 0.0;
            acc += (weights[i] / wsum) / values[i];
        }
        return 1.0 / acc;
    }
    case AggOp::WeightedMedian: {
        std::vector<size_t> idx(values.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](size_t a, size_t b) { return values[a] < values[b]; });
        double cum = 0;
        for (size_t i : idx) {
            cum += weights[i] / wsum;
            if (cum >= 0.5 - 1e-15) return values[i];
        }
        return values[idx.back()];
    }
    case AggOp::Min:
        return *std::min_element(values.begin(), values.end());
    case AggOp::Max:
        return *std::max_element(values.begin(), values.end());
    }
    throw Error(Errc::EmptyInput, "unreachable operator");
}

namespace {

ScoredNode score_node(const Characteristic& node, const std::string& path,
                      const std::map<std::string, double>& leaf_indicators,
                      AggOp op) {
    ScoredNode out;
    out.name = node.name;
    out.path = path;
    out.weight = node.weight;

    if (node.is_leaf()) {
        auto it = leaf_indicators.find(path);
        if (it != leaf_indicators.end()) {
            out.score = it->second;
            out.contributing_count = 1;
            // worst verdict over the leaf's thresholded metrics
            for (const auto& m : node.metrics) {
                if (!m.thresholds) continue;
                Verdict v = evaluate_thresholds(*m.thresholds, *out.score).verdict;
                if (!out.verdict || v < *out.verdict) out.verdict = v;
            }
        }
        return out;
    }

    std::vector<double> scores;
    std::vector<double> weights;
    for (const auto& child : node.children) {
        std::string child_path =
            path.empty() ? child.name : path + "/" + child.name;
        ScoredNode scored =
            score_node(child, child_path, leaf_indicators, op);
        if (scored.has_data()) {
            scores.push_back(*scored.score);
            weights.push_back(scored.weight);
            out.contributing_count += scored.contributing_count;
        }
        out.children.push_back(std::move(scored));
    }
    if (!scores.empty()) out.score = aggregate(scores, weights, op);
    return out;
}

// path of the weakest-scale metric underneath `node`
void weakest_scale(const Characteristic& node, const std::string& path,
                   std::optional<Scale>& scale, std::string& where) {
    for (const auto& m : node.metrics) {
        if (!scale || m.scale < *scale) {
            scale = m.scale;
            where = (path.empty() ? "@model" : path) + " metric '" + m.name + "'";
        }
    }
    for (const auto& c : node.children)
        weakest_scale(c, path.empty() ? c.name : path + "/" + c.name, scale,
                      where);
}

Scale required_scale(AggOp op) {
    switch (op) {
    case AggOp::WeightedArithmeticMean:
        return Scale::Interval;
    case AggOp::WeightedGeometricMean:
    case AggOp::WeightedHarmonicMean:
        return Scale::Ratio;
    case AggOp::WeightedMedian:
    case AggOp::Min:
    case AggOp::Max:
        return Scale::Ordinal;
    }
    return Scale::Ratio;
}

void collect_leaf_paths(const Characteristic& node, const std::string& path,
                        std::set<std::string>& out) {
    if (node.is_leaf()) {
        out.insert(path);
        return;
    }
    for (const auto& c : node.children)
        collect_leaf_paths(c, path.empty() ? c.name : path + "/" + c.name, out);
}

} // namespace

ScoredNode rollup(const QualityModel& model,
                  const std::map<std::string, double>& leaf_indicators) {
    if (model.organization != Organization::Hierarchical)
        throw Error(Errc::UnsupportedOrganization,
                    "only hierarchical models can be rolled up");
    auto violations = rules::check(model, rules::default_ruleset());
    if (rules::has_errors(violations))
        throw Error(Errc::ModelRuleViolations,
                    "model has derivation-rule errors; fix them before rollup");

    std::set<std::string> leaves;
    collect_leaf_paths(model.root, "", leaves);
    for (const auto& [path, indicator] : leaf_indicators) {
        if (!leaves.count(path))
            throw Error(Errc::UnknownLeafPath,
                        "'" + path + "' is not a leaf path of model '" +
                            model.id + "'");
        (void)indicator;
    }
    return score_node(model.root, "", leaf_indicators, model.aggregation);
}

std::vector<std::string> operator_scale_warnings(const QualityModel& model) {
    std::optional<Scale> weakest;
    std::string where;
    weakest_scale(model.root, "", weakest, where);
    if (!weakest) return {};
    Scale needed = required_scale(model.aggregation);
    if (*weakest >= needed) return {};
    return {std::string(agg_op_name(model.aggregation)) + " assumes at least " +
            scale_name(needed) + " scale, but " + where + " is " +
            scale_name(*weakest)};
}

Dispersion dispersion(std::span<const double> values) {
    if (values.empty())
        throw Error(Errc::EmptyInput, "dispersion over empty input");
    Dispersion d;
    d.n = values.size();
    double mean =
        std::accumulate(values.begin(), values.end(), 0.0) / double(d.n);
    double acc = 0;
    for (double v : values) acc += (v - mean) * (v - mean);
    d.variance = acc / double(d.n);
    d.stddev = std::sqrt(d.variance);
    return d;
}

} // namespace qualimeter::agg
