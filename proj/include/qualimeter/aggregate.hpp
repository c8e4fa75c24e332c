#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qualimeter/core.hpp"
#include "qualimeter/metrics.hpp"

namespace qualimeter::agg {

// Scored mirror of the model tree. score is empty for NoData nodes.
struct ScoredNode {
    std::string name;
    std::string path; // empty at the root
    double weight = 1.0;
    std::optional<double> score;
    std::optional<Verdict> verdict;
    int contributing_count = 0;
    std::vector<ScoredNode> children;

    bool has_data() const { return score.has_value(); }
};

// Weighted combination of indicators. Weights are renormalized internally;
// the result always lies in [min(values), max(values)]. Geometric and
// harmonic means of any zero value are 0 by the limit convention.
double aggregate(std::span<const double> values, std::span<const double> weights,
                 AggOp op);

// Bottom-up roll-up of leaf indicators. NoData children are skipped with
// weight renormalization over the present siblings. Throws
// ModelRuleViolations when the default ruleset reports Errors,
// UnsupportedOrganization for non-hierarchical models, UnknownLeafPath for
// keys that are not leaf paths.
ScoredNode rollup(const QualityModel& model,
                  const std::map<std::string, double>& leaf_indicators);

// Measurement-theory advisories: one message per aggregation operator whose
// statistic is not admissible for the weakest metric scale underneath it.
// Always warnings, never blocking.
std::vector<std::string> operator_scale_warnings(const QualityModel& model);

struct Dispersion {
    double variance = 0.0;
    double stddev = 0.0;
    std::size_t n = 0;
};

// Population variance (divide by n).
Dispersion dispersion(std::span<const double> values);

} // namespace qualimeter::agg
