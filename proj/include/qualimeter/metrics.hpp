#pragma once

#include <optional>
#include <set>
#include <string>

#include "qualimeter/errors.hpp"

namespace qualimeter {

enum class Scale { Nominal, Ordinal, Interval, Ratio };
enum class Direction { HigherBetter, LowerBetter };

// Decision levels on the normalized indicator scale.
// Ordering invariant: reject < accept <= target, all in [0,1].
struct ThresholdSet {
    double reject = 0.0;
    double accept = 0.0;
    double target = 0.0;
    std::optional<double> reference;
};

enum class Verdict { Rejected = 0, Marginal = 1, Accepted = 2, TargetMet = 3 };
enum class ReferenceComparison { Below, AtOrAbove };

struct VerdictResult {
    Verdict verdict;
    std::optional<ReferenceComparison> vs_reference;
};

struct MetricSpec {
    std::string name;
    Scale scale = Scale::Ratio;
    std::string unit;
    Direction direction = Direction::HigherBetter;
    // Linear normalization: raw == from_raw maps to indicator 0 (worst),
    // raw == to_raw maps to indicator 1 (best).
    double from_raw = 0.0;
    double to_raw = 1.0;
    std::optional<ThresholdSet> thresholds;
};

// Raw value -> indicator in [0,1], clamped. Nominal metrics have no
// meaningful linear map and are rejected.
double normalize_value(const MetricSpec& spec, double raw);

// Throws ThresholdOrder / ThresholdRange when the set is malformed.
void validate_thresholds(const ThresholdSet& t);

// Boundary convention: indicator <= reject is Rejected, indicator >= target
// is TargetMet; the reject/accept gap yields Marginal.
VerdictResult evaluate_thresholds(const ThresholdSet& t, double indicator);

// Statistics admissible for a scale type under representational
// measurement theory. Sets form a chain Nominal c Ordinal c Interval c Ratio.
std::set<std::string> admissible_stats(Scale scale);

const char* scale_name(Scale s);
const char* direction_name(Direction d);
const char* verdict_name(Verdict v);

} // namespace qualimeter
