#include "qualimeter/metrics.hpp"

#include <algorithm>

namespace qualimeter {

double normalize_value(const MetricSpec& spec, double raw) {
    if (spec.scale == Scale::Nominal)
        throw Error(Errc::NominalNormalization,
                    "metric '" + spec.name + "' is nominal; no linear map");
    double indicator = (raw - spec.from_raw) / (spec.to_raw - spec.from_raw);
    return std::clamp(indicator, 0.0, 1.0);
}

void validate_thresholds(const ThresholdSet& t) {
    auto in_range = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_range(t.reject) || !in_range(t.accept) || !in_range(t.target) ||
        (t.reference && !in_range(*t.reference)))
        throw Error(Errc::ThresholdRange, "threshold levels must lie in [0,1]");
    if (!(t.reject < t.accept && t.accept <= t.target))
        throw Error(Errc::ThresholdOrder,
                    "threshold order must be reject < accept <= target");
}

VerdictResult evaluate_thresholds(const ThresholdSet& t, double indicator) {
    VerdictResult r;
    if (indicator >= t.target)
        r.verdict = Verdict::TargetMet;
    else if (indicator >= t.accept)
        r.verdict = Verdict::Accepted;
    else if (indicator > t.reject)
        r.verdict = Verdict::Marginal;
    else
        r.verdict = Verdict::Rejected;
    if (t.reference)
        r.vs_reference = indicator >= *t.reference
                             ? ReferenceComparison::AtOrAbove
                             : ReferenceComparison::Below;
    return r;
}

std::set<std::string> admissible_stats(Scale scale) {
    std::set<std::string> stats{"mode", "count"};
    if (scale == Scale::Nominal) return stats;
    stats.insert({"median", "percentile"});
    if (scale == Scale::Ordinal) return stats;
    stats.insert({"arithmetic-mean", "variance"});
    if (scale == Scale::Interval) return stats;
    stats.insert({"geometric-mean", "harmonic-mean", "ratio"});
    return stats;
}

const char* scale_name(Scale s) {
    switch (s) {
    case Scale::Nominal: return "nominal";
    case Scale::Ordinal: return "ordinal";
    case Scale::Interval: return "interval";
    case Scale::Ratio: return "ratio";
    }
    return "?";
}

const char* direction_name(Direction d) {
    return d == Direction::HigherBetter ? "higher-better" : "lower-better";
}

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Rejected: return "rejected";
    case Verdict::Marginal: return "marginal";
    case Verdict::Accepted: return "accepted";
    case Verdict::TargetMet: return "target-met";
    }
    return "?";
}

} // namespace qualimeter
