#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qualimeter {

// 1-based position in a QMDL source text.
struct SourceSpan {
    int line = 1;
    int column = 1;
};

enum class Errc {
    // model construction
    DuplicateSiblingName,
    EmptyTree,
    NonPositiveWeight,
    MissingAttribute,
    BadName,
    // qmdl
    SyntaxError,
    SemanticError,
    // metrics / thresholds
    NominalNormalization,
    ThresholdOrder,
    ThresholdRange,
    BadNormalizationRange,
    // aggregation
    EmptyInput,
    LengthMismatch,
    UnknownLeafPath,
    ModelRuleViolations,
    UnsupportedOrganization,
    // rules
    UnknownRuleId,
    BadRulesetOverride,
    // diversity
    BadPopulation,
    // process
    NoObjectives,
    DuplicateObjectiveId,
    InvalidFrequency,
    ModelHashMismatch,
    InsufficientHistory,
    StoreUnwritable,
    BadTimestamp,
    UnknownMetricPath,
    NonNumericValue,
    IoError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}
    Error(Errc code, std::string message, SourceSpan span)
        : std::runtime_error(std::move(message)), code_(code), span_(span) {}

    Errc code() const { return code_; }
    const std::optional<SourceSpan>& span() const { return span_; }

private:
    Errc code_;
    std::optional<SourceSpan> span_;
};

} // namespace qualimeter
