#pragma once

#include <map>
#include <string>
#include <vector>

#include "qualimeter/core.hpp"

namespace qualimeter::rules {

enum class Severity { Warning, Error };

struct Rule {
    std::string id;
    Severity severity = Severity::Error;
    std::map<std::string, double> params;
};

// path is a characteristic path, or "@model" for model-level findings.
struct RuleViolation {
    std::string rule_id;
    std::string path;
    std::string message;
    Severity severity = Severity::Error;
};

// R1 MaxHeight(max_height=5, Error)
// R2 SiblingWeightSum(tolerance=1e-9, Error)
// R3 LeafSimplicity(Error; applies when the purpose grants assess)
// R4 DivisionArity(min=2, max=9, Warning)
// R5 UniquePaths(Error)
// R6 ThresholdPresence(Warning; assessment-capable metrics without thresholds)
std::vector<Rule> default_ruleset();

// Applies `R<id>.<param>=<value>` override lines (# comments allowed) to a
// ruleset. Recognized params: numeric rule params and `severity=error|warning`.
// Unknown rule ids or params throw BadRulesetOverride / UnknownRuleId.
std::vector<Rule> apply_overrides(std::vector<Rule> ruleset,
                                  const std::string& overrides_text);

// Deterministic violation list ordered by (rule id, path).
std::vector<RuleViolation> check(const QualityModel& model,
                                 const std::vector<Rule>& ruleset);

bool has_errors(const std::vector<RuleViolation>& violations);

const char* severity_name(Severity s);

} // namespace qualimeter::rules
