#pragma once

#include <string>
#include <string_view>

#include "qualimeter/core.hpp"

namespace qualimeter::qmdl {

// Parses QMDL text into a validated QualityModel. Throws Error with a
// SourceSpan for syntax and semantic failures.
QualityModel parse(std::string_view text);

// Canonical QMDL form: deterministic ordering, LF line endings, numbers
// with up to 9 fractional digits and trailing zeros trimmed.
std::string serialize(const QualityModel& model);

// Structural equality used by round-trip checks: names, attributes, metric
// specs and thresholds exact; weights and normalization bounds within tol.
bool structurally_equal(const QualityModel& a, const QualityModel& b,
                        double tol = 1e-9);

// Fixed-format number rendering shared with report writers.
std::string format_number(double v);

} // namespace qualimeter::qmdl
