#include "qualimeter/rules.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace qualimeter::rules {

const char* severity_name(Severity s) {
    return s == Severity::Error ? "error" : "warning";
}

std::vector<Rule> default_ruleset() {
    return {
        {"R1", Severity::Error, {{"max_height", 5}}},
        {"R2", Severity::Error, {{"tolerance", 1e-9}}},
        {"R3", Severity::Error, {}},
        {"R4", Severity::Warning, {{"min", 2}, {"max", 9}}},
        {"R5", Severity::Error, {}},
        {"R6", Severity::Warning, {}},
    };
}

std::vector<Rule> apply_overrides(std::vector<Rule> ruleset,
                                  const std::string& overrides_text) {
    std::istringstream in(overrides_text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);

        auto err = [&](const std::string& msg) {
            return Error(Errc::BadRulesetOverride,
                         "override line " + std::to_string(lineno) + ": " + msg);
        };
        auto dot = line.find('.');
        auto eq = line.find('=');
        if (dot == std::string::npos || eq == std::string::npos || dot > eq)
            throw err("expected R<id>.<param>=<value>");
        std::string rule_id = line.substr(0, dot);
        std::string param = line.substr(dot + 1, eq - dot - 1);
        std::string value = line.substr(eq + 1);

        auto it = std::find_if(ruleset.begin(), ruleset.end(),
                               [&](const Rule& r) { return r.id == rule_id; });
        if (it == ruleset.end())
            throw Error(Errc::UnknownRuleId,
                        "override line " + std::to_string(lineno) +
                            ": unknown rule id '" + rule_id + "'");
        if (param == "severity") {
            if (value == "error")
                it->severity = Severity::Error;
            else if (value == "warning")
                it->severity = Severity::Warning;
            else
                throw err("severity must be 'error' or 'warning'");
        } else {
            if (!it->params.count(param))
                throw err("rule " + rule_id + " has no parameter '" + param + "'");
            try {
                size_t used = 0;
                double v = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
                it->params[param] = v;
            } catch (const std::exception&) {
                throw err("bad numeric value '" + value + "'");
            }
        }
    }
    std::set<std::string> ids;
    for (const auto& r : ruleset)
        if (!ids.insert(r.id).second)
            throw Error(Errc::UnknownRuleId, "duplicate rule id " + r.id);
    return ruleset;
}

namespace {

using Walker = std::function<void(const Characteristic&, const std::string&, int)>;

void walk(const Characteristic& node, const std::string& path, int depth,
          const Walker& visit) {
    visit(node, path, depth);
    for (const auto& c : node.children)
        walk(c, path.empty() ? c.name : path + "/" + c.name, depth + 1, visit);
}

std::string node_path_or_model(const std::string& path) {
    return path.empty() ? "@model" : path;
}

void check_rule(const Rule& rule, const QualityModel& model,
                std::vector<RuleViolation>& out) {
    auto emit = [&](const std::string& path, const std::string& msg) {
        out.push_back({rule.id, path, msg, rule.severity});
    };

    if (rule.id == "R1") {
        int max_height = static_cast<int>(rule.params.at("max_height"));
        int height = tree_height(model);
        if (height > max_height) {
            // one violation, at the lexicographically first deepest path
            std::string deepest;
            walk(model.root, "", 0,
                 [&](const Characteristic&, const std::string& path, int depth) {
                     if (depth == height && (deepest.empty() || path < deepest))
                         deepest = path;
                 });
            emit(deepest, "tree height " + std::to_string(height) +
                              " exceeds maximum " + std::to_string(max_height));
        }
    } else if (rule.id == "R2") {
        double tol = rule.params.at("tolerance");
        walk(model.root, "", 0,
             [&](const Characteristic& node, const std::string& path, int) {
                 if (node.children.empty()) return;
                 double sum = 0;
                 for (const auto& c : node.children) sum += c.weight;
                 if (std::fabs(sum - 1.0) > tol)
                     emit(node_path_or_model(path),
                          "children weights sum to " + std::to_string(sum) +
                              ", expected 1");
             });
    } else if (rule.id == "R3") {
        if (!purpose_capabilities(model.purpose).count(Capability::Assess))
            return;
        walk(model.root, "", 0,
             [&](const Characteristic& node, const std::string& path, int) {
                 if (node.is_leaf() && node.metrics.empty())
                     emit(node_path_or_model(path),
                          "leaf carries no metric; assessment models must "
                          "branch until simple characteristics remain");
             });
    } else if (rule.id == "R4") {
        auto min = static_cast<size_t>(rule.params.at("min"));
        auto max = static_cast<size_t>(rule.params.at("max"));
        walk(model.root, "", 0,
             [&](const Characteristic& node, const std::string& path, int) {
                 if (node.children.empty()) return;
                 size_t n = node.children.size();
                 if (n < min || n > max)
                     emit(node_path_or_model(path),
                          "internal node has " + std::to_string(n) +
                              " children, expected between " +
                              std::to_string(min) + " and " + std::to_string(max));
             });
    } else if (rule.id == "R5") {
        std::set<std::string> seen;
        walk(model.root, "", 0,
             [&](const Characteristic&, const std::string& path, int) {
                 if (path.empty()) return;
                 if (!seen.insert(path).second)
                     emit(path, "characteristic path is not unique");
             });
    } else if (rule.id == "R6") {
        if (!purpose_capabilities(model.purpose).count(Capability::Assess))
            return;
        walk(model.root, "", 0,
             [&](const Characteristic& node, const std::string& path, int) {
                 for (const auto& m : node.metrics)
                     if (!m.thresholds)
                         emit(node_path_or_model(path),
                              "metric '" + m.name +
                                  "' declares no thresholds; gate verdicts "
                                  "will be unavailable");
             });
    } else {
        throw Error(Errc::UnknownRuleId, "unknown rule id '" + rule.id + "'");
    }
}

} // namespace

std::vector<RuleViolation> check(const QualityModel& model,
                                 const std::vector<Rule>& ruleset) {
    std::vector<RuleViolation> out;
    for (const auto& rule : ruleset) check_rule(rule, model, out);
    std::stable_sort(out.begin(), out.end(),
                     [](const RuleViolation& a, const RuleViolation& b) {
                         if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
                         return a.path < b.path;
                     });
    return out;
}

bool has_errors(const std::vector<RuleViolation>& violations) {
    return std::any_of(violations.begin(), violations.end(),
                       [](const RuleViolation& v) {
                           return v.severity == Severity::Error;
                       });
}

} // namespace qualimeter::rules
