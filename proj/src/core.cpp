#include "qualimeter/core.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace qualimeter {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::DuplicateSiblingName: return "DuplicateSiblingName";
    case Errc::EmptyTree: return "EmptyTree";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::MissingAttribute: return "MissingAttribute";
    case Errc::BadName: return "BadName";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::SemanticError: return "SemanticError";
    case Errc::NominalNormalization: return "NominalNormalization";
    case Errc::ThresholdOrder: return "ThresholdOrder";
    case Errc::ThresholdRange: return "ThresholdRange";
    case Errc::BadNormalizationRange: return "BadNormalizationRange";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::UnknownLeafPath: return "UnknownLeafPath";
    case Errc::ModelRuleViolations: return "ModelRuleViolations";
    case Errc::UnsupportedOrganization: return "UnsupportedOrganization";
    case Errc::UnknownRuleId: return "UnknownRuleId";
    case Errc::BadRulesetOverride: return "BadRulesetOverride";
    case Errc::BadPopulation: return "BadPopulation";
    case Errc::NoObjectives: return "NoObjectives";
    case Errc::DuplicateObjectiveId: return "DuplicateObjectiveId";
    case Errc::InvalidFrequency: return "InvalidFrequency";
    case Errc::ModelHashMismatch: return "ModelHashMismatch";
    case Errc::InsufficientHistory: return "InsufficientHistory";
    case Errc::StoreUnwritable: return "StoreUnwritable";
    case Errc::BadTimestamp: return "BadTimestamp";
    case Errc::UnknownMetricPath: return "UnknownMetricPath";
    case Errc::NonNumericValue: return "NonNumericValue";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

bool valid_name(const std::string& name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-';
    });
}

namespace {

void check_tree(const Characteristic& node, Purpose purpose, const std::string& path) {
    if (!valid_name(node.name))
        throw Error(Errc::BadName, "characteristic name '" + node.name +
                                       "' must match [A-Za-z0-9_-]+");
    if (node.weight <= 0.0)
        throw Error(Errc::NonPositiveWeight,
                    "weight of '" + (path.empty() ? node.name : path) +
                        "' must be > 0");
    if (!node.children.empty() && !node.metrics.empty())
        throw Error(Errc::SemanticError,
                    "'" + node.name + "' has both children and metrics");
    // Bare leaves in non-Definition models are tolerated here and reported
    // by rule R3, so definition-stage drafts stay loadable.
    (void)purpose;
    std::unordered_set<std::string> names;
    for (const auto& child : node.children) {
        if (!names.insert(child.name).second)
            throw Error(Errc::DuplicateSiblingName,
                        "duplicate sibling name '" + child.name + "' under '" +
                            node.name + "'");
        check_tree(child, purpose,
                   path.empty() ? child.name : path + "/" + child.name);
    }
    std::unordered_set<std::string> metric_names;
    for (const auto& m : node.metrics) {
        if (!valid_name(m.name))
            throw Error(Errc::BadName,
                        "metric name '" + m.name + "' must match [A-Za-z0-9_-]+");
        if (!metric_names.insert(m.name).second)
            throw Error(Errc::DuplicateSiblingName,
                        "duplicate metric name '" + m.name + "' under '" +
                            node.name + "'");
        if (m.from_raw == m.to_raw)
            throw Error(Errc::BadNormalizationRange,
                        "metric '" + m.name + "': from and to must differ");
        if (m.scale == Scale::Nominal)
            throw Error(Errc::NominalNormalization,
                        "metric '" + m.name +
                            "': nominal scale admits no linear normalization");
        if (m.thresholds) validate_thresholds(*m.thresholds);
    }
}

} // namespace

void normalize_weights(Characteristic& tree) {
    if (!tree.children.empty()) {
        double sum = 0.0;
        for (const auto& c : tree.children) {
            if (c.weight <= 0.0)
                throw Error(Errc::NonPositiveWeight,
                            "weight of '" + c.name + "' must be > 0");
            sum += c.weight;
        }
        for (auto& c : tree.children) {
            c.weight /= sum;
            normalize_weights(c);
        }
    }
}

QualityModel build_model(const ModelAttributes& attrs, Characteristic tree) {
    if (attrs.id.empty())
        throw Error(Errc::MissingAttribute, "model id is required");
    if (!valid_name(attrs.id))
        throw Error(Errc::BadName, "model id must match [A-Za-z0-9_-]+");
    if (!attrs.purpose)
        throw Error(Errc::MissingAttribute, "purpose is required");
    if (!attrs.qem)
        throw Error(Errc::MissingAttribute, "qem attributes are required");
    if (!attrs.organization)
        throw Error(Errc::MissingAttribute, "organization is required");
    if (attrs.ruleset_ref.empty())
        throw Error(Errc::MissingAttribute, "ruleset reference is required");
    if (tree.name.empty())
        throw Error(Errc::EmptyTree, "model has no characteristic tree");
    for (const auto& l : attrs.lineage)
        if (!valid_name(l))
            throw Error(Errc::BadName,
                        "lineage id '" + l + "' must match [A-Za-z0-9_-]+");

    check_tree(tree, *attrs.purpose, "");
    tree.weight = 1.0;
    normalize_weights(tree);

    QualityModel m;
    m.id = attrs.id;
    m.title = attrs.title.empty() ? attrs.id : attrs.title;
    m.context = attrs.context;
    m.purpose = *attrs.purpose;
    m.qem = *attrs.qem;
    m.organization = *attrs.organization;
    m.ruleset_ref = attrs.ruleset_ref;
    m.lineage = attrs.lineage;
    m.aggregation = attrs.aggregation;
    m.root = std::move(tree);
    return m;
}

namespace {

void collect_paths(const Characteristic& node, const std::string& prefix,
                   std::set<std::string>& out) {
    for (const auto& child : node.children) {
        std::string path = prefix.empty() ? child.name : prefix + "/" + child.name;
        out.insert(path);
        collect_paths(child, path, out);
    }
}

int height_of(const Characteristic& node) {
    int h = 0;
    for (const auto& child : node.children)
        h = std::max(h, 1 + height_of(child));
    return h;
}

} // namespace

std::set<std::string> model_paths(const QualityModel& model) {
    std::set<std::string> out;
    collect_paths(model.root, "", out);
    return out;
}

int tree_height(const QualityModel& model) { return height_of(model.root); }

std::set<Capability> purpose_capabilities(Purpose p) {
    switch (p) {
    case Purpose::Definition:
        return {Capability::Describe};
    case Purpose::Assessment:
        return {Capability::Describe, Capability::Assess};
    case Purpose::Prediction:
    case Purpose::MultiPurpose:
        return {Capability::Describe, Capability::Assess, Capability::Predict};
    }
    return {};
}

const char* purpose_name(Purpose p) {
    switch (p) {
    case Purpose::Definition: return "definition";
    case Purpose::Assessment: return "assessment";
    case Purpose::Prediction: return "prediction";
    case Purpose::MultiPurpose: return "multi-purpose";
    }
    return "?";
}

const char* assessment_method_name(AssessmentMethod m) {
    switch (m) {
    case AssessmentMethod::Rigorous: return "rigorous";
    case AssessmentMethod::ShortCut: return "short-cut";
    case AssessmentMethod::Approximate: return "approximate";
    }
    return "?";
}

const char* information_source_name(InformationSource s) {
    switch (s) {
    case InformationSource::Expert: return "expert";
    case InformationSource::NonExpert: return "non-expert";
    case InformationSource::Hybrid: return "hybrid";
    }
    return "?";
}

const char* organization_name(Organization o) {
    switch (o) {
    case Organization::Hierarchical: return "hierarchical";
    case Organization::MetaModel: return "meta-model";
    case Organization::StatisticalImplicit: return "statistical-implicit";
    }
    return "?";
}

const char* agg_op_name(AggOp op) {
    switch (op) {
    case AggOp::WeightedArithmeticMean: return "weighted-arithmetic-mean";
    case AggOp::WeightedGeometricMean: return "weighted-geometric-mean";
    case AggOp::WeightedHarmonicMean: return "weighted-harmonic-mean";
    case AggOp::WeightedMedian: return "weighted-median";
    case AggOp::Min: return "min";
    case AggOp::Max: return "max";
    }
    return "?";
}

} // namespace qualimeter
