#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qualimeter/errors.hpp"
#include "qualimeter/metrics.hpp"

namespace qualimeter {

// DAP purpose levels with incremental capability nesting.
enum class Purpose { Definition, Assessment, Prediction, MultiPurpose };

enum class AssessmentMethod { Rigorous, ShortCut, Approximate };
enum class InformationSource { Expert, NonExpert, Hybrid };

struct QemAttributes {
    AssessmentMethod assessment_method = AssessmentMethod::Approximate;
    InformationSource information_source = InformationSource::Expert;
};

enum class Organization { Hierarchical, MetaModel, StatisticalImplicit };

enum class Capability { Describe, Assess, Predict };

enum class AggOp {
    WeightedArithmeticMean,
    WeightedGeometricMean,
    WeightedHarmonicMean,
    WeightedMedian,
    Min,
    Max,
};

// Tree node. Leaves may carry metrics; a node never carries both children
// and metrics. A bare node (neither) is only legal in Definition models.
struct Characteristic {
    std::string name;
    double weight = 1.0;
    std::vector<Characteristic> children;
    std::vector<MetricSpec> metrics;

    bool is_leaf() const { return children.empty(); }
};

struct ModelAttributes {
    std::string id;
    std::string title;
    std::string context;
    std::optional<Purpose> purpose;
    std::optional<QemAttributes> qem;
    std::optional<Organization> organization;
    std::string ruleset_ref = "default";
    std::vector<std::string> lineage;
    AggOp aggregation = AggOp::WeightedArithmeticMean;
};

// Immutable after build_model; safe for concurrent readers.
struct QualityModel {
    std::string id;
    std::string title;
    std::string context;
    Purpose purpose = Purpose::Definition;
    QemAttributes qem;
    Organization organization = Organization::Hierarchical;
    std::string ruleset_ref;
    std::vector<std::string> lineage;
    AggOp aggregation = AggOp::WeightedArithmeticMean;
    Characteristic root;
};

// Validates structural invariants, normalizes sibling weights, forces the
// root weight to 1. Throws DuplicateSiblingName, EmptyTree,
// NonPositiveWeight, MissingAttribute, BadName.
QualityModel build_model(const ModelAttributes& attrs, Characteristic tree);

// Each sibling group's weights divided by the group sum. Idempotent up to
// floating-point noise; ratios and argmax sibling preserved.
void normalize_weights(Characteristic& tree);

// Slash-joined name paths for every node except the root.
std::set<std::string> model_paths(const QualityModel& model);

// Edges on the longest root-to-leaf path.
int tree_height(const QualityModel& model);

std::set<Capability> purpose_capabilities(Purpose p);

bool valid_name(const std::string& name);

const char* purpose_name(Purpose p);
const char* assessment_method_name(AssessmentMethod m);
const char* information_source_name(InformationSource s);
const char* organization_name(Organization o);
const char* agg_op_name(AggOp op);

} // namespace qualimeter
