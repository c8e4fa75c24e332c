// Shared test fixtures and seeded random model generators.
#pragma once

#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "qualimeter/core.hpp"
#include "qualimeter/qmdl.hpp"

namespace qmtest {

using namespace qualimeter;

inline std::string fixture_path(const std::string& name) {
    return std::string(QM_FIXTURES_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline QualityModel load_fixture(const std::string& name) {
    return qmdl::parse(read_file(fixture_path(name)));
}

inline ModelAttributes assessment_attrs(const std::string& id = "test-model") {
    ModelAttributes attrs;
    attrs.id = id;
    attrs.purpose = Purpose::Assessment;
    attrs.qem = QemAttributes{AssessmentMethod::ShortCut, InformationSource::Expert};
    attrs.organization = Organization::Hierarchical;
    return attrs;
}

inline MetricSpec unit_metric(const std::string& name = "m") {
    MetricSpec m;
    m.name = name;
    m.scale = Scale::Ratio;
    m.unit = "unit";
    m.direction = Direction::HigherBetter;
    m.from_raw = 0.0;
    m.to_raw = 1.0;
    return m;
}

// Random tree with raw (unnormalized) weights. When `conforming` is set the
// shape respects the default ruleset for assessment models: height <= 5,
// internal arity in [2, 9], every leaf carries a metric.
inline Characteristic random_tree(std::mt19937& rng, int max_nodes,
                                  bool conforming) {
    std::uniform_real_distribution<double> weight_dist(0.05, 5.0);
    std::uniform_int_distribution<int> arity_dist(2, 3);

    int next_id = 0;
    Characteristic root;
    root.name = "root";
    root.weight = 1.0;
    int budget = max_nodes - 1;

    struct Slot {
        Characteristic* node;
        int depth;
    };
    std::vector<Slot> frontier{{&root, 0}};
    while (budget > 0 && !frontier.empty()) {
        std::uniform_int_distribution<size_t> pick(0, frontier.size() - 1);
        size_t i = pick(rng);
        Slot slot = frontier[i];
        frontier.erase(frontier.begin() + static_cast<long>(i));
        if (conforming && slot.depth >= 4) continue;

        int arity = arity_dist(rng);
        if (arity > budget) arity = budget;
        if (conforming && arity < 2) continue; // keep arity rule satisfied
        if (arity <= 0) continue;
        for (int k = 0; k < arity; ++k) {
            Characteristic child;
            child.name = "n" + std::to_string(next_id++);
            child.weight = weight_dist(rng);
            slot.node->children.push_back(std::move(child));
        }
        budget -= arity;
        for (auto& child : slot.node->children)
            frontier.push_back({&child, slot.depth + 1});
    }

    if (conforming) {
        // leaves carry one simple metric each
        std::function<void(Characteristic&)> decorate = [&](Characteristic& n) {
            if (n.children.empty())
                n.metrics.push_back(unit_metric());
            else
                for (auto& c : n.children) decorate(c);
        };
        decorate(root);
    }
    return root;
}

inline QualityModel random_model(std::mt19937& rng, int max_nodes,
                                 bool conforming = true) {
    static const AggOp ops[] = {AggOp::WeightedArithmeticMean,
                                AggOp::WeightedGeometricMean,
                                AggOp::WeightedHarmonicMean,
                                AggOp::WeightedMedian, AggOp::Min, AggOp::Max};
    ModelAttributes attrs = assessment_attrs("rand-model");
    attrs.aggregation = ops[rng() % 6];
    return build_model(attrs, random_tree(rng, max_nodes, conforming));
}

inline void collect_leaf_paths(const Characteristic& node,
                               const std::string& prefix,
                               std::vector<std::string>& out) {
    if (node.children.empty()) {
        out.push_back(prefix);
        return;
    }
    for (const auto& c : node.children)
        collect_leaf_paths(c, prefix.empty() ? c.name : prefix + "/" + c.name,
                           out);
}

} // namespace qmtest
