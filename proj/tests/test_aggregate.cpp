#include "doctest.h"

#include <random>

#include "helpers.hpp"
#include "qualimeter/aggregate.hpp"

using namespace qualimeter;
using qmtest::assessment_attrs;
using qmtest::unit_metric;

namespace {

const AggOp kAllOps[] = {AggOp::WeightedArithmeticMean,
                         AggOp::WeightedGeometricMean,
                         AggOp::WeightedHarmonicMean,
                         AggOp::WeightedMedian,
                         AggOp::Min,
                         AggOp::Max};

QualityModel two_leaf_model(AggOp op = AggOp::WeightedArithmeticMean) {
    Characteristic root;
    root.name = "quality";
    Characteristic a, b;
    a.name = "a";
    a.weight = 0.7;
    a.metrics.push_back(unit_metric());
    b.name = "b";
    b.weight = 0.3;
    b.metrics.push_back(unit_metric());
    root.children = {a, b};
    ModelAttributes attrs = assessment_attrs("two-leaf");
    attrs.aggregation = op;
    return build_model(attrs, root);
}

// independent oracle: literal nested expansion of the weighted means
double nested_expand(const Characteristic& node, const std::string& path,
                     const std::map<std::string, double>& leaves, AggOp op) {
    if (node.children.empty()) return leaves.at(path);
    std::vector<double> values, weights;
    for (const auto& c : node.children) {
        values.push_back(nested_expand(
            c, path.empty() ? c.name : path + "/" + c.name, leaves, op));
        weights.push_back(c.weight);
    }
    return agg::aggregate(values, weights, op);
}

} // namespace

TEST_CASE("aggregate worked examples") {
    std::vector<double> v{0.8, 0.6};
    std::vector<double> w{0.7, 0.3};
    CHECK(agg::aggregate(v, w, AggOp::WeightedArithmeticMean) ==
          doctest::Approx(0.74).epsilon(1e-12));

    std::vector<double> single{0.42};
    std::vector<double> sw{3.0};
    for (AggOp op : kAllOps)
        CHECK(agg::aggregate(single, sw, op) == doctest::Approx(0.42));

    std::vector<double> with_zero{0.0, 0.9};
    std::vector<double> equal{1.0, 1.0};
    CHECK(agg::aggregate(with_zero, equal, AggOp::WeightedGeometricMean) == 0.0);
    CHECK(agg::aggregate(with_zero, equal, AggOp::WeightedHarmonicMean) == 0.0);
}

TEST_CASE("aggregate error paths") {
    std::vector<double> empty;
    CHECK_THROWS_AS(
        agg::aggregate(empty, empty, AggOp::WeightedArithmeticMean), Error);
    std::vector<double> v{0.5, 0.6};
    std::vector<double> w{1.0};
    CHECK_THROWS_AS(agg::aggregate(v, w, AggOp::WeightedArithmeticMean), Error);
    std::vector<double> bad_w{1.0, 0.0};
    CHECK_THROWS_AS(agg::aggregate(v, bad_w, AggOp::WeightedArithmeticMean),
                    Error);
}

TEST_CASE("weighted median picks smallest value at half cumulative weight") {
    std::vector<double> v{0.9, 0.1, 0.5};
    std::vector<double> w{0.25, 0.25, 0.5};
    CHECK(agg::aggregate(v, w, AggOp::WeightedMedian) == 0.5);
    std::vector<double> w2{0.5, 0.5};
    std::vector<double> v2{0.2, 0.8};
    CHECK(agg::aggregate(v2, w2, AggOp::WeightedMedian) == 0.2);
}

TEST_CASE("rollup matches the aggregate example") {
    QualityModel m = two_leaf_model();
    agg::ScoredNode tree = agg::rollup(m, {{"a", 0.8}, {"b", 0.6}});
    REQUIRE(tree.has_data());
    CHECK(*tree.score == doctest::Approx(0.74).epsilon(1e-12));
    CHECK(tree.contributing_count == 2);
    // leaf verdicts from the unit metric? unit_metric has no thresholds
    CHECK_FALSE(tree.children[0].verdict.has_value());
}

TEST_CASE("rollup NoData handling") {
    QualityModel m = two_leaf_model();
    SUBCASE("missing leaf renormalizes onto present sibling") {
        agg::ScoredNode tree = agg::rollup(m, {{"a", 0.8}});
        REQUIRE(tree.has_data());
        CHECK(*tree.score == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(tree.contributing_count == 1);
        CHECK_FALSE(tree.children[1].has_data());
    }
    SUBCASE("no data anywhere leaves the root unscored") {
        agg::ScoredNode tree = agg::rollup(m, {});
        CHECK_FALSE(tree.has_data());
        CHECK(tree.contributing_count == 0);
    }
    SUBCASE("unknown path rejected") {
        CHECK_THROWS_AS(agg::rollup(m, {{"nope", 0.5}}), Error);
    }
    SUBCASE("internal path rejected as leaf key") {
        CHECK_THROWS_AS(agg::rollup(m, {{"", 0.5}}), Error);
    }
}

TEST_CASE("rollup refuses models with rule errors or wrong organization") {
    Characteristic root;
    root.name = "quality";
    Characteristic bare;
    bare.name = "bare";
    Characteristic ok;
    ok.name = "ok";
    ok.metrics.push_back(unit_metric());
    root.children = {ok, bare};
    QualityModel broken = build_model(assessment_attrs(), root);
    try {
        agg::rollup(broken, {{"ok", 0.5}});
        FAIL("expected ModelRuleViolations");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ModelRuleViolations);
    }

    QualityModel meta = two_leaf_model();
    meta.organization = Organization::MetaModel;
    try {
        agg::rollup(meta, {{"a", 0.5}});
        FAIL("expected UnsupportedOrganization");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnsupportedOrganization);
    }
}

TEST_CASE("idempotence: constant leaves score constant everywhere") {
    std::mt19937 rng(5);
    for (AggOp op : kAllOps) {
        QualityModel m = qmtest::random_model(rng, 15);
        m.aggregation = op;
        std::vector<std::string> leaves;
        qmtest::collect_leaf_paths(m.root, "", leaves);
        std::map<std::string, double> indicators;
        for (const auto& p : leaves) indicators[p] = 0.63;
        agg::ScoredNode tree = agg::rollup(m, indicators);
        std::function<void(const agg::ScoredNode&)> verify =
            [&](const agg::ScoredNode& n) {
                REQUIRE(n.has_data());
                CHECK(*n.score == doctest::Approx(0.63).epsilon(1e-12));
                for (const auto& c : n.children) verify(c);
            };
        verify(tree);
    }
}

TEST_CASE("internality and weight-scale invariance") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ind(0.0, 1.0);
    for (int iter = 0; iter < 100; ++iter) {
        QualityModel m = qmtest::random_model(rng, 12);
        std::vector<std::string> leaves;
        qmtest::collect_leaf_paths(m.root, "", leaves);
        std::map<std::string, double> indicators;
        double lo = 1.0, hi = 0.0;
        for (const auto& p : leaves) {
            indicators[p] = ind(rng);
            lo = std::min(lo, indicators[p]);
            hi = std::max(hi, indicators[p]);
        }
        for (AggOp op : kAllOps) {
            m.aggregation = op;
            agg::ScoredNode tree = agg::rollup(m, indicators);
            REQUIRE(tree.has_data());
            CHECK(*tree.score >= lo - 1e-12);
            CHECK(*tree.score <= hi + 1e-12);

            // scaling all sibling weights leaves scores unchanged
            QualityModel scaled = m;
            std::function<void(Characteristic&)> scale =
                [&](Characteristic& n) {
                    for (auto& c : n.children) {
                        c.weight *= 7.5;
                        scale(c);
                    }
                };
            scale(scaled.root);
            normalize_weights(scaled.root);
            agg::ScoredNode tree2 = agg::rollup(scaled, indicators);
            CHECK(*tree2.score == doctest::Approx(*tree.score).epsilon(1e-12));
        }
    }
}

TEST_CASE("brute-force oracle on small trees") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> ind(0.01, 1.0);
    for (int iter = 0; iter < 60; ++iter) {
        QualityModel m = qmtest::random_model(rng, 8);
        std::vector<std::string> leaves;
        qmtest::collect_leaf_paths(m.root, "", leaves);
        std::map<std::string, double> indicators;
        for (const auto& p : leaves) indicators[p] = ind(rng);
        for (AggOp op : kAllOps) {
            m.aggregation = op;
            agg::ScoredNode tree = agg::rollup(m, indicators);
            double expected = nested_expand(m.root, "", indicators, op);
            REQUIRE(tree.has_data());
            CHECK(std::fabs(*tree.score - expected) <= 1e-12);
        }
    }
}

TEST_CASE("monotonicity: raising one leaf never lowers an ancestor") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> ind(0.0, 0.9);
    for (int iter = 0; iter < 40; ++iter) {
        QualityModel m = qmtest::random_model(rng, 10);
        std::vector<std::string> leaves;
        qmtest::collect_leaf_paths(m.root, "", leaves);
        std::map<std::string, double> indicators;
        for (const auto& p : leaves) indicators[p] = ind(rng);
        for (AggOp op : kAllOps) {
            m.aggregation = op;
            agg::ScoredNode before = agg::rollup(m, indicators);
            for (const auto& p : leaves) {
                auto bumped = indicators;
                bumped[p] = std::min(1.0, bumped[p] + 0.05);
                agg::ScoredNode after = agg::rollup(m, bumped);
                CHECK(*after.score >= *before.score - 1e-12);
            }
        }
    }
}

TEST_CASE("operator admissibility against the weakest leaf scale") {
    QualityModel m = two_leaf_model(AggOp::WeightedGeometricMean);
    CHECK(agg::operator_scale_warnings(m).empty()); // ratio leaves

    QualityModel weak = two_leaf_model(AggOp::WeightedArithmeticMean);
    weak.root.children[1].metrics[0].scale = Scale::Ordinal;
    auto warnings = agg::operator_scale_warnings(weak);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("ordinal") != std::string::npos);
    CHECK(warnings[0].find("b") != std::string::npos);

    // median only needs an ordering
    weak.aggregation = AggOp::WeightedMedian;
    CHECK(agg::operator_scale_warnings(weak).empty());

    weak.aggregation = AggOp::WeightedHarmonicMean;
    CHECK(agg::operator_scale_warnings(weak).size() == 1);
}

TEST_CASE("dispersion examples") {
    std::vector<double> constant{0.5, 0.5, 0.5};
    CHECK(agg::dispersion(constant).variance == 0.0);
    std::vector<double> spread{0.0, 1.0};
    auto d = agg::dispersion(spread);
    CHECK(d.variance == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.stddev == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.n == 2);
    std::vector<double> single{0.3};
    CHECK(agg::dispersion(single).variance == 0.0);
    std::vector<double> empty;
    CHECK_THROWS_AS(agg::dispersion(empty), Error);
}
