#include "doctest.h"

#include "helpers.hpp"
#include "qualimeter/rules.hpp"

using namespace qualimeter;
using qmtest::assessment_attrs;
using qmtest::unit_metric;

namespace {

QualityModel chain_model(int node_count) {
    Characteristic leaf;
    leaf.name = "c" + std::to_string(node_count - 1);
    leaf.metrics.push_back(unit_metric());
    Characteristic current = leaf;
    for (int i = node_count - 2; i >= 1; --i) {
        Characteristic parent;
        parent.name = "c" + std::to_string(i);
        parent.children.push_back(current);
        current = parent;
    }
    Characteristic root;
    root.name = "c0";
    root.children.push_back(current);
    return build_model(assessment_attrs("chain"), root);
}

} // namespace

TEST_CASE("default ruleset is R1..R6 with unique ids") {
    auto ruleset = rules::default_ruleset();
    REQUIRE(ruleset.size() == 6);
    std::set<std::string> ids;
    for (size_t i = 0; i < ruleset.size(); ++i) {
        CHECK(ruleset[i].id == "R" + std::to_string(i + 1));
        ids.insert(ruleset[i].id);
    }
    CHECK(ids.size() == 6);
    CHECK(ruleset[0].severity == rules::Severity::Error);
    CHECK(ruleset[0].params.at("max_height") == 5);
    CHECK(ruleset[3].severity == rules::Severity::Warning);
}

TEST_CASE("conforming fixture yields no violations") {
    QualityModel m = qmtest::load_fixture("ecu.qmdl");
    auto violations = rules::check(m, rules::default_ruleset());
    CHECK(violations.empty());
}

TEST_CASE("R1 fires once at the deepest path of an over-tall chain") {
    QualityModel m = chain_model(7); // height 6 > 5
    auto violations = rules::check(m, rules::default_ruleset());
    std::vector<rules::RuleViolation> r1;
    for (const auto& v : violations)
        if (v.rule_id == "R1") r1.push_back(v);
    REQUIRE(r1.size() == 1);
    CHECK(r1[0].path == "c1/c2/c3/c4/c5/c6");
    CHECK(r1[0].severity == rules::Severity::Error);

    SUBCASE("monotone in max_height") {
        auto tighter = rules::apply_overrides(rules::default_ruleset(),
                                              "R1.max_height=4\n");
        auto more = rules::check(m, tighter);
        bool found = false;
        for (const auto& v : more) found |= v.rule_id == "R1";
        CHECK(found);
    }
}

TEST_CASE("R3 names the bare leaf of an assessment model") {
    Characteristic root;
    root.name = "quality";
    Characteristic a, b;
    a.name = "covered";
    a.metrics.push_back(unit_metric());
    b.name = "bare";
    root.children = {a, b};
    QualityModel m = build_model(assessment_attrs(), root);
    auto violations = rules::check(m, rules::default_ruleset());
    bool found = false;
    for (const auto& v : violations)
        if (v.rule_id == "R3") {
            found = true;
            CHECK(v.path == "bare");
            CHECK(v.severity == rules::Severity::Error);
        }
    CHECK(found);

    SUBCASE("definition purpose tolerates bare leaves") {
        ModelAttributes attrs = assessment_attrs();
        attrs.purpose = Purpose::Definition;
        QualityModel def = build_model(attrs, root);
        for (const auto& v : rules::check(def, rules::default_ruleset()))
            CHECK(v.rule_id != "R3");
    }
}

TEST_CASE("R4 warns on single-child nodes") {
    QualityModel m = chain_model(3); // two 1-child internal nodes
    auto violations = rules::check(m, rules::default_ruleset());
    int r4 = 0;
    for (const auto& v : violations)
        if (v.rule_id == "R4") {
            ++r4;
            CHECK(v.severity == rules::Severity::Warning);
        }
    CHECK(r4 == 2);
}

TEST_CASE("R6 warns on assessment metrics without thresholds") {
    Characteristic root;
    root.name = "quality";
    Characteristic a, b;
    a.name = "a";
    a.metrics.push_back(unit_metric());
    b.name = "b";
    b.metrics.push_back(unit_metric());
    root.children = {a, b};
    QualityModel m = build_model(assessment_attrs(), root);
    auto violations = rules::check(m, rules::default_ruleset());
    int r6 = 0;
    for (const auto& v : violations)
        if (v.rule_id == "R6") ++r6;
    CHECK(r6 == 2);
}

TEST_CASE("check output is deterministic and sorted") {
    QualityModel m = chain_model(7);
    auto a = rules::check(m, rules::default_ruleset());
    auto b = rules::check(m, rules::default_ruleset());
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].rule_id == b[i].rule_id);
        CHECK(a[i].path == b[i].path);
        CHECK(a[i].message == b[i].message);
        if (i)
            CHECK((a[i - 1].rule_id < a[i].rule_id ||
                   (a[i - 1].rule_id == a[i].rule_id &&
                    a[i - 1].path <= a[i].path)));
    }
}

TEST_CASE("ruleset overrides") {
    auto base = rules::default_ruleset();
    SUBCASE("numeric and severity overrides apply") {
        auto r = rules::apply_overrides(
            base, "# tighten\nR1.max_height=3\nR4.severity=error\n");
        CHECK(r[0].params.at("max_height") == 3);
        CHECK(r[3].severity == rules::Severity::Error);
    }
    SUBCASE("unknown rule id rejected") {
        CHECK_THROWS_AS(rules::apply_overrides(base, "R9.max_height=3\n"),
                        Error);
    }
    SUBCASE("unknown parameter rejected") {
        CHECK_THROWS_AS(rules::apply_overrides(base, "R1.depth=3\n"), Error);
    }
}
