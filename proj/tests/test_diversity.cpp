#include "doctest.h"

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "qualimeter/diversity.hpp"

using namespace qualimeter;
using qmtest::assessment_attrs;
using qmtest::unit_metric;

namespace {

QualityModel path_model(const std::string& id,
                        const std::vector<std::vector<std::string>>& branches) {
    // each branch is a chain of names under the root
    Characteristic root;
    root.name = "root";
    for (const auto& branch : branches) {
        Characteristic* at = &root;
        for (const auto& name : branch) {
            auto it = std::find_if(at->children.begin(), at->children.end(),
                                   [&](const Characteristic& c) {
                                       return c.name == name;
                                   });
            if (it == at->children.end()) {
                Characteristic c;
                c.name = name;
                at->children.push_back(c);
                at = &at->children.back();
            } else {
                at = &*it;
            }
        }
    }
    ModelAttributes attrs = assessment_attrs(id);
    attrs.purpose = Purpose::Definition;
    return build_model(attrs, root);
}

} // namespace

TEST_CASE("structural distance worked examples") {
    QualityModel a = path_model("a", {{"a", "b"}, {"c"}}); // paths a, a/b, c
    QualityModel b = path_model("b", {{"a", "b"}, {"d"}}); // paths a, a/b, d
    CHECK(diversity::model_distance(a, a, diversity::DistanceMode::Structural) ==
          0.0);
    CHECK(diversity::model_distance(a, b, diversity::DistanceMode::Structural) ==
          doctest::Approx(0.5).epsilon(1e-12)); // 1 - 2/4

    QualityModel c = path_model("c", {{"x"}, {"y"}});
    CHECK(diversity::model_distance(a, c, diversity::DistanceMode::Structural) ==
          1.0);
}

TEST_CASE("distance is a semimetric (structural mode)") {
    std::mt19937 rng(41);
    std::vector<QualityModel> models;
    for (int i = 0; i < 6; ++i) models.push_back(qmtest::random_model(rng, 12));
    for (const auto& a : models) {
        for (const auto& b : models) {
            double dab =
                diversity::model_distance(a, b, diversity::DistanceMode::Structural);
            double dba =
                diversity::model_distance(b, a, diversity::DistanceMode::Structural);
            CHECK(dab == dba);
            CHECK(dab >= 0.0);
            CHECK(dab <= 1.0);
        }
        CHECK(diversity::model_distance(a, a,
                                        diversity::DistanceMode::Structural) ==
              0.0);
        CHECK(diversity::model_distance(
                  a, a, diversity::DistanceMode::Weighted) == 0.0);
    }
    // triangle inequality holds for Jaccard distance
    for (const auto& a : models)
        for (const auto& b : models)
            for (const auto& c : models) {
                auto d = [&](const QualityModel& x, const QualityModel& y) {
                    return diversity::model_distance(
                        x, y, diversity::DistanceMode::Structural);
                };
                CHECK(d(a, c) <= d(a, b) + d(b, c) + 1e-12);
            }
}

TEST_CASE("weighted distance reflects weight differences") {
    Characteristic root;
    root.name = "root";
    Characteristic a, b;
    a.name = "a";
    a.weight = 0.7;
    b.name = "b";
    b.weight = 0.3;
    root.children = {a, b};
    ModelAttributes attrs = assessment_attrs("wa");
    attrs.purpose = Purpose::Definition;
    QualityModel m1 = build_model(attrs, root);

    root.children[0].weight = 0.3;
    root.children[1].weight = 0.7;
    attrs.id = "wb";
    QualityModel m2 = build_model(attrs, root);

    CHECK(diversity::model_distance(m1, m2,
                                    diversity::DistanceMode::Structural) == 0.0);
    // |0.7-0.3| + |0.3-0.7| over union of 2 paths = 0.4
    CHECK(diversity::model_distance(m1, m2, diversity::DistanceMode::Weighted) ==
          doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("non-hierarchical models are rejected") {
    QualityModel a = path_model("a", {{"x"}});
    QualityModel b = a;
    b.organization = Organization::MetaModel;
    try {
        diversity::model_distance(a, b, diversity::DistanceMode::Structural);
        FAIL("expected UnsupportedOrganization");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnsupportedOrganization);
    }
}

TEST_CASE("polymorphism degree base cases") {
    QualityModel a = path_model("a", {{"a", "b"}, {"c"}});
    QualityModel b = path_model("b", {{"a", "b"}, {"d"}});

    SUBCASE("single member") {
        diversity::ModelPopulation pop;
        pop.members.push_back({"a#0", 1.0, a});
        CHECK(diversity::polymorphism_degree(
                  pop, diversity::DistanceMode::Structural) == 0.0);
    }
    SUBCASE("two members at half frequency") {
        double d =
            diversity::model_distance(a, b, diversity::DistanceMode::Structural);
        diversity::ModelPopulation pop;
        pop.members.push_back({"a#0", 0.5, a});
        pop.members.push_back({"b#1", 0.5, b});
        CHECK(diversity::polymorphism_degree(
                  pop, diversity::DistanceMode::Structural) ==
              doctest::Approx(0.5 * d).epsilon(1e-12));
    }
    SUBCASE("identical members give zero for any frequencies") {
        diversity::ModelPopulation pop;
        pop.members.push_back({"a#0", 0.2, a});
        pop.members.push_back({"a#1", 0.5, a});
        pop.members.push_back({"a#2", 0.3, a});
        CHECK(diversity::polymorphism_degree(
                  pop, diversity::DistanceMode::Structural) == 0.0);
    }
}

TEST_CASE("double-loop oracle and permutation invariance") {
    std::mt19937 rng(53);
    for (int iter = 0; iter < 20; ++iter) {
        std::uniform_int_distribution<int> size_dist(2, 5);
        int n = size_dist(rng);
        diversity::ModelPopulation pop;
        std::vector<double> freq(static_cast<size_t>(n));
        double total = 0;
        std::uniform_real_distribution<double> fd(0.1, 1.0);
        for (auto& f : freq) {
            f = fd(rng);
            total += f;
        }
        for (int i = 0; i < n; ++i)
            pop.members.push_back({"m#" + std::to_string(i), freq[size_t(i)] / total,
                                   qmtest::random_model(rng, 10)});

        double pi = diversity::polymorphism_degree(
            pop, diversity::DistanceMode::Structural);

        // explicit ordered double loop with d(i,i) = 0
        double oracle = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                oracle += pop.members[size_t(i)].frequency *
                          pop.members[size_t(j)].frequency *
                          diversity::model_distance(
                              pop.members[size_t(i)].model,
                              pop.members[size_t(j)].model,
                              diversity::DistanceMode::Structural);
            }
        CHECK(std::fabs(pi - oracle) <= 1e-12);
        CHECK(pi >= 0.0);
        CHECK(pi <= 1.0);

        diversity::ModelPopulation shuffled = pop;
        std::shuffle(shuffled.members.begin(), shuffled.members.end(), rng);
        CHECK(diversity::polymorphism_degree(
                  shuffled, diversity::DistanceMode::Structural) ==
              doctest::Approx(pi).epsilon(1e-12));
    }
}

TEST_CASE("two-member peak at uniform frequencies") {
    QualityModel a = path_model("a", {{"a", "b"}, {"c"}});
    QualityModel b = path_model("b", {{"x"}, {"y"}});
    double best = -1, best_x = 0;
    for (double x = 0.05; x <= 0.951; x += 0.05) {
        diversity::ModelPopulation pop;
        pop.members.push_back({"a#0", x, a});
        pop.members.push_back({"b#1", 1.0 - x, b});
        double pi = diversity::polymorphism_degree(
            pop, diversity::DistanceMode::Structural);
        if (pi > best) {
            best = pi;
            best_x = x;
        }
    }
    CHECK(best_x == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("population file loading") {
    auto pop = diversity::load_population(qmtest::fixture_path("population.txt"));
    REQUIRE(pop.members.size() == 2);
    CHECK(pop.members[0].frequency == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(pop.members[0].model.id == "ecu-door-control");
    double pi = diversity::polymorphism_degree(
        pop, diversity::DistanceMode::Structural);
    CHECK(pi > 0.0);
    CHECK(pi <= 1.0);
}
