#include <cmath>

#include "causescope/aggregate.hpp"
#include "causescope/errors.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace causescope;
using namespace causescope::testing;

namespace {

ImportantFeatureSet make_set(std::initializer_list<Combination> combos) {
    ImportantFeatureSet set;
    for (const auto& c : combos) set = insert_minimal(set, c).set;
    return set;
}

}  // namespace

TEST_CASE("degree of responsibility is the reciprocal of the set size") {
    CHECK(degree_of_responsibility(Combination{"A"}, "A") == doctest::Approx(1.0));
    CHECK(degree_of_responsibility(Combination{"A", "B"}, "A") == doctest::Approx(0.5));
    CHECK(degree_of_responsibility(Combination{"A", "B", "C"}, "C") ==
          doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(degree_of_responsibility(Combination{"A", "B"}, "Z"), NotAMember);
}

TEST_CASE("feature responsibility sums squared reciprocal shares across problems") {
    // problem 1: {A}, {B,C}; problem 2: {A,B}
    std::vector<ImportantFeatureSet> results = {
        make_set({Combination{"A"}, Combination{"B", "C"}}),
        make_set({Combination{"A", "B"}}),
    };
    ResponsibilityTable t = feature_responsibility(results, {"A", "B", "C", "D"});
    CHECK(t.fr.at("A") == doctest::Approx(1.0 + 0.25));
    CHECK(t.fr.at("B") == doctest::Approx(0.25 + 0.25));
    CHECK(t.fr.at("C") == doctest::Approx(0.25));
    CHECK(t.fr.at("D") == doctest::Approx(0.0));
    CHECK(t.ranking == std::vector<FeatureId>{"A", "B", "C", "D"});
    CHECK(t.normalized_fr.at("A") == doctest::Approx(1.0));
    CHECK(t.normalized_fr.at("B") == doctest::Approx(0.5 / 1.25));
    // each combination carries total mass 1/|S|: {A} gives 1.0 at length 1,
    // {B,C} and {A,B} give 0.5 each at length 2 -> an even 50/50 split
    CHECK(t.by_length_contribution.at(1) == doctest::Approx(50.0));
    CHECK(t.by_length_contribution.at(2) == doctest::Approx(50.0));
}

TEST_CASE("FR ties rank lexicographically") {
    std::vector<ImportantFeatureSet> results = {make_set({Combination{"B", "D"}})};
    ResponsibilityTable t = feature_responsibility(results, {"A", "B", "C", "D"});
    CHECK(t.ranking == std::vector<FeatureId>{"B", "D", "A", "C"});
}

TEST_CASE("all-zero table normalizes to zero without dividing by zero") {
    ResponsibilityTable t = feature_responsibility({}, {"A", "B"});
    CHECK(t.normalized_fr.at("A") == doctest::Approx(0.0));
    CHECK(t.normalized_fr.at("B") == doctest::Approx(0.0));
    CHECK(fr_std(t) == doctest::Approx(0.0));
}

TEST_CASE("kendall tau on score maps") {
    std::map<FeatureId, double> a = {{"x", 3.0}, {"y", 2.0}, {"z", 1.0}};
    SUBCASE("identical ordering is 1") {
        CHECK(kendall_tau(a, a) == doctest::Approx(1.0));
    }
    SUBCASE("full reversal is -1") {
        std::map<FeatureId, double> b = {{"x", 1.0}, {"y", 2.0}, {"z", 3.0}};
        CHECK(kendall_tau(a, b) == doctest::Approx(-1.0));
    }
    SUBCASE("one swapped pair of three gives 1/3") {
        std::map<FeatureId, double> b = {{"x", 3.0}, {"y", 1.0}, {"z", 2.0}};
        CHECK(kendall_tau(a, b) == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("ties are handled tau-b style") {
        std::map<FeatureId, double> b = {{"x", 2.0}, {"y", 2.0}, {"z", 1.0}};
        // concordant: (x,z),(y,z) = 2; (x,y) tied in b only
        // tau-b = 2 / sqrt(3 * 2)
        CHECK(kendall_tau(a, b) == doctest::Approx(2.0 / std::sqrt(6.0)));
    }
    SUBCASE("mismatched id sets are rejected") {
        std::map<FeatureId, double> b = {{"x", 1.0}, {"y", 2.0}};
        CHECK_THROWS_AS(kendall_tau(a, b), MismatchedIdSets);
    }
}

TEST_CASE("kendall tau on rank lists agrees with the score-map form") {
    std::vector<FeatureId> a = {"x", "y", "z", "w"};
    std::vector<FeatureId> b = {"x", "z", "y", "w"};
    // C(4,2) = 6 pairs, one discordant: (5 - 1) / 6 = 2/3
    CHECK(kendall_tau(a, b) == doctest::Approx(2.0 / 3.0));
    CHECK(kendall_tau(a, a) == doctest::Approx(1.0));
    std::vector<FeatureId> rev(a.rbegin(), a.rend());
    CHECK(kendall_tau(a, rev) == doctest::Approx(-1.0));
}

TEST_CASE("fr_std with max and sum normalization") {
    std::vector<ImportantFeatureSet> results = {
        make_set({Combination{"A"}, Combination{"B", "C"}})};
    ResponsibilityTable t = feature_responsibility(results, {"A", "B", "C"});
    // fr: A=1, B=.25, C=.25 -> max-normalized {1, .25, .25}
    double mean = (1.0 + 0.25 + 0.25) / 3.0;
    double var = ((1.0 - mean) * (1.0 - mean) + 2 * (0.25 - mean) * (0.25 - mean)) / 3.0;
    CHECK(fr_std(t, FrNormalization::Max) == doctest::Approx(std::sqrt(var)));
    // sum-normalized {1/1.5, .25/1.5, .25/1.5}
    double sm = 1.0 / 3.0;
    double sv = ((1.0 / 1.5 - sm) * (1.0 / 1.5 - sm) +
                 2 * (0.25 / 1.5 - sm) * (0.25 / 1.5 - sm)) /
                3.0;
    CHECK(fr_std(t, FrNormalization::Sum) == doctest::Approx(std::sqrt(sv)));
}

TEST_CASE("length contribution apportions 1/|S| mass per combination") {
    std::vector<ImportantFeatureSet> results = {
        make_set({Combination{"A"}, Combination{"B", "C"}}),
        make_set({Combination{"D", "E", "F"}}),
    };
    auto lc = length_contribution(results);
    // mass: len1 = 1, len2 = 0.5, len3 = 1/3; total = 11/6
    double total = 1.0 + 0.5 + 1.0 / 3.0;
    CHECK(lc.at(1) == doctest::Approx(100.0 * 1.0 / total));
    CHECK(lc.at(2) == doctest::Approx(100.0 * 0.5 / total));
    CHECK(lc.at(3) == doctest::Approx(100.0 * (1.0 / 3.0) / total));
}

TEST_CASE("topk_appearance counts how often a feature ranks in the top k") {
    ResponsibilityTable t1;
    t1.ranking = {"A", "B", "C"};
    ResponsibilityTable t2;
    t2.ranking = {"B", "C", "A"};
    auto counts = topk_appearance({t1, t2}, 2);
    CHECK(counts.at("A") == 1);
    CHECK(counts.at("B") == 2);
    CHECK(counts.at("C") == 1);
}
