#include "causescope/errors.hpp"
#include "causescope/influence.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace causescope;
using namespace causescope::testing;

TEST_CASE("jaccard similarity basics") {
    CHECK(jaccard_similarity("abc def", "abc def") == 1.0);
    CHECK(jaccard_similarity("abc", "xyz") == 0.0);
    CHECK(jaccard_similarity("sort the list", "sort the array") == doctest::Approx(0.5));
    CHECK(jaccard_similarity("", "") == 1.0);
    CHECK(jaccard_similarity("x", "") == 0.0);
    CHECK(jaccard_similarity("ABC def", "abc DEF") == 1.0);  // case folded
}

TEST_CASE("similarity is symmetric") {
    const char* samples[] = {"", "a", "a b", "a b c", "x y z"};
    for (const char* a : samples)
        for (const char* b : samples) CHECK(jaccard_similarity(a, b) == jaccard_similarity(b, a));
}

TEST_CASE("edit-ratio similarity") {
    CHECK(edit_ratio_similarity("abc", "abc") == 1.0);
    CHECK(edit_ratio_similarity("abc", "abd") == doctest::Approx(2.0 / 3.0));
    CHECK(edit_ratio_similarity("", "") == 1.0);
    CHECK(edit_ratio_similarity("ab", "") == 0.0);
}

TEST_CASE("similarity_by_name resolves metrics") {
    CHECK(similarity_by_name("jaccard")("abc", "abc") == 1.0);
    CHECK(similarity_by_name("edit-ratio")("abc", "abc") == 1.0);
    CHECK_THROWS_AS(similarity_by_name("cosine"), ParseError);
}

namespace {

ExecutionRecord record_with(const Problem& p, std::map<FeatureId, std::string> observed,
                            Outcome outcome = Outcome::pass()) {
    ExecutionRecord rec;
    rec.problem_id = p.id;
    rec.outcome = outcome;
    rec.observed = std::move(observed);
    return rec;
}

}  // namespace

TEST_CASE("influence_set is empty when nothing drifted") {
    Problem p = simple_problem({"A", "B", "C"});
    ExecutionRecord base = record_with(p, p.baseline);
    ExecutionRecord same = record_with(p, p.baseline);
    CHECK(influence_set(base, same, Combination{"A"}, 0.5).empty());
}

TEST_CASE("influence_set requires a Pass outcome") {
    Problem p = simple_problem({"A"});
    ExecutionRecord base = record_with(p, p.baseline);
    ExecutionRecord failed = record_with(p, p.baseline, Outcome::fail());
    CHECK_THROWS_AS(influence_set(base, failed, Combination{"A"}, 0.5), OutcomeNotPass);
}

TEST_CASE("influence sets on simulator fixtures equal closure minus members") {
    Problem p1 = simple_problem({"A", "B", "C", "D"});
    SimulatorSut f1(fixture_f1());
    ExecutionRecord base = f1.execute(p1, {}, 0);
    ExecutionRecord c_run = f1.execute(p1, intervention_on({"C"}), 0);
    CHECK(influence_set(base, c_run, Combination{"C"}, 0.5).empty());

    Problem p3 = simple_problem({"A", "B", "C", "D", "E"});
    SimulatorSut f3(fixture_f3());
    ExecutionRecord base3 = f3.execute(p3, {}, 0);
    ExecutionRecord ab = f3.execute(p3, intervention_on({"A", "B"}), 0);
    REQUIRE(ab.outcome.is_pass());
    CHECK(influence_set(base3, ab, Combination{"A", "B"}, 0.5) ==
          std::set<FeatureId>{"C", "D"});
}

TEST_CASE("a feature the run failed to produce counts as influenced") {
    Problem p = simple_problem({"A", "B"});
    ExecutionRecord base = record_with(p, p.baseline);
    ExecutionRecord gone = record_with(p, {{"A", p.baseline.at("A")}, {"B", ""}});
    CHECK(influence_set(base, gone, Combination{"A"}, 0.5) == std::set<FeatureId>{"B"});
}

TEST_CASE("unchanged absence is not a change") {
    Problem p = simple_problem({"A"});
    p.baseline["B"] = "";
    ExecutionRecord base = record_with(p, p.baseline);
    ExecutionRecord same = record_with(p, p.baseline);
    CHECK(influence_set(base, same, Combination{"A"}, 0.5).empty());
}

TEST_CASE("collective influence: empty cache yields the empty set") {
    InfluenceCache cache;
    CHECK(collective_influence(Combination{"A", "B"}, cache).empty());
}

TEST_CASE("collective influence unions cached subsets then excludes members") {
    InfluenceCache cache;
    cache.put(Combination{"B"}, {"C", "D"});
    cache.put(Combination{"A"}, {"B"});
    CHECK(collective_influence(Combination{"A", "B"}, cache) == std::set<FeatureId>{"C", "D"});
}

TEST_CASE("collective influence union is idempotent") {
    InfluenceCache cache;
    cache.put(Combination{"A"}, {"B"});
    cache.put(Combination{"C"}, {"B"});
    CHECK(collective_influence(Combination{"A", "C"}, cache) == std::set<FeatureId>{"B"});
}

TEST_CASE("collective influence grows monotonically with the cache") {
    InfluenceCache cache;
    cache.put(Combination{"A"}, {"X"});
    auto before = collective_influence(Combination{"A", "B"}, cache);
    cache.put(Combination{"B"}, {"Y", "Z"});
    auto after = collective_influence(Combination{"A", "B"}, cache);
    for (const auto& f : before) CHECK(after.count(f) == 1);
    CHECK(after.size() >= before.size());
}

TEST_CASE("cache entries never contain their own key members") {
    InfluenceCache cache;
    cache.put(Combination{"A", "B"}, {"A", "C"});
    CHECK(*cache.find(Combination{"A", "B"}) == std::set<FeatureId>{"C"});
}
