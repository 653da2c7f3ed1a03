#include "causescope/errors.hpp"
#include "causescope/intervene.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace causescope;
using namespace causescope::testing;

TEST_CASE("verify_intervention uses strict inequality at theta") {
    CHECK_FALSE(verify_intervention("same text", "same text", 0.5));
    CHECK(verify_intervention("alpha beta", "gamma delta", 0.5));
    // Jaccard exactly 0.5 is not accepted
    CHECK(jaccard_similarity("sort the list", "sort the array") == doctest::Approx(0.5));
    CHECK_FALSE(verify_intervention("sort the list", "sort the array", 0.5));
}

TEST_CASE("catalog engine picks deterministically per seed") {
    CatalogEngine engine(std::map<FeatureId, std::vector<std::string>>{{"A", {"wrong one", "wrong two", "wrong three"}}});
    Problem p = simple_problem({"A"});
    std::string first = generate_intervention(engine, p, "A", p.baseline.at("A"), 11, 0.5);
    for (int i = 0; i < 20; ++i)
        CHECK(generate_intervention(engine, p, "A", p.baseline.at("A"), 11, 0.5) == first);
    std::string other = generate_intervention(engine, p, "A", p.baseline.at("A"), 12, 0.5);
    CHECK(verify_intervention(p.baseline.at("A"), other, 0.5));
}

TEST_CASE("catalog whose only candidate equals the original is rejected") {
    CatalogEngine engine(std::map<FeatureId, std::vector<std::string>>{{"A", {"the original value"}}});
    Problem p = simple_problem({"A"});
    CHECK_THROWS_AS(
        generate_intervention(engine, p, "A", "the original value", 1, 0.5),
        NoDistinctCandidate);
}

TEST_CASE("token-disjoint candidate is accepted (Jaccard 0 < 0.5)") {
    CatalogEngine engine(std::map<FeatureId, std::vector<std::string>>{{"A", {"use quicksort recursion depth"}}});
    Problem p = simple_problem({"A"});
    std::string got =
        generate_intervention(engine, p, "A", "sort ascending stable", 5, 0.5);
    CHECK(got == "use quicksort recursion depth");
}

TEST_CASE("catalog coverage check flags missing features") {
    CatalogEngine engine(std::map<FeatureId, std::vector<std::string>>{{"A", {"x"}}});
    CausalGraph g = chain_graph({"A", "B"});
    CHECK_THROWS_AS(engine.validate_covers(g), InvariantViolation);
}

TEST_CASE("template engine is a pure function of its inputs") {
    TemplateEngine engine;
    Problem p = simple_problem({"A"});
    std::string a = engine.candidate(p, "A", "orig", 7, 0);
    CHECK(engine.candidate(p, "A", "orig", 7, 0) == a);
    CHECK(engine.candidate(p, "A", "orig", 8, 0) != a);
    CHECK(engine.candidate(p, "A", "orig", 7, 1) != a);
    // single-token replacement: disjoint from any multi-word baseline
    CHECK(verify_intervention("some baseline text", a, 0.5));
}

TEST_CASE("remote engine delegates to its fetch callback") {
    RemoteEngine engine([](const Problem&, const FeatureId& f, const std::string&,
                           std::uint64_t seed) { return f + "#" + std::to_string(seed); });
    Problem p = simple_problem({"A"});
    CHECK(generate_intervention(engine, p, "A", "baseline words here", 3, 0.5) == "A#3");
}
