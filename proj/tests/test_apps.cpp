#include "causescope/apps.hpp"
#include "causescope/errors.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace causescope;
using namespace causescope::testing;

namespace {

ResponsibilityTable table_for(std::map<FeatureId, double> fr) {
    std::vector<ImportantFeatureSet> empty;
    std::vector<FeatureId> ids;
    for (const auto& [f, _] : fr) ids.push_back(f);
    ResponsibilityTable t = feature_responsibility(empty, ids);
    t.fr = fr;
    // rebuild ranking: descending FR, ties lexicographic
    t.ranking = ids;
    std::sort(t.ranking.begin(), t.ranking.end(), [&](const auto& a, const auto& b) {
        if (fr.at(a) != fr.at(b)) return fr.at(a) > fr.at(b);
        return a < b;
    });
    return t;
}

}  // namespace

TEST_CASE("pruning plan takes the bottom n of the ranking") {
    ResponsibilityTable t = table_for({{"A", 2.0}, {"B", 0.25}, {"C", 0.25}, {"D", 0.0}});
    PruningPlan plan = pruning_plan(t, 2);
    CHECK(plan.n == 2);
    CHECK(plan.disabled == std::vector<FeatureId>{"D", "C"});
    CHECK_THROWS_AS(pruning_plan(t, 0), NOutOfRange);
    CHECK_THROWS_AS(pruning_plan(t, 4), NOutOfRange);
}

TEST_CASE("evaluate_pruning reports pass-rate and token deltas") {
    // F1 baseline passes and spends 10+20+30+40 = 100 tokens; disabling D
    // removes its 40 tokens and cannot flip a passing run to fail.
    BenchmarkInstance inst;
    inst.spec = fixture_f1();
    inst.problem = simple_problem(fixture_f1().feature_ids, "f1");
    PruningPlan plan;
    plan.disabled = {"D"};
    plan.n = 1;
    PruningDeltas d = evaluate_pruning({inst}, plan);
    CHECK(d.delta_pass1 == doctest::Approx(0.0));
    CHECK(d.delta_tokens == doctest::Approx(0.4));
}

TEST_CASE("disabling every feature saves all tokens without failing the run") {
    BenchmarkInstance inst;
    inst.spec = fixture_f1();
    inst.problem = simple_problem(fixture_f1().feature_ids, "f1");
    PruningPlan plan;
    plan.disabled = {"A", "B", "C", "D"};
    plan.n = 4;
    PruningDeltas d = evaluate_pruning({inst}, plan);
    CHECK(d.delta_tokens == doctest::Approx(1.0));
    CHECK(d.delta_pass1 == doctest::Approx(0.0));
}

TEST_CASE("repair strategy names round-trip") {
    CHECK(repair_strategy_from_string("causality") == RepairStrategyKind::CausalityGuided);
    CHECK(repair_strategy_from_string("random") == RepairStrategyKind::RandomSelect);
    CHECK(repair_strategy_from_string("temporal") == RepairStrategyKind::TemporalFirst);
    CHECK(repair_strategy_from_string("length") == RepairStrategyKind::LengthBased);
    CHECK_THROWS_AS(repair_strategy_from_string("psychic"), ParseError);
    for (auto kind : {RepairStrategyKind::CausalityGuided, RepairStrategyKind::RandomSelect,
                      RepairStrategyKind::TemporalFirst, RepairStrategyKind::LengthBased})
        CHECK(repair_strategy_from_string(repair_strategy_to_string(kind)) == kind);
}

TEST_CASE("repair priorities per strategy") {
    ResponsibilityTable t = table_for({{"A", 2.0}, {"B", 1.0}, {"C", 0.5}, {"D", 0.1}});
    FailureContext ctx;
    ctx.stage_index = {{"A", 3}, {"B", 0}, {"C", 2}, {"D", 1}};
    ctx.observed = {{"A", "one"}, {"B", "one two three"}, {"C", "one two"}, {"D", ""}};

    SUBCASE("causality-guided takes the top of the FR ranking") {
        CHECK(repair_priorities(t, {RepairStrategyKind::CausalityGuided, 0}, 2, ctx) ==
              std::vector<FeatureId>{"A", "B"});
    }
    SUBCASE("temporal-first takes the earliest stages") {
        CHECK(repair_priorities(t, {RepairStrategyKind::TemporalFirst, 0}, 2, ctx) ==
              std::vector<FeatureId>{"B", "D"});
    }
    SUBCASE("length-based takes the longest observed values") {
        CHECK(repair_priorities(t, {RepairStrategyKind::LengthBased, 0}, 2, ctx) ==
              std::vector<FeatureId>{"B", "C"});
    }
    SUBCASE("random is seed-reproducible and a valid selection") {
        auto a = repair_priorities(t, {RepairStrategyKind::RandomSelect, 9}, 2, ctx);
        auto b = repair_priorities(t, {RepairStrategyKind::RandomSelect, 9}, 2, ctx);
        CHECK(a == b);
        CHECK(a.size() == 2);
        for (const auto& f : a) CHECK(t.fr.count(f) == 1);
    }
}

TEST_CASE("evaluate_repair counts outcome flips") {
    // F2: {A} alone fails; restoring A fixes it. {B,C} fails; restoring only
    // D does not.
    auto sut = build_sim(fixture_f2());
    Problem p = simple_problem(fixture_f2().feature_ids, "f2");

    FailingInstance easy{sut, p, intervention_on({"A"})};
    FailingInstance hard{sut, p, intervention_on({"B", "C"})};

    RepairOutcome fix_a = evaluate_repair({easy, hard}, {"A"});
    CHECK(fix_a.total == 2);
    CHECK(fix_a.fixed == 1);
    CHECK(fix_a.fix_rate == doctest::Approx(0.5));

    RepairOutcome fix_ab = evaluate_repair({easy, hard}, {"A", "B"});
    CHECK(fix_ab.fixed == 2);
    CHECK(fix_ab.fix_rate == doctest::Approx(1.0));

    RepairOutcome fix_d = evaluate_repair({easy, hard}, {"D"});
    CHECK(fix_d.fixed == 0);
}
