#include <algorithm>

#include "causescope/errors.hpp"
#include "causescope/oracle.hpp"
#include "causescope/search.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace causescope;
using namespace causescope::testing;

namespace {

AnalysisConfig unbounded_config(std::size_t max_length = 5) {
    AnalysisConfig cfg;
    cfg.budget = 1'000'000;
    cfg.max_length = max_length;
    cfg.patience = 1'000'000;
    cfg.seed = 42;
    return cfg;
}

ProblemResult run_search(const SimPipelineSpec& spec, const AnalysisConfig& cfg) {
    auto sut = build_sim(spec);
    CausalGraph graph = graph_for(spec);
    Problem problem = simple_problem(spec.feature_ids);
    TemplateEngine engine;
    return analyze_problem(*sut, graph, cfg, engine, problem);
}

bool has_combo(const ProblemResult& r, const Combination& c) {
    return r.important_sets.contains(c);
}

}  // namespace

TEST_CASE("select_candidate takes the largest collective influence set") {
    InfluenceCache cache;
    // E({A}) = {B,C}, E({B}) = {C}, E({D}) = {} -> Ê({A,D}) = {B,C}, Ê({A,B}) = {C}
    cache.put(Combination{"A"}, {"B", "C"});
    cache.put(Combination{"B"}, {"C"});
    cache.put(Combination{"D"}, {});
    Combination picked =
        select_candidate({Combination{"A", "B"}, Combination{"A", "D"}}, cache);
    CHECK(picked == Combination{"A", "D"});
}

TEST_CASE("select_candidate breaks ties in canonical order") {
    InfluenceCache cache;  // all scores zero
    Combination picked = select_candidate(
        {Combination{"B", "C"}, Combination{"A", "D"}, Combination{"A", "C"}}, cache);
    CHECK(picked == Combination{"A", "C"});
}

TEST_CASE("select_candidate on no candidates throws") {
    InfluenceCache cache;
    CHECK_THROWS_AS(select_candidate({}, cache), EmptyCandidates);
}

TEST_CASE("search on F1 finds exactly the three singleton causes") {
    ProblemResult r = run_search(fixture_f1(), unbounded_config());
    CHECK(r.important_sets.size() == 3);
    CHECK(has_combo(r, Combination{"A"}));
    CHECK(has_combo(r, Combination{"B"}));
    CHECK(has_combo(r, Combination{"D"}));
    CHECK(r.unverifiable.empty());
    // all multi-feature supersets of found singletons get minimality-pruned
    CHECK(r.stats.pruned_by_minimality > 0);
}

TEST_CASE("search on F2 finds {A} and {B,C}") {
    ProblemResult r = run_search(fixture_f2(), unbounded_config());
    CHECK(r.important_sets.size() == 2);
    CHECK(has_combo(r, Combination{"A"}));
    CHECK(has_combo(r, Combination{"B", "C"}));
}

TEST_CASE("search on F3 finds {A,E} and {D,E} with influence pruning active") {
    ProblemResult r = run_search(fixture_f3(), unbounded_config());
    CHECK(r.important_sets.size() == 2);
    CHECK(has_combo(r, Combination{"A", "E"}));
    CHECK(has_combo(r, Combination{"D", "E"}));
    // the passing run on {A} drifts B,C,D, so some length-2 combos drop out
    CHECK(r.stats.pruned_by_influence > 0);
    // pruning soundness: anything removed either passes when executed or is a
    // strict superset of a reported member (hence not minimal)
    auto sut = build_sim(fixture_f3());
    for (const auto& pruned : r.influence_pruned) {
        if (r.important_sets.dominates(pruned)) continue;
        auto rec = sut->execute(simple_problem(fixture_f3().feature_ids),
                                intervention_on(pruned.members()), 0);
        CHECK(rec.outcome.is_pass());
    }
}

TEST_CASE("reported sets form an antichain of true failure-inducing minima") {
    for (const auto& spec : {fixture_f1(), fixture_f2(), fixture_f3()}) {
        ProblemResult r = run_search(spec, unbounded_config());
        CHECK(r.important_sets.is_antichain());
        auto sut = build_sim(spec);
        Problem p = simple_problem(spec.feature_ids);
        for (const auto& combo : r.important_sets.combinations()) {
            auto rec = sut->execute(p, intervention_on(combo.members()), 0);
            CHECK(rec.outcome.is_fail());
            // every strict (|S|-1)-subset must pass
            for (std::size_t skip = 0; skip < combo.members().size(); ++skip) {
                std::vector<FeatureId> sub = combo.members();
                sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(skip));
                if (sub.empty()) continue;
                auto sub_rec = sut->execute(p, intervention_on(sub), 0);
                CHECK(sub_rec.outcome.is_pass());
            }
        }
    }
}

TEST_CASE("unbounded search matches the brute-force oracle") {
    auto instances = generate_benchmark(7, 8, 12, CauseProfile{1, 3, 1, 3});
    for (const auto& inst : instances) {
        auto sut = build_sim(inst.spec);
        CausalGraph graph = graph_for(inst.spec);
        TemplateEngine engine;
        ProblemResult r =
            analyze_problem(*sut, graph, unbounded_config(), engine, inst.problem);
        ImportantFeatureSet truth = enumerate_minimal_causes(*sut, graph, 5, inst.problem);
        VerifyReport rep = verify_result(r.important_sets, truth);
        CHECK(rep.precision == doctest::Approx(1.0));
        CHECK(rep.recall == doctest::Approx(1.0));
        CHECK(rep.minimality_violations == 0);
    }
}

TEST_CASE("budget is a hard ceiling on executions") {
    AnalysisConfig cfg;
    cfg.budget = 6;  // just above the 5 nodes of F3
    cfg.max_length = 5;
    cfg.patience = 10;
    ProblemResult r = run_search(fixture_f3(), cfg);
    CHECK(r.stats.executions_used <= cfg.budget);
}

TEST_CASE("budget below the feature count is rejected up front") {
    AnalysisConfig cfg;
    cfg.budget = 3;  // F1 has 4 features
    auto spec = fixture_f1();
    CHECK_THROWS_AS(run_search(spec, cfg), BudgetTooSmall);
}

TEST_CASE("combinations cut off mid-minimality-check surface as unverifiable") {
    // F2 needs the 4 singletons (all charged) plus pair work; a tight budget
    // lands mid-check for {B,C}'s subsets at some point. We only assert the
    // invariant: unverifiable combos did Fail but were never reported minimal.
    for (std::uint64_t n = 4; n <= 12; ++n) {
        AnalysisConfig cfg;
        cfg.budget = n;
        ProblemResult r = run_search(fixture_f2(), cfg);
        for (const auto& u : r.unverifiable) CHECK_FALSE(r.important_sets.contains(u));
        CHECK(r.stats.executions_used <= n);
    }
}

TEST_CASE("a failing baseline aborts the analysis") {
    struct AlwaysFail : Sut {
        ExecutionRecord execute(const Problem& problem, const std::map<FeatureId, std::string>&,
                                std::uint64_t) override {
            ExecutionRecord rec;
            rec.problem_id = problem.id;
            rec.outcome = Outcome::fail();
            return rec;
        }
        bool deterministic() const override { return true; }
    } sut;
    CausalGraph graph = graph_for(fixture_f1());
    TemplateEngine engine;
    Problem p = simple_problem(fixture_f1().feature_ids);
    CHECK_THROWS_AS(analyze_problem(sut, graph, unbounded_config(), engine, p), BaselineFails);
}

TEST_CASE("identical seeds give byte-identical results") {
    AnalysisConfig cfg = unbounded_config();
    ProblemResult a = run_search(fixture_f3(), cfg);
    ProblemResult b = run_search(fixture_f3(), cfg);
    CHECK(result_to_json(a) == result_to_json(b));
}

TEST_CASE("result JSON round-trips") {
    ProblemResult r = run_search(fixture_f1(), unbounded_config());
    ProblemResult back = result_from_json(result_to_json(r));
    CHECK(back.problem_id == r.problem_id);
    CHECK(back.important_sets.combinations() == r.important_sets.combinations());
    CHECK(back.stats.executions_used == r.stats.executions_used);
    CHECK(back.source == r.source);
}

TEST_CASE("patience abandons barren lengths and is recorded") {
    // F2 with patience 1: after the pair {B,C} is found, later pairs that
    // pass trip the patience rule quickly.
    AnalysisConfig cfg = unbounded_config();
    cfg.patience = 1;
    ProblemResult r = run_search(fixture_f2(), cfg);
    CHECK(r.stats.early_stops > 0);
    // {A} is still found in the singleton scan regardless of patience
    CHECK(has_combo(r, Combination{"A"}));
}
