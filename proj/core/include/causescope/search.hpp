#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causescope/execution.hpp"
#include "causescope/influence.hpp"
#include "causescope/intervene.hpp"
#include "causescope/model.hpp"

namespace causescope {

struct SearchStats {
    std::uint64_t executions_used = 0;
    std::uint64_t pruned_by_minimality = 0;
    std::uint64_t pruned_by_influence = 0;
    std::uint64_t early_stops = 0;  // lengths abandoned by the patience rule
    std::map<std::size_t, std::uint64_t> combos_tested_per_length;
};

struct ProblemResult {
    std::string problem_id;
    ImportantFeatureSet important_sets;
    std::vector<Combination> unverifiable;  // failed but budget died mid-minimality-check
    SearchStats stats;
    // Every combination removed by the influence-set rule, kept so pruning
    // soundness can be audited against the oracle.
    std::vector<Combination> influence_pruned;
    std::string source = "search";
};

/// Charges one budget unit per SUT call and refuses calls past N.
class BudgetTracker {
public:
    BudgetTracker(std::uint64_t limit) : limit_(limit) {}
    bool exhausted() const { return used_ >= limit_; }
    std::uint64_t used() const { return used_; }
    std::uint64_t limit() const { return limit_; }
    void charge() { ++used_; }

private:
    std::uint64_t used_ = 0;
    std::uint64_t limit_;
};

enum class MinimalCheck { Minimal, NotMinimal, Unverifiable };

/// Shared execution state for one problem's search: executed outcomes,
/// influence cache, and the per-feature replacement values.
class SearchContext {
public:
    SearchContext(Sut& sut, const CausalGraph& graph, const AnalysisConfig& config,
                  InterventionEngine& engine, const Problem& problem,
                  SimilarityFn sim = jaccard_similarity);

    /// Runs the empty intervention and checks AC1. Not charged against N.
    void verify_baseline();

    /// Executes S's intervention, charging one unit (two on a retried
    /// ExecError). nullopt when the budget is exhausted before the call.
    std::optional<ExecutionRecord> execute_combination(const Combination& s);

    const std::map<Combination, OutcomeKind>& result_cache() const { return results_; }
    InfluenceCache& influence_cache() { return cache_; }
    const ExecutionRecord& baseline_record() const { return baseline_; }
    BudgetTracker& budget() { return budget_; }
    const AnalysisConfig& config() const { return config_; }
    const CausalGraph& graph() const { return graph_; }
    const Problem& problem() const { return problem_; }

    void record_outcome(const Combination& s, OutcomeKind kind) { results_[s] = kind; }
    void cache_influence(const Combination& s, const ExecutionRecord& rec);

    const std::string& replacement_for(const FeatureId& f);

private:
    Sut& sut_;
    const CausalGraph& graph_;
    AnalysisConfig config_;
    InterventionEngine& engine_;
    const Problem& problem_;
    SimilarityFn sim_;
    BudgetTracker budget_;
    ExecutionRecord baseline_;
    InfluenceCache cache_;
    std::map<Combination, OutcomeKind> results_;
    std::map<FeatureId, std::string> replacements_;
};

/// Argmax of |Ê(S)| over the candidates, ties broken by canonical order.
Combination select_candidate(const std::vector<Combination>& candidates,
                             const InfluenceCache& cache);

/// True iff every (|S|-1)-subset is known or verified non-failure-inducing.
/// Uncached subsets are executed and charged; exhaustion mid-check yields
/// Unverifiable.
MinimalCheck check_minimal(const Combination& s, SearchContext& ctx);

/// The budgeted greedy search for one problem's important feature set.
ProblemResult analyze_problem(Sut& sut, const CausalGraph& graph, const AnalysisConfig& config,
                              InterventionEngine& engine, const Problem& problem,
                              SimilarityFn sim = jaccard_similarity);

std::string result_to_json(const ProblemResult& result);
ProblemResult result_from_json(const std::string& text);

}  // namespace causescope
