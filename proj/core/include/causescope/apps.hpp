#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "causescope/aggregate.hpp"
#include "causescope/execution.hpp"
#include "causescope/model.hpp"

namespace causescope {

struct PruningPlan {
    std::vector<FeatureId> disabled;  // lowest-FR first
    std::size_t n = 0;
};

/// Bottom-n FR features; among tied scores the lexicographically later
/// feature is pruned first (mirror of the ranking's tie order).
PruningPlan pruning_plan(const ResponsibilityTable& table, std::size_t n);

struct PruningDeltas {
    double delta_pass1 = 0.0;   // (pruned - original) / original
    double delta_tokens = 0.0;  // (original - pruned) / original
};

/// Runs every instance once with and without the plan's features suppressed.
PruningDeltas evaluate_pruning(const std::vector<BenchmarkInstance>& instances,
                               const PruningPlan& plan);

enum class RepairStrategyKind { CausalityGuided, RandomSelect, TemporalFirst, LengthBased };

struct RepairStrategy {
    RepairStrategyKind kind = RepairStrategyKind::CausalityGuided;
    std::uint64_t seed = 0;  // RandomSelect only
};

RepairStrategyKind repair_strategy_from_string(const std::string& name);
std::string repair_strategy_to_string(RepairStrategyKind kind);

struct FailureContext {
    std::map<FeatureId, int> stage_index;        // TemporalFirst
    std::map<FeatureId, std::string> observed;   // LengthBased: token count of the value
};

std::vector<FeatureId> repair_priorities(const ResponsibilityTable& table,
                                         const RepairStrategy& strategy, std::size_t n,
                                         const FailureContext& context);

struct FailingInstance {
    std::shared_ptr<Sut> sut;
    Problem problem;
    std::map<FeatureId, std::string> corrupting_intervention;
};

struct RepairOutcome {
    double fix_rate = 0.0;
    std::size_t fixed = 0;
    std::size_t total = 0;
};

/// Restores the prioritized features to baseline on each failing instance and
/// re-executes; an instance is fixed when the outcome flips to Pass.
RepairOutcome evaluate_repair(const std::vector<FailingInstance>& instances,
                              const std::vector<FeatureId>& priorities);

}  // namespace causescope
