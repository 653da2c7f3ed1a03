#include "causescope/apps.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "causescope/errors.hpp"

namespace causescope {

PruningPlan pruning_plan(const ResponsibilityTable& table, std::size_t n) {
    if (n < 1 || n >= table.fr.size())
        throw NOutOfRange("pruning n must satisfy 1 <= n < feature count");
    std::vector<FeatureId> order = table.ranking;  // descending FR, ties lexicographic
    PruningPlan plan;
    plan.n = n;
    for (std::size_t i = 0; i < n; ++i) plan.disabled.push_back(order[order.size() - 1 - i]);
    return plan;
}

PruningDeltas evaluate_pruning(const std::vector<BenchmarkInstance>& instances,
                               const PruningPlan& plan) {
    if (instances.empty()) throw ZeroBaseline("no instances to evaluate");
    std::set<FeatureId> disabled(plan.disabled.begin(), plan.disabled.end());

    std::size_t pass_original = 0, pass_pruned = 0;
    std::uint64_t tokens_original = 0, tokens_pruned = 0;
    for (const BenchmarkInstance& inst : instances) {
        SimulatorSut original(inst.spec);
        auto pruned = original.with_disabled(disabled);
        ExecutionRecord base = original.execute(inst.problem, {}, inst.spec.seed);
        ExecutionRecord cut = pruned->execute(inst.problem, {}, inst.spec.seed);
        pass_original += base.outcome.is_pass() ? 1 : 0;
        pass_pruned += cut.outcome.is_pass() ? 1 : 0;
        tokens_original += base.tokens;
        tokens_pruned += cut.tokens;
    }
    if (pass_original == 0 || tokens_original == 0)
        throw ZeroBaseline("original Pass@1 and tokens must both be positive");

    PruningDeltas deltas;
    deltas.delta_pass1 = (static_cast<double>(pass_pruned) - static_cast<double>(pass_original)) /
                         static_cast<double>(pass_original);
    deltas.delta_tokens =
        (static_cast<double>(tokens_original) - static_cast<double>(tokens_pruned)) /
        static_cast<double>(tokens_original);
    return deltas;
}

RepairStrategyKind repair_strategy_from_string(const std::string& name) {
    if (name == "causality") return RepairStrategyKind::CausalityGuided;
    if (name == "random") return RepairStrategyKind::RandomSelect;
    if (name == "temporal") return RepairStrategyKind::TemporalFirst;
    if (name == "length") return RepairStrategyKind::LengthBased;
    throw ParseError("unknown repair strategy: " + name);
}

std::string repair_strategy_to_string(RepairStrategyKind kind) {
    switch (kind) {
        case RepairStrategyKind::CausalityGuided: return "causality";
        case RepairStrategyKind::RandomSelect: return "random";
        case RepairStrategyKind::TemporalFirst: return "temporal";
        case RepairStrategyKind::LengthBased: return "length";
    }
    return "causality";
}

namespace {

std::size_t token_count(const std::string& text) {
    std::istringstream ss(text);
    std::string tok;
    std::size_t count = 0;
    while (ss >> tok) ++count;
    return count;
}

}  // namespace

std::vector<FeatureId> repair_priorities(const ResponsibilityTable& table,
                                         const RepairStrategy& strategy, std::size_t n,
                                         const FailureContext& context) {
    if (n > table.fr.size()) throw NOutOfRange("repair n exceeds feature count");
    std::vector<FeatureId> out;
    switch (strategy.kind) {
        case RepairStrategyKind::CausalityGuided: {
            for (std::size_t i = 0; i < n; ++i) out.push_back(table.ranking[i]);
            break;
        }
        case RepairStrategyKind::RandomSelect: {
            std::vector<FeatureId> pool;
            for (const auto& [f, unused] : table.fr) {
                (void)unused;
                pool.push_back(f);
            }
            std::mt19937_64 rng(strategy.seed);
            std::shuffle(pool.begin(), pool.end(), rng);
            pool.resize(n);
            out = std::move(pool);
            break;
        }
        case RepairStrategyKind::TemporalFirst: {
            if (context.stage_index.empty())
                throw MissingContext("temporal-first repair needs stage indexes");
            std::vector<FeatureId> pool;
            for (const auto& [f, unused] : context.stage_index) {
                (void)unused;
                pool.push_back(f);
            }
            std::sort(pool.begin(), pool.end(), [&](const FeatureId& a, const FeatureId& b) {
                int sa = context.stage_index.at(a), sb = context.stage_index.at(b);
                if (sa != sb) return sa < sb;
                return a < b;
            });
            pool.resize(std::min(n, pool.size()));
            out = std::move(pool);
            break;
        }
        case RepairStrategyKind::LengthBased: {
            if (context.observed.empty())
                throw MissingContext("length-based repair needs observed output values");
            std::vector<FeatureId> pool;
            for (const auto& [f, unused] : context.observed) {
                (void)unused;
                pool.push_back(f);
            }
            std::sort(pool.begin(), pool.end(), [&](const FeatureId& a, const FeatureId& b) {
                std::size_t la = token_count(context.observed.at(a));
                std::size_t lb = token_count(context.observed.at(b));
                if (la != lb) return la > lb;
                return a < b;
            });
            pool.resize(std::min(n, pool.size()));
            out = std::move(pool);
            break;
        }
    }
    return out;
}

RepairOutcome evaluate_repair(const std::vector<FailingInstance>& instances,
                              const std::vector<FeatureId>& priorities) {
    RepairOutcome outcome;
    outcome.total = instances.size();
    for (const FailingInstance& inst : instances) {
        std::map<FeatureId, std::string> restored = inst.corrupting_intervention;
        for (const auto& f : priorities) restored.erase(f);
        ExecutionRecord rec = inst.sut->execute(inst.problem, restored, 0);
        if (rec.outcome.is_pass()) outcome.fixed++;
    }
    outcome.fix_rate = instances.empty()
                           ? 0.0
                           : static_cast<double>(outcome.fixed) / static_cast<double>(outcome.total);
    return outcome;
}

}  // namespace causescope
