#pragma once

#include <map>
#include <set>
#include <string>

#include "causescope/execution.hpp"
#include "causescope/model.hpp"

namespace causescope::testing {

inline Problem simple_problem(const std::vector<FeatureId>& ids,
                              const std::string& problem_id = "p0") {
    Problem p;
    p.id = problem_id;
    p.specification = "test problem";
    for (const auto& f : ids) p.baseline[f] = "baseline value of " + f;
    return p;
}

inline CausalGraph chain_graph(const std::vector<FeatureId>& ids) {
    std::set<FeatureId> nodes(ids.begin(), ids.end());
    std::set<std::pair<FeatureId, FeatureId>> edges;
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) edges.insert({ids[i], ids[i + 1]});
    return validate_graph(nodes, edges);
}

// F1: A -> {B,D}, B -> {D}; planted {{A,C},{D}}. Singleton causes {A},{B},{D}.
inline SimPipelineSpec fixture_f1() {
    SimPipelineSpec spec;
    spec.feature_ids = {"A", "B", "C", "D"};
    spec.influence = {{"A", {"B", "D"}}, {"B", {"D"}}, {"C", {}}, {"D", {}}};
    spec.planted_causes = {Combination{"A", "C"}, Combination{"D"}};
    spec.token_weights = {{"A", 10}, {"B", 20}, {"C", 30}, {"D", 40}};
    return spec;
}

// F2: no influence; planted {{A},{B,C}}.
inline SimPipelineSpec fixture_f2() {
    SimPipelineSpec spec;
    spec.feature_ids = {"A", "B", "C", "D"};
    spec.influence = {{"A", {}}, {"B", {}}, {"C", {}}, {"D", {}}};
    spec.planted_causes = {Combination{"A"}, Combination{"B", "C"}};
    spec.token_weights = {{"A", 10}, {"B", 20}, {"C", 30}, {"D", 40}};
    return spec;
}

// F3: A -> {B,C,D}; planted {{D,E}}. Minimal causes {{A,E},{D,E}}.
inline SimPipelineSpec fixture_f3() {
    SimPipelineSpec spec;
    spec.feature_ids = {"A", "B", "C", "D", "E"};
    spec.influence = {{"A", {"B", "C", "D"}}, {"B", {}}, {"C", {}}, {"D", {}}, {"E", {}}};
    spec.planted_causes = {Combination{"D", "E"}};
    spec.token_weights = {{"A", 10}, {"B", 20}, {"C", 30}, {"D", 40}, {"E", 50}};
    return spec;
}

inline CausalGraph graph_for(const SimPipelineSpec& spec) {
    std::set<FeatureId> nodes(spec.feature_ids.begin(), spec.feature_ids.end());
    std::set<std::pair<FeatureId, FeatureId>> edges;
    for (const auto& [src, targets] : spec.influence)
        for (const auto& dst : targets) edges.insert({src, dst});
    return validate_graph(nodes, edges);
}

inline std::map<FeatureId, std::string> intervention_on(const std::vector<FeatureId>& ids) {
    std::map<FeatureId, std::string> out;
    for (const auto& f : ids) out[f] = "intervention:" + f;
    return out;
}

}  // namespace causescope::testing
