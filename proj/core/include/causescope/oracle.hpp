#pragma once

#include <map>
#include <string>

#include "causescope/execution.hpp"
#include "causescope/model.hpp"
#include "causescope/search.hpp"

namespace causescope {

/// Exhaustive ground truth: executes every combination of size 1..L_max in
/// ascending-size lexicographic order, skipping supersets of found causes.
/// Superset-skipping is sound only because all smaller minimal sets are fully
/// enumerated before a size is entered.
ImportantFeatureSet enumerate_minimal_causes(Sut& sut, const CausalGraph& graph,
                                             std::size_t max_length, const Problem& problem);

ProblemResult oracle_result(Sut& sut, const CausalGraph& graph, std::size_t max_length,
                            const Problem& problem);

struct VerifyReport {
    double precision = 1.0;
    double recall = 1.0;
    std::uint64_t minimality_violations = 0;
    std::map<std::size_t, double> by_length_recall;
};

VerifyReport verify_result(const ImportantFeatureSet& reported, const ImportantFeatureSet& truth);

}  // namespace causescope
