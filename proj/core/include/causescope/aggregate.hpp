#pragma once

#include <map>
#include <string>
#include <vector>

#include "causescope/model.hpp"
#include "causescope/search.hpp"

namespace causescope {

struct ResponsibilityTable {
    std::map<FeatureId, double> fr;
    std::vector<FeatureId> ranking;  // descending FR, ties lexicographic
    std::map<std::size_t, double> by_length_contribution;  // percent of total FR
    std::map<FeatureId, double> normalized_fr;  // max-normalized; 0-table if all zero
};

/// FR(f) = sum over problems and combinations S containing f of (1/|S|)^2.
ResponsibilityTable feature_responsibility(const std::vector<ImportantFeatureSet>& results,
                                           const std::vector<FeatureId>& schema_features);

/// 1/|S|: the member's share with the rest of S as the contingency.
double degree_of_responsibility(const Combination& s, const FeatureId& member);

/// Tie-aware tau-b over two score maps covering the same id set.
double kendall_tau(const std::map<FeatureId, double>& score_a,
                   const std::map<FeatureId, double>& score_b);

/// Rank-list convenience form: position is the (tie-free) rank.
double kendall_tau(const std::vector<FeatureId>& rank_a, const std::vector<FeatureId>& rank_b);

enum class FrNormalization { Max, Sum };

/// Population standard deviation of the normalized FR values.
double fr_std(const ResponsibilityTable& table, FrNormalization norm = FrNormalization::Max);

/// Percent of total FR mass contributed by combinations of each length.
std::map<std::size_t, double> length_contribution(const std::vector<ImportantFeatureSet>& results);

/// Per feature, the number of settings whose table ranks it in the top k.
std::map<FeatureId, std::size_t> topk_appearance(const std::vector<ResponsibilityTable>& tables,
                                                 std::size_t k);

}  // namespace causescope
