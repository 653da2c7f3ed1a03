#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>

#include "causescope/execution.hpp"
#include "causescope/model.hpp"

namespace causescope {

using SimilarityFn = std::function<double(const std::string&, const std::string&)>;

/// Jaccard over lowercased whitespace tokens; both-empty compares as 1.
double jaccard_similarity(const std::string& a, const std::string& b);

/// Normalized Levenshtein ratio: 1 - dist/max(|a|,|b|); both-empty -> 1.
double edit_ratio_similarity(const std::string& a, const std::string& b);

/// Resolve a metric by config name: "jaccard" | "edit-ratio". The
/// "remote-embedding" metric is wired up in the adapter layer.
SimilarityFn similarity_by_name(const std::string& name);

/// Influence sets E(S) keyed by the combination that produced them; only
/// non-failing runs populate it.
class InfluenceCache {
public:
    void put(const Combination& s, std::set<FeatureId> influenced);
    const std::set<FeatureId>* find(const Combination& s) const;
    const std::map<Combination, std::set<FeatureId>>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<Combination, std::set<FeatureId>> entries_;
};

/// E(S): features outside S whose observed value drifted below theta
/// against the baseline record. Requires a Pass outcome on the intervened run.
std::set<FeatureId> influence_set(const ExecutionRecord& baseline,
                                  const ExecutionRecord& intervened, const Combination& s,
                                  double theta, const SimilarityFn& sim = jaccard_similarity);

/// Ê(S): union of cached influence sets over strict subsets of S, with S's
/// own members excluded from the result.
std::set<FeatureId> collective_influence(const Combination& s, const InfluenceCache& cache);

}  // namespace causescope
