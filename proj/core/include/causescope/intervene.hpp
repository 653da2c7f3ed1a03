#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "causescope/influence.hpp"
#include "causescope/model.hpp"

namespace causescope {

/// Produces plausible-but-wrong replacement values for a feature. Candidate
/// production is pure in (problem, feature, original, seed, attempt).
class InterventionEngine {
public:
    virtual ~InterventionEngine() = default;
    virtual std::string candidate(const Problem& problem, const FeatureId& feature,
                                  const std::string& original, std::uint64_t seed,
                                  unsigned attempt) = 0;
};

/// Curated wrong values per feature; the seed rotates the starting pick.
class CatalogEngine : public InterventionEngine {
public:
    explicit CatalogEngine(std::map<FeatureId, std::vector<std::string>> catalog);
    std::string candidate(const Problem& problem, const FeatureId& feature,
                          const std::string& original, std::uint64_t seed,
                          unsigned attempt) override;

    /// Every schema feature needs a non-empty candidate list.
    void validate_covers(const CausalGraph& graph) const;

private:
    std::map<FeatureId, std::vector<std::string>> catalog_;
};

/// Synthesizes a token-disjoint replacement from the feature id, problem id
/// and seed. The desk-scale default: always accepted by the Jaccard gate.
class TemplateEngine : public InterventionEngine {
public:
    std::string candidate(const Problem& problem, const FeatureId& feature,
                          const std::string& original, std::uint64_t seed,
                          unsigned attempt) override;
};

/// Asks an external endpoint for a replacement. Request/response shapes live
/// in adapter.hpp; this level only sees the callback.
class RemoteEngine : public InterventionEngine {
public:
    using Fetch = std::function<std::string(const Problem&, const FeatureId&, const std::string&,
                                            std::uint64_t)>;
    explicit RemoteEngine(Fetch fetch) : fetch_(std::move(fetch)) {}
    std::string candidate(const Problem& problem, const FeatureId& feature,
                          const std::string& original, std::uint64_t seed,
                          unsigned attempt) override;

private:
    Fetch fetch_;
};

/// True iff the replacement is semantically distinct: sim(original, r) < theta
/// (strict).
bool verify_intervention(const std::string& original, const std::string& replacement, double theta,
                         const SimilarityFn& sim = jaccard_similarity);

/// Tries up to five candidates, returning the first that clears the theta
/// gate; throws NoDistinctCandidate when none does.
std::string generate_intervention(InterventionEngine& engine, const Problem& problem,
                                  const FeatureId& feature, const std::string& original,
                                  std::uint64_t seed, double theta,
                                  const SimilarityFn& sim = jaccard_similarity);

}  // namespace causescope
