#include "causescope/intervene.hpp"

#include "causescope/errors.hpp"

namespace causescope {

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_text(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr unsigned kMaxCandidates = 5;

}  // namespace

CatalogEngine::CatalogEngine(std::map<FeatureId, std::vector<std::string>> catalog)
    : catalog_(std::move(catalog)) {}

void CatalogEngine::validate_covers(const CausalGraph& graph) const {
    for (const auto& n : graph.nodes()) {
        auto it = catalog_.find(n);
        if (it == catalog_.end() || it->second.empty())
            throw InvariantViolation("catalog has no candidates for feature " + n);
    }
}

std::string CatalogEngine::candidate(const Problem& problem, const FeatureId& feature,
                                     const std::string& original, std::uint64_t seed,
                                     unsigned attempt) {
    (void)problem;
    (void)original;
    auto it = catalog_.find(feature);
    if (it == catalog_.end() || it->second.empty())
        throw NoDistinctCandidate("catalog has no candidates for feature " + feature);
    const auto& list = it->second;
    std::uint64_t start = mix(seed ^ hash_text(feature));
    return list[(start + attempt) % list.size()];
}

std::string TemplateEngine::candidate(const Problem& problem, const FeatureId& feature,
                                      const std::string& original, std::uint64_t seed,
                                      unsigned attempt) {
    std::uint64_t tag =
        mix(seed ^ hash_text(feature) ^ hash_text(problem.id) ^ hash_text(original) ^ attempt);
    return "intervention:" + feature + ":" + std::to_string(tag);
}

std::string RemoteEngine::candidate(const Problem& problem, const FeatureId& feature,
                                    const std::string& original, std::uint64_t seed,
                                    unsigned attempt) {
    // The endpoint owns candidate variety; the attempt index perturbs the seed.
    return fetch_(problem, feature, original, seed + attempt);
}

bool verify_intervention(const std::string& original, const std::string& replacement, double theta,
                         const SimilarityFn& sim) {
    return sim(original, replacement) < theta;
}

std::string generate_intervention(InterventionEngine& engine, const Problem& problem,
                                  const FeatureId& feature, const std::string& original,
                                  std::uint64_t seed, double theta, const SimilarityFn& sim) {
    for (unsigned attempt = 0; attempt < kMaxCandidates; ++attempt) {
        std::string cand = engine.candidate(problem, feature, original, seed, attempt);
        if (verify_intervention(original, cand, theta, sim)) return cand;
    }
    throw NoDistinctCandidate("no candidate for " + feature + " cleared the theta gate after " +
                              std::to_string(kMaxCandidates) + " attempts");
}

}  // namespace causescope
