#include "causescope/influence.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

#include "causescope/errors.hpp"

namespace causescope {

namespace {

std::set<std::string> lower_tokens(const std::string& text) {
    std::set<std::string> tokens;
    std::istringstream ss(text);
    std::string tok;
    while (ss >> tok) {
        std::transform(tok.begin(), tok.end(), tok.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        tokens.insert(std::move(tok));
    }
    return tokens;
}

}  // namespace

double jaccard_similarity(const std::string& a, const std::string& b) {
    std::set<std::string> ta = lower_tokens(a);
    std::set<std::string> tb = lower_tokens(b);
    if (ta.empty() && tb.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& t : ta) inter += tb.count(t);
    std::size_t uni = ta.size() + tb.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double edit_ratio_similarity(const std::string& a, const std::string& b) {
    if (a.empty() && b.empty()) return 1.0;
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    double dist = static_cast<double>(prev[m]);
    return 1.0 - dist / static_cast<double>(std::max(n, m));
}

SimilarityFn similarity_by_name(const std::string& name) {
    if (name == "jaccard") return jaccard_similarity;
    if (name == "edit-ratio") return edit_ratio_similarity;
    throw ParseError("unknown similarity metric: " + name);
}

void InfluenceCache::put(const Combination& s, std::set<FeatureId> influenced) {
    for (const auto& m : s.members()) influenced.erase(m);
    entries_[s] = std::move(influenced);
}

const std::set<FeatureId>* InfluenceCache::find(const Combination& s) const {
    auto it = entries_.find(s);
    return it == entries_.end() ? nullptr : &it->second;
}

std::set<FeatureId> influence_set(const ExecutionRecord& baseline,
                                  const ExecutionRecord& intervened, const Combination& s,
                                  double theta, const SimilarityFn& sim) {
    if (!intervened.outcome.is_pass())
        throw OutcomeNotPass("influence sets are defined over non-failing runs only");
    std::set<FeatureId> out;
    for (const auto& [f, base_value] : baseline.observed) {
        if (s.contains(f)) continue;
        auto it = intervened.observed.find(f);
        // A feature the pipeline failed to produce counts as influenced,
        // unless its baseline was empty too (sim("","") = 1).
        const std::string value = it == intervened.observed.end() ? std::string{} : it->second;
        if (sim(base_value, value) < theta) out.insert(f);
    }
    return out;
}

std::set<FeatureId> collective_influence(const Combination& s, const InfluenceCache& cache) {
    std::set<FeatureId> out;
    for (const auto& [subset, influenced] : cache.entries()) {
        if (!(subset.subset_of(s)) || subset == s) continue;
        out.insert(influenced.begin(), influenced.end());
    }
    for (const auto& m : s.members()) out.erase(m);
    return out;
}

}  // namespace causescope
