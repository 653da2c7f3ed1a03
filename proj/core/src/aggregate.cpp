#include "causescope/aggregate.hpp"

#include <algorithm>
#include <cmath>

#include "causescope/errors.hpp"

namespace causescope {

ResponsibilityTable feature_responsibility(const std::vector<ImportantFeatureSet>& results,
                                           const std::vector<FeatureId>& schema_features) {
    ResponsibilityTable table;
    for (const auto& f : schema_features) table.fr[f] = 0.0;
    for (const ImportantFeatureSet& per_problem : results) {
        for (const Combination& s : per_problem.combinations()) {
            double share = 1.0 / static_cast<double>(s.size());
            double weight = share * share;
            for (const auto& f : s.members()) table.fr[f] += weight;
        }
    }

    table.ranking.clear();
    for (const auto& [f, unused] : table.fr) {
        (void)unused;
        table.ranking.push_back(f);
    }
    std::sort(table.ranking.begin(), table.ranking.end(), [&](const FeatureId& a,
                                                              const FeatureId& b) {
        double fa = table.fr.at(a), fb = table.fr.at(b);
        if (fa != fb) return fa > fb;
        return a < b;
    });

    table.by_length_contribution = length_contribution(results);

    double max_fr = 0.0;
    for (const auto& [f, v] : table.fr) max_fr = std::max(max_fr, v);
    for (const auto& [f, v] : table.fr)
        table.normalized_fr[f] = max_fr > 0.0 ? v / max_fr : 0.0;
    return table;
}

double degree_of_responsibility(const Combination& s, const FeatureId& member) {
    if (!s.contains(member))
        throw NotAMember(member + " is not a member of " + s.to_string());
    // The contingency W is the rest of the combination: 1/(1+|W|) = 1/|S|.
    return 1.0 / static_cast<double>(s.size());
}

double kendall_tau(const std::map<FeatureId, double>& score_a,
                   const std::map<FeatureId, double>& score_b) {
    if (score_a.size() != score_b.size())
        throw MismatchedIdSets("rankings cover different id sets");
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(score_a.size());
    for (const auto& [id, a] : score_a) {
        auto it = score_b.find(id);
        if (it == score_b.end()) throw MismatchedIdSets("id missing from second ranking: " + id);
        pairs.emplace_back(a, it->second);
    }

    long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
    const std::size_t n = pairs.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double da = pairs[i].first - pairs[j].first;
            double db = pairs[i].second - pairs[j].second;
            if (da == 0.0 && db == 0.0) continue;  // tied in both: excluded from all terms
            if (da == 0.0) {
                ++ties_a;
            } else if (db == 0.0) {
                ++ties_b;
            } else if ((da > 0.0) == (db > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    double denom_a = static_cast<double>(concordant + discordant + ties_a);
    double denom_b = static_cast<double>(concordant + discordant + ties_b);
    if (denom_a == 0.0 || denom_b == 0.0) return 0.0;
    return static_cast<double>(concordant - discordant) / std::sqrt(denom_a * denom_b);
}

double kendall_tau(const std::vector<FeatureId>& rank_a, const std::vector<FeatureId>& rank_b) {
    std::map<FeatureId, double> a, b;
    for (std::size_t i = 0; i < rank_a.size(); ++i)
        a[rank_a[i]] = -static_cast<double>(i);
    for (std::size_t i = 0; i < rank_b.size(); ++i)
        b[rank_b[i]] = -static_cast<double>(i);
    if (a.size() != rank_a.size() || b.size() != rank_b.size())
        throw MismatchedIdSets("duplicate id in rank list");
    return kendall_tau(a, b);
}

double fr_std(const ResponsibilityTable& table, FrNormalization norm) {
    if (table.fr.size() < 2) throw TooFewFeatures("fr_std needs at least two features");
    std::vector<double> values;
    values.reserve(table.fr.size());
    if (norm == FrNormalization::Max) {
        for (const auto& [f, v] : table.normalized_fr) values.push_back(v);
    } else {
        double total = 0.0;
        for (const auto& [f, v] : table.fr) total += v;
        for (const auto& [f, v] : table.fr) values.push_back(total > 0.0 ? v / total : 0.0);
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    return std::sqrt(var);
}

std::map<std::size_t, double> length_contribution(const std::vector<ImportantFeatureSet>& results) {
    std::map<std::size_t, double> mass;
    double total = 0.0;
    for (const ImportantFeatureSet& per_problem : results) {
        for (const Combination& s : per_problem.combinations()) {
            // Each member contributes (1/|S|)^2, so S adds |S| * (1/|S|)^2.
            double add = static_cast<double>(s.size()) /
                         (static_cast<double>(s.size()) * static_cast<double>(s.size()));
            mass[s.size()] += add;
            total += add;
        }
    }
    std::map<std::size_t, double> out;
    for (const auto& [len, m] : mass) out[len] = total > 0.0 ? 100.0 * m / total : 0.0;
    return out;
}

std::map<FeatureId, std::size_t> topk_appearance(const std::vector<ResponsibilityTable>& tables,
                                                 std::size_t k) {
    std::map<FeatureId, std::size_t> counts;
    for (const ResponsibilityTable& table : tables) {
        if (k > table.ranking.size())
            throw NOutOfRange("top-k exceeds feature count");
        for (const auto& [f, unused] : table.fr) {
            (void)unused;
            counts.emplace(f, 0);
        }
        for (std::size_t i = 0; i < k; ++i) counts[table.ranking[i]]++;
    }
    return counts;
}

}  // namespace causescope
