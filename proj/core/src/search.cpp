#include "causescope/search.hpp"

#include <algorithm>
#include <iostream>

#include "causescope/errors.hpp"
#include "json.hpp"

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

}  // namespace

SearchContext::SearchContext(Sut& sut, const CausalGraph& graph, const AnalysisConfig& config,
                             InterventionEngine& engine, const Problem& problem, SimilarityFn sim)
    : sut_(sut),
      graph_(graph),
      config_(config),
      engine_(engine),
      problem_(problem),
      sim_(std::move(sim)),
      budget_(config.budget) {
    config_.validate(graph.node_count());
    problem_.validate_covers(graph);
}

void SearchContext::verify_baseline() {
    baseline_ = sut_.execute(problem_, {}, config_.seed);
    if (!baseline_.outcome.is_pass())
        throw BaselineFails("problem " + problem_.id + " does not pass without intervention");
}

const std::string& SearchContext::replacement_for(const FeatureId& f) {
    auto it = replacements_.find(f);
    if (it != replacements_.end()) return it->second;
    auto base = problem_.baseline.find(f);
    const std::string& original = base == problem_.baseline.end() ? std::string{} : base->second;
    std::uint64_t seed = mix(config_.seed ^ hash_text(f));
    std::string value =
        generate_intervention(engine_, problem_, f, original, seed, config_.theta, sim_);
    return replacements_.emplace(f, std::move(value)).first->second;
}

std::optional<ExecutionRecord> SearchContext::execute_combination(const Combination& s) {
    if (budget_.exhausted()) return std::nullopt;
    std::map<FeatureId, std::string> intervention;
    for (const auto& f : s.members()) intervention[f] = replacement_for(f);

    budget_.charge();
    ExecutionRecord rec = sut_.execute(problem_, intervention, config_.seed);
    if (rec.outcome.is_error()) {
        // One retry; the failed attempt was still a real (charged) run.
        if (budget_.exhausted()) return rec;
        budget_.charge();
        rec = sut_.execute(problem_, intervention, config_.seed);
    }
    return rec;
}

void SearchContext::cache_influence(const Combination& s, const ExecutionRecord& rec) {
    cache_.put(s, influence_set(baseline_, rec, s, config_.theta, sim_));
}

Combination select_candidate(const std::vector<Combination>& candidates,
                             const InfluenceCache& cache) {
    if (candidates.empty()) throw EmptyCandidates("no candidates to select from");
    const Combination* best = nullptr;
    std::size_t best_score = 0;
    for (const Combination& c : candidates) {
        std::size_t score = collective_influence(c, cache).size();
        if (!best || score > best_score || (score == best_score && c < *best)) {
            best = &c;
            best_score = score;
        }
    }
    return *best;
}

MinimalCheck check_minimal(const Combination& s, SearchContext& ctx) {
    for (const auto& f : s.members()) {
        Combination subset = s.without(f);
        if (subset.empty()) continue;  // |S| = 1 is minimal by definition
        auto cached = ctx.result_cache().find(subset);
        if (cached != ctx.result_cache().end()) {
            if (cached->second == OutcomeKind::Fail) return MinimalCheck::NotMinimal;
            continue;
        }
        if (ctx.budget().exhausted()) return MinimalCheck::Unverifiable;
        auto rec = ctx.execute_combination(subset);
        if (!rec) return MinimalCheck::Unverifiable;
        if (rec->outcome.is_error()) continue;  // retried and still aborted; no evidence
        ctx.record_outcome(subset, rec->outcome.kind);
        if (rec->outcome.is_fail()) return MinimalCheck::NotMinimal;
        ctx.cache_influence(subset, *rec);
    }
    return MinimalCheck::Minimal;
}

namespace {

// Candidate pool for one length, with Ê scores kept current as the cache
// grows. Scores only change when a strict subset of a candidate lands in the
// cache, which inside one length pass happens only via minimality checks.
class CandidatePool {
public:
    CandidatePool(std::vector<Combination> candidates, const InfluenceCache& cache)
        : combos_(std::move(candidates)) {
        scores_.reserve(combos_.size());
        for (const Combination& c : combos_)
            scores_.push_back(collective_influence(c, cache).size());
    }

    bool empty() const { return combos_.empty(); }
    std::size_t size() const { return combos_.size(); }

    Combination take_best() {
        std::size_t best = 0;
        for (std::size_t i = 1; i < combos_.size(); ++i) {
            if (scores_[i] > scores_[best] ||
                (scores_[i] == scores_[best] && combos_[i] < combos_[best]))
                best = i;
        }
        Combination out = std::move(combos_[best]);
        combos_.erase(combos_.begin() + static_cast<std::ptrdiff_t>(best));
        scores_.erase(scores_.begin() + static_cast<std::ptrdiff_t>(best));
        return out;
    }

    std::size_t remove_if(const std::function<bool(const Combination&)>& pred) {
        std::size_t removed = 0;
        for (std::size_t i = combos_.size(); i-- > 0;) {
            if (pred(combos_[i])) {
                combos_.erase(combos_.begin() + static_cast<std::ptrdiff_t>(i));
                scores_.erase(scores_.begin() + static_cast<std::ptrdiff_t>(i));
                ++removed;
            }
        }
        return removed;
    }

    void rescore_supersets_of(const Combination& key, const InfluenceCache& cache) {
        for (std::size_t i = 0; i < combos_.size(); ++i)
            if (key.subset_of(combos_[i]))
                scores_[i] = collective_influence(combos_[i], cache).size();
    }

private:
    std::vector<Combination> combos_;
    std::vector<std::size_t> scores_;
};

}  // namespace

ProblemResult analyze_problem(Sut& sut, const CausalGraph& graph, const AnalysisConfig& config,
                              InterventionEngine& engine, const Problem& problem,
                              SimilarityFn sim) {
    if (config.budget < graph.node_count())
        throw BudgetTooSmall("budget " + std::to_string(config.budget) +
                             " cannot cover the length-1 scan over " +
                             std::to_string(graph.node_count()) + " features");

    SearchContext ctx(sut, graph, config, engine, problem, std::move(sim));
    ctx.verify_baseline();

    ProblemResult result;
    result.problem_id = problem.id;

    // Phase 1: every single feature, canonical order.
    for (const auto& f : graph.sorted_nodes()) {
        Combination s{f};
        auto rec = ctx.execute_combination(s);
        if (!rec) break;
        result.stats.combos_tested_per_length[1]++;
        if (rec->outcome.is_error()) {
            std::cerr << "warning: dropping " << s.to_string() << " for problem " << problem.id
                      << " after repeated execution error: " << rec->outcome.detail << "\n";
            continue;
        }
        ctx.record_outcome(s, rec->outcome.kind);
        if (rec->outcome.is_fail()) {
            result.important_sets = insert_minimal(result.important_sets, s).set;
        } else {
            ctx.cache_influence(s, *rec);
        }
    }

    // Phase 2: ascending lengths with minimality + influence pruning.
    const std::size_t top = std::min(config.max_length, graph.node_count());
    for (std::size_t length = 2; length <= top && !ctx.budget().exhausted(); ++length) {
        std::vector<Combination> base =
            combinations(graph, length, result.important_sets.combinations());
        std::size_t full = combinations(graph, length).size();
        result.stats.pruned_by_minimality += full - base.size();

        CandidatePool pool(std::move(base), ctx.influence_cache());
        std::uint64_t consecutive_non_discoveries = 0;

        while (!pool.empty() && !ctx.budget().exhausted()) {
            Combination s = pool.take_best();
            auto rec = ctx.execute_combination(s);
            if (!rec) break;
            result.stats.combos_tested_per_length[length]++;
            if (rec->outcome.is_error()) {
                std::cerr << "warning: dropping " << s.to_string() << " for problem "
                          << problem.id
                          << " after repeated execution error: " << rec->outcome.detail << "\n";
                continue;
            }
            ctx.record_outcome(s, rec->outcome.kind);

            if (rec->outcome.is_fail()) {
                std::size_t cache_before = ctx.influence_cache().size();
                MinimalCheck check = check_minimal(s, ctx);
                if (ctx.influence_cache().size() != cache_before) {
                    // Minimality probes cached new subset influence sets.
                    for (const auto& [key, unused] : ctx.influence_cache().entries()) {
                        (void)unused;
                        if (key.size() + 1 == length && key.subset_of(s))
                            pool.rescore_supersets_of(key, ctx.influence_cache());
                    }
                }
                switch (check) {
                    case MinimalCheck::Minimal: {
                        result.important_sets = insert_minimal(result.important_sets, s).set;
                        result.stats.pruned_by_minimality += pool.remove_if(
                            [&](const Combination& c) { return s.subset_of(c); });
                        consecutive_non_discoveries = 0;
                        break;
                    }
                    case MinimalCheck::NotMinimal:
                        ++consecutive_non_discoveries;
                        break;
                    case MinimalCheck::Unverifiable:
                        result.unverifiable.push_back(s);
                        break;
                }
            } else {
                ctx.cache_influence(s, *rec);
                const std::set<FeatureId>* influenced = ctx.influence_cache().find(s);
                if (influenced && influenced->size() >= length) {
                    for (const Combination& within : combinations_of(*influenced, length)) {
                        std::size_t removed = pool.remove_if(
                            [&](const Combination& c) { return c == within; });
                        if (removed) {
                            result.stats.pruned_by_influence += removed;
                            result.influence_pruned.push_back(within);
                        }
                    }
                }
                ++consecutive_non_discoveries;
            }

            if (consecutive_non_discoveries >= config.patience) {
                result.stats.early_stops++;
                break;
            }
        }
    }

    result.stats.executions_used = ctx.budget().used();
    return result;
}

std::string result_to_json(const ProblemResult& result) {
    nlohmann::json j;
    j["problem_id"] = result.problem_id;
    j["important_sets"] = nlohmann::json::array();
    for (const Combination& c : result.important_sets.combinations())
        j["important_sets"].push_back(c.members());
    j["unverifiable"] = nlohmann::json::array();
    for (const Combination& c : result.unverifiable) j["unverifiable"].push_back(c.members());
    j["influence_pruned"] = nlohmann::json::array();
    for (const Combination& c : result.influence_pruned)
        j["influence_pruned"].push_back(c.members());
    nlohmann::json stats;
    stats["executions_used"] = result.stats.executions_used;
    stats["pruned_by_minimality"] = result.stats.pruned_by_minimality;
    stats["pruned_by_influence"] = result.stats.pruned_by_influence;
    stats["early_stops"] = result.stats.early_stops;
    stats["combos_tested_per_length"] = nlohmann::json::object();
    for (const auto& [len, count] : result.stats.combos_tested_per_length)
        stats["combos_tested_per_length"][std::to_string(len)] = count;
    j["stats"] = stats;
    j["source"] = result.source;
    return j.dump(2);
}

ProblemResult result_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("result parse: ") + e.what());
    }
    ProblemResult result;
    result.problem_id = j.at("problem_id").get<std::string>();
    for (const auto& jc : j.at("important_sets"))
        result.important_sets =
            insert_minimal(result.important_sets, Combination(jc.get<std::vector<FeatureId>>()))
                .set;
    for (const auto& jc : j.value("unverifiable", nlohmann::json::array()))
        result.unverifiable.emplace_back(jc.get<std::vector<FeatureId>>());
    for (const auto& jc : j.value("influence_pruned", nlohmann::json::array()))
        result.influence_pruned.emplace_back(jc.get<std::vector<FeatureId>>());
    if (j.contains("stats")) {
        const auto& stats = j["stats"];
        result.stats.executions_used = stats.value("executions_used", std::uint64_t{0});
        result.stats.pruned_by_minimality = stats.value("pruned_by_minimality", std::uint64_t{0});
        result.stats.pruned_by_influence = stats.value("pruned_by_influence", std::uint64_t{0});
        result.stats.early_stops = stats.value("early_stops", std::uint64_t{0});
        const nlohmann::json per_length =
            stats.value("combos_tested_per_length", nlohmann::json::object());
        for (const auto& [len, count] : per_length.items())
            result.stats.combos_tested_per_length[std::stoul(len)] = count.get<std::uint64_t>();
    }
    result.source = j.value("source", std::string{"search"});
    return result;
}

}  // namespace causescope
