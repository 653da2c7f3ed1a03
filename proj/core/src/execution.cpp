#include "causescope/execution.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "causescope/errors.hpp"
#include "json.hpp"

namespace causescope {

namespace {

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Pure per-propagation coin: stable across runs and platforms.
double propagation_uniform(std::uint64_t spec_seed, std::uint64_t run_seed,
                           const FeatureId& src, const FeatureId& dst) {
    std::uint64_t h = splitmix64(spec_seed ^ splitmix64(run_seed));
    h = splitmix64(h ^ fnv1a(src));
    h = splitmix64(h ^ fnv1a(dst));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

void SimPipelineSpec::validate() const {
    std::set<FeatureId> ids(feature_ids.begin(), feature_ids.end());
    if (ids.size() != feature_ids.size())
        throw InvariantViolation("duplicate feature id in simulator spec");
    if (corruption_noise < 0.0 || corruption_noise > 1.0)
        throw InvariantViolation("corruption_noise must lie in [0,1]");
    for (const auto& [src, targets] : influence) {
        if (!ids.count(src)) throw PredicateReferencesUnknownFeature(src);
        for (const auto& dst : targets) {
            if (!ids.count(dst)) throw PredicateReferencesUnknownFeature(dst);
            // f -> g and g -> h requires f -> h
            auto it = influence.find(dst);
            if (it == influence.end()) continue;
            for (const auto& h : it->second)
                if (!targets.count(h))
                    throw NotTransitivelyClosed("influence misses " + src + " -> " + h +
                                                " implied by " + src + " -> " + dst);
        }
    }
    for (const Combination& cause : planted_causes) {
        if (cause.empty()) throw InvariantViolation("planted cause must be non-empty");
        for (const auto& f : cause.members())
            if (!ids.count(f)) throw PredicateReferencesUnknownFeature(f);
    }
    for (std::size_t i = 0; i < planted_causes.size(); ++i)
        for (std::size_t j = 0; j < planted_causes.size(); ++j)
            if (i != j && planted_causes[i].subset_of(planted_causes[j]))
                throw NotAntichain("planted cause " + planted_causes[i].to_string() +
                                   " contained in " + planted_causes[j].to_string());
}

SimulatorSut::SimulatorSut(SimPipelineSpec spec, std::set<FeatureId> disabled)
    : spec_(std::move(spec)), disabled_(std::move(disabled)) {
    spec_.validate();
    for (const auto& d : disabled_) {
        bool known = std::find(spec_.feature_ids.begin(), spec_.feature_ids.end(), d) !=
                     spec_.feature_ids.end();
        if (!known) throw PredicateReferencesUnknownFeature(d);
    }
}

std::set<FeatureId> SimulatorSut::corrupted_closure(const std::set<FeatureId>& intervened) const {
    std::set<FeatureId> corrupted;
    for (const auto& f : intervened) {
        if (disabled_.count(f)) continue;
        corrupted.insert(f);
        auto it = spec_.influence.find(f);
        if (it == spec_.influence.end()) continue;
        for (const auto& g : it->second)
            if (!disabled_.count(g)) corrupted.insert(g);
    }
    return corrupted;
}

ExecutionRecord SimulatorSut::execute(const Problem& problem,
                                      const std::map<FeatureId, std::string>& intervention,
                                      std::uint64_t run_seed) {
    std::set<FeatureId> source;
    for (const auto& [f, value] : intervention) {
        bool known = std::find(spec_.feature_ids.begin(), spec_.feature_ids.end(), f) !=
                     spec_.feature_ids.end();
        if (!known) throw PredicateReferencesUnknownFeature(f);
        (void)value;
        source.insert(f);
    }

    std::set<FeatureId> corrupted;
    for (const auto& f : source) {
        if (disabled_.count(f)) continue;
        corrupted.insert(f);
        auto it = spec_.influence.find(f);
        if (it == spec_.influence.end()) continue;
        for (const auto& g : it->second) {
            if (disabled_.count(g)) continue;
            if (spec_.corruption_noise > 0.0 &&
                propagation_uniform(spec_.seed, run_seed, f, g) < spec_.corruption_noise)
                continue;  // self-correction suppressed this propagation
            corrupted.insert(g);
        }
    }

    bool fail = false;
    for (const Combination& cause : spec_.planted_causes) {
        bool covered = true;
        for (const auto& f : cause.members())
            if (!corrupted.count(f)) {
                covered = false;
                break;
            }
        if (covered) {
            fail = true;
            break;
        }
    }

    ExecutionRecord rec;
    rec.problem_id = problem.id;
    rec.intervention = intervention;
    rec.outcome = fail ? Outcome::fail() : Outcome::pass();
    for (const auto& f : spec_.feature_ids) {
        if (disabled_.count(f)) {
            rec.observed[f] = "";
            continue;
        }
        if (corrupted.count(f)) {
            rec.observed[f] = "corrupted:" + f + ":" + std::to_string(run_seed);
        } else {
            auto it = problem.baseline.find(f);
            rec.observed[f] = it == problem.baseline.end() ? "" : it->second;
        }
        auto wt = spec_.token_weights.find(f);
        if (wt != spec_.token_weights.end()) rec.tokens += static_cast<std::uint64_t>(wt->second);
    }
    return rec;
}

std::shared_ptr<SimulatorSut> SimulatorSut::with_disabled(
    const std::set<FeatureId>& disabled) const {
    return std::make_shared<SimulatorSut>(spec_, disabled);
}

std::shared_ptr<SimulatorSut> build_sim(const SimPipelineSpec& spec) {
    return std::make_shared<SimulatorSut>(spec);
}

std::vector<BenchmarkInstance> generate_benchmark(std::uint64_t seed, std::size_t feature_count,
                                                  std::size_t instance_count,
                                                  const CauseProfile& profile) {
    if (feature_count > 15)
        throw TooManyFeatures("feature count " + std::to_string(feature_count) +
                              " exceeds oracle-tractable limit 15");
    if (feature_count == 0) throw InvariantViolation("feature count must be positive");
    if (profile.min_length < 1 || profile.max_length < profile.min_length ||
        profile.max_length > feature_count)
        throw InvariantViolation("invalid cause length profile");

    std::vector<FeatureId> ids;
    for (std::size_t i = 0; i < feature_count; ++i) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "F%02zu", i);
        ids.emplace_back(buf);
    }

    std::vector<BenchmarkInstance> out;
    out.reserve(instance_count);
    for (std::size_t inst = 0; inst < instance_count; ++inst) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(inst + 1)));

        // Random DAG along the id order; influence = reachability closure.
        std::vector<std::set<std::size_t>> reach(feature_count);
        std::bernoulli_distribution edge_coin(0.25);
        for (std::size_t i = 0; i < feature_count; ++i)
            for (std::size_t j = i + 1; j < feature_count; ++j)
                if (edge_coin(rng)) reach[i].insert(j);
        for (std::size_t i = feature_count; i-- > 0;) {
            std::set<std::size_t> closed = reach[i];
            for (std::size_t j : reach[i]) closed.insert(reach[j].begin(), reach[j].end());
            reach[i] = std::move(closed);
        }

        SimPipelineSpec spec;
        spec.feature_ids = ids;
        spec.seed = splitmix64(seed ^ splitmix64(0x5157 + inst));
        for (std::size_t i = 0; i < feature_count; ++i) {
            std::set<FeatureId> targets;
            for (std::size_t j : reach[i]) targets.insert(ids[j]);
            spec.influence[ids[i]] = std::move(targets);
            spec.token_weights[ids[i]] =
                static_cast<int>(std::uniform_int_distribution<>(20, 200)(rng));
        }

        std::uniform_int_distribution<std::size_t> cause_count_dist(profile.min_causes,
                                                                    profile.max_causes);
        std::uniform_int_distribution<std::size_t> length_dist(profile.min_length,
                                                               profile.max_length);
        std::size_t want = cause_count_dist(rng);
        for (int attempt = 0; spec.planted_causes.size() < want && attempt < 64; ++attempt) {
            std::size_t len = length_dist(rng);
            std::vector<FeatureId> pick = ids;
            std::shuffle(pick.begin(), pick.end(), rng);
            pick.resize(len);
            Combination cand(pick);
            bool comparable = false;
            for (const Combination& c : spec.planted_causes)
                if (c.subset_of(cand) || cand.subset_of(c)) {
                    comparable = true;
                    break;
                }
            if (!comparable) spec.planted_causes.push_back(std::move(cand));
        }
        std::sort(spec.planted_causes.begin(), spec.planted_causes.end());

        Problem problem;
        problem.id = "bench-" + std::to_string(inst);
        problem.specification = "synthetic pipeline instance " + std::to_string(inst);
        for (const auto& f : ids)
            problem.baseline[f] = "baseline value of " + f + " for " + problem.id;

        out.push_back(BenchmarkInstance{std::move(spec), std::move(problem)});
    }
    return out;
}

Schema schema_for_instance(const BenchmarkInstance& instance) {
    std::vector<Feature> features;
    int stage = 0;
    for (const auto& id : instance.spec.feature_ids) {
        Feature f;
        f.id = id;
        f.category = Category::Specification;
        f.description = "synthetic feature " + id;
        f.stage_index = stage++;
        auto it = instance.spec.token_weights.find(id);
        f.token_weight = it == instance.spec.token_weights.end() ? 0 : it->second;
        features.push_back(std::move(f));
    }
    std::vector<std::pair<FeatureId, FeatureId>> edges;
    for (const auto& [src, targets] : instance.spec.influence)
        for (const auto& dst : targets) edges.emplace_back(src, dst);
    return Schema(std::move(features), std::move(edges));
}

std::string benchmark_to_json(const std::vector<BenchmarkInstance>& instances) {
    nlohmann::json j;
    j["instances"] = nlohmann::json::array();
    for (const auto& inst : instances) {
        nlohmann::json js;
        js["feature_ids"] = inst.spec.feature_ids;
        js["influence"] = nlohmann::json::object();
        for (const auto& [src, targets] : inst.spec.influence)
            js["influence"][src] = std::vector<FeatureId>(targets.begin(), targets.end());
        js["planted_causes"] = nlohmann::json::array();
        for (const auto& c : inst.spec.planted_causes) js["planted_causes"].push_back(c.members());
        js["token_weights"] = inst.spec.token_weights;
        js["corruption_noise"] = inst.spec.corruption_noise;
        js["seed"] = inst.spec.seed;
        nlohmann::json jp;
        jp["id"] = inst.problem.id;
        jp["specification"] = inst.problem.specification;
        jp["baseline"] = inst.problem.baseline;
        j["instances"].push_back({{"spec", js}, {"problem", jp}});
    }
    return j.dump(2);
}

std::vector<BenchmarkInstance> benchmark_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("benchmark parse: ") + e.what());
    }
    std::vector<BenchmarkInstance> out;
    for (const auto& ji : j.at("instances")) {
        BenchmarkInstance inst;
        const auto& js = ji.at("spec");
        inst.spec.feature_ids = js.at("feature_ids").get<std::vector<FeatureId>>();
        for (const auto& [src, targets] : js.at("influence").items()) {
            auto v = targets.get<std::vector<FeatureId>>();
            inst.spec.influence[src] = std::set<FeatureId>(v.begin(), v.end());
        }
        for (const auto& jc : js.at("planted_causes"))
            inst.spec.planted_causes.emplace_back(jc.get<std::vector<FeatureId>>());
        inst.spec.token_weights = js.at("token_weights").get<std::map<FeatureId, int>>();
        inst.spec.corruption_noise = js.value("corruption_noise", 0.0);
        inst.spec.seed = js.value("seed", std::uint64_t{0});
        const auto& jp = ji.at("problem");
        inst.problem.id = jp.at("id").get<std::string>();
        inst.problem.specification = jp.value("specification", std::string{});
        inst.problem.baseline = jp.at("baseline").get<std::map<FeatureId, std::string>>();
        inst.spec.validate();
        out.push_back(std::move(inst));
    }
    return out;
}

std::vector<BenchmarkInstance> benchmark_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open benchmark file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return benchmark_from_json(ss.str());
}

}  // namespace causescope
