#include "causescope/model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "causescope/errors.hpp"
#include "json.hpp"

namespace causescope {

Category category_from_string(const std::string& s) {
    if (s == "Specification") return Category::Specification;
    if (s == "Analysis") return Category::Analysis;
    if (s == "Design") return Category::Design;
    if (s == "Dependency") return Category::Dependency;
    throw ParseError("unknown category: " + s);
}

std::string category_to_string(Category c) {
    switch (c) {
        case Category::Specification: return "Specification";
        case Category::Analysis: return "Analysis";
        case Category::Design: return "Design";
        case Category::Dependency: return "Dependency";
    }
    return "Specification";
}

Schema::Schema(std::vector<Feature> features,
               std::vector<std::pair<FeatureId, FeatureId>> edges)
    : features_(std::move(features)), edges_(std::move(edges)) {
    std::stable_sort(features_.begin(), features_.end(), [](const Feature& a, const Feature& b) {
        if (a.stage_index != b.stage_index) return a.stage_index < b.stage_index;
        return a.id < b.id;
    });
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const Feature& f = features_[i];
        if (f.id.empty()) throw InvariantViolation("feature id must be non-empty");
        if (f.stage_index < 0) throw InvariantViolation("stage_index must be non-negative: " + f.id);
        if (f.token_weight < 0) throw InvariantViolation("token_weight must be non-negative: " + f.id);
        if (!index_.emplace(f.id, i).second)
            throw InvariantViolation("duplicate feature id: " + f.id);
    }
    for (const auto& [src, dst] : edges_) {
        if (!index_.count(src)) throw UnknownEndpoint(src);
        if (!index_.count(dst)) throw UnknownEndpoint(dst);
    }
}

const Feature& Schema::feature(const FeatureId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownEndpoint(id);
    return features_[it->second];
}

bool Schema::has_feature(const FeatureId& id) const { return index_.count(id) != 0; }

Schema Schema::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("schema parse: ") + e.what());
    }
    std::vector<Feature> features;
    for (const auto& jf : j.at("features")) {
        Feature f;
        f.id = jf.at("id").get<std::string>();
        f.category = category_from_string(jf.at("category").get<std::string>());
        f.description = jf.value("description", std::string{});
        f.stage_index = jf.value("stage_index", 0);
        f.token_weight = jf.value("token_weight", 0);
        features.push_back(std::move(f));
    }
    std::vector<std::pair<FeatureId, FeatureId>> edges;
    for (const auto& je : j.value("edges", nlohmann::json::array()))
        edges.emplace_back(je.at(0).get<std::string>(), je.at(1).get<std::string>());
    return Schema(std::move(features), std::move(edges));
}

Schema Schema::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open schema file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string Schema::to_json_text() const {
    nlohmann::json j;
    j["features"] = nlohmann::json::array();
    for (const Feature& f : features_) {
        j["features"].push_back({{"id", f.id},
                                 {"category", category_to_string(f.category)},
                                 {"description", f.description},
                                 {"stage_index", f.stage_index},
                                 {"token_weight", f.token_weight}});
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& [src, dst] : edges_) j["edges"].push_back({src, dst});
    return j.dump(2);
}

Schema Schema::default_schema() {
    struct Row {
        const char* id;
        Category cat;
        const char* desc;
        int weight;
    };
    // Four staged categories with full fan-in between adjacent stages.
    static const Row rows[] = {
        {"Req_Stat", Category::Specification, "Problem statement or specific task definition", 120},
        {"Language", Category::Specification, "Natural language used for documentation", 20},
        {"Program_Lang", Category::Specification, "Programming language chosen for code implementation", 20},
        {"Req_Anal", Category::Analysis, "Detailed analysis and examination of requirement statements", 180},
        {"Compet_Anal", Category::Analysis, "Comparative analysis of similar problems or questions", 160},
        {"Req_Pool", Category::Analysis, "Comprehensive requirement pool of requirements", 140},
        {"Logic_Anal", Category::Analysis, "Breakdown of requirement logic flow", 150},
        {"Data_Struct", Category::Design, "Core data structures and their detailed definitions", 200},
        {"Implement", Category::Design, "Technical implementation approach and algorithm design", 220},
        {"Req_Pack", Category::Dependency, "Required library packages and dependencies", 60},
        {"File_List", Category::Dependency, "Complete list of output files needed", 40},
        {"Share_Know", Category::Dependency, "Common shared information across different modules", 80},
    };
    std::vector<Feature> features;
    int stage = 0;
    for (const Row& r : rows)
        features.push_back(Feature{r.id, r.cat, r.desc, stage++, r.weight});
    std::vector<std::pair<FeatureId, FeatureId>> edges;
    for (const Row& a : rows)
        for (const Row& b : rows)
            if (static_cast<int>(b.cat) == static_cast<int>(a.cat) + 1)
                edges.emplace_back(a.id, b.id);
    return Schema(std::move(features), std::move(edges));
}

std::vector<FeatureId> CausalGraph::sorted_nodes() const {
    return {nodes_.begin(), nodes_.end()};
}

CausalGraph validate_graph(const std::set<FeatureId>& nodes,
                           const std::set<std::pair<FeatureId, FeatureId>>& edges) {
    std::map<FeatureId, std::vector<FeatureId>> succ;
    std::map<FeatureId, int> indeg;
    for (const auto& n : nodes) indeg[n] = 0;
    for (const auto& [src, dst] : edges) {
        if (!nodes.count(src)) throw UnknownEndpoint(src);
        if (!nodes.count(dst)) throw UnknownEndpoint(dst);
        if (src == dst) throw CycleDetected(src + " -> " + src);
        succ[src].push_back(dst);
        ++indeg[dst];
    }
    // Kahn over the ordered maps gives a deterministic topological order.
    std::vector<FeatureId> order;
    std::set<FeatureId> ready;
    for (const auto& [n, d] : indeg)
        if (d == 0) ready.insert(n);
    while (!ready.empty()) {
        FeatureId n = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(n);
        for (const auto& m : succ[n])
            if (--indeg[m] == 0) ready.insert(m);
    }
    if (order.size() != nodes.size()) {
        // Walk successors among the leftover nodes until a node repeats.
        std::set<FeatureId> leftover;
        for (const auto& [n, d] : indeg)
            if (d > 0) leftover.insert(n);
        std::vector<FeatureId> path;
        std::set<FeatureId> on_path;
        FeatureId cur = *leftover.begin();
        while (!on_path.count(cur)) {
            path.push_back(cur);
            on_path.insert(cur);
            for (const auto& m : succ[cur])
                if (leftover.count(m)) {
                    cur = m;
                    break;
                }
        }
        std::string cycle;
        bool in_cycle = false;
        for (const auto& n : path) {
            if (n == cur) in_cycle = true;
            if (in_cycle) cycle += n + " -> ";
        }
        cycle += cur;
        throw CycleDetected(cycle);
    }
    CausalGraph g;
    g.nodes_ = nodes;
    g.edges_ = edges;
    g.topo_order_ = std::move(order);
    return g;
}

CausalGraph graph_from_schema(const Schema& schema) {
    std::set<FeatureId> nodes;
    for (const Feature& f : schema.features()) nodes.insert(f.id);
    std::set<std::pair<FeatureId, FeatureId>> edges(schema.edges().begin(), schema.edges().end());
    return validate_graph(nodes, edges);
}

Combination::Combination(std::vector<FeatureId> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Combination::Combination(std::initializer_list<FeatureId> members)
    : Combination(std::vector<FeatureId>(members)) {}

bool Combination::contains(const FeatureId& id) const {
    return std::binary_search(members_.begin(), members_.end(), id);
}

bool Combination::subset_of(const Combination& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                         members_.end());
}

Combination Combination::without(const FeatureId& id) const {
    std::vector<FeatureId> rest;
    rest.reserve(members_.size());
    for (const auto& m : members_)
        if (m != id) rest.push_back(m);
    return Combination(std::move(rest));
}

std::string Combination::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i) out += ",";
        out += members_[i];
    }
    return out + "}";
}

bool ImportantFeatureSet::contains(const Combination& c) const {
    return std::find(combos_.begin(), combos_.end(), c) != combos_.end();
}

bool ImportantFeatureSet::dominates(const Combination& c) const {
    return std::any_of(combos_.begin(), combos_.end(),
                       [&](const Combination& s) { return s.subset_of(c); });
}

bool ImportantFeatureSet::is_antichain() const {
    for (std::size_t i = 0; i < combos_.size(); ++i)
        for (std::size_t j = 0; j < combos_.size(); ++j)
            if (i != j && combos_[i].subset_of(combos_[j])) return false;
    return true;
}

InsertResult insert_minimal(const ImportantFeatureSet& set, const Combination& s) {
    for (const Combination& existing : set.combos_)
        if (existing.subset_of(s) && !(existing == s)) return {set, false};
    if (set.contains(s)) return {set, false};
    ImportantFeatureSet out;
    for (const Combination& existing : set.combos_)
        if (!s.subset_of(existing)) out.combos_.push_back(existing);
    out.combos_.push_back(s);
    std::sort(out.combos_.begin(), out.combos_.end(), [](const Combination& a, const Combination& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return {std::move(out), true};
}

void AnalysisConfig::validate(std::size_t node_count) const {
    if (budget == 0) throw InvariantViolation("budget N must be positive");
    if (max_length == 0) throw InvariantViolation("max_length L_max must be positive");
    if (!(theta > 0.0 && theta < 1.0)) throw InvariantViolation("theta must lie in (0,1)");
    if (patience == 0) throw InvariantViolation("patience k must be positive");
    // max_length beyond the feature count is harmless: the search clamps the
    // top length to the number of nodes, so no extra work is implied.
    (void)node_count;
}

void Problem::validate_covers(const CausalGraph& graph) const {
    for (const auto& n : graph.nodes())
        if (!baseline.count(n))
            throw InvariantViolation("problem " + id + " baseline misses feature " + n);
}

namespace {

void enumerate_rec(const std::vector<FeatureId>& pool, std::size_t length, std::size_t start,
                   std::vector<FeatureId>& current,
                   const std::vector<Combination>& excluded,
                   std::vector<Combination>& out) {
    if (current.size() == length) {
        Combination c(current);
        for (const Combination& ex : excluded)
            if (ex.subset_of(c)) return;
        out.push_back(std::move(c));
        return;
    }
    std::size_t remaining = length - current.size();
    for (std::size_t i = start; i + remaining <= pool.size(); ++i) {
        current.push_back(pool[i]);
        enumerate_rec(pool, length, i + 1, current, excluded, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<Combination> combinations(const CausalGraph& graph, std::size_t length,
                                      const std::vector<Combination>& excluded_supersets) {
    if (length < 1 || length > graph.node_count())
        throw LengthOutOfRange("combination length " + std::to_string(length) +
                               " out of range for " + std::to_string(graph.node_count()) +
                               " nodes");
    std::vector<FeatureId> pool = graph.sorted_nodes();
    std::vector<Combination> out;
    std::vector<FeatureId> current;
    enumerate_rec(pool, length, 0, current, excluded_supersets, out);
    return out;
}

std::vector<Combination> combinations_of(const std::set<FeatureId>& pool, std::size_t length) {
    if (length < 1 || length > pool.size()) return {};
    std::vector<FeatureId> ids(pool.begin(), pool.end());
    std::vector<Combination> out;
    std::vector<FeatureId> current;
    enumerate_rec(ids, length, 0, current, {}, out);
    return out;
}

}  // namespace causescope
