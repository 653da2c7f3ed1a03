#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace causescope {

using FeatureId = std::string;

enum class Category { Specification, Analysis, Design, Dependency };

Category category_from_string(const std::string& s);
std::string category_to_string(Category c);

struct Feature {
    FeatureId id;
    Category category = Category::Specification;
    std::string description;
    int stage_index = 0;
    int token_weight = 0;
};

/// One semantic field set of a pipeline plus its inter-stage dependency edges.
/// Features are kept sorted by (stage_index, id) so stage order is total.
class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<Feature> features,
                    std::vector<std::pair<FeatureId, FeatureId>> edges);

    const std::vector<Feature>& features() const { return features_; }
    const std::vector<std::pair<FeatureId, FeatureId>>& edges() const { return edges_; }
    const Feature& feature(const FeatureId& id) const;
    bool has_feature(const FeatureId& id) const;

    static Schema from_json_file(const std::string& path);
    static Schema from_json_text(const std::string& text);
    std::string to_json_text() const;

    /// The bundled 12-feature pipeline schema (4 categories, staged fan-in).
    static Schema default_schema();

private:
    std::vector<Feature> features_;
    std::vector<std::pair<FeatureId, FeatureId>> edges_;
    std::map<FeatureId, std::size_t> index_;
};

/// Immutable DAG over feature ids with a cached topological order.
class CausalGraph {
public:
    CausalGraph() = default;

    const std::vector<FeatureId>& topo_order() const { return topo_order_; }
    const std::set<FeatureId>& nodes() const { return nodes_; }
    const std::set<std::pair<FeatureId, FeatureId>>& edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }

    /// Node ids in ascending (canonical) order.
    std::vector<FeatureId> sorted_nodes() const;

    friend CausalGraph validate_graph(const std::set<FeatureId>& nodes,
                                      const std::set<std::pair<FeatureId, FeatureId>>& edges);

private:
    std::set<FeatureId> nodes_;
    std::set<std::pair<FeatureId, FeatureId>> edges_;
    std::vector<FeatureId> topo_order_;
};

/// Validates acyclicity and endpoint closure; throws CycleDetected (naming one
/// cycle) or UnknownEndpoint.
CausalGraph validate_graph(const std::set<FeatureId>& nodes,
                           const std::set<std::pair<FeatureId, FeatureId>>& edges);

CausalGraph graph_from_schema(const Schema& schema);

/// A set of feature ids held in canonical ascending order.
class Combination {
public:
    Combination() = default;
    explicit Combination(std::vector<FeatureId> members);
    Combination(std::initializer_list<FeatureId> members);

    const std::vector<FeatureId>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(const FeatureId& id) const;
    bool subset_of(const Combination& other) const;

    Combination without(const FeatureId& id) const;

    bool operator==(const Combination& other) const { return members_ == other.members_; }
    /// Lexicographic over canonical member order; shorter-prefix first.
    bool operator<(const Combination& other) const { return members_ < other.members_; }

    std::string to_string() const;

private:
    std::vector<FeatureId> members_;
};

class ImportantFeatureSet;
struct InsertResult;
InsertResult insert_minimal(const ImportantFeatureSet& set, const Combination& s);

/// Antichain of minimal failure-inducing combinations (no member contains
/// another). Value type: insertion returns a new set.
class ImportantFeatureSet {
public:
    ImportantFeatureSet() = default;

    const std::vector<Combination>& combinations() const { return combos_; }
    std::size_t size() const { return combos_.size(); }
    bool empty() const { return combos_.empty(); }
    bool contains(const Combination& c) const;

    /// True when some member is a subset of `c` (minimality-pruning test).
    bool dominates(const Combination& c) const;

    bool is_antichain() const;

private:
    friend InsertResult insert_minimal(const ImportantFeatureSet& set, const Combination& s);
    std::vector<Combination> combos_;
};

/// Result of insert_minimal: inserts S, evicting any strict superset already
/// present; rejects S (no-op, flagged) when a subset of S is present.
struct InsertResult {
    ImportantFeatureSet set;
    bool inserted = false;  // false: a subset was already present, S rejected
};

struct AnalysisConfig {
    std::uint64_t budget = 100;   // N: max executions per problem
    std::size_t max_length = 5;   // L_max
    double theta = 0.5;
    std::uint64_t patience = 10;  // k: consecutive non-discoveries per length
    std::uint64_t seed = 0;

    void validate(std::size_t node_count) const;
};

struct Problem {
    std::string id;
    std::string specification;
    std::map<FeatureId, std::string> baseline;  // feature id -> passing value

    void validate_covers(const CausalGraph& graph) const;
};

/// Enumerates every ℓ-subset of the graph's nodes that does not contain any
/// excluded combination as a subset; lexicographic over canonical order.
std::vector<Combination> combinations(const CausalGraph& graph, std::size_t length,
                                      const std::vector<Combination>& excluded_supersets = {});

/// Same enumeration over an explicit id pool (used by the influence-set prune).
std::vector<Combination> combinations_of(const std::set<FeatureId>& pool, std::size_t length);

}  // namespace causescope
