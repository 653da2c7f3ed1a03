#include "causescope/oracle.hpp"

#include <algorithm>

#include "causescope/errors.hpp"

namespace causescope {

namespace {

std::map<FeatureId, std::string> oracle_intervention(const Combination& s) {
    std::map<FeatureId, std::string> out;
    for (const auto& f : s.members()) out[f] = "oracle-intervention:" + f;
    return out;
}

bool records_equal(const ExecutionRecord& a, const ExecutionRecord& b) {
    return a.outcome.kind == b.outcome.kind && a.observed == b.observed && a.tokens == b.tokens;
}

}  // namespace

ImportantFeatureSet enumerate_minimal_causes(Sut& sut, const CausalGraph& graph,
                                             std::size_t max_length, const Problem& problem) {
    if (graph.node_count() > 15)
        throw TooManyFeatures("oracle enumeration is limited to 15 features, got " +
                              std::to_string(graph.node_count()));
    if (!graph.nodes().empty()) {
        Combination probe{*graph.nodes().begin()};
        ExecutionRecord first = sut.execute(problem, oracle_intervention(probe), 0);
        ExecutionRecord second = sut.execute(problem, oracle_intervention(probe), 0);
        if (!records_equal(first, second))
            throw NondeterministicSUT("identical probe runs disagree; oracle requires a "
                                      "deterministic SUT");
    }

    ImportantFeatureSet found;
    const std::size_t top = std::min(max_length, graph.node_count());
    for (std::size_t length = 1; length <= top; ++length) {
        for (const Combination& s : combinations(graph, length, found.combinations())) {
            ExecutionRecord rec = sut.execute(problem, oracle_intervention(s), 0);
            if (rec.outcome.is_fail()) found = insert_minimal(found, s).set;
        }
    }
    return found;
}

ProblemResult oracle_result(Sut& sut, const CausalGraph& graph, std::size_t max_length,
                            const Problem& problem) {
    ProblemResult result;
    result.problem_id = problem.id;
    result.important_sets = enumerate_minimal_causes(sut, graph, max_length, problem);
    result.source = "oracle";
    return result;
}

VerifyReport verify_result(const ImportantFeatureSet& reported, const ImportantFeatureSet& truth) {
    VerifyReport report;
    std::size_t hits = 0;
    for (const Combination& c : reported.combinations()) {
        if (truth.contains(c)) ++hits;
        for (const Combination& t : truth.combinations())
            if (t.subset_of(c) && !(t == c)) {
                report.minimality_violations++;
                break;
            }
    }
    report.precision = reported.empty() ? (truth.empty() ? 1.0 : 1.0)
                                        : static_cast<double>(hits) /
                                              static_cast<double>(reported.size());
    report.recall = truth.empty() ? 1.0
                                  : static_cast<double>(hits) / static_cast<double>(truth.size());

    std::map<std::size_t, std::size_t> truth_by_len;
    std::map<std::size_t, std::size_t> hit_by_len;
    for (const Combination& t : truth.combinations()) {
        truth_by_len[t.size()]++;
        if (reported.contains(t)) hit_by_len[t.size()]++;
    }
    for (const auto& [len, total] : truth_by_len)
        report.by_length_recall[len] =
            static_cast<double>(hit_by_len[len]) / static_cast<double>(total);
    return report;
}

}  // namespace causescope
