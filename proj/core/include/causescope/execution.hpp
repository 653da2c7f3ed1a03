#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "causescope/model.hpp"

namespace causescope {

enum class OutcomeKind { Pass, Fail, ExecError };

struct Outcome {
    OutcomeKind kind = OutcomeKind::Pass;
    std::string detail;  // set only for ExecError

    static Outcome pass() { return {OutcomeKind::Pass, {}}; }
    static Outcome fail() { return {OutcomeKind::Fail, {}}; }
    static Outcome exec_error(std::string d) { return {OutcomeKind::ExecError, std::move(d)}; }

    bool is_pass() const { return kind == OutcomeKind::Pass; }
    bool is_fail() const { return kind == OutcomeKind::Fail; }
    bool is_error() const { return kind == OutcomeKind::ExecError; }
};

struct ExecutionRecord {
    std::string problem_id;
    std::map<FeatureId, std::string> intervention;
    Outcome outcome;
    std::map<FeatureId, std::string> observed;  // final value of every feature
    std::uint64_t tokens = 0;
};

/// One counterfactual run of the system under test. Implementations must
/// declare whether identical (intervention, run_seed) pairs repeat exactly.
class Sut {
public:
    virtual ~Sut() = default;
    virtual ExecutionRecord execute(const Problem& problem,
                                    const std::map<FeatureId, std::string>& intervention,
                                    std::uint64_t run_seed) = 0;
    virtual bool deterministic() const = 0;
    /// Majority-vote repeats for nondeterministic adapters; each run is a
    /// separate charged execution.
    virtual unsigned repeat_count() const { return 1; }
};

struct SimPipelineSpec {
    std::vector<FeatureId> feature_ids;
    std::map<FeatureId, std::set<FeatureId>> influence;   // must be transitively closed
    std::vector<Combination> planted_causes;              // antichain, monotone predicate
    std::map<FeatureId, int> token_weights;
    double corruption_noise = 0.0;  // per-propagation suppression probability
    std::uint64_t seed = 0;

    void validate() const;
};

/// Deterministic simulated pipeline. Corruption spreads from intervened
/// features along the influence map; the run fails iff the corrupted set
/// covers a planted cause. Corrupted features read "corrupted:<id>:<seed>".
class SimulatorSut : public Sut {
public:
    explicit SimulatorSut(SimPipelineSpec spec, std::set<FeatureId> disabled = {});

    ExecutionRecord execute(const Problem& problem,
                            const std::map<FeatureId, std::string>& intervention,
                            std::uint64_t run_seed) override;
    bool deterministic() const override { return spec_.corruption_noise == 0.0; }

    const SimPipelineSpec& spec() const { return spec_; }
    const std::set<FeatureId>& disabled() const { return disabled_; }

    /// Same pipeline with the given features suppressed: they produce no
    /// output, contribute no tokens, and drop out of the closure/predicate.
    std::shared_ptr<SimulatorSut> with_disabled(const std::set<FeatureId>& disabled) const;

    /// Corruption closure at noise 0 (test/oracle helper; no token charge).
    std::set<FeatureId> corrupted_closure(const std::set<FeatureId>& intervened) const;

private:
    SimPipelineSpec spec_;
    std::set<FeatureId> disabled_;
};

std::shared_ptr<SimulatorSut> build_sim(const SimPipelineSpec& spec);

struct BenchmarkInstance {
    SimPipelineSpec spec;
    Problem problem;
};

struct CauseProfile {
    std::size_t min_length = 1;
    std::size_t max_length = 4;
    std::size_t min_causes = 1;
    std::size_t max_causes = 3;
};

/// Reproducible simulator instances with random transitively-closed influence
/// maps and planted minimal-cause antichains. Guarded at n <= 15 so the
/// brute-force oracle stays tractable.
std::vector<BenchmarkInstance> generate_benchmark(std::uint64_t seed, std::size_t feature_count,
                                                  std::size_t instance_count,
                                                  const CauseProfile& profile);

Schema schema_for_instance(const BenchmarkInstance& instance);

std::string benchmark_to_json(const std::vector<BenchmarkInstance>& instances);
std::vector<BenchmarkInstance> benchmark_from_json(const std::string& text);
std::vector<BenchmarkInstance> benchmark_from_file(const std::string& path);

}  // namespace causescope
