#include <algorithm>
#include <filesystem>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "causescope/adapter.hpp"
#include "causescope/aggregate.hpp"
#include "causescope/apps.hpp"
#include "causescope/config.hpp"
#include "causescope/errors.hpp"
#include "causescope/oracle.hpp"
#include "causescope/report.hpp"
#include "causescope/search.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace causescope;

namespace {

constexpr std::uint64_t kUnbounded = 1ULL << 60;

struct CommonOverrides {
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t budget = 0;
    bool budget_set = false;
    std::size_t max_len = 0;
    bool max_len_set = false;
    double theta = 0.0;
    bool theta_set = false;
    std::uint64_t patience = 0;
    bool patience_set = false;

    void apply(AnalysisConfig& cfg) const {
        if (seed_set) cfg.seed = seed;
        if (budget_set) cfg.budget = budget == 0 ? kUnbounded : budget;
        if (max_len_set) cfg.max_length = max_len;
        if (theta_set) cfg.theta = theta;
        if (patience_set) cfg.patience = patience == 0 ? kUnbounded : patience;
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Override the configured seed")
            ->each([this](const std::string&) { seed_set = true; });
        cmd->add_option("--budget", budget, "Max executions per problem (0 = unbounded)")
            ->each([this](const std::string&) { budget_set = true; });
        cmd->add_option("--max-len", max_len, "Max combination length")
            ->each([this](const std::string&) { max_len_set = true; });
        cmd->add_option("--theta", theta, "Similarity threshold in (0,1)")
            ->each([this](const std::string&) { theta_set = true; });
        cmd->add_option("--patience", patience, "Early-stop patience (0 = infinite)")
            ->each([this](const std::string&) { patience_set = true; });
    }
};

std::vector<ProblemResult> analyze_bench(const std::vector<BenchmarkInstance>& instances,
                                         const AnalysisConfig& config, const std::string& metric,
                                         unsigned jobs) {
    std::vector<ProblemResult> results(instances.size());
    SimilarityFn sim = similarity_by_name(metric);
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            SimulatorSut sut(instances[i].spec);
            CausalGraph graph = graph_from_schema(schema_for_instance(instances[i]));
            TemplateEngine engine;
            results[i] = analyze_problem(sut, graph, config, engine, instances[i].problem, sim);
        }
    };
    if (jobs <= 1 || instances.size() < 2) {
        worker(0, instances.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (instances.size() + jobs - 1) / jobs;
        for (std::size_t start = 0; start < instances.size(); start += chunk)
            pool.emplace_back(worker, start, std::min(start + chunk, instances.size()));
        for (auto& t : pool) t.join();
    }
    return results;
}

void write_results(const std::string& out_dir, const std::vector<ProblemResult>& results) {
    fs::create_directories(out_dir);
    for (const ProblemResult& r : results) {
        nlohmann::json j = nlohmann::json::parse(result_to_json(r));
        write_file((fs::path(out_dir) / (r.problem_id + ".json")).string(), canonical_json(j));
    }
}

std::vector<ProblemResult> load_results(const std::string& dir) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        // skip the aggregate report analyze leaves next to its per-problem results
        if (entry.path().filename() == "ranking.json") continue;
        if (entry.path().extension() == ".json") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<ProblemResult> out;
    for (const auto& p : paths) out.push_back(result_from_json(read_file(p.string())));
    return out;
}

std::vector<FeatureId> feature_universe(const std::vector<ProblemResult>& results,
                                        const std::string& schema_path) {
    if (!schema_path.empty()) {
        Schema schema = Schema::from_json_file(schema_path);
        std::vector<FeatureId> ids;
        for (const Feature& f : schema.features()) ids.push_back(f.id);
        std::sort(ids.begin(), ids.end());
        return ids;
    }
    std::set<FeatureId> ids;
    for (const ProblemResult& r : results)
        for (const Combination& c : r.important_sets.combinations())
            for (const auto& f : c.members()) ids.insert(f);
    return {ids.begin(), ids.end()};
}

int cmd_bench(std::uint64_t seed, std::size_t features, std::size_t instances,
              const CauseProfile& profile, const std::string& out) {
    auto bench = generate_benchmark(seed, features, instances, profile);
    write_file(out, benchmark_to_json(bench));
    std::cout << "wrote " << bench.size() << " instances to " << out << "\n";
    return 0;
}

int cmd_analyze(const std::string& config_path, const std::string& out_dir,
                const CommonOverrides& overrides, unsigned jobs,
                const std::string& format) {
    RunConfig cfg = load_config(config_path);
    overrides.apply(cfg.analysis);

    std::vector<ProblemResult> results;
    std::vector<FeatureId> universe;
    if (cfg.sut.type == "sim") {
        auto instances = benchmark_from_file(cfg.sut.bench_path);
        results = analyze_bench(instances, cfg.analysis, cfg.metric, jobs);
        if (!instances.empty())
            for (const auto& f : instances.front().spec.feature_ids) universe.push_back(f);
    } else {
        auto sut = make_sut(cfg.sut);
        auto engine = make_engine(cfg.engine);
        Schema schema = Schema::from_json_file(cfg.schema_path);
        CausalGraph graph = graph_from_schema(schema);
        SimilarityFn sim = cfg.metric == "remote-embedding"
                               ? remote_embedding_similarity(cfg.sut.host, cfg.sut.port,
                                                             "/similarity", cfg.sut.timeout_ms)
                               : similarity_by_name(cfg.metric);
        for (const Problem& p : problems_from_file(cfg.problems_path))
            results.push_back(analyze_problem(*sut, graph, cfg.analysis, *engine, p, sim));
        for (const Feature& f : schema.features()) universe.push_back(f.id);
        std::sort(universe.begin(), universe.end());
    }
    write_results(out_dir, results);

    std::vector<ImportantFeatureSet> sets;
    for (const auto& r : results) sets.push_back(r.important_sets);
    ResponsibilityTable table = feature_responsibility(sets, universe);
    if (format == "csv") {
        write_file((fs::path(out_dir) / "ranking.csv").string(), table_to_csv(table));
    } else if (format == "markdown") {
        write_file((fs::path(out_dir) / "report.md").string(),
                   report_markdown(table, {}, 0));
    } else {
        write_file((fs::path(out_dir) / "ranking.json").string(),
                   canonical_json(table_to_json(table)));
    }
    std::cout << "analyzed " << results.size() << " problems; results in " << out_dir << "\n";
    return 0;
}

int cmd_oracle(const std::string& bench_path, std::size_t max_len, const std::string& out_dir) {
    auto instances = benchmark_from_file(bench_path);
    std::vector<ProblemResult> results;
    for (const auto& inst : instances) {
        SimulatorSut sut(inst.spec);
        CausalGraph graph = graph_from_schema(schema_for_instance(inst));
        results.push_back(oracle_result(sut, graph, max_len, inst.problem));
    }
    write_results(out_dir, results);
    std::cout << "oracle results for " << results.size() << " instances in " << out_dir << "\n";
    return 0;
}

int cmd_verify(const std::string& bench_path, const CommonOverrides& overrides, bool unbounded,
               unsigned jobs) {
    auto instances = benchmark_from_file(bench_path);
    AnalysisConfig config;
    if (unbounded) {
        config.budget = kUnbounded;
        config.patience = kUnbounded;
    }
    overrides.apply(config);

    auto results = analyze_bench(instances, config, "jaccard", jobs);
    double min_precision = 1.0, min_recall = 1.0;
    std::uint64_t violations = 0;
    std::size_t exact = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        SimulatorSut sut(instances[i].spec);
        CausalGraph graph = graph_from_schema(schema_for_instance(instances[i]));
        ImportantFeatureSet truth =
            enumerate_minimal_causes(sut, graph, config.max_length, instances[i].problem);
        VerifyReport report = verify_result(results[i].important_sets, truth);
        min_precision = std::min(min_precision, report.precision);
        min_recall = std::min(min_recall, report.recall);
        violations += report.minimality_violations;
        if (report.precision == 1.0 && report.recall == 1.0) ++exact;
    }
    std::cout << "instances: " << instances.size() << "\n"
              << "exact matches: " << exact << "\n"
              << "min precision: " << min_precision << "\n"
              << "min recall: " << min_recall << "\n"
              << "minimality violations: " << violations << "\n";
    return 0;
}

int cmd_rank(const std::string& results_dir, const std::string& schema_path,
             const std::string& format, const std::string& out_dir, std::size_t topk) {
    auto results = load_results(results_dir);
    std::vector<ImportantFeatureSet> sets;
    for (const auto& r : results) sets.push_back(r.important_sets);
    ResponsibilityTable table = feature_responsibility(sets, feature_universe(results, schema_path));

    fs::create_directories(out_dir);
    if (format == "csv") {
        write_file((fs::path(out_dir) / "ranking.csv").string(), table_to_csv(table));
    } else if (format == "markdown") {
        auto counts = topk_appearance({table}, std::min(topk, table.ranking.size()));
        write_file((fs::path(out_dir) / "report.md").string(),
                   report_markdown(table, counts, std::min(topk, table.ranking.size())));
    } else {
        write_file((fs::path(out_dir) / "ranking.json").string(),
                   canonical_json(table_to_json(table)));
    }
    if (table.fr.size() >= 2)
        std::cout << "fr_std (max-normalized): " << fr_std(table) << "\n";
    std::cout << "ranked " << table.ranking.size() << " features from " << sets.size()
              << " problem results\n";
    return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
    ResponsibilityTable a = table_from_json_file(a_path);
    ResponsibilityTable b = table_from_json_file(b_path);
    std::cout << "kendall_tau_b: " << kendall_tau(a.fr, b.fr) << "\n";
    return 0;
}

int cmd_prune(const std::string& bench_path, const std::string& ranking_path, std::size_t n,
              const std::string& out) {
    auto instances = benchmark_from_file(bench_path);
    ResponsibilityTable table = table_from_json_file(ranking_path);
    PruningPlan plan = pruning_plan(table, n);
    PruningDeltas deltas = evaluate_pruning(instances, plan);
    std::cout << "n,delta_pass1,delta_tokens\n"
              << n << "," << deltas.delta_pass1 << "," << deltas.delta_tokens << "\n";
    if (!out.empty()) {
        nlohmann::json j;
        j["n"] = n;
        j["disabled"] = plan.disabled;
        j["delta_pass1"] = deltas.delta_pass1;
        j["delta_tokens"] = deltas.delta_tokens;
        write_file(out, canonical_json(j));
    }
    return 0;
}

std::vector<FailingInstance> planted_failures(const std::vector<BenchmarkInstance>& instances) {
    std::vector<FailingInstance> out;
    for (const auto& inst : instances) {
        if (inst.spec.planted_causes.empty()) continue;
        FailingInstance fi;
        fi.sut = build_sim(inst.spec);
        fi.problem = inst.problem;
        // Corrupt the canonically first planted cause.
        for (const auto& f : inst.spec.planted_causes.front().members())
            fi.corrupting_intervention[f] = "intervention:" + f;
        out.push_back(std::move(fi));
    }
    return out;
}

int cmd_repair(const std::string& bench_path, const std::string& ranking_path, std::size_t n,
               const std::string& strategy_name, std::uint64_t seed) {
    auto instances = benchmark_from_file(bench_path);
    ResponsibilityTable table = table_from_json_file(ranking_path);

    RepairStrategy strategy;
    strategy.kind = repair_strategy_from_string(strategy_name);
    strategy.seed = seed;

    FailureContext context;
    if (!instances.empty()) {
        int stage = 0;
        for (const auto& f : instances.front().spec.feature_ids) context.stage_index[f] = stage++;
        SimulatorSut sut(instances.front().spec);
        auto failures = planted_failures({instances.front()});
        if (!failures.empty()) {
            ExecutionRecord rec = sut.execute(instances.front().problem,
                                              failures.front().corrupting_intervention, 0);
            context.observed = rec.observed;
        }
    }

    std::vector<FeatureId> priorities = repair_priorities(table, strategy, n, context);
    RepairOutcome outcome = evaluate_repair(planted_failures(instances), priorities);
    std::cout << "strategy: " << strategy_name << "\npriorities:";
    for (const auto& f : priorities) std::cout << " " << f;
    std::cout << "\nfix_rate: " << outcome.fix_rate << " (" << outcome.fixed << "/"
              << outcome.total << ")\n";
    return 0;
}

int cmd_sweep(const std::string& bench_path, const std::string& param,
              const std::vector<std::uint64_t>& values, const CommonOverrides& overrides,
              unsigned jobs) {
    auto instances = benchmark_from_file(bench_path);
    std::cout << param << ",identified_combinations,avg_executions\n";
    for (std::uint64_t value : values) {
        AnalysisConfig config;
        overrides.apply(config);
        if (param == "k") {
            config.patience = value;
        } else if (param == "lmax") {
            config.max_length = static_cast<std::size_t>(value);
        } else {
            throw ParseError("sweep param must be 'k' or 'lmax'");
        }
        auto results = analyze_bench(instances, config, "jaccard", jobs);
        std::uint64_t identified = 0, executions = 0;
        for (const auto& r : results) {
            identified += r.important_sets.size();
            executions += r.stats.executions_used;
        }
        std::cout << value << "," << identified << ","
                  << (instances.empty() ? 0.0
                                        : static_cast<double>(executions) /
                                              static_cast<double>(instances.size()))
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causescope: counterfactual importance analysis for staged pipelines"};
    app.require_subcommand(1);

    // bench
    auto* bench = app.add_subcommand("bench", "Generate a simulator benchmark");
    std::uint64_t bench_seed = 7;
    std::size_t bench_features = 12, bench_instances = 100;
    CauseProfile profile;
    std::string bench_out = "bench.json";
    bench->add_option("--seed", bench_seed);
    bench->add_option("--features", bench_features);
    bench->add_option("--instances", bench_instances);
    bench->add_option("--min-cause-len", profile.min_length);
    bench->add_option("--max-cause-len", profile.max_length);
    bench->add_option("--min-causes", profile.min_causes);
    bench->add_option("--max-causes", profile.max_causes);
    bench->add_option("--out", bench_out);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Run the importance search over a problem set");
    std::string analyze_config, analyze_out = "out";
    unsigned analyze_jobs = 1;
    std::string analyze_format = "json";
    CommonOverrides analyze_overrides;
    analyze->add_option("--config", analyze_config)->required();
    analyze->add_option("--out", analyze_out);
    analyze->add_option("--jobs", analyze_jobs);
    analyze->add_option("--format", analyze_format)
        ->check(CLI::IsMember({"json", "csv", "markdown"}));
    analyze_overrides.attach(analyze);

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force ground-truth minimal causes");
    std::string oracle_bench, oracle_out = "oracle-out";
    std::size_t oracle_max_len = 5;
    oracle_cmd->add_option("--bench", oracle_bench)->required();
    oracle_cmd->add_option("--max-len", oracle_max_len);
    oracle_cmd->add_option("--out", oracle_out);

    // verify
    auto* verify = app.add_subcommand("verify", "Compare the search against the oracle");
    std::string verify_bench;
    bool verify_unbounded = false;
    unsigned verify_jobs = 1;
    CommonOverrides verify_overrides;
    verify->add_option("--bench", verify_bench)->required();
    verify->add_flag("--unbounded", verify_unbounded, "Unlimited budget and patience");
    verify->add_option("--jobs", verify_jobs);
    verify_overrides.attach(verify);

    // rank
    auto* rank = app.add_subcommand("rank", "Aggregate FR table and statistics");
    std::string rank_results, rank_schema, rank_format = "json", rank_out = "rank-out";
    std::size_t rank_topk = 5;
    rank->add_option("--results", rank_results)->required();
    rank->add_option("--schema", rank_schema);
    rank->add_option("--format", rank_format)->check(CLI::IsMember({"json", "csv", "markdown"}));
    rank->add_option("--out", rank_out);
    rank->add_option("--top-k", rank_topk);

    // compare
    auto* compare = app.add_subcommand("compare", "Kendall tau-b between two rankings");
    std::string compare_a, compare_b;
    compare->add_option("--a", compare_a)->required();
    compare->add_option("--b", compare_b)->required();

    // prune
    auto* prune = app.add_subcommand("prune", "Bottom-n pruning plan and delta metrics");
    std::string prune_bench, prune_ranking, prune_out;
    std::size_t prune_n = 2;
    prune->add_option("--bench", prune_bench)->required();
    prune->add_option("--ranking", prune_ranking)->required();
    prune->add_option("--n", prune_n);
    prune->add_option("--out", prune_out);

    // repair
    auto* repair = app.add_subcommand("repair", "Repair-prioritization evaluation");
    std::string repair_bench, repair_ranking, repair_strategy = "causality";
    std::size_t repair_n = 3;
    std::uint64_t repair_seed = 0;
    repair->add_option("--bench", repair_bench)->required();
    repair->add_option("--ranking", repair_ranking)->required();
    repair->add_option("--n", repair_n);
    repair->add_option("--strategy", repair_strategy)
        ->check(CLI::IsMember({"causality", "random", "temporal", "length"}));
    repair->add_option("--seed", repair_seed);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Vary k or L_max and tabulate identified counts");
    std::string sweep_bench, sweep_param = "k";
    std::vector<std::uint64_t> sweep_values{5, 10, 15, 20, 25};
    unsigned sweep_jobs = 1;
    CommonOverrides sweep_overrides;
    sweep->add_option("--bench", sweep_bench)->required();
    sweep->add_option("--param", sweep_param)->check(CLI::IsMember({"k", "lmax"}));
    sweep->add_option("--values", sweep_values)->delimiter(',');
    sweep->add_option("--jobs", sweep_jobs);
    sweep_overrides.attach(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (bench->parsed())
            return cmd_bench(bench_seed, bench_features, bench_instances, profile, bench_out);
        if (analyze->parsed())
            return cmd_analyze(analyze_config, analyze_out, analyze_overrides, analyze_jobs,
                               analyze_format);
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_bench, oracle_max_len, oracle_out);
        if (verify->parsed())
            return cmd_verify(verify_bench, verify_overrides, verify_unbounded, verify_jobs);
        if (rank->parsed())
            return cmd_rank(rank_results, rank_schema, rank_format, rank_out, rank_topk);
        if (compare->parsed()) return cmd_compare(compare_a, compare_b);
        if (prune->parsed()) return cmd_prune(prune_bench, prune_ranking, prune_n, prune_out);
        if (repair->parsed())
            return cmd_repair(repair_bench, repair_ranking, repair_n, repair_strategy,
                              repair_seed);
        if (sweep->parsed())
            return cmd_sweep(sweep_bench, sweep_param, sweep_values, sweep_overrides, sweep_jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
