#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "causescope/execution.hpp"
#include "causescope/influence.hpp"
#include "causescope/intervene.hpp"
#include "causescope/model.hpp"

namespace causescope {

struct SutDescriptor {
    std::string type = "sim";  // "sim" | "subprocess" | "http"
    std::string bench_path;    // sim: benchmark instance file
    std::vector<std::string> command;  // subprocess
    std::string host;          // http
    int port = 0;
    std::string path = "/execute";
    int timeout_ms = 10000;
    bool deterministic = true;
    unsigned repeats = 1;
    unsigned max_in_flight = 1;
};

struct EngineDescriptor {
    std::string type = "template";  // "template" | "catalog" | "remote"
    std::string catalog_path;
    std::string host;
    int port = 0;
    std::string path = "/intervene";
    int timeout_ms = 10000;
};

struct RunConfig {
    std::string schema_path;  // empty with sim benches (schemas are derived)
    std::string problems_path;
    SutDescriptor sut;
    EngineDescriptor engine;
    AnalysisConfig analysis;
    std::string metric = "jaccard";
};

/// Parses the run configuration, filling in the standard parameter defaults
/// (N=100, L_max=5, theta=0.5, k=10) when omitted. CAUSESCOPE_SEED in the
/// environment overrides the configured seed.
RunConfig load_config(const std::string& path);
RunConfig config_from_json_text(const std::string& text);

std::unique_ptr<InterventionEngine> make_engine(const EngineDescriptor& desc);
std::shared_ptr<Sut> make_sut(const SutDescriptor& desc);

std::vector<Problem> problems_from_file(const std::string& path);

}  // namespace causescope
