#include "causescope/config.hpp"

#include <cstdlib>

#include "causescope/adapter.hpp"
#include "causescope/errors.hpp"
#include "causescope/report.hpp"
#include "json.hpp"

namespace causescope {

RunConfig config_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config parse: ") + e.what());
    }

    RunConfig cfg;
    cfg.schema_path = j.value("schema", std::string{});
    cfg.problems_path = j.value("problems", std::string{});
    cfg.metric = j.value("metric", std::string{"jaccard"});

    if (j.contains("sut")) {
        const auto& js = j["sut"];
        cfg.sut.type = js.value("type", std::string{"sim"});
        cfg.sut.bench_path = js.value("bench", std::string{});
        cfg.sut.command = js.value("command", std::vector<std::string>{});
        cfg.sut.host = js.value("host", std::string{});
        cfg.sut.port = js.value("port", 0);
        cfg.sut.path = js.value("path", std::string{"/execute"});
        cfg.sut.timeout_ms = js.value("timeout_ms", 10000);
        cfg.sut.deterministic = js.value("deterministic", true);
        cfg.sut.repeats = js.value("repeats", 1u);
        cfg.sut.max_in_flight = js.value("max_in_flight", 1u);
    }
    if (j.contains("engine")) {
        const auto& je = j["engine"];
        cfg.engine.type = je.value("type", std::string{"template"});
        cfg.engine.catalog_path = je.value("catalog", std::string{});
        cfg.engine.host = je.value("host", std::string{});
        cfg.engine.port = je.value("port", 0);
        cfg.engine.path = je.value("path", std::string{"/intervene"});
        cfg.engine.timeout_ms = je.value("timeout_ms", 10000);
    }

    const auto ja = j.value("analysis", nlohmann::json::object());
    cfg.analysis.budget = ja.value("budget", std::uint64_t{100});
    cfg.analysis.max_length = ja.value("max_length", std::size_t{5});
    cfg.analysis.theta = ja.value("theta", 0.5);
    cfg.analysis.patience = ja.value("patience", std::uint64_t{10});
    cfg.analysis.seed = ja.value("seed", std::uint64_t{0});

    if (const char* env_seed = std::getenv("CAUSESCOPE_SEED"))
        cfg.analysis.seed = std::strtoull(env_seed, nullptr, 10);

    cfg.analysis.validate(0);
    if (cfg.metric != "jaccard" && cfg.metric != "edit-ratio" && cfg.metric != "remote-embedding")
        throw InvariantViolation("unknown similarity metric: " + cfg.metric);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    return config_from_json_text(read_file(path));
}

std::unique_ptr<InterventionEngine> make_engine(const EngineDescriptor& desc) {
    if (desc.type == "template") return std::make_unique<TemplateEngine>();
    if (desc.type == "catalog") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(desc.catalog_path));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("catalog parse: ") + e.what());
        }
        std::map<FeatureId, std::vector<std::string>> catalog;
        for (const auto& [feature, values] : j.items())
            catalog[feature] = values.get<std::vector<std::string>>();
        return std::make_unique<CatalogEngine>(std::move(catalog));
    }
    if (desc.type == "remote")
        return make_remote_engine(desc.host, desc.port, desc.path, desc.timeout_ms);
    throw ParseError("unknown engine type: " + desc.type);
}

std::shared_ptr<Sut> make_sut(const SutDescriptor& desc) {
    if (desc.type == "subprocess")
        return std::make_shared<SubprocessAdapter>(desc.command, desc.timeout_ms,
                                                   desc.deterministic, desc.repeats);
    if (desc.type == "http")
        return std::make_shared<HttpAdapter>(desc.host, desc.port, desc.path, desc.timeout_ms,
                                             desc.deterministic, desc.repeats);
    throw ParseError("make_sut handles adapter types only; sim SUTs come from benchmark files");
}

std::vector<Problem> problems_from_file(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("problems parse: ") + e.what());
    }
    std::vector<Problem> out;
    for (const auto& jp : j.at("problems")) {
        Problem p;
        p.id = jp.at("id").get<std::string>();
        p.specification = jp.value("specification", std::string{});
        p.baseline = jp.at("baseline").get<std::map<FeatureId, std::string>>();
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace causescope
