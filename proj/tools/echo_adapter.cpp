// Reference adapter for the line protocol: reads one JSON request per line on
// stdin and answers with a well-formed response on stdout. Echoes the
// interventions back as observed values; passes unless a feature id contains
// the substring "fail". Useful for conformance tests and as a template for
// real drivers.

#include <iostream>
#include <string>

#include "json.hpp"

int main() {
    std::ios::sync_with_stdio(false);
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        nlohmann::json req;
        try {
            req = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            std::cout << R"({"outcome":"error","observed":{},"tokens":0,)"
                      << R"("error_detail":"request is not valid JSON"})" << "\n"
                      << std::flush;
            continue;
        }
        nlohmann::json resp;
        bool fail = false;
        nlohmann::json observed = nlohmann::json::object();
        std::uint64_t tokens = 0;
        if (req.contains("interventions")) {
            for (const auto& [feature, value] : req["interventions"].items()) {
                observed[feature] = value;
                tokens += value.get<std::string>().size();
                if (feature.find("fail") != std::string::npos) fail = true;
            }
        }
        resp["outcome"] = fail ? "fail" : "pass";
        resp["observed"] = observed;
        resp["tokens"] = tokens;
        std::cout << resp.dump() << "\n" << std::flush;
    }
    return 0;
}
