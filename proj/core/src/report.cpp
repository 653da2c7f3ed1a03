#include "causescope/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "causescope/errors.hpp"

namespace causescope {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void escape_into(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void emit(const nlohmann::json& v, std::string& out) {
    switch (v.type()) {
        case nlohmann::json::value_t::null: out += "null"; break;
        case nlohmann::json::value_t::boolean: out += v.get<bool>() ? "true" : "false"; break;
        case nlohmann::json::value_t::number_integer:
            out += std::to_string(v.get<std::int64_t>());
            break;
        case nlohmann::json::value_t::number_unsigned:
            out += std::to_string(v.get<std::uint64_t>());
            break;
        case nlohmann::json::value_t::number_float:
            out += format_double(v.get<double>());
            break;
        case nlohmann::json::value_t::string: escape_into(v.get<std::string>(), out); break;
        case nlohmann::json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += ',';
                first = false;
                emit(item, out);
            }
            out += ']';
            break;
        }
        case nlohmann::json::value_t::object: {
            // nlohmann objects iterate in key order already; restate the sort
            // through std::map so the guarantee does not rest on that detail.
            std::map<std::string, const nlohmann::json*> sorted;
            for (auto it = v.begin(); it != v.end(); ++it) sorted[it.key()] = &it.value();
            out += '{';
            bool first = true;
            for (const auto& [key, item] : sorted) {
                if (!first) out += ',';
                first = false;
                escape_into(key, out);
                out += ':';
                emit(*item, out);
            }
            out += '}';
            break;
        }
        default: out += "null";
    }
}

}  // namespace

std::string canonical_json(const nlohmann::json& value) {
    std::string out;
    emit(value, out);
    out += '\n';
    return out;
}

nlohmann::json table_to_json(const ResponsibilityTable& table) {
    nlohmann::json j;
    j["fr"] = table.fr;
    j["normalized_fr"] = table.normalized_fr;
    j["ranking"] = table.ranking;
    j["by_length_contribution"] = nlohmann::json::object();
    for (const auto& [len, pct] : table.by_length_contribution)
        j["by_length_contribution"][std::to_string(len)] = pct;
    return j;
}

ResponsibilityTable table_from_json_file(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("ranking parse: ") + e.what());
    }
    ResponsibilityTable table;
    table.fr = j.at("fr").get<std::map<FeatureId, double>>();
    table.normalized_fr = j.value("normalized_fr", std::map<FeatureId, double>{});
    table.ranking = j.at("ranking").get<std::vector<FeatureId>>();
    const nlohmann::json by_length = j.value("by_length_contribution", nlohmann::json::object());
    for (const auto& [len, pct] : by_length.items())
        table.by_length_contribution[std::stoul(len)] = pct.get<double>();
    return table;
}

std::string table_to_csv(const ResponsibilityTable& table) {
    std::string out = "feature_id,fr,normalized_fr,rank\n";
    std::size_t rank = 1;
    for (const auto& f : table.ranking) {
        out += f + "," + format_double(table.fr.at(f)) + "," +
               format_double(table.normalized_fr.at(f)) + "," + std::to_string(rank++) + "\n";
    }
    return out;
}

std::string report_markdown(const ResponsibilityTable& table,
                            const std::map<FeatureId, std::size_t>& topk_counts,
                            std::size_t topk) {
    std::ostringstream md;
    md << "# Feature responsibility report\n\n";
    md << "## FR ranking\n\n";
    md << "| rank | feature | FR | normalized |\n|---|---|---|---|\n";
    std::size_t rank = 1;
    for (const auto& f : table.ranking)
        md << "| " << rank++ << " | " << f << " | " << format_double(table.fr.at(f)) << " | "
           << format_double(table.normalized_fr.at(f)) << " |\n";
    md << "\n## Contribution by combination length\n\n";
    md << "| length | % of total FR |\n|---|---|\n";
    for (const auto& [len, pct] : table.by_length_contribution)
        md << "| " << len << " | " << format_double(pct) << " |\n";
    if (!topk_counts.empty()) {
        md << "\n## Top-" << topk << " appearance counts\n\n";
        md << "| feature | count |\n|---|---|\n";
        for (const auto& [f, count] : topk_counts) md << "| " << f << " | " << count << " |\n";
    }
    return md.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for read: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace causescope
