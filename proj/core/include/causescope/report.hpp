#pragma once

#include <map>
#include <string>
#include <vector>

#include "causescope/aggregate.hpp"
#include "causescope/model.hpp"
#include "json.hpp"

namespace causescope {

/// Deterministic serialization: sorted keys, floats fixed to 6 decimals.
/// Identical inputs yield byte-identical text.
std::string canonical_json(const nlohmann::json& value);

nlohmann::json table_to_json(const ResponsibilityTable& table);
ResponsibilityTable table_from_json_file(const std::string& path);

/// CSV columns: feature_id, fr, normalized_fr, rank.
std::string table_to_csv(const ResponsibilityTable& table);

std::string report_markdown(const ResponsibilityTable& table,
                            const std::map<FeatureId, std::size_t>& topk_counts,
                            std::size_t topk);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace causescope
