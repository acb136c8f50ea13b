// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "ganeval/bias_lab.hpp"
#include "ganeval/protocol.hpp"

namespace ganeval {

using OrderedJson = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

OrderedJson config_to_json(const ProtocolConfig& config);
ProtocolConfig config_from_json(const nlohmann::json& j);

/// Keys in fixed order: schema_version, metric, config, per_seed, mean, std,
/// splits, feature_source, input_digests, timing_ms, then a conventions
/// block naming the normalizations and thresholds in effect.
OrderedJson report_to_json(const ScoreReport& report);
ScoreReport report_from_json(const nlohmann::json& j);

OrderedJson bias_report_to_json(const BiasReport& report);

/// Two-space indented dump with a trailing newline.
std::string dump_json(const OrderedJson& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ganeval
