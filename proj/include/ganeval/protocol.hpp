// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ganeval/matrix.hpp"

namespace ganeval {

enum class Metric { is, fid, kid };

std::string_view metric_name(Metric m) noexcept;  // "is", "fid", "kid"
std::optional<Metric> parse_metric(std::string_view s) noexcept;

/// How the fake matrix is interpreted for IS.
enum class InputKind { logits, probabilities };

std::string_view input_kind_name(InputKind k) noexcept;
std::optional<InputKind> parse_input_kind(std::string_view s) noexcept;

/// One standardized evaluation recipe. n_real is present iff the metric
/// compares against real features; splits is present for IS and KID.
struct ProtocolConfig {
  Metric metric = Metric::fid;
  std::optional<std::size_t> n_real;
  std::size_t n_fake = 0;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  std::optional<std::size_t> splits;
  std::string feature_source = "unspecified";
  InputKind input_kind = InputKind::logits;

  friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

/// Throws Errc::invalid_argument describing the first violated rule.
void validate(const ProtocolConfig& config);

/// Built-in recipes: "table4-is", "table4-fid", "table4-kid" (baseline
/// evaluation), and one FID recipe per reproduced model, e.g.
/// "table1-sngan" (10K real / 5K fake). All use seeds {0, 1, 2}.
std::optional<ProtocolConfig> find_preset(std::string_view name);
std::vector<std::string_view> preset_names();

struct SeedResult {
  std::uint64_t seed = 0;
  /// FID value, or the split mean for IS/KID.
  double value = 0.0;
  /// IS/KID only.
  double split_std = 0.0;
  std::vector<double> split_values;
  /// FID only.
  bool epsilon_applied = false;

  friend bool operator==(const SeedResult&, const SeedResult&) = default;
};

struct InputDigests {
  std::optional<std::string> real;
  std::string fake;

  friend bool operator==(const InputDigests&, const InputDigests&) = default;
};

struct ScoreReport {
  ProtocolConfig config;
  std::vector<SeedResult> per_seed;
  double mean = 0.0;
  double std = 0.0;  // sample (n-1) across seeds
  InputDigests input_digests;
  std::int64_t timing_ms = 0;
};

/// Per seed s: subsample real and fake with independent streams
/// derive_seed(s, "real") / derive_seed(s, "fake"), compute the metric, and
/// aggregate the per-seed values with a sample (n-1) std.
ScoreReport run_protocol(const ProtocolConfig& config, const FeatureMatrix& real,
                         const FeatureMatrix& fake);
/// IS entry point: there is no real set.
ScoreReport run_protocol(const ProtocolConfig& config, const FeatureMatrix& fake);

struct FieldMismatch {
  std::string field;
  std::string a;
  std::string b;
};

struct Comparability {
  bool comparable = true;
  std::vector<FieldMismatch> mismatches;
};

/// Two scores are comparable iff metric, n_real, n_fake, splits and
/// feature_source all agree. Seeds may differ.
Comparability compare_reports(const ScoreReport& a, const ScoreReport& b);

}  // namespace ganeval
