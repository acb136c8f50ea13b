// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ganeval/error.hpp"

namespace ganeval {

/// Flat key -> string/number/boolean map. Keys are stored sorted, and the
/// canonical form is the compact JSON dump, so two records are equal iff
/// their canonical strings are byte-equal.
class HyperparameterRecord {
 public:
  HyperparameterRecord() : values_(nlohmann::json::object()) {}

  /// Throws Errc::invalid_argument for non-objects and nested values.
  static HyperparameterRecord from_json(const nlohmann::json& j);
  static HyperparameterRecord parse(std::string_view text);

  HyperparameterRecord& set(const std::string& key, nlohmann::json value);

  const nlohmann::json& values() const noexcept { return values_; }
  std::string canonical() const { return values_.dump(); }

  friend bool operator==(const HyperparameterRecord& a, const HyperparameterRecord& b) {
    return a.canonical() == b.canonical();
  }

 private:
  nlohmann::json values_;
};

/// Training configuration for one dataset, e.g. "cifar10-32",
/// "celeba-128", "lsun-bedroom-128", "stl10-48".
std::optional<HyperparameterRecord> training_preset(std::string_view dataset);
std::vector<std::string_view> training_preset_names();

struct HparamDiff {
  std::string key;
  std::optional<std::string> stored;   // canonical value, absent if missing
  std::optional<std::string> offered;

  std::string describe() const;
};

std::vector<HparamDiff> diff_hparams(const HyperparameterRecord& stored,
                                     const HyperparameterRecord& offered);

class HparamDiscrepancy : public Error {
 public:
  explicit HparamDiscrepancy(std::vector<HparamDiff> diffs);

  const std::vector<HparamDiff>& diffs() const noexcept { return diffs_; }

 private:
  std::vector<HparamDiff> diffs_;
};

struct MetricEntry {
  std::uint64_t step = 0;
  std::string name;
  double value = 0.0;
  std::string kind;

  friend bool operator==(const MetricEntry&, const MetricEntry&) = default;
};

enum class Durability {
  flush,  // write(2) before returning; survives process death
  fsync,  // additionally fsync(2); survives power loss
};

/// A run directory holding the single writer's lock:
///
///   hparams.json   canonical hyperparameters
///   metrics.jsonl  {"step": s, "name": ..., "value": ..., "kind": ...} per line
///   run.lock       advisory flock(2) held while this object lives
class Run {
 public:
  /// dir must be absent or empty.
  static Run create(const std::filesystem::path& dir, const HyperparameterRecord& hparams,
                    Durability durability = Durability::flush);

  /// Throws HparamDiscrepancy listing every differing key if hparams differ
  /// from the stored ones. A torn final line in metrics.jsonl is truncated
  /// and a "warning" entry is appended in its place.
  static Run resume(const std::filesystem::path& dir, const HyperparameterRecord& hparams,
                    Durability durability = Durability::flush);

  Run(Run&& other) noexcept;
  Run& operator=(Run&& other) noexcept;
  Run(const Run&) = delete;
  Run& operator=(const Run&) = delete;
  ~Run();

  /// Appends one line; step must not be below global_step().
  void log_metric(std::uint64_t step, const std::string& name, double value,
                  const std::string& kind = "scalar");

  const std::filesystem::path& dir() const noexcept { return dir_; }
  const HyperparameterRecord& hparams() const noexcept { return hparams_; }
  std::uint64_t global_step() const noexcept { return global_step_; }
  const std::vector<MetricEntry>& entries() const noexcept { return entries_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  Run() = default;
  void append_line(const std::string& line);
  void close() noexcept;

  std::filesystem::path dir_;
  HyperparameterRecord hparams_;
  std::uint64_t global_step_ = 0;
  std::vector<MetricEntry> entries_;
  std::vector<std::string> warnings_;
  Durability durability_ = Durability::flush;
  int lock_fd_ = -1;
  int log_fd_ = -1;
};

/// Read-only view of a run for concurrent readers; takes no lock and skips
/// a torn final line instead of repairing it.
struct RunSnapshot {
  HyperparameterRecord hparams;
  std::uint64_t global_step = 0;
  std::vector<MetricEntry> entries;
};
RunSnapshot read_run(const std::filesystem::path& dir);

inline constexpr std::string_view kHparamsFile = "hparams.json";
inline constexpr std::string_view kMetricsFile = "metrics.jsonl";
inline constexpr std::string_view kLockFile = "run.lock";

}  // namespace ganeval
