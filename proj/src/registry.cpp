// SPDX-License-Identifier: Apache-2.0
#include "ganeval/registry.hpp"

#include <array>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fmt/core.h>

namespace ganeval {

namespace fs = std::filesystem;

// --- HyperparameterRecord -------------------------------------------------

HyperparameterRecord HyperparameterRecord::from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(Errc::invalid_argument, "hyperparameters must be a JSON object");
  }
  HyperparameterRecord rec;
  for (const auto& [key, value] : j.items()) rec.set(key, value);
  return rec;
}

HyperparameterRecord HyperparameterRecord::parse(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::format, fmt::format("hyperparameters are not valid JSON: {}", e.what()));
  }
  return from_json(j);
}

HyperparameterRecord& HyperparameterRecord::set(const std::string& key, nlohmann::json value) {
  if (!(value.is_string() || value.is_number() || value.is_boolean())) {
    throw Error(Errc::invalid_argument,
                fmt::format("hyperparameter '{}' must be a string, number or boolean", key));
  }
  if (value.is_number_float() && !std::isfinite(value.get<double>())) {
    throw Error(Errc::invalid_argument, fmt::format("hyperparameter '{}' is not finite", key));
  }
  values_[key] = std::move(value);
  return *this;
}

namespace {

struct TrainingPreset {
  std::string_view name;
  std::string_view dataset;
  int resolution;
  std::string_view split;
  std::string_view decay;
  int n_dis;
};

constexpr std::array<TrainingPreset, 7> kTrainingPresets{{
    {"lsun-bedroom-128", "lsun_bedroom", 128, "train", "none", 2},
    {"celeba-128", "celeba", 128, "full", "none", 2},
    {"celeba-64", "celeba", 64, "full", "linear", 5},
    {"stl10-48", "stl10", 48, "unlabeled", "linear", 5},
    {"cifar10-32", "cifar10", 32, "train", "linear", 5},
    {"cifar100-32", "cifar100", 32, "train", "linear", 5},
    {"imagenet-32", "imagenet", 32, "train", "linear", 5},
}};

}  // namespace

std::optional<HyperparameterRecord> training_preset(std::string_view name) {
  for (const TrainingPreset& p : kTrainingPresets) {
    if (p.name != name) continue;
    HyperparameterRecord rec;
    rec.set("dataset", std::string(p.dataset))
        .set("resolution", p.resolution)
        .set("split", std::string(p.split))
        .set("lr", 2e-4)
        .set("beta1", 0.0)
        .set("beta2", 0.9)
        .set("lr_decay", std::string(p.decay))
        .set("n_dis", p.n_dis)
        .set("n_iter", 100000);
    return rec;
  }
  return std::nullopt;
}

std::vector<std::string_view> training_preset_names() {
  std::vector<std::string_view> out;
  for (const TrainingPreset& p : kTrainingPresets) out.push_back(p.name);
  return out;
}

std::string HparamDiff::describe() const {
  return fmt::format("{}: {} ≠ {}", key, stored.value_or("<missing>"),
                     offered.value_or("<missing>"));
}

std::vector<HparamDiff> diff_hparams(const HyperparameterRecord& stored,
                                     const HyperparameterRecord& offered) {
  std::set<std::string> keys;
  for (const auto& [k, v] : stored.values().items()) keys.insert(k);
  for (const auto& [k, v] : offered.values().items()) keys.insert(k);

  std::vector<HparamDiff> out;
  for (const std::string& k : keys) {
    HparamDiff d{k, std::nullopt, std::nullopt};
    if (stored.values().contains(k)) d.stored = stored.values().at(k).dump();
    if (offered.values().contains(k)) d.offered = offered.values().at(k).dump();
    if (d.stored != d.offered) out.push_back(std::move(d));
  }
  return out;
}

namespace {

std::string discrepancy_message(const std::vector<HparamDiff>& diffs) {
  std::string msg = "hyperparameters differ from the stored run:";
  for (const HparamDiff& d : diffs) msg += "\n  " + d.describe();
  return msg;
}

}  // namespace

HparamDiscrepancy::HparamDiscrepancy(std::vector<HparamDiff> diffs)
    : Error(Errc::hparam_discrepancy, discrepancy_message(diffs)), diffs_(std::move(diffs)) {}

// --- run directory helpers ----------------------------------------------

namespace {

[[noreturn]] void sys_error(Errc code, const fs::path& p, const char* what) {
  throw Error(code, fmt::format("{}: {}: {}", p.string(), what, std::strerror(errno)));
}

int acquire_lock(const fs::path& dir) {
  const fs::path p = dir / kLockFile;
  const int fd = ::open(p.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) sys_error(Errc::io, p, "cannot open lock file");
  if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd);
    throw Error(Errc::run_locked, fmt::format("{}: run is locked by another writer", dir.string()));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  if (::ftruncate(fd, 0) == 0) {
    [[maybe_unused]] const ssize_t n = ::write(fd, pid.data(), pid.size());
  }
  return fd;
}

int open_log(const fs::path& dir) {
  const fs::path p = dir / kMetricsFile;
  const int fd = ::open(p.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) sys_error(Errc::io, p, "cannot open metric log");
  return fd;
}

void write_all(int fd, const std::string& data, const fs::path& p) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_error(Errc::io, p, "write failed");
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::corrupt_run, fmt::format("{}: cannot read", p.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

HyperparameterRecord load_hparams(const fs::path& dir) {
  const fs::path p = dir / kHparamsFile;
  if (!fs::exists(p)) {
    throw Error(Errc::corrupt_run, fmt::format("{}: missing {}", dir.string(), kHparamsFile));
  }
  try {
    return HyperparameterRecord::parse(read_file(p));
  } catch (const Error& e) {
    throw Error(Errc::corrupt_run, fmt::format("{}: {}", p.string(), e.what()));
  }
}

std::optional<MetricEntry> parse_entry(std::string_view line) {
  const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  if (!j.contains("step") || !j["step"].is_number_unsigned()) return std::nullopt;
  if (!j.contains("name") || !j["name"].is_string()) return std::nullopt;
  if (!j.contains("value") || !j["value"].is_number()) return std::nullopt;
  if (!j.contains("kind") || !j["kind"].is_string()) return std::nullopt;
  return MetricEntry{j["step"].get<std::uint64_t>(), j["name"].get<std::string>(),
                     j["value"].get<double>(), j["kind"].get<std::string>()};
}

std::string entry_line(const MetricEntry& e) {
  nlohmann::ordered_json j;
  j["step"] = e.step;
  j["name"] = e.name;
  j["value"] = e.value;
  j["kind"] = e.kind;
  return j.dump() + "\n";
}

struct LogScan {
  std::vector<MetricEntry> entries;
  std::size_t valid_bytes = 0;      // prefix made of complete, valid lines
  bool unterminated_valid = false;  // final line parses but lacks '\n'
  std::size_t total_bytes = 0;
};

// Complete lines must all be valid, except that the final line may be torn.
LogScan scan_log(const std::string& text, const fs::path& p) {
  LogScan scan;
  scan.total_bytes = text.size();
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    const std::size_t nl = text.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::size_t end = terminated ? nl : text.size();
    const bool last = !terminated || end + 1 == text.size();
    const auto entry = parse_entry(std::string_view(text).substr(pos, end - pos));
    if (!entry) {
      if (last) break;
      throw Error(Errc::corrupt_run,
                  fmt::format("{}:{}: unparseable metric line", p.string(), line_no));
    }
    if (!scan.entries.empty() && entry->step < scan.entries.back().step) {
      throw Error(Errc::corrupt_run,
                  fmt::format("{}:{}: step {} regresses below {}", p.string(), line_no,
                              entry->step, scan.entries.back().step));
    }
    scan.entries.push_back(*entry);
    if (!terminated) {
      scan.unterminated_valid = true;
      scan.valid_bytes = text.size();
      break;
    }
    pos = end + 1;
    scan.valid_bytes = pos;
  }
  return scan;
}

bool dir_is_empty(const fs::path& dir) {
  return fs::is_directory(dir) && fs::directory_iterator(dir) == fs::directory_iterator();
}

void write_hparams(const fs::path& dir, const HyperparameterRecord& hparams) {
  const fs::path tmp = dir / (std::string(kHparamsFile) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << hparams.canonical() << "\n";
    out.flush();
    if (!out) throw Error(Errc::io, fmt::format("{}: write failed", tmp.string()));
  }
  fs::rename(tmp, dir / kHparamsFile);
}

}  // namespace

// --- Run ----------------------------------------------------------------------

Run Run::create(const fs::path& dir, const HyperparameterRecord& hparams, Durability durability) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) {
      throw Error(Errc::corrupt_run, fmt::format("{}: exists and is not a directory", dir.string()));
    }
    if (!dir_is_empty(dir)) {
      load_hparams(dir);  // throws corrupt_run when there is no valid run here
      throw Error(Errc::invalid_argument,
                  fmt::format("{}: already holds a run; resume it instead", dir.string()));
    }
  } else {
    fs::create_directories(dir);
  }

  Run run;
  run.dir_ = dir;
  run.hparams_ = hparams;
  run.durability_ = durability;
  run.lock_fd_ = acquire_lock(dir);
  write_hparams(dir, hparams);
  run.log_fd_ = open_log(dir);
  return run;
}

Run Run::resume(const fs::path& dir, const HyperparameterRecord& hparams, Durability durability) {
  if (!fs::is_directory(dir)) {
    throw Error(Errc::corrupt_run, fmt::format("{}: no run directory", dir.string()));
  }
  Run run;
  run.dir_ = dir;
  run.durability_ = durability;
  run.lock_fd_ = acquire_lock(dir);

  const HyperparameterRecord stored = load_hparams(dir);
  if (stored.canonical() != hparams.canonical()) {
    throw HparamDiscrepancy(diff_hparams(stored, hparams));
  }
  run.hparams_ = stored;

  const fs::path log_path = dir / kMetricsFile;
  const std::string text = fs::exists(log_path) ? read_file(log_path) : std::string();
  LogScan scan = scan_log(text, log_path);
  run.entries_ = std::move(scan.entries);
  run.global_step_ = run.entries_.empty() ? 0 : run.entries_.back().step;

  if (scan.valid_bytes < scan.total_bytes) {
    const std::size_t dropped = scan.total_bytes - scan.valid_bytes;
    fs::resize_file(log_path, scan.valid_bytes);
    run.warnings_.push_back(fmt::format("{}: dropped {} bytes of a torn final line",
                                        log_path.string(), dropped));
    run.log_fd_ = open_log(dir);
    run.log_metric(run.global_step_, "registry/truncated_tail", static_cast<double>(dropped),
                   "warning");
  } else {
    run.log_fd_ = open_log(dir);
    if (scan.unterminated_valid) run.append_line("\n");
  }
  return run;
}

Run::Run(Run&& other) noexcept { *this = std::move(other); }

Run& Run::operator=(Run&& other) noexcept {
  if (this != &other) {
    close();
    dir_ = std::move(other.dir_);
    hparams_ = std::move(other.hparams_);
    global_step_ = other.global_step_;
    entries_ = std::move(other.entries_);
    warnings_ = std::move(other.warnings_);
    durability_ = other.durability_;
    lock_fd_ = std::exchange(other.lock_fd_, -1);
    log_fd_ = std::exchange(other.log_fd_, -1);
  }
  return *this;
}

Run::~Run() { close(); }

void Run::close() noexcept {
  if (log_fd_ >= 0) ::close(log_fd_);
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
  log_fd_ = -1;
  lock_fd_ = -1;
}

void Run::append_line(const std::string& line) {
  const fs::path p = dir_ / kMetricsFile;
  write_all(log_fd_, line, p);
  if (durability_ == Durability::fsync && ::fsync(log_fd_) != 0) {
    sys_error(Errc::io, p, "fsync failed");
  }
}

void Run::log_metric(std::uint64_t step, const std::string& name, double value,
                     const std::string& kind) {
  if (step < global_step_) {
    throw Error(Errc::step_regression,
                fmt::format("step {} is below the current global step {}", step, global_step_));
  }
  if (!std::isfinite(value)) {
    throw Error(Errc::invalid_argument, fmt::format("metric '{}' value is not finite", name));
  }
  MetricEntry e{step, name, value, kind};
  append_line(entry_line(e));
  entries_.push_back(std::move(e));
  global_step_ = step;
}

RunSnapshot read_run(const fs::path& dir) {
  RunSnapshot snap;
  snap.hparams = load_hparams(dir);
  const fs::path log_path = dir / kMetricsFile;
  if (fs::exists(log_path)) {
    snap.entries = scan_log(read_file(log_path), log_path).entries;
  }
  snap.global_step = snap.entries.empty() ? 0 : snap.entries.back().step;
  return snap;
}

}  // namespace ganeval
