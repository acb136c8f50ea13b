// SPDX-License-Identifier: Apache-2.0
#include "ganeval/report_json.hpp"

#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "ganeval/error.hpp"
#include "ganeval/fid.hpp"
#include "ganeval/inception_score.hpp"

namespace ganeval {

namespace {

[[noreturn]] void schema_error(const std::string& msg) {
  throw Error(Errc::format, fmt::format("invalid JSON document: {}", msg));
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(fmt::format("missing key '{}'", key));
  return j.at(key);
}

std::size_t as_count(const nlohmann::json& v, const char* key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    schema_error(fmt::format("'{}' must be a nonnegative integer", key));
  }
  return v.get<std::size_t>();
}

std::optional<std::size_t> as_opt_count(const nlohmann::json& j, const char* key) {
  const nlohmann::json& v = field(j, key);
  if (v.is_null()) return std::nullopt;
  return as_count(v, key);
}

double as_double(const nlohmann::json& v, const char* key) {
  if (!v.is_number()) schema_error(fmt::format("'{}' must be a number", key));
  return v.get<double>();
}

std::string as_string(const nlohmann::json& v, const char* key) {
  if (!v.is_string()) schema_error(fmt::format("'{}' must be a string", key));
  return v.get<std::string>();
}

OrderedJson opt_count(const std::optional<std::size_t>& v) {
  return v ? OrderedJson(*v) : OrderedJson(nullptr);
}

OrderedJson conventions_json() {
  OrderedJson c;
  c["seed_std"] = "sample (n-1)";
  c["split_std"] = "population (n)";
  c["covariance"] = "unbiased (n-1)";
  c["kid_kernel"] = "(x.y/d + 1)^3";
  c["kid_split_pairing"] = "contiguous, block i real with block i fake";
  c["is_marginal"] = "per split";
  c["is_log_floor"] = kMarginalLogFloor;
  c["fid_clamp_tolerance"] = kFidClampTolerance;
  c["fid_epsilon"] = kFidEpsilon;
  c["prng"] = "splitmix64";
  c["seed_derivation"] = "derive_seed(seed, fnv1a64(\"real\"|\"fake\"))";
  return c;
}

}  // namespace

OrderedJson config_to_json(const ProtocolConfig& c) {
  OrderedJson j;
  j["metric"] = metric_name(c.metric);
  j["n_real"] = opt_count(c.n_real);
  j["n_fake"] = c.n_fake;
  j["seeds"] = c.seeds;
  j["splits"] = opt_count(c.splits);
  j["feature_source"] = c.feature_source;
  j["input_kind"] = input_kind_name(c.input_kind);
  return j;
}

ProtocolConfig config_from_json(const nlohmann::json& j) {
  ProtocolConfig c;
  const auto metric = parse_metric(as_string(field(j, "metric"), "metric"));
  if (!metric) schema_error("unknown metric");
  c.metric = *metric;
  c.n_real = as_opt_count(j, "n_real");
  c.n_fake = as_count(field(j, "n_fake"), "n_fake");
  c.seeds.clear();
  const nlohmann::json& seeds = field(j, "seeds");
  if (!seeds.is_array()) schema_error("'seeds' must be an array");
  for (const auto& s : seeds) c.seeds.push_back(as_count(s, "seeds"));
  c.splits = as_opt_count(j, "splits");
  c.feature_source = as_string(field(j, "feature_source"), "feature_source");
  if (j.contains("input_kind")) {
    const auto kind = parse_input_kind(as_string(j.at("input_kind"), "input_kind"));
    if (!kind) schema_error("unknown input_kind");
    c.input_kind = *kind;
  }
  return c;
}

OrderedJson report_to_json(const ScoreReport& r) {
  OrderedJson j;
  j["schema_version"] = kReportSchemaVersion;
  j["metric"] = metric_name(r.config.metric);
  j["config"] = config_to_json(r.config);
  OrderedJson per_seed = OrderedJson::array();
  for (const SeedResult& s : r.per_seed) {
    OrderedJson e;
    e["seed"] = s.seed;
    if (r.config.metric == Metric::fid) {
      e["value"] = s.value;
      e["epsilon_applied"] = s.epsilon_applied;
    } else {
      e["mean"] = s.value;
      e["std"] = s.split_std;
      e["split_values"] = s.split_values;
    }
    per_seed.push_back(std::move(e));
  }
  j["per_seed"] = std::move(per_seed);
  j["mean"] = r.mean;
  j["std"] = r.std;
  j["splits"] = opt_count(r.config.splits);
  j["feature_source"] = r.config.feature_source;
  OrderedJson digests;
  digests["real"] = r.input_digests.real ? OrderedJson(*r.input_digests.real) : OrderedJson(nullptr);
  digests["fake"] = r.input_digests.fake;
  j["input_digests"] = std::move(digests);
  j["timing_ms"] = r.timing_ms;
  j["conventions"] = conventions_json();
  return j;
}

ScoreReport report_from_json(const nlohmann::json& j) {
  const nlohmann::json& version = field(j, "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kReportSchemaVersion) {
    schema_error("unsupported schema_version");
  }
  ScoreReport r;
  r.config = config_from_json(field(j, "config"));
  if (as_string(field(j, "metric"), "metric") != metric_name(r.config.metric)) {
    schema_error("top-level metric disagrees with config.metric");
  }
  const nlohmann::json& per_seed = field(j, "per_seed");
  if (!per_seed.is_array()) schema_error("'per_seed' must be an array");
  for (const auto& e : per_seed) {
    SeedResult s;
    s.seed = as_count(field(e, "seed"), "seed");
    if (r.config.metric == Metric::fid) {
      s.value = as_double(field(e, "value"), "value");
      s.epsilon_applied = field(e, "epsilon_applied").get<bool>();
    } else {
      s.value = as_double(field(e, "mean"), "mean");
      s.split_std = as_double(field(e, "std"), "std");
      for (const auto& v : field(e, "split_values")) s.split_values.push_back(as_double(v, "split_values"));
    }
    r.per_seed.push_back(std::move(s));
  }
  r.mean = as_double(field(j, "mean"), "mean");
  r.std = as_double(field(j, "std"), "std");
  const nlohmann::json& digests = field(j, "input_digests");
  const nlohmann::json& real = field(digests, "real");
  if (!real.is_null()) r.input_digests.real = as_string(real, "input_digests.real");
  r.input_digests.fake = as_string(field(digests, "fake"), "input_digests.fake");
  const nlohmann::json& timing = field(j, "timing_ms");
  if (!timing.is_number_integer()) schema_error("'timing_ms' must be an integer");
  r.timing_ms = timing.get<std::int64_t>();
  return r;
}

OrderedJson bias_report_to_json(const BiasReport& r) {
  OrderedJson j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = "fid_bias_curve";
  j["dim"] = r.dim;
  j["seed"] = r.seed;
  j["repeats"] = r.repeats;
  j["sample_sizes"] = r.sample_sizes;
  j["per_size_mean_fid"] = r.per_size_mean_fid;
  j["per_size_se_fid"] = r.per_size_se_fid;
  j["per_size_mean_kid"] = r.per_size_mean_kid;
  j["per_size_se_kid"] = r.per_size_se_kid;
  j["true_fid"] = r.true_fid;
  return j;
}

std::string dump_json(const OrderedJson& j) { return j.dump(2) + "\n"; }

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, fmt::format("{}: cannot open for reading", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::format, fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, fmt::format("{}: cannot open for writing", path.string()));
  out << text;
  out.flush();
  if (!out) throw Error(Errc::io, fmt::format("{}: write failed", path.string()));
}

}  // namespace ganeval
