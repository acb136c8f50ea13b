// SPDX-License-Identifier: Apache-2.0
#include "ganeval/protocol.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <set>

#include <fmt/core.h>

#include "ganeval/digest.hpp"
#include "ganeval/error.hpp"
#include "ganeval/fid.hpp"
#include "ganeval/inception_score.hpp"
#include "ganeval/kid.hpp"
#include "ganeval/rng.hpp"
#include "ganeval/stats.hpp"

namespace ganeval {

std::string_view metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::is: return "is";
    case Metric::fid: return "fid";
    case Metric::kid: return "kid";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view s) noexcept {
  if (s == "is") return Metric::is;
  if (s == "fid") return Metric::fid;
  if (s == "kid") return Metric::kid;
  return std::nullopt;
}

std::string_view input_kind_name(InputKind k) noexcept {
  return k == InputKind::logits ? "logits" : "probabilities";
}

std::optional<InputKind> parse_input_kind(std::string_view s) noexcept {
  if (s == "logits") return InputKind::logits;
  if (s == "probabilities") return InputKind::probabilities;
  return std::nullopt;
}

void validate(const ProtocolConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(Errc::invalid_argument, msg); };
  if (c.seeds.empty()) fail("protocol needs at least one seed");
  if (std::set<std::uint64_t>(c.seeds.begin(), c.seeds.end()).size() != c.seeds.size()) {
    fail("protocol seeds must be distinct");
  }
  if (c.n_fake < 1) fail("n_fake must be at least 1");
  const bool needs_real = c.metric != Metric::is;
  if (needs_real && !c.n_real) {
    fail(fmt::format("{} needs n_real", metric_name(c.metric)));
  }
  if (!needs_real && c.n_real) fail("is does not use real samples; n_real must be absent");
  if (c.n_real && *c.n_real < 1) fail("n_real must be at least 1");
  const bool needs_splits = c.metric != Metric::fid;
  if (needs_splits && !c.splits) fail(fmt::format("{} needs splits", metric_name(c.metric)));
  if (!needs_splits && c.splits) fail("fid does not use splits; splits must be absent");
  if (c.splits && *c.splits < 1) fail("splits must be at least 1");
}

namespace {

struct NamedPreset {
  std::string_view name;
  Metric metric;
  std::optional<std::size_t> n_real;
  std::size_t n_fake;
  std::optional<std::size_t> splits;
};

// Baseline evaluation and the per-model reproduction sample counts.
constexpr std::array<NamedPreset, 9> kPresets{{
    {"table4-is", Metric::is, std::nullopt, 50000, 10},
    {"table4-fid", Metric::fid, 50000, 50000, std::nullopt},
    {"table4-kid", Metric::kid, 50000, 50000, 10},
    {"table1-dcgan", Metric::fid, 10000, 10000, std::nullopt},
    {"table1-wgan-gp", Metric::fid, 50000, 50000, std::nullopt},
    {"table1-sngan", Metric::fid, 10000, 5000, std::nullopt},
    {"table1-cgan-pd", Metric::fid, 10000, 5000, std::nullopt},
    {"table1-ssgan", Metric::fid, 10000, 10000, std::nullopt},
    {"table1-infomax-gan", Metric::fid, 50000, 10000, std::nullopt},
}};

ScoreReport run_impl(const ProtocolConfig& config, const FeatureMatrix* real,
                     const FeatureMatrix& fake) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();

  if (config.metric != Metric::is && real == nullptr) {
    throw Error(Errc::invalid_argument,
                fmt::format("{} needs a real feature set", metric_name(config.metric)));
  }
  if (real && config.n_real && real->rows() < *config.n_real) {
    throw Error(Errc::insufficient_samples,
                fmt::format("real set: need {} samples, have {}", *config.n_real, real->rows()));
  }
  if (fake.rows() < config.n_fake) {
    throw Error(Errc::insufficient_samples,
                fmt::format("fake set: need {} samples, have {}", config.n_fake, fake.rows()));
  }

  ScoreReport report;
  report.config = config;
  report.input_digests.fake = matrix_digest(fake.data());
  if (config.metric != Metric::is) report.input_digests.real = matrix_digest(real->data());

  for (std::uint64_t seed : config.seeds) {
    SeedResult r;
    r.seed = seed;
    try {
      const auto fake_idx = subsample_indices(fake.rows(), config.n_fake, derive_seed(seed, "fake"));
      const Matrix fake_s = gather_rows(fake.data(), fake_idx);
      switch (config.metric) {
        case Metric::fid: {
          const auto real_idx =
              subsample_indices(real->rows(), *config.n_real, derive_seed(seed, "real"));
          const FidScore s = compute_fid(gather_rows(real->data(), real_idx), fake_s);
          r.value = s.value;
          r.epsilon_applied = s.epsilon_applied;
          break;
        }
        case Metric::kid: {
          const auto real_idx =
              subsample_indices(real->rows(), *config.n_real, derive_seed(seed, "real"));
          KidScore s = compute_kid(gather_rows(real->data(), real_idx), fake_s, *config.splits);
          r.value = s.mean;
          r.split_std = s.std;
          r.split_values = std::move(s.split_values);
          break;
        }
        case Metric::is: {
          IsScore s = config.input_kind == InputKind::logits
                          ? inception_score(LogitMatrix(fake_s), *config.splits)
                          : inception_score_from_probabilities(fake_s, *config.splits);
          r.value = s.mean;
          r.split_std = s.std;
          r.split_values = std::move(s.split_values);
          break;
        }
      }
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("seed {}: {}", seed, e.what()));
    }
    report.per_seed.push_back(std::move(r));
  }

  std::vector<double> values;
  for (const SeedResult& r : report.per_seed) values.push_back(r.value);
  const MeanStd ms = sample_mean_std(values);
  report.mean = ms.mean;
  report.std = ms.std;
  report.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  return report;
}

std::string opt_to_string(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string("absent");
}

}  // namespace

std::optional<ProtocolConfig> find_preset(std::string_view name) {
  for (const NamedPreset& p : kPresets) {
    if (p.name != name) continue;
    ProtocolConfig c;
    c.metric = p.metric;
    c.n_real = p.n_real;
    c.n_fake = p.n_fake;
    c.splits = p.splits;
    c.seeds = {0, 1, 2};
    return c;
  }
  return std::nullopt;
}

std::vector<std::string_view> preset_names() {
  std::vector<std::string_view> out;
  for (const NamedPreset& p : kPresets) out.push_back(p.name);
  return out;
}

ScoreReport run_protocol(const ProtocolConfig& config, const FeatureMatrix& real,
                         const FeatureMatrix& fake) {
  return run_impl(config, &real, fake);
}

ScoreReport run_protocol(const ProtocolConfig& config, const FeatureMatrix& fake) {
  return run_impl(config, nullptr, fake);
}

Comparability compare_reports(const ScoreReport& a, const ScoreReport& b) {
  Comparability out;
  auto check = [&](std::string field, std::string va, std::string vb) {
    if (va != vb) out.mismatches.push_back({std::move(field), std::move(va), std::move(vb)});
  };
  check("metric", std::string(metric_name(a.config.metric)),
        std::string(metric_name(b.config.metric)));
  check("n_real", opt_to_string(a.config.n_real), opt_to_string(b.config.n_real));
  check("n_fake", std::to_string(a.config.n_fake), std::to_string(b.config.n_fake));
  check("splits", opt_to_string(a.config.splits), opt_to_string(b.config.splits));
  check("feature_source", a.config.feature_source, b.config.feature_source);
  out.comparable = out.mismatches.empty();
  return out;
}

}  // namespace ganeval
