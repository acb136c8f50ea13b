// SPDX-License-Identifier: Apache-2.0
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Tolerances and time budgets are fixed
// constants below.
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

#include "ganeval/bias_lab.hpp"
#include "ganeval/cli.hpp"
#include "ganeval/error.hpp"
#include "ganeval/fid.hpp"
#include "ganeval/inception_score.hpp"
#include "ganeval/kid.hpp"
#include "ganeval/npy.hpp"
#include "ganeval/protocol.hpp"
#include "ganeval/registry.hpp"
#include "ganeval/report_json.hpp"
#include "ganeval/rng.hpp"
#include "ganeval/stats.hpp"
#include "oracles.hpp"

using namespace ganeval;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kFidOracleRel = 0.05;
constexpr double kFidExactAbs = 1e-10;
constexpr double kFidSelfMax = 1e-6;
constexpr double kKidHandAbs = 1e-9;
constexpr double kKidSigmas = 3.0;
constexpr double kKidNaiveRel = 1e-9;
constexpr double kIsOneAbs = 1e-10;
constexpr double kIsClassCountAbs = 1e-6;

// Time budgets in seconds.
constexpr double kFidOracleBudget = 30.0;
constexpr double kKidUnbiasedBudget = 120.0;
constexpr double kBiasCurveBudget = 300.0;
constexpr double kFidPerfBudget = 60.0;
constexpr double kKidPerfBudget = 120.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ganeval_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<unsigned char> file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 1
Outcome fid_oracle() {
  const auto real_dist = make_diag_gaussian(8, 0.0, 1.0);
  const auto fake_dist = make_diag_gaussian(8, 1.0, 4.0);
  const double closed = closed_form_fid_diag(real_dist, fake_dist);

  const GaussianStats exact_a = make_gaussian_stats(real_dist.mean, Matrix(real_dist.diag_cov.asDiagonal()));
  const GaussianStats exact_b = make_gaussian_stats(fake_dist.mean, Matrix(fake_dist.diag_cov.asDiagonal()));
  const double exact = frechet_distance(exact_a, exact_b);

  const Stopwatch sw;
  const FeatureMatrix real = synth_features({50000, real_dist, 101});
  const FeatureMatrix fake = synth_features({50000, fake_dist, 102});
  const double sampled = compute_fid(real, fake).value;
  const double t = sw.seconds();

  const bool ok = closed == 16.0 && std::abs(exact - 16.0) <= kFidExactAbs &&
                  std::abs(sampled - 16.0) <= kFidOracleRel * 16.0 && t < kFidOracleBudget;
  return {ok, fmt::format("closed form {}, exact stats {:.12f}, 50K draws {:.4f} (|err| {:.2f}% <= "
                          "{}%), {:.1f}s < {}s",
                          closed, exact, sampled, 100.0 * std::abs(sampled - 16.0) / 16.0,
                          100.0 * kFidOracleRel, t, kFidOracleBudget)};
}

// 2
Outcome fid_self_zero() {
  struct Case {
    int n, d;
    double shift, scale;
  };
  const std::vector<Case> cases{{2, 1, 0.0, 1.0},     {3, 2, 5.0, 0.01},      {100, 8, -3.0, 10.0},
                                {1000, 32, 1e3, 1.0}, {10000, 64, 0.0, 1.0}, {10000, 64, 50.0, 3.0}};
  double worst = 0.0;
  bool ok = true;
  std::uint64_t seed = 200;
  for (const Case& c : cases) {
    const Matrix x = oracle::random_normal(c.n, c.d, seed++, 0.0) * c.scale;
    const Matrix xs = x.array() + c.shift;
    const double v = compute_fid(xs, xs).value;
    worst = std::max(worst, v);
    ok = ok && v >= 0.0 && v <= kFidSelfMax;
  }
  // Low-rank input: 64 columns spanned by 4 directions.
  const Matrix basis = oracle::random_normal(4, 64, seed++);
  const Matrix low = oracle::random_normal(10000, 4, seed++) * basis;
  const double v = compute_fid(low, low).value;
  worst = std::max(worst, v);
  ok = ok && v >= 0.0 && v <= kFidSelfMax;
  return {ok, fmt::format("max FID(X, X) over {} inputs up to 10000x64 = {:.3g} <= {}",
                          cases.size() + 1, worst, kFidSelfMax)};
}

// 3
Outcome kid_hand_instance() {
  Matrix x(2, 1), y(2, 1);
  x << 1, -1;
  y << 0, 2;
  // Within X: k(1,-1) = 0. Within Y: k(0,2) = 1. Cross: 2 * (1 + 27 + 1 - 1) / 4 = 14.
  const double hand = 0.0 + 1.0 - 14.0;
  const double v = mmd2_unbiased(x, y);
  return {std::abs(v - hand) <= kKidHandAbs,
          fmt::format("mmd2 = {:.12f}, hand value {}, tol {}", v, hand, kKidHandAbs)};
}

// 4
Outcome kid_unbiasedness() {
  constexpr std::size_t kResamples = 200;
  constexpr std::size_t kN = 500;
  const auto dist = make_diag_gaussian(8, 0.0, 1.0);
  const Stopwatch sw;
  std::vector<double> v;
  for (std::size_t r = 0; r < kResamples; ++r) {
    const FeatureMatrix a = synth_features({kN, dist, derive_seed(4000, {r, 0})});
    const FeatureMatrix b = synth_features({kN, dist, derive_seed(4000, {r, 1})});
    v.push_back(mmd2_unbiased(a, b));
  }
  const double t = sw.seconds();
  const MeanStd ms = sample_mean_std(v);
  const double se = ms.std / std::sqrt(static_cast<double>(kResamples));
  const bool ok = std::abs(ms.mean) <= kKidSigmas * se && t < kKidUnbiasedBudget;
  return {ok, fmt::format("mean {:.3g}, SE {:.3g}, |mean|/SE = {:.2f} <= {}, {:.1f}s < {}s", ms.mean,
                          se, std::abs(ms.mean) / se, kKidSigmas, t, kKidUnbiasedBudget)};
}

// 5
Outcome kid_naive_equivalence() {
  std::mt19937_64 gen(5005);
  std::uniform_int_distribution<int> rows(2, 512);
  std::uniform_int_distribution<int> dims(1, 64);
  std::uniform_real_distribution<double> shift(0.25, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int m = rows(gen), n = rows(gen), d = dims(gen);
    const Matrix x = oracle::random_normal(m, d, gen(), 0.0);
    const Matrix y = oracle::random_normal(n, d, gen(), shift(gen));
    const double fast = mmd2_unbiased(x, y);
    const double slow = oracle::naive_mmd2(x, y);
    worst = std::max(worst, std::abs(fast - slow) / std::abs(slow));
  }
  return {worst <= kKidNaiveRel,
          fmt::format("max relative deviation over 100 instances {:.3g} <= {}", worst, kKidNaiveRel)};
}

// 6
Outcome is_extremes() {
  const Matrix row = oracle::random_normal(1, 10, 600) * 4.0;
  const IsScore same = inception_score(LogitMatrix(row.replicate(500, 1)), 10);
  double one_err = 0.0;
  for (double v : same.split_values) one_err = std::max(one_err, std::abs(v - 1.0));

  Matrix hot = Matrix::Zero(10, 10);
  for (int i = 0; i < 10; ++i) hot(i, i) = 1000.0;
  const double ten = inception_score(LogitMatrix(hot), 1).mean;

  bool bounded = true;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int c = 2 + static_cast<int>(s % 40);
    const Matrix l = oracle::random_normal(100, c, 700 + s) * (0.05 * static_cast<double>(s));
    for (double v : inception_score(LogitMatrix(l), 5).split_values) {
      bounded = bounded && v >= 1.0 && v <= static_cast<double>(c);
    }
  }
  const bool ok = one_err <= kIsOneAbs && std::abs(ten - 10.0) <= kIsClassCountAbs && bounded;
  return {ok, fmt::format("identical logits |IS-1| = {:.2g} <= {}; one-hot C=10 IS = {:.9f}; 100 "
                          "random inputs within [1, C]: {}",
                          one_err, kIsOneAbs, ten, bounded ? "yes" : "no")};
}

// 7
Outcome bias_curve() {
  BiasStudy study;
  study.real = make_diag_gaussian(8, 0.0, 1.0);
  study.fake = study.real;
  study.sample_sizes = {100, 1000, 10000};
  study.repeats = 50;
  study.seed = 7;
  const Stopwatch sw;
  const BiasReport r = fid_bias_curve(study);
  const double t = sw.seconds();
  bool ok = t < kBiasCurveBudget && r.true_fid == 0.0;
  std::string detail;
  for (std::size_t i = 0; i < r.sample_sizes.size(); ++i) {
    ok = ok && r.per_size_mean_fid[i] > 0.0;
    if (i > 0) ok = ok && r.per_size_mean_fid[i] < r.per_size_mean_fid[i - 1];
    ok = ok && std::abs(r.per_size_mean_kid[i]) <= kKidSigmas * r.per_size_se_kid[i];
    detail += fmt::format("n={}: FID {:.4g}, KID {:.2g} ({:.2f} SE); ", r.sample_sizes[i],
                          r.per_size_mean_fid[i], r.per_size_mean_kid[i],
                          std::abs(r.per_size_mean_kid[i]) / r.per_size_se_kid[i]);
  }
  return {ok, detail + fmt::format("{:.1f}s < {}s", t, kBiasCurveBudget)};
}

// 8
Outcome protocol_determinism() {
  const auto config = find_preset("table1-sngan");
  if (!config || config->n_real != 10000 || config->n_fake != 5000 ||
      config->seeds != std::vector<std::uint64_t>{0, 1, 2}) {
    return {false, "preset table1-sngan missing or not 10000/5000 with seeds 0,1,2"};
  }
  const FeatureMatrix real = synth_features({12000, make_diag_gaussian(16, 0.0, 1.0), 801});
  const FeatureMatrix fake = synth_features({8000, make_diag_gaussian(16, 0.2, 1.5), 802});
  ScoreReport a = run_protocol(*config, real, fake);
  ScoreReport b = run_protocol(*config, real, fake);
  a.timing_ms = 0;
  b.timing_ms = 0;
  const std::string ja = dump_json(report_to_json(a));
  const std::string jb = dump_json(report_to_json(b));
  return {ja == jb && a.per_seed.size() == 3,
          fmt::format("two runs, {} bytes each, identical: {}; FID {:.4f} +- {:.4f}", ja.size(),
                      ja == jb ? "yes" : "no", a.mean, a.std)};
}

int run_binary(const std::vector<std::string>& args) {
  std::string cmd = GANEVAL_CLI_PATH;
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 9
Outcome npy_round_trip() {
  const fs::path dir = scratch_dir("npy");
  bool identical = true;
  std::mt19937_64 gen(909);
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + static_cast<int>(gen() % 300);
    const int d = 1 + static_cast<int>(gen() % 70);
    const Matrix x = oracle::random_normal(n, d, gen(), 0.0) * 1e3;
    for (Dtype dt : {Dtype::float32_le, Dtype::float64_le}) {
      write_npy(x, dir / "a.npy", dt);
      write_npy(read_npy(dir / "a.npy").data, dir / "b.npy", dt);
      identical = identical && file_bytes(dir / "a.npy") == file_bytes(dir / "b.npy");
    }
  }
  const fs::path fixtures{GANEVAL_FIXTURE_DIR};
  const int magic = run_binary({"score", "--metric", "is", "--fake", (fixtures / "bad_magic.npy").string()});
  const int size =
      run_binary({"score", "--metric", "is", "--fake", (fixtures / "size_mismatch.npy").string()});
  return {identical && magic == 2 && size == 2,
          fmt::format("40 write-read-write cycles byte-identical: {}; exit codes bad magic {}, size "
                      "mismatch {} (want 2)",
                      identical ? "yes" : "no", magic, size)};
}

// 10
Outcome registry_contract() {
  const HyperparameterRecord base = *training_preset("cifar10-32");
  const fs::path dir = scratch_dir("registry") / "run";
  Run::create(dir, base);

  std::size_t checked = 0;
  bool exact = true;
  for (const auto& [key, value] : base.values().items()) {
    HyperparameterRecord changed = base;
    changed.set(key, value.is_string() ? nlohmann::json(value.get<std::string>() + "x")
                     : value.is_boolean() ? nlohmann::json(!value.get<bool>())
                                          : nlohmann::json(value.get<double>() * 2.0 + 1.0));
    try {
      Run::resume(dir, changed);
      exact = false;
    } catch (const HparamDiscrepancy& e) {
      exact = exact && e.diffs().size() == 1 && e.diffs()[0].key == key &&
              std::string(e.what()).find(key + ": ") != std::string::npos;
    }
    ++checked;
  }
  HyperparameterRecord extra = base;
  extra.set("batch_size", 64);
  try {
    Run::resume(dir, extra);
    exact = false;
  } catch (const HparamDiscrepancy& e) {
    exact = exact && e.diffs().size() == 1 && e.diffs()[0].key == "batch_size";
  }

  const pid_t pid = ::fork();
  if (pid < 0) return {false, "fork failed"};
  if (pid == 0) {
    try {
      Run run = Run::resume(dir, base);
      for (std::uint64_t step = 1;; ++step) run.log_metric(step, "loss", 1.0 / step);
    } catch (...) {
    }
    ::_exit(1);
  }
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(10);
  while (fs::file_size(dir / kMetricsFile) < 64 * 1024 && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  ::kill(pid, SIGKILL);
  int status = 0;
  ::waitpid(pid, &status, 0);

  std::uint64_t last_durable = 0;
  {
    std::ifstream in(dir / kMetricsFile);
    for (std::string line; std::getline(in, line);) {
      const auto j = nlohmann::json::parse(line, nullptr, false);
      if (!j.is_discarded()) last_durable = j["step"].get<std::uint64_t>();
    }
  }
  std::uint64_t resumed = 0;
  bool loadable = false;
  try {
    resumed = Run::resume(dir, base).global_step();
    loadable = true;
  } catch (const Error&) {
  }
  const bool ok = exact && checked >= 5 && WIFSIGNALED(status) && loadable &&
                  resumed == last_durable && resumed > 0;
  return {ok, fmt::format("{} single-key changes plus one added key each named exactly: {}; killed "
                          "writer -> resumed at step {} (last durable line {})",
                          checked, exact ? "yes" : "no", resumed, last_durable)};
}

// 11
Outcome performance() {
  constexpr std::size_t kN = 50000;
  constexpr std::size_t kD = 2048;
  const FeatureMatrix real = synth_features({kN, make_diag_gaussian(kD, 0.0, 1.0), 1101});
  const FeatureMatrix fake = synth_features({kN, make_diag_gaussian(kD, 0.1, 1.2), 1102});

  const Stopwatch fid_sw;
  const double fid = compute_fid(real, fake).value;
  const double fid_t = fid_sw.seconds();

  const Stopwatch kid_sw;
  const KidScore kid = compute_kid(real, fake, 10);
  const double kid_t = kid_sw.seconds();

  const bool ok = std::isfinite(fid) && fid_t < kFidPerfBudget && kid.split_values.size() == 10 &&
                  std::isfinite(kid.mean) && kid_t < kKidPerfBudget;
  return {ok, fmt::format("FID 50Kx{} = {:.3f} in {:.1f}s < {}s; KID 50K/50K x{} 10 splits = {:.4g} "
                          "in {:.1f}s < {}s ({} core{})",
                          kD, fid, fid_t, kFidPerfBudget, kD, kid.mean, kid_t, kKidPerfBudget,
                          std::thread::hardware_concurrency(),
                          std::thread::hardware_concurrency() == 1 ? "" : "s")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"FID closed-form oracle", fid_oracle},
      {"FID of a set with itself", fid_self_zero},
      {"KID hand instance", kid_hand_instance},
      {"KID unbiasedness", kid_unbiasedness},
      {"KID naive-loop equivalence", kid_naive_equivalence},
      {"IS bounds and extremes", is_extremes},
      {"FID bias curve", bias_curve},
      {"protocol determinism", protocol_determinism},
      {"NPY round trip and malformed input", npy_round_trip},
      {"registry discrepancy and crash recovery", registry_contract},
      {"performance envelope", performance},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    if (!o.pass) ++failures;
    std::cout << fmt::format("[{}] {:>2} {}: {}", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                             o.detail)
              << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed", criteria.size() - failures, criteria.size())
            << std::endl;
  return failures == 0 ? 0 : 1;
}
