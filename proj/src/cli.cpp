// SPDX-License-Identifier: Apache-2.0
#include "ganeval/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include <fmt/core.h>

#include "ganeval/bias_lab.hpp"
#include "ganeval/csv.hpp"
#include "ganeval/error.hpp"
#include "ganeval/npy.hpp"
#include "ganeval/protocol.hpp"
#include "ganeval/registry.hpp"
#include "ganeval/report_json.hpp"

namespace ganeval {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void usage(const std::string& msg) { throw Error(Errc::invalid_argument, msg); }

// --- score ------------------------------------------------------------------

struct ScoreFlags {
  std::string metric;
  std::string fake;
  std::string real;
  std::optional<std::size_t> num_real;
  std::optional<std::size_t> num_fake;
  std::vector<std::uint64_t> seeds;
  std::optional<std::size_t> splits;
  std::string preset;
  std::string feature_source;
  std::string out;
  bool probs = false;
  bool csv_header = false;
  bool no_timing = false;
};

std::string format_score_line(const ScoreReport& r) {
  return fmt::format("{}: {:.6g} ± {:.6g} ({} seed{})", metric_name(r.config.metric), r.mean, r.std,
                     r.per_seed.size(), r.per_seed.size() == 1 ? "" : "s");
}

int cmd_score(const ScoreFlags& f, std::ostream& out, std::ostream& err) {
  ProtocolConfig config;
  if (!f.preset.empty()) {
    auto preset = find_preset(f.preset);
    if (!preset) {
      std::string names;
      for (auto n : preset_names()) names += fmt::format(" {}", n);
      usage(fmt::format("unknown preset '{}' (available:{})", f.preset, names));
    }
    config = *preset;
    if (!f.metric.empty() && parse_metric(f.metric) != config.metric) {
      usage(fmt::format("preset '{}' is a {} recipe, but --metric {} was given", f.preset,
                        metric_name(config.metric), f.metric));
    }
  } else {
    if (f.metric.empty()) usage("--metric or --preset is required");
    const auto metric = parse_metric(f.metric);
    if (!metric) usage(fmt::format("unknown metric '{}' (expected is, fid or kid)", f.metric));
    config.metric = *metric;
    config.n_real.reset();
    config.splits.reset();
  }

  const bool needs_real = config.metric != Metric::is;
  if (needs_real && f.real.empty()) {
    usage(fmt::format("--real is required for {}", metric_name(config.metric)));
  }
  if (!needs_real && !f.real.empty()) usage("--real is not used by is");
  if (!needs_real && f.num_real) usage("--num-real is not used by is");
  if (config.metric == Metric::fid && f.splits) usage("--splits is not used by fid");
  if (config.metric != Metric::is && f.probs) usage("--probs only applies to is");

  const CsvOptions csv{f.csv_header};
  const FeatureMatrix fake(read_matrix_file(f.fake, csv));
  std::optional<FeatureMatrix> real;
  if (needs_real) real.emplace(read_matrix_file(f.real, csv));

  if (f.num_fake) config.n_fake = *f.num_fake;
  else if (f.preset.empty()) config.n_fake = fake.rows();
  if (needs_real) {
    if (f.num_real) config.n_real = *f.num_real;
    else if (f.preset.empty()) config.n_real = real->rows();
  }
  if (!f.seeds.empty()) config.seeds = f.seeds;
  if (config.metric != Metric::fid) {
    if (f.splits) config.splits = *f.splits;
    else if (!config.splits) config.splits = 10;
  }
  if (!f.feature_source.empty()) config.feature_source = f.feature_source;
  config.input_kind = f.probs ? InputKind::probabilities : InputKind::logits;

  ScoreReport report = needs_real ? run_protocol(config, *real, fake) : run_protocol(config, fake);
  if (f.no_timing) report.timing_ms = 0;

  // Without --out, stdout carries only the JSON.
  std::ostream& summary = f.out.empty() ? err : out;
  summary << format_score_line(report) << "\n";
  const std::string json = dump_json(report_to_json(report));
  if (f.out.empty()) {
    out << json;
  } else {
    write_text_file(f.out, json);
  }
  return 0;
}

// --- bias -------------------------------------------------------------------

struct BiasFlags {
  std::size_t dim = 8;
  std::vector<std::size_t> sizes{100, 1000, 10000};
  std::size_t repeats = 50;
  std::uint64_t seed = 0;
  std::string spec_file;
  std::string out;
  std::string csv;
};

Vector json_vector(const nlohmann::json& v, std::size_t d, const char* what) {
  if (v.is_number()) return Vector::Constant(static_cast<Eigen::Index>(d), v.get<double>());
  if (!v.is_array() || v.size() != d) {
    throw Error(Errc::format,
                fmt::format("'{}' must be a number or an array of length {}", what, d));
  }
  Vector out(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (!v[i].is_number()) throw Error(Errc::format, fmt::format("'{}' entries must be numbers", what));
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

DiagGaussian gaussian_from_json(const nlohmann::json& j, std::size_t d, const char* side) {
  if (!j.is_object() || !j.contains("mean") || !j.contains("var")) {
    throw Error(Errc::format, fmt::format("'{}' must have 'mean' and 'var'", side));
  }
  return make_diag_gaussian(json_vector(j["mean"], d, "mean"), json_vector(j["var"], d, "var"));
}

int cmd_bias(const BiasFlags& f, std::ostream& out, std::ostream& err) {
  if (f.dim < 1) usage("--dim must be at least 1");
  BiasStudy study;
  study.sample_sizes = f.sizes;
  study.repeats = f.repeats;
  study.seed = f.seed;
  if (f.spec_file.empty()) {
    study.real = make_diag_gaussian(f.dim, 0.0, 1.0);
    study.fake = study.real;
  } else {
    const nlohmann::json spec = read_json_file(f.spec_file);
    if (!spec.is_object() || !spec.contains("real") || !spec.contains("fake")) {
      throw Error(Errc::format, fmt::format("{}: expected keys 'real' and 'fake'", f.spec_file));
    }
    study.real = gaussian_from_json(spec["real"], f.dim, "real");
    study.fake = gaussian_from_json(spec["fake"], f.dim, "fake");
  }

  const BiasReport report = fid_bias_curve(study);
  std::ostream& table = f.out.empty() ? err : out;
  table << fmt::format("{:>8}  {:>12}  {:>10}  {:>12}  {:>10}\n", "n", "mean_fid", "se_fid",
                     "mean_kid", "se_kid");
  for (std::size_t i = 0; i < report.sample_sizes.size(); ++i) {
    table << fmt::format("{:>8}  {:>12.6g}  {:>10.3g}  {:>12.4g}  {:>10.3g}\n",
                       report.sample_sizes[i], report.per_size_mean_fid[i],
                       report.per_size_se_fid[i], report.per_size_mean_kid[i],
                       report.per_size_se_kid[i]);
  }
  table << fmt::format("true fid: {:.6g}\n", report.true_fid);

  const std::string json = dump_json(bias_report_to_json(report));
  if (f.out.empty()) {
    out << json;
  } else {
    write_text_file(f.out, json);
  }
  if (!f.csv.empty()) {
    std::ofstream csv(f.csv);
    if (!csv) throw Error(Errc::io, fmt::format("{}: cannot open for writing", f.csv));
    write_bias_csv(report, csv);
  }
  return 0;
}

// --- synth ------------------------------------------------------------------

struct SynthFlags {
  std::size_t n = 0;
  std::size_t dim = 0;
  double mean = 0.0;
  double var = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string dtype = "f8";
};

int cmd_synth(const SynthFlags& f, std::ostream& out) {
  if (f.n < 2) usage("--n must be at least 2");
  if (f.dim < 1) usage("--dim must be at least 1");
  Dtype dtype = Dtype::float64_le;
  if (f.dtype == "f4") dtype = Dtype::float32_le;
  else if (f.dtype != "f8") usage("--dtype must be f4 or f8");
  const FeatureMatrix x = synth_features({f.n, make_diag_gaussian(f.dim, f.mean, f.var), f.seed});
  write_npy(x.data(), f.out, dtype);
  out << fmt::format("wrote {}x{} {} to {}\n", f.n, f.dim, dtype_descr(dtype), f.out);
  return 0;
}

// --- compare ----------------------------------------------------------------

int cmd_compare(const std::string& a_path, const std::string& b_path, std::ostream& out) {
  const ScoreReport a = report_from_json(read_json_file(a_path));
  const ScoreReport b = report_from_json(read_json_file(b_path));
  const Comparability verdict = compare_reports(a, b);
  if (verdict.comparable) {
    out << "COMPARABLE\n";
  } else {
    out << "INCOMPARABLE\n";
    for (const FieldMismatch& m : verdict.mismatches) {
      out << fmt::format("  {}: {} vs {}\n", m.field, m.a, m.b);
    }
  }
  return 0;
}

// --- run --------------------------------------------------------------------

struct RunFlags {
  std::string dir;
  std::string hparams_file;
  std::string preset;
  std::uint64_t step = 0;
  std::string name;
  double value = 0.0;
  std::string kind = "scalar";
};

HyperparameterRecord hparams_from_flags(const RunFlags& f, bool allow_stored) {
  if (!f.hparams_file.empty() && !f.preset.empty()) usage("give --hparams or --preset, not both");
  if (!f.preset.empty()) {
    auto rec = training_preset(f.preset);
    if (!rec) usage(fmt::format("unknown training preset '{}'", f.preset));
    return *rec;
  }
  if (!f.hparams_file.empty()) {
    try {
      return HyperparameterRecord::from_json(read_json_file(f.hparams_file));
    } catch (const Error& e) {
      if (e.code() == Errc::invalid_argument) throw Error(Errc::format, e.what());
      throw;
    }
  }
  if (allow_stored) return read_run(f.dir).hparams;
  return HyperparameterRecord{};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generative model evaluation: IS, FID and KID over pre-extracted features"};
  app.name(args.empty() ? "ganeval" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  ScoreFlags score;
  auto* sc = app.add_subcommand("score", "Score features under a fixed evaluation protocol");
  sc->add_option("--metric", score.metric, "is, fid or kid");
  sc->add_option("--fake", score.fake, "Generated-sample features or logits (.npy/.csv)")->required();
  sc->add_option("--real", score.real, "Real-sample features (.npy/.csv)");
  sc->add_option("--num-real", score.num_real, "Real samples drawn per seed");
  sc->add_option("--num-fake", score.num_fake, "Fake samples drawn per seed");
  sc->add_option("--seeds", score.seeds, "Comma-separated seeds (default 0,1,2)")->delimiter(',');
  sc->add_option("--splits", score.splits, "Splits for is/kid (default 10)");
  sc->add_option("--preset", score.preset, "Named recipe, e.g. table4-fid or table1-sngan");
  sc->add_option("--feature-source", score.feature_source, "Identifier of the feature extractor");
  sc->add_option("--out", score.out, "Report JSON path (stdout if omitted)");
  sc->add_flag("--probs", score.probs, "is input rows are probabilities, not logits");
  sc->add_flag("--csv-header", score.csv_header, "Skip one header row in CSV inputs");
  sc->add_flag("--no-timing", score.no_timing, "Write timing_ms as 0");

  BiasFlags bias;
  auto* bc = app.add_subcommand("bias", "FID/KID sample-size bias curve on synthetic Gaussians");
  bc->add_option("--dim", bias.dim, "Feature dimension")->capture_default_str();
  bc->add_option("--sizes", bias.sizes, "Ascending sample sizes")->delimiter(',');
  bc->add_option("--repeats", bias.repeats, "Repeats per size (>= 20)")->capture_default_str();
  bc->add_option("--seed", bias.seed, "Base seed")->capture_default_str();
  bc->add_option("--true-fid-spec", bias.spec_file,
                 "JSON {\"real\": {\"mean\": m, \"var\": v}, \"fake\": {...}}");
  bc->add_option("--out", bias.out, "Bias report JSON path (stdout if omitted)");
  bc->add_option("--csv", bias.csv, "Also write the curve as CSV");

  SynthFlags synth;
  auto* yc = app.add_subcommand("synth", "Write synthetic diagonal-Gaussian features to NPY");
  yc->add_option("--n", synth.n, "Rows")->required();
  yc->add_option("--dim", synth.dim, "Columns")->required();
  yc->add_option("--mean", synth.mean, "Mean of every coordinate")->capture_default_str();
  yc->add_option("--var", synth.var, "Variance of every coordinate")->capture_default_str();
  yc->add_option("--seed", synth.seed, "Seed")->capture_default_str();
  yc->add_option("--out", synth.out, "Output .npy path")->required();
  yc->add_option("--dtype", synth.dtype, "f4 or f8")->capture_default_str();

  std::string cmp_a;
  std::string cmp_b;
  auto* cc = app.add_subcommand("compare", "Check whether two score reports are comparable");
  cc->add_option("a", cmp_a, "First report")->required();
  cc->add_option("b", cmp_b, "Second report")->required();

  RunFlags run;
  auto* rc = app.add_subcommand("run", "Manage an experiment run directory");
  rc->require_subcommand(1);
  auto add_dir = [&](CLI::App* c) { c->add_option("--dir", run.dir, "Run directory")->required(); };
  auto add_hparams = [&](CLI::App* c) {
    c->add_option("--hparams", run.hparams_file, "Hyperparameter JSON object");
    c->add_option("--preset", run.preset, "Built-in training configuration, e.g. cifar10-32");
  };
  auto* r_create = rc->add_subcommand("create", "Create a run and snapshot its hyperparameters");
  add_dir(r_create);
  add_hparams(r_create);
  auto* r_resume = rc->add_subcommand("resume", "Check hyperparameters and report the global step");
  add_dir(r_resume);
  add_hparams(r_resume);
  auto* r_log = rc->add_subcommand("log", "Append one metric line");
  add_dir(r_log);
  add_hparams(r_log);
  r_log->add_option("--step", run.step, "Global step")->required();
  r_log->add_option("--name", run.name, "Metric name")->required();
  r_log->add_option("--value", run.value, "Metric value")->required();
  r_log->add_option("--kind", run.kind, "Entry kind")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("ganeval");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (*sc) return cmd_score(score, out, err);
    if (*bc) return cmd_bias(bias, out, err);
    if (*yc) return cmd_synth(synth, out);
    if (*cc) return cmd_compare(cmp_a, cmp_b, out);
    if (*r_create) {
      const Run r = Run::create(run.dir, hparams_from_flags(run, false));
      out << fmt::format("created run {} (global step 0)\n", r.dir().string());
      return 0;
    }
    if (*r_resume || *r_log) {
      Run r = Run::resume(run.dir, hparams_from_flags(run, true));
      for (const std::string& w : r.warnings()) err << "warning: " << w << "\n";
      if (*r_log) r.log_metric(run.step, run.name, run.value, run.kind);
      out << fmt::format("run {} at global step {}\n", r.dir().string(), r.global_step());
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

}  // namespace ganeval
