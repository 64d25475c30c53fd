#include "trajbound/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "trajbound/ball.hpp"
#include "trajbound/error.hpp"
#include "trajbound/fractal.hpp"
#include "trajbound/stats.hpp"

namespace trajbound {

namespace {

std::string absent_or(const std::optional<double>& v) { return v ? format_double(*v) : "absent"; }

double require_number(const KeyValues& kv, const std::string& key) {
  const std::string* v = find_value(kv, key);
  if (!v) throw FormatError("summary: missing key '" + key + "'");
  try {
    return parse_double(*v);
  } catch (const Error&) {
    throw FormatError("summary: key '" + key + "' is not a number");
  }
}

std::string dataset_name(const DatasetKind& kind) {
  if (const auto* b = std::get_if<dataset::GaussianBlobs>(&kind)) {
    return "gaussian_blobs(" + std::to_string(b->classes) + "," + std::to_string(b->dim) + "," +
           format_double(b->separation) + ")";
  }
  return "two_rings(" + format_double(std::get<dataset::TwoRings>(kind).noise) + ")";
}

// Runs `fn` on the failure list when it throws a library error.
template <class Fn>
void attempt(std::vector<std::string>& failures, const char* field, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    failures.push_back(std::string(field) + ": " + e.what());
  }
}

}  // namespace

SeededRun prepare_run(const RunConfig& config, std::uint64_t seed) {
  SeededRun run;
  run.data = make_dataset(config.dataset, config.m_train, config.m_test, seed);
  run.spec.layer_sizes.push_back(run.data.train.features.cols());
  for (std::size_t l = 0; l < config.depth; ++l) run.spec.layer_sizes.push_back(config.width);
  run.spec.layer_sizes.push_back(run.data.train.classes);
  run.spec.init_seed = derive_seed(seed, 101);
  run.spec.init_scale = config.init_scale;
  run.train = config.train;
  run.train.shuffle_seed = derive_seed(seed, 102);
  return run;
}

KeyValues describe_run(const RunConfig& config, std::uint64_t seed) {
  const TrainConfig& t = config.train;
  return {
      {"seed", std::to_string(seed)},
      {"dataset", dataset_name(config.dataset)},
      {"m_train", std::to_string(config.m_train)},
      {"m_test", std::to_string(config.m_test)},
      {"width", std::to_string(config.width)},
      {"depth", std::to_string(config.depth)},
      {"lr", format_double(t.lr)},
      {"batch", std::to_string(t.batch_size)},
      {"momentum", format_double(t.momentum)},
      {"weight_decay", format_double(t.weight_decay)},
      {"stop_loss", format_double(t.stop_loss)},
      {"max_iters", std::to_string(t.max_iters)},
      {"stride", std::to_string(t.loss_log_stride)},
      {"sgn_coords", std::to_string(t.sgn_coord_count)},
  };
}

void write_run_dir(const TrainLog& log, const KeyValues& config_echo, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_log(log.sgn, dir / run_files::sgn);
  write_log(log.loss_vectors, dir / run_files::loss_vectors);
  write_weights(log.weights, dir / run_files::weights);
  write_key_values(artifacts_from_log(log, config_echo).summary, dir / run_files::summary);
}

RunArtifacts artifacts_from_log(const TrainLog& log, const KeyValues& config_echo) {
  RunArtifacts run{log.sgn, log.loss_vectors, log.weights, {}};
  run.summary = {
      {"iters", std::to_string(log.iters)},
      {"converged", log.converged ? "1" : "0"},
      {"train_acc", format_double(log.train_acc)},
      {"test_acc", format_double(log.test_acc)},
      {"gap", format_double(generalization_gap(log))},
      {"empirical_risk", format_double(log.empirical_risk)},
      {"zeta_observed", format_double(log.zeta_observed)},
  };
  for (const auto& [k, v] : config_echo) run.summary.emplace_back("config." + k, v);
  return run;
}

RunArtifacts load_run_dir(const std::filesystem::path& dir) {
  for (const char* name : {run_files::sgn, run_files::loss_vectors, run_files::weights, run_files::summary}) {
    if (!std::filesystem::exists(dir / name)) {
      throw FormatError("run directory " + dir.string() + " is missing " + name);
    }
  }
  RunArtifacts run;
  run.sgn = read_log(dir / run_files::sgn);
  run.sgn.set_kind(SeriesKind::sgn);
  run.loss_vectors = read_log(dir / run_files::loss_vectors);
  run.loss_vectors.set_kind(SeriesKind::loss_vectors);
  run.weights = read_weights(dir / run_files::weights);
  run.summary = read_key_values(dir / run_files::summary);
  return run;
}

AnalysisReport analyze_artifacts(const RunArtifacts& run, const AnalyzeOptions& options) {
  AnalysisReport report;
  report.m = run.loss_vectors.cols();
  report.beta = options.beta;
  report.tau = options.tau;
  report.empirical_risk = require_number(run.summary, "empirical_risk");
  report.zeta = options.zeta ? *options.zeta : require_number(run.summary, "zeta_observed");
  report.gap = require_number(run.summary, "gap");
  report.train_acc = require_number(run.summary, "train_acc");
  report.test_acc = require_number(run.summary, "test_acc");
  for (const auto& [k, v] : run.summary)
    if (k.rfind("config.", 0) == 0) report.run_metadata.emplace_back(k.substr(7), v);
  report.run_metadata.emplace_back("hurst_strategy", options.hurst.subsample ? "subsample" : "per_coordinate_mean");
  if (options.hurst.subsample) {
    report.run_metadata.emplace_back("subsample_count", std::to_string(options.hurst.subsample->count));
    report.run_metadata.emplace_back("subsample_seed", std::to_string(options.hurst.subsample->seed));
  }
  report.run_metadata.emplace_back("ball_eps", format_double(options.ball_eps));

  attempt(report.failures, "hurst", [&] {
    report.hurst = estimate_hurst_from_vectors(run.sgn, options.hurst);
    const ClampedHurst c = clamp_hurst(report.hurst->h_hat);
    report.hurst_used = c.h.value();
    report.hurst_clamped = c.clamped;
  });

  attempt(report.failures, "diameter", [&] {
    const PointCloud cloud(run.loss_vectors);
    report.diameter = miniball_core_set(cloud, options.ball_eps).diameter();
    if (cloud.size() >= 2) report.diameter_lower_bound = diameter_lower_bound(cloud);
  });

  if (report.hurst_used && report.diameter) {
    attempt(report.failures, "bound", [&] {
      const HurstParam h(*report.hurst_used);
      report.rademacher = rademacher_bound(*report.diameter, report.m, h);
      BoundInputs in{*report.diameter, report.m, h, report.zeta, report.beta, report.tau, report.empirical_risk};
      BoundReport b = full_bound(in);
      b.clamped = report.hurst_clamped;
      report.bound = b;
    });
  } else {
    report.failures.emplace_back("bound: missing hurst or diameter");
  }

  attempt(report.failures, "bg_index",
          [&] { report.indicators.bg_index = bg_index_from_vectors(run.sgn, options.bg_k1); });
  attempt(report.failures, "power_law_index", [&] {
    report.indicators.power_law_index = power_law_index_from_layers(run.weights, options.tail_fraction);
  });
  attempt(report.failures, "norms", [&] { report.indicators.norms = norm_measures(run.weights); });
  return report;
}

AnalysisReport analyze(const std::filesystem::path& run_dir, const AnalyzeOptions& options) {
  return analyze_artifacts(load_run_dir(run_dir), options);
}

KeyValues AnalysisReport::to_key_values() const {
  KeyValues kv;
  kv.emplace_back("hurst", hurst ? format_double(hurst->h_hat) : "absent");
  kv.emplace_back("hurst_stderr", hurst ? format_double(hurst->stderr) : "absent");
  kv.emplace_back("hurst_windows", hurst ? std::to_string(hurst->n_windows) : "absent");
  kv.emplace_back("hurst_used", absent_or(hurst_used));
  kv.emplace_back("hurst_clamped", hurst_clamped ? "1" : "0");
  kv.emplace_back("diameter", absent_or(diameter));
  kv.emplace_back("diameter_lower_bound", absent_or(diameter_lower_bound));
  kv.emplace_back("m", std::to_string(m));
  kv.emplace_back("zeta", format_double(zeta));
  kv.emplace_back("beta", format_double(beta));
  kv.emplace_back("tau", format_double(tau));
  kv.emplace_back("empirical_risk", format_double(empirical_risk));
  kv.emplace_back("rademacher", absent_or(rademacher));
  kv.emplace_back("rademacher_term", bound ? format_double(bound->rademacher_term) : "absent");
  kv.emplace_back("concentration_term", bound ? format_double(bound->concentration_term) : "absent");
  kv.emplace_back("bound", bound ? format_double(bound->total) : "absent");
  kv.emplace_back("bg_index", absent_or(indicators.bg_index));
  kv.emplace_back("power_law_index", absent_or(indicators.power_law_index));
  const auto& n = indicators.norms;
  kv.emplace_back("spectral_product", n ? (n->overflow ? "overflow" : format_double(n->spectral_product)) : "absent");
  kv.emplace_back("frobenius_product", n ? (n->overflow ? "overflow" : format_double(n->frobenius_product)) : "absent");
  kv.emplace_back("spectral_sum_log", n ? format_double(n->spectral_sum_log) : "absent");
  kv.emplace_back("frobenius_sum_log", n ? format_double(n->frobenius_sum_log) : "absent");
  kv.emplace_back("gap", absent_or(gap));
  kv.emplace_back("train_acc", absent_or(train_acc));
  kv.emplace_back("test_acc", absent_or(test_acc));
  for (const auto& [k, v] : run_metadata) kv.emplace_back("meta." + k, v);
  for (std::size_t i = 0; i < failures.size(); ++i) kv.emplace_back("failure." + std::to_string(i), failures[i]);
  return kv;
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "train_size") return SweepAxis::train_size;
  if (name == "lr") return SweepAxis::lr;
  if (name == "batch") return SweepAxis::batch;
  if (name == "momentum") return SweepAxis::momentum;
  if (name == "wd") return SweepAxis::wd;
  if (name == "width") return SweepAxis::width;
  if (name == "depth") return SweepAxis::depth;
  throw DomainError("unknown sweep axis '" + name + "'");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::train_size: return "train_size";
    case SweepAxis::lr: return "lr";
    case SweepAxis::batch: return "batch";
    case SweepAxis::momentum: return "momentum";
    case SweepAxis::wd: return "wd";
    case SweepAxis::width: return "width";
    case SweepAxis::depth: return "depth";
  }
  return "unknown";
}

RunConfig apply_axis(RunConfig base, SweepAxis axis, double value) {
  const auto count = [&] {
    if (!(value >= 1.0) || value != std::floor(value)) {
      throw DomainError("sweep: axis " + to_string(axis) + " needs positive integer values");
    }
    return static_cast<std::size_t>(value);
  };
  switch (axis) {
    case SweepAxis::train_size: base.m_train = count(); break;
    case SweepAxis::lr: base.train.lr = value; break;
    case SweepAxis::batch: base.train.batch_size = count(); break;
    case SweepAxis::momentum: base.train.momentum = value; break;
    case SweepAxis::wd: base.train.weight_decay = value; break;
    case SweepAxis::width: base.width = count(); break;
    case SweepAxis::depth: base.depth = count(); break;
  }
  return base;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.values.empty() || spec.seeds.empty()) throw DomainError("sweep: need at least one value and one seed");
  std::vector<SweepRow> rows;
  for (double v : spec.values)
    for (std::uint64_t s : spec.seeds) rows.push_back({v, s, std::nullopt, {}});

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      try {
        const RunConfig config = apply_axis(spec.base, spec.axis, row.axis_value);
        const SeededRun run = prepare_run(config, row.seed);
        const TrainLog log = train(run.spec, run.train, run.data);
        row.report = analyze_artifacts(artifacts_from_log(log, describe_run(config, row.seed)), spec.analyze);
      } catch (const Error& e) {
        row.error = e.what();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(spec.jobs, 1, rows.size());
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows) {
  struct Measure {
    const char* name;
    std::function<std::optional<double>(const AnalysisReport&)> get;
  };
  const std::vector<Measure> measures = {
      {"gap", [](const AnalysisReport& r) { return r.gap; }},
      {"bound", [](const AnalysisReport& r) { return r.bound ? std::optional(r.bound->total) : std::nullopt; }},
      {"rademacher", [](const AnalysisReport& r) { return r.rademacher; }},
      {"hurst", [](const AnalysisReport& r) { return r.hurst ? std::optional(r.hurst->h_hat) : std::nullopt; }},
      {"diameter", [](const AnalysisReport& r) { return r.diameter; }},
      {"bg_index", [](const AnalysisReport& r) { return r.indicators.bg_index; }},
      {"power_law_index", [](const AnalysisReport& r) { return r.indicators.power_law_index; }},
      {"spectral_sum_log", [](const AnalysisReport& r) {
         return r.indicators.norms ? std::optional(r.indicators.norms->spectral_sum_log) : std::nullopt;
       }},
      {"frobenius_sum_log", [](const AnalysisReport& r) {
         return r.indicators.norms ? std::optional(r.indicators.norms->frobenius_sum_log) : std::nullopt;
       }},
  };

  std::string csv = to_string(axis) + ",seed,status";
  for (const auto& m : measures) csv += std::string(",") + m.name;
  csv += '\n';
  for (const auto& row : rows) {
    csv += format_double(row.axis_value) + ',' + std::to_string(row.seed) + ',';
    if (!row.report) {
      csv += "failed";
      for (std::size_t i = 0; i < measures.size(); ++i) csv += ",absent";
    } else {
      csv += row.report->complete() ? "ok" : "partial";
      for (const auto& m : measures) csv += ',' + absent_or(m.get(*row.report));
    }
    csv += '\n';
  }
  for (const auto& m : measures) {
    std::vector<double> x, y;
    for (const auto& row : rows) {
      if (!row.report) continue;
      if (const auto v = m.get(*row.report)) {
        x.push_back(row.axis_value);
        y.push_back(*v);
      }
    }
    const auto r = pearson(x, y);
    csv += std::string("# pearson ") + m.name + ' ' + (r ? format_double(*r) : "undefined") + '\n';
  }
  return csv;
}

}  // namespace trajbound
