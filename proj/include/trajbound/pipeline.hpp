#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trajbound/bound.hpp"
#include "trajbound/hurst.hpp"
#include "trajbound/indicators.hpp"
#include "trajbound/io.hpp"
#include "trajbound/trainer.hpp"

namespace trajbound {

// File names inside a run directory.
namespace run_files {
inline constexpr const char* sgn = "sgn.trjl";
inline constexpr const char* loss_vectors = "loss_vectors.trjl";
inline constexpr const char* weights = "weights.txt";
inline constexpr const char* summary = "summary.txt";
}  // namespace run_files

// Everything needed to reproduce one training run from a single seed.
struct RunConfig {
  DatasetKind dataset = dataset::GaussianBlobs{2, 32, 3.0};
  std::size_t m_train = 400;
  std::size_t m_test = 400;
  std::size_t width = 64;  // hidden units per hidden layer
  std::size_t depth = 1;   // number of hidden layers
  double init_scale = 1.0;
  TrainConfig train;
};

struct SeededRun {
  MlpSpec spec;
  TrainConfig train;
  DatasetPair data;
};

// Data seed = seed; initialization and sampling seeds are derived from it.
SeededRun prepare_run(const RunConfig& config, std::uint64_t seed);
KeyValues describe_run(const RunConfig& config, std::uint64_t seed);

void write_run_dir(const TrainLog& log, const KeyValues& config_echo, const std::filesystem::path& dir);

struct AnalyzeOptions {
  std::optional<double> zeta;  // default: largest observed per-example loss
  double beta = 0.0;
  double tau = 0.05;
  VectorHurstOptions hurst;
  double ball_eps = 1e-3;
  std::size_t bg_k1 = 0;
  double tail_fraction = 0.1;
};

struct AnalysisReport {
  std::optional<HurstEstimate> hurst;
  std::optional<double> hurst_used;  // clamped value entering the bound
  bool hurst_clamped = false;
  std::optional<double> diameter;  // 2 * radius of the enclosing ball of loss vectors
  std::optional<double> diameter_lower_bound;
  std::optional<double> rademacher;  // 12 diam / m sqrt(ln 4 / H)
  std::optional<BoundReport> bound;
  IndicatorReport indicators;
  std::optional<double> gap;
  std::optional<double> train_acc;
  std::optional<double> test_acc;
  std::size_t m = 0;
  double zeta = 0.0;
  double beta = 0.0;
  double tau = 0.0;
  double empirical_risk = 0.0;
  KeyValues run_metadata;
  std::vector<std::string> failures;

  bool complete() const noexcept { return failures.empty(); }
  KeyValues to_key_values() const;
};

struct RunArtifacts {
  SeriesMatrix sgn;
  SeriesMatrix loss_vectors;
  std::vector<WeightMatrix> weights;
  KeyValues summary;
};

RunArtifacts load_run_dir(const std::filesystem::path& dir);
RunArtifacts artifacts_from_log(const TrainLog& log, const KeyValues& config_echo);

AnalysisReport analyze_artifacts(const RunArtifacts& run, const AnalyzeOptions& options = {});
AnalysisReport analyze(const std::filesystem::path& run_dir, const AnalyzeOptions& options = {});

enum class SweepAxis { train_size, lr, batch, momentum, wd, width, depth };
SweepAxis parse_sweep_axis(const std::string& name);
std::string to_string(SweepAxis axis);

// Returns a copy of `base` with the axis parameter set to `value`.
RunConfig apply_axis(RunConfig base, SweepAxis axis, double value);

struct SweepSpec {
  SweepAxis axis = SweepAxis::train_size;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  RunConfig base;
  AnalyzeOptions analyze;
  std::size_t jobs = 1;
};

struct SweepRow {
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  std::optional<AnalysisReport> report;
  std::string error;  // nonempty when the cell failed
};

// Rows ordered by (value, seed) regardless of the number of jobs.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// One data row per cell plus `# pearson <measure> <r|undefined>` summary lines.
std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows);

}  // namespace trajbound
