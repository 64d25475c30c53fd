#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "trajbound/indicators.hpp"
#include "trajbound/series.hpp"

namespace trajbound {

struct Dataset {
  SeriesMatrix features;  // m x dim
  std::vector<std::size_t> labels;
  std::size_t classes = 2;

  std::size_t size() const noexcept { return labels.size(); }
};

struct DatasetPair {
  Dataset train;
  Dataset test;
};

namespace dataset {
// Isotropic unit-variance clusters whose centers are pairwise `separation` apart
// (for classes <= dim; random directions of the same norm otherwise).
struct GaussianBlobs {
  std::size_t classes = 2;
  std::size_t dim = 2;
  double separation = 4.0;
};
// Concentric rings of radius 1 and 2 in the plane with Gaussian jitter.
struct TwoRings {
  double noise = 0.1;
};
}  // namespace dataset

using DatasetKind = std::variant<dataset::GaussianBlobs, dataset::TwoRings>;

// Labels alternate by index; features standardized with training-split statistics.
DatasetPair make_dataset(const DatasetKind& kind, std::size_t m_train, std::size_t m_test, std::uint64_t seed);

// Replaces labels with a random permutation of themselves.
void shuffle_labels(Dataset& data, std::uint64_t seed);

struct MlpSpec {
  std::vector<std::size_t> layer_sizes;  // input, hidden..., output; ReLU between layers
  std::uint64_t init_seed = 0;
  double init_scale = 1.0;
};

// Fully connected ReLU network. Parameters are stored flat, per layer the
// out x in weight matrix (row-major) followed by the bias.
class Mlp {
 public:
  explicit Mlp(const MlpSpec& spec);

  std::size_t layers() const noexcept { return sizes_.size() - 1; }
  std::size_t input_dim() const noexcept { return sizes_.front(); }
  std::size_t output_dim() const noexcept { return sizes_.back(); }
  std::size_t parameter_count() const noexcept { return params_.size(); }
  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }

  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }

  // Offsets of layer l's weight block and bias block inside parameters().
  std::size_t weight_offset(std::size_t l) const { return offsets_[l]; }
  std::size_t bias_offset(std::size_t l) const { return offsets_[l] + sizes_[l + 1] * sizes_[l]; }

  std::vector<WeightMatrix> weight_matrices() const;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

struct ForwardResult {
  std::vector<double> losses;  // per-example cross-entropy
  SeriesMatrix logits;         // batch x classes
};

ForwardResult forward_loss(const Mlp& model, const Dataset& data, std::span<const std::size_t> batch);

// Gradient of the mean batch cross-entropy, length parameter_count().
std::vector<double> grad(const Mlp& model, const Dataset& data, std::span<const std::size_t> batch);

// Per-example losses over the whole dataset.
std::vector<double> per_example_losses(const Mlp& model, const Dataset& data);
double accuracy(const Mlp& model, const Dataset& data);

struct TrainConfig {
  double lr = 0.01;
  std::size_t batch_size = 64;
  double momentum = 0.0;
  double weight_decay = 0.0;
  double stop_loss = 0.01;
  std::size_t max_iters = 100000;
  std::uint64_t shuffle_seed = 0;
  std::size_t loss_log_stride = 10;
  std::size_t sgn_coord_count = 256;
  bool record_batches = false;
};

struct TrainLog {
  SeriesMatrix sgn;           // K x c mini-batch gradient values at a fixed coordinate subset
  SeriesMatrix loss_vectors;  // per-example training losses every stride iterations, plus the final state
  std::vector<WeightMatrix> weights;
  std::vector<std::size_t> sgn_coordinates;
  std::vector<std::vector<std::size_t>> batches;  // only with record_batches
  double train_acc = 0.0;
  double test_acc = 0.0;
  double empirical_risk = 0.0;
  double zeta_observed = 0.0;
  std::size_t iters = 0;
  bool converged = false;
  std::vector<double> final_parameters;
};

TrainLog train(const MlpSpec& spec, const TrainConfig& config, const DatasetPair& data);

double generalization_gap(const TrainLog& log);

}  // namespace trajbound
