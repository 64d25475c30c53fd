#include "trajbound/trainer.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "trajbound/error.hpp"
#include "trajbound/stats.hpp"

namespace trajbound {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kDivergenceLoss = 1e4;
constexpr double kEmaDecay = 0.99;

struct Activations {
  std::vector<MatrixXd> pre;   // pre[l]: pre-activation of layer l, out x B
  std::vector<MatrixXd> post;  // post[0] = inputs, post[l] = relu(pre[l-1])
};

MatrixXd gather_inputs(const Dataset& data, std::span<const std::size_t> batch) {
  const auto dim = static_cast<Eigen::Index>(data.features.cols());
  MatrixXd x(dim, static_cast<Eigen::Index>(batch.size()));
  for (std::size_t j = 0; j < batch.size(); ++j) {
    if (batch[j] >= data.size()) throw DomainError("batch index out of range");
    const auto row = data.features.row(batch[j]);
    for (Eigen::Index i = 0; i < dim; ++i) x(i, static_cast<Eigen::Index>(j)) = row[static_cast<std::size_t>(i)];
  }
  return x;
}

Activations run_forward(const Mlp& model, const Dataset& data, std::span<const std::size_t> batch) {
  if (batch.empty()) throw DomainError("forward: empty batch");
  if (data.features.cols() != model.input_dim()) throw DomainError("forward: feature dimension mismatch");
  if (data.classes != model.output_dim()) throw DomainError("forward: class count mismatch");
  Activations act;
  act.post.push_back(gather_inputs(data, batch));
  const auto params = model.parameters();
  const auto& sizes = model.sizes();
  for (std::size_t l = 0; l < model.layers(); ++l) {
    const auto out = static_cast<Eigen::Index>(sizes[l + 1]);
    const auto in = static_cast<Eigen::Index>(sizes[l]);
    const Eigen::Map<const RowMatrix> w(params.data() + model.weight_offset(l), out, in);
    const Eigen::Map<const VectorXd> b(params.data() + model.bias_offset(l), out);
    MatrixXd z = w * act.post.back();
    z.colwise() += b;
    act.pre.push_back(z);
    if (l + 1 < model.layers()) act.post.push_back(z.cwiseMax(0.0));
  }
  return act;
}

// Stable cross-entropy of one logit column; fills softmax probabilities.
double cross_entropy(const Eigen::Ref<const VectorXd>& z, std::size_t label, Eigen::Ref<VectorXd> prob) {
  Eigen::Index arg = 0;
  const double top = z.maxCoeff(&arg);
  prob = (z.array() - top).exp();
  const double total = prob.sum();
  prob /= total;
  const auto y = static_cast<Eigen::Index>(label);
  if (arg == y) {
    double rest = 0.0;
    for (Eigen::Index j = 0; j < z.size(); ++j)
      if (j != y) rest += std::exp(z(j) - z(y));
    return std::log1p(rest);
  }
  return std::log(total) + top - z(y);
}

}  // namespace

DatasetPair make_dataset(const DatasetKind& kind, std::size_t m_train, std::size_t m_test, std::uint64_t seed) {
  if (m_train < 1 || m_test < 1) throw DomainError("make_dataset: split sizes must be >= 1");
  std::size_t dim = 2, classes = 2;
  std::vector<std::vector<double>> centers;
  if (const auto* blobs = std::get_if<dataset::GaussianBlobs>(&kind)) {
    if (!(blobs->separation > 0.0)) throw DomainError("make_dataset: separation must be positive");
    if (blobs->classes < 2 || blobs->dim < 1) throw DomainError("make_dataset: need >= 2 classes and dim >= 1");
    dim = blobs->dim;
    classes = blobs->classes;
    const double radius = blobs->separation / std::sqrt(2.0);
    std::mt19937_64 gen(derive_seed(seed, 2));
    std::normal_distribution<double> normal;
    for (std::size_t c = 0; c < classes; ++c) {
      std::vector<double> center(dim, 0.0);
      if (classes <= dim) {
        center[c] = radius;
      } else {
        double norm = 0.0;
        for (auto& v : center) {
          v = normal(gen);
          norm += v * v;
        }
        for (auto& v : center) v *= radius / std::sqrt(norm);
      }
      centers.push_back(std::move(center));
    }
  } else if (!(std::get<dataset::TwoRings>(kind).noise >= 0.0)) {
    throw DomainError("make_dataset: ring noise must be non-negative");
  }

  const auto draw = [&](std::size_t m, std::uint64_t stream) {
    Dataset d;
    d.classes = classes;
    d.features = SeriesMatrix(m, dim);
    d.labels.resize(m);
    std::mt19937_64 gen(derive_seed(seed, stream));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t label = i % classes;
      d.labels[i] = label;
      if (const auto* rings = std::get_if<dataset::TwoRings>(&kind)) {
        const double r = label == 0 ? 1.0 : 2.0;
        const double a = angle(gen);
        d.features(i, 0) = r * std::cos(a) + rings->noise * normal(gen);
        d.features(i, 1) = r * std::sin(a) + rings->noise * normal(gen);
      } else {
        for (std::size_t c = 0; c < dim; ++c) d.features(i, c) = centers[label][c] + normal(gen);
      }
    }
    return d;
  };
  DatasetPair pair{draw(m_train, 0), draw(m_test, 1)};

  for (std::size_t c = 0; c < dim; ++c) {
    const std::vector<double> col = pair.train.features.column(c);
    const double mu = mean(col);
    double var = 0.0;
    for (double v : col) var += (v - mu) * (v - mu);
    double sd = std::sqrt(var / static_cast<double>(col.size()));
    if (!(sd > 0.0)) sd = 1.0;
    for (Dataset* d : {&pair.train, &pair.test})
      for (std::size_t i = 0; i < d->size(); ++i) d->features(i, c) = (d->features(i, c) - mu) / sd;
  }
  return pair;
}

void shuffle_labels(Dataset& data, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::shuffle(data.labels.begin(), data.labels.end(), gen);
}

Mlp::Mlp(const MlpSpec& spec) : sizes_(spec.layer_sizes) {
  if (sizes_.size() < 2) throw DomainError("Mlp: need at least input and output layers");
  if (std::any_of(sizes_.begin(), sizes_.end(), [](std::size_t s) { return s == 0; })) {
    throw DomainError("Mlp: layer sizes must be >= 1");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
  std::mt19937_64 gen(spec.init_seed);
  std::normal_distribution<double> normal;
  for (std::size_t l = 0; l < layers(); ++l) {
    const double scale = std::sqrt(2.0 / static_cast<double>(sizes_[l])) * spec.init_scale;
    const std::size_t count = sizes_[l + 1] * sizes_[l];
    for (std::size_t i = 0; i < count; ++i) params_[offsets_[l] + i] = scale * normal(gen);
  }
}

std::vector<WeightMatrix> Mlp::weight_matrices() const {
  std::vector<WeightMatrix> out;
  for (std::size_t l = 0; l < layers(); ++l) {
    const std::size_t rows = sizes_[l + 1], cols = sizes_[l];
    const auto first = params_.begin() + static_cast<std::ptrdiff_t>(weight_offset(l));
    out.push_back({l, SeriesMatrix(rows, cols, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(rows * cols)))});
  }
  return out;
}

ForwardResult forward_loss(const Mlp& model, const Dataset& data, std::span<const std::size_t> batch) {
  const Activations act = run_forward(model, data, batch);
  const MatrixXd& logits = act.pre.back();
  ForwardResult result{std::vector<double>(batch.size()), SeriesMatrix(batch.size(), model.output_dim())};
  VectorXd prob(logits.rows());
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    const double loss = cross_entropy(logits.col(col), data.labels[batch[j]], prob);
    if (!std::isfinite(loss)) throw NumericalError("forward_loss: non-finite loss");
    result.losses[j] = loss;
    for (Eigen::Index c = 0; c < logits.rows(); ++c) result.logits(j, static_cast<std::size_t>(c)) = logits(c, col);
  }
  return result;
}

namespace {

// Gradient of the mean batch loss; also returns the mean loss.
double gradient_and_loss(const Mlp& model, const Dataset& data, std::span<const std::size_t> batch,
                         std::vector<double>& out) {
  const Activations act = run_forward(model, data, batch);
  const auto nb = static_cast<Eigen::Index>(batch.size());
  const MatrixXd& logits = act.pre.back();
  MatrixXd delta(logits.rows(), nb);
  double loss_sum = 0.0;
  for (Eigen::Index j = 0; j < nb; ++j) {
    VectorXd prob(logits.rows());
    const std::size_t label = data.labels[batch[static_cast<std::size_t>(j)]];
    const double loss = cross_entropy(logits.col(j), label, prob);
    if (!std::isfinite(loss)) throw NumericalError("grad: non-finite loss");
    loss_sum += loss;
    prob(static_cast<Eigen::Index>(label)) -= 1.0;
    delta.col(j) = prob / static_cast<double>(nb);
  }

  out.assign(model.parameter_count(), 0.0);
  const auto params = model.parameters();
  const auto& sizes = model.sizes();
  for (std::size_t l = model.layers(); l-- > 0;) {
    const auto rows = static_cast<Eigen::Index>(sizes[l + 1]);
    const auto cols = static_cast<Eigen::Index>(sizes[l]);
    Eigen::Map<RowMatrix>(out.data() + model.weight_offset(l), rows, cols) = delta * act.post[l].transpose();
    Eigen::Map<VectorXd>(out.data() + model.bias_offset(l), rows) = delta.rowwise().sum();
    if (l == 0) break;
    const Eigen::Map<const RowMatrix> w(params.data() + model.weight_offset(l), rows, cols);
    MatrixXd back = w.transpose() * delta;
    delta = back.cwiseProduct((act.pre[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return loss_sum / static_cast<double>(nb);
}

}  // namespace

std::vector<double> grad(const Mlp& model, const Dataset& data, std::span<const std::size_t> batch) {
  std::vector<double> g;
  gradient_and_loss(model, data, batch, g);
  return g;
}

std::vector<double> per_example_losses(const Mlp& model, const Dataset& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return forward_loss(model, data, all).losses;
}

double accuracy(const Mlp& model, const Dataset& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const Activations act = run_forward(model, data, all);
  const MatrixXd& logits = act.pre.back();
  std::size_t correct = 0;
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    Eigen::Index arg = 0;
    logits.col(j).maxCoeff(&arg);
    if (static_cast<std::size_t>(arg) == data.labels[static_cast<std::size_t>(j)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainLog train(const MlpSpec& spec, const TrainConfig& config, const DatasetPair& data) {
  const std::size_t m = data.train.size();
  if (!(config.lr >= 0.0)) throw DomainError("train: learning rate must be non-negative");
  if (config.batch_size < 1 || config.batch_size > m) throw DomainError("train: batch size must lie in [1, m]");
  if (!(config.momentum >= 0.0 && config.momentum < 1.0)) throw DomainError("train: momentum must lie in [0, 1)");
  if (!(config.weight_decay >= 0.0)) throw DomainError("train: weight decay must be non-negative");
  if (config.loss_log_stride < 1) throw DomainError("train: loss_log_stride must be >= 1");
  if (config.max_iters < 1) throw DomainError("train: max_iters must be >= 1");

  Mlp model(spec);
  const std::size_t d = model.parameter_count();
  TrainLog log;

  std::mt19937_64 coord_gen(config.shuffle_seed);
  std::vector<std::size_t> all(d);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const std::size_t coords = std::min(config.sgn_coord_count == 0 ? d : config.sgn_coord_count, d);
  std::sample(all.begin(), all.end(), std::back_inserter(log.sgn_coordinates), coords, coord_gen);

  log.sgn = SeriesMatrix(0, coords, SeriesKind::sgn);
  log.loss_vectors = SeriesMatrix(0, m, SeriesKind::loss_vectors);
  log.sgn.data().reserve(std::min<std::size_t>(config.max_iters, 1 << 16) * coords);

  std::mt19937_64 batch_gen(derive_seed(config.shuffle_seed, 1));
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::vector<std::size_t> batch(config.batch_size);
  std::vector<double> g, velocity(d, 0.0), row(coords);
  auto params = model.parameters();
  double ema = 0.0;
  std::size_t next_check = 0;

  for (std::size_t k = 0; k < config.max_iters; ++k) {
    if (k % config.loss_log_stride == 0) log.loss_vectors.append_row(per_example_losses(model, data.train));
    for (auto& idx : batch) idx = pick(batch_gen);
    if (config.record_batches) log.batches.push_back(batch);

    const double loss = gradient_and_loss(model, data.train, batch, g);
    if (!std::isfinite(loss) || loss > kDivergenceLoss) throw DivergenceError("train: loss diverged", k);
    for (std::size_t i = 0; i < coords; ++i) row[i] = g[log.sgn_coordinates[i]];
    log.sgn.append_row(row);

    for (std::size_t i = 0; i < d; ++i) {
      double step = g[i] + config.weight_decay * params[i];
      if (config.momentum > 0.0) {
        velocity[i] = config.momentum * velocity[i] + step;
        step = velocity[i];
      }
      params[i] -= config.lr * step;
    }
    log.iters = k + 1;

    ema = k == 0 ? loss : kEmaDecay * ema + (1.0 - kEmaDecay) * loss;
    if (ema <= config.stop_loss && log.iters >= next_check) {
      const std::vector<double> full = per_example_losses(model, data.train);
      if (mean(full) <= config.stop_loss) {
        log.converged = true;
        break;
      }
      next_check = log.iters + config.loss_log_stride;
    }
  }

  const std::vector<double> final_losses = per_example_losses(model, data.train);
  log.loss_vectors.append_row(final_losses);
  log.empirical_risk = mean(final_losses);
  log.zeta_observed = *std::max_element(log.loss_vectors.data().begin(), log.loss_vectors.data().end());
  log.weights = model.weight_matrices();
  log.train_acc = accuracy(model, data.train);
  log.test_acc = accuracy(model, data.test);
  log.final_parameters.assign(params.begin(), params.end());
  return log;
}

double generalization_gap(const TrainLog& log) { return log.train_acc - log.test_acc; }

}  // namespace trajbound
