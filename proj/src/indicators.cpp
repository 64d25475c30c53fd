#include "trajbound/indicators.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "trajbound/error.hpp"
#include "trajbound/stats.hpp"

namespace trajbound {

namespace {

constexpr std::size_t kMinBlocks = 20;
constexpr double kMaxSkippedFraction = 0.2;
constexpr std::size_t kMinTailEigenvalues = 20;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMatrix> as_eigen(const WeightMatrix& w) {
  return {w.values.data().data(), static_cast<Eigen::Index>(w.rows()), static_cast<Eigen::Index>(w.cols())};
}

void check_weights(const WeightMatrix& w) {
  if (w.rows() < 1 || w.cols() < 1) throw DomainError("weight matrix must be at least 1x1");
  w.values.validate(1);
}

}  // namespace

double estimate_bg_index(std::span<const double> series, std::size_t k1) {
  const std::size_t total = series.size();
  if (k1 == 0) k1 = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(total))));
  if (k1 < 2) throw DomainError("estimate_bg_index: block size must be >= 2");
  const std::size_t k2 = total / k1;
  if (k2 < kMinBlocks) {
    throw DomainError("estimate_bg_index: " + std::to_string(k2) + " blocks of size " + std::to_string(k1) +
                      " (need >= 20)");
  }
  const std::size_t used = k1 * k2;
  if (std::all_of(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(used),
                  [](double v) { return v == 0.0; })) {
    throw DomainError("estimate_bg_index: series is identically zero");
  }

  // Logs are taken relative to the largest magnitude so that rescaling the
  // series leaves every log term bit-identical whenever the rescale is exact.
  double scale = 0.0;
  for (std::size_t i = 0; i < used; ++i) scale = std::max(scale, std::abs(series[i]));

  double sum_blocks = 0.0, sum_samples = 0.0;
  std::size_t n_blocks = 0, n_samples = 0, skipped = 0;
  for (std::size_t b = 0; b < k2; ++b) {
    double y = 0.0;
    for (std::size_t j = 0; j < k1; ++j) {
      const double x = series[b * k1 + j];
      y += x;
      if (x == 0.0) {
        ++skipped;
      } else {
        sum_samples += std::log(std::abs(x) / scale);
        ++n_samples;
      }
    }
    if (y == 0.0) {
      ++skipped;
    } else {
      sum_blocks += std::log(std::abs(y) / scale);
      ++n_blocks;
    }
  }
  if (static_cast<double>(skipped) > kMaxSkippedFraction * static_cast<double>(used + k2)) {
    throw EstimationError("estimate_bg_index: too many zero terms (" + std::to_string(skipped) + ")");
  }
  const double inv_alpha =
      (sum_blocks / static_cast<double>(n_blocks) - sum_samples / static_cast<double>(n_samples)) /
      std::log(static_cast<double>(k1));
  if (!(inv_alpha > 0.5)) return 2.0;
  return 1.0 / inv_alpha;
}

std::vector<double> esd_eigenvalues(const WeightMatrix& w) {
  check_weights(w);
  const auto mat = as_eigen(w);
  const Eigen::MatrixXd gram = w.rows() <= w.cols() ? Eigen::MatrixXd(mat * mat.transpose())
                                                    : Eigen::MatrixXd(mat.transpose() * mat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("esd_eigenvalues: eigensolver failed");
  std::vector<double> eig(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  for (double& v : eig) {
    if (!std::isfinite(v)) throw NumericalError("esd_eigenvalues: non-finite eigenvalue");
    v = std::max(v, 0.0);
  }
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

double power_law_index(std::span<const double> eigenvalues, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
    throw DomainError("power_law_index: tail_fraction must lie in (0, 1)");
  }
  std::vector<double> pos;
  for (double v : eigenvalues)
    if (v > 0.0 && std::isfinite(v)) pos.push_back(v);
  if (pos.size() < kMinTailEigenvalues) {
    throw DomainError("power_law_index: need >= 20 positive eigenvalues, got " + std::to_string(pos.size()));
  }
  std::sort(pos.begin(), pos.end(), std::greater<>());
  auto k = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(pos.size())));
  k = std::clamp<std::size_t>(k, 1, pos.size() - 1);
  const double threshold = pos[k];
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(pos[i] / threshold);
  if (!(sum > 0.0)) throw EstimationError("power_law_index: tail eigenvalues are all equal");
  return 1.0 + static_cast<double>(k) / sum;
}

double spectral_norm(const WeightMatrix& w, double tol, std::size_t max_iter) {
  check_weights(w);
  // Iterate on W / max|w_ij| so the Rayleigh quotient cannot overflow.
  const double scale = as_eigen(w).cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const Eigen::MatrixXd mat = as_eigen(w) / scale;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(mat.cols()) / std::sqrt(static_cast<double>(mat.cols()));
  double previous = -1.0;
  double rayleigh = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd u = mat * v;
    const Eigen::VectorXd next = mat.transpose() * u;
    rayleigh = u.squaredNorm();
    if (!std::isfinite(rayleigh)) throw NumericalError("spectral_norm: non-finite iterate");
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    if (previous >= 0.0 && std::abs(rayleigh - previous) <= tol * rayleigh) return scale * std::sqrt(rayleigh);
    previous = rayleigh;
    v = next / norm;
  }
  throw NumericalError("spectral_norm: no convergence in " + std::to_string(max_iter) + " iterations",
                       scale * std::sqrt(rayleigh));
}

double frobenius_norm(const WeightMatrix& w) {
  check_weights(w);
  return as_eigen(w).stableNorm();
}

NormMeasures norm_measures(std::span<const WeightMatrix> layers) {
  if (layers.empty()) throw DomainError("norm_measures: need at least one layer");
  NormMeasures out;
  std::vector<double> spectral, frobenius;
  for (const auto& layer : layers) {
    spectral.push_back(spectral_norm(layer));
    frobenius.push_back(frobenius_norm(layer));
    out.spectral_sum_log += std::log(spectral.back());
    out.frobenius_sum_log += std::log(frobenius.back());
  }
  const double limit = std::log(std::numeric_limits<double>::max());
  out.overflow = out.spectral_sum_log > limit || out.frobenius_sum_log > limit;
  if (out.overflow) {
    out.spectral_product = std::numeric_limits<double>::infinity();
    out.frobenius_product = std::numeric_limits<double>::infinity();
  } else {
    out.spectral_product = 1.0;
    out.frobenius_product = 1.0;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      out.spectral_product *= spectral[i];
      out.frobenius_product *= frobenius[i];
    }
  }
  return out;
}

double bg_index_from_vectors(const SeriesMatrix& m, std::size_t k1) {
  m.validate(2);
  std::vector<double> estimates;
  std::size_t failures = 0;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    try {
      estimates.push_back(estimate_bg_index(m.column(c), k1));
    } catch (const EstimationError&) {
      ++failures;
    } catch (const DomainError&) {
      ++failures;
    }
  }
  if (estimates.empty() || 2 * failures > m.cols()) {
    throw EstimationError("bg_index_from_vectors: " + std::to_string(failures) + " of " +
                          std::to_string(m.cols()) + " columns failed");
  }
  return mean(estimates);
}

double power_law_index_from_layers(std::span<const WeightMatrix> layers, double tail_fraction) {
  std::vector<double> estimates;
  for (const auto& layer : layers) {
    const std::vector<double> eig = esd_eigenvalues(layer);
    const auto positive = std::count_if(eig.begin(), eig.end(), [](double v) { return v > 0.0; });
    if (positive < static_cast<std::ptrdiff_t>(kMinTailEigenvalues)) continue;
    estimates.push_back(power_law_index(eig, tail_fraction));
  }
  if (estimates.empty()) throw EstimationError("power_law_index_from_layers: no layer has >= 20 eigenvalues");
  return mean(estimates);
}

}  // namespace trajbound
