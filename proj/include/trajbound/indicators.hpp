#pragma once

#include <optional>
#include <span>
#include <vector>

#include "trajbound/series.hpp"

namespace trajbound {

struct WeightMatrix {
  std::size_t layer_index = 0;
  SeriesMatrix values;  // rows x cols, row-major

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
};

// Block log-moment estimator of the stable index, clamped to (0, 2].
// k1 = 0 selects floor(sqrt(K)).
double estimate_bg_index(std::span<const double> series, std::size_t k1 = 0);

// Eigenvalues of the smaller of W^T W and W W^T, non-negative, descending.
std::vector<double> esd_eigenvalues(const WeightMatrix& w);

// Hill estimate of the density exponent on the top ceil(tail_fraction * count) eigenvalues.
double power_law_index(std::span<const double> eigenvalues, double tail_fraction = 0.1);

// Largest singular value by power iteration on W^T W from the normalized all-ones vector.
double spectral_norm(const WeightMatrix& w, double tol = 1e-8, std::size_t max_iter = 10000);

double frobenius_norm(const WeightMatrix& w);

struct NormMeasures {
  double spectral_product = 0.0;
  double frobenius_product = 0.0;
  double spectral_sum_log = 0.0;
  double frobenius_sum_log = 0.0;
  bool overflow = false;  // products exceed double range; only the log forms are meaningful
};

NormMeasures norm_measures(std::span<const WeightMatrix> layers);

struct IndicatorReport {
  std::optional<double> bg_index;
  std::optional<double> power_law_index;
  std::optional<NormMeasures> norms;
};

// Mean per-column BG index of an iteration-by-coordinate matrix.
double bg_index_from_vectors(const SeriesMatrix& m, std::size_t k1 = 0);

// Mean power-law index over layers with at least 20 positive eigenvalues.
double power_law_index_from_layers(std::span<const WeightMatrix> layers, double tail_fraction = 0.1);

}  // namespace trajbound
