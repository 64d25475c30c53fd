#include "trajbound/hurst.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "trajbound/error.hpp"
#include "trajbound/stats.hpp"

namespace trajbound {

namespace {

constexpr std::size_t kMinWindow = 8;
constexpr std::size_t kMinSeriesLength = 32;
constexpr std::size_t kMinWindows = 3;

// Returns the block R/S or nullopt when the block has zero spread.
std::optional<double> block_rs(std::span<const double> block) {
  const auto n = static_cast<double>(block.size());
  double mu = 0.0;
  for (double v : block) mu += v;
  mu /= n;
  double var = 0.0, cum = 0.0, lo = 0.0, hi = 0.0;
  for (double v : block) {
    const double dev = v - mu;
    var += dev * dev;
    cum += dev;
    lo = std::min(lo, cum);
    hi = std::max(hi, cum);
  }
  const double sd = std::sqrt(var / n);
  if (!(sd > 0.0)) return std::nullopt;
  return (hi - lo) / sd;
}

}  // namespace

double rescaled_range(std::span<const double> series, std::size_t window) {
  if (window < kMinWindow) throw DomainError("rescaled_range: window must be >= 8");
  if (series.size() < window) throw DomainError("rescaled_range: window exceeds series length");
  const std::size_t blocks = series.size() / window;
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    if (auto rs = block_rs(series.subspan(b * window, window))) {
      total += *rs;
      ++used;
    }
  }
  if (used == 0) throw EstimationError("rescaled_range: every block has zero deviation");
  return total / static_cast<double>(used);
}

std::vector<std::size_t> window_schedule(std::size_t length, std::size_t min_window,
                                         std::size_t max_window) {
  if (max_window == 0) max_window = length / 2;
  max_window = std::min(max_window, length);
  std::vector<std::size_t> windows;
  for (std::size_t w = std::max(min_window, kMinWindow); w <= max_window; w *= 2) windows.push_back(w);
  return windows;
}

HurstEstimate estimate_hurst_rs(std::span<const double> series, std::size_t min_window,
                                std::size_t max_window) {
  if (series.size() < kMinSeriesLength) {
    throw DomainError("estimate_hurst_rs: series length " + std::to_string(series.size()) + " < 32");
  }
  HurstEstimate est;
  for (std::size_t w : window_schedule(series.size(), min_window, max_window)) {
    double rs = 0.0;
    try {
      rs = rescaled_range(series, w);
    } catch (const EstimationError&) {
      continue;
    }
    if (!(rs > 0.0)) continue;
    est.log_windows.push_back(std::log(static_cast<double>(w)));
    est.log_rs.push_back(std::log(rs));
  }
  est.n_windows = est.log_windows.size();
  if (est.n_windows < kMinWindows) {
    throw EstimationError("estimate_hurst_rs: only " + std::to_string(est.n_windows) +
                          " usable windows (need 3)");
  }
  const LinearFit fit = fit_line(est.log_windows, est.log_rs);
  est.h_hat = fit.slope;
  est.stderr = fit.slope_stderr;
  return est;
}

HurstEstimate estimate_hurst_from_vectors(const SeriesMatrix& m, const VectorHurstOptions& options) {
  if (m.kind() == SeriesKind::loss_vectors) {
    throw DomainError("estimate_hurst_from_vectors: expects an sgn or generic matrix");
  }
  m.validate(kMinSeriesLength);

  std::vector<std::size_t> coords(m.cols());
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  if (options.subsample) {
    const std::size_t count = options.subsample->count;
    if (count == 0 || count > m.cols()) {
      throw DomainError("estimate_hurst_from_vectors: subsample count " + std::to_string(count) +
                        " outside [1, " + std::to_string(m.cols()) + "]");
    }
    std::mt19937_64 gen(options.subsample->seed);
    std::vector<std::size_t> picked;
    picked.reserve(count);
    std::sample(coords.begin(), coords.end(), std::back_inserter(picked), count, gen);
    coords = std::move(picked);
  }

  HurstEstimate est;
  std::size_t failures = 0;
  double stderr_sum = 0.0;
  std::size_t windows = 0;
  for (std::size_t c : coords) {
    const std::vector<double> col = m.column(c);
    try {
      const HurstEstimate e = estimate_hurst_rs(col, options.min_window);
      est.per_coordinate.push_back(e.h_hat);
      stderr_sum += e.stderr;
      windows = std::max(windows, e.n_windows);
    } catch (const EstimationError&) {
      ++failures;
    }
  }
  if (est.per_coordinate.empty() || 2 * failures > coords.size()) {
    throw EstimationError("estimate_hurst_from_vectors: " + std::to_string(failures) + " of " +
                          std::to_string(coords.size()) + " coordinate estimates failed");
  }
  est.h_hat = mean(est.per_coordinate);
  est.stderr = stderr_sum / static_cast<double>(est.per_coordinate.size());
  est.n_windows = windows;
  return est;
}

}  // namespace trajbound
