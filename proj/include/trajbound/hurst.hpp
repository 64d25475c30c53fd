#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trajbound/series.hpp"

namespace trajbound {

struct HurstEstimate {
  double h_hat = 0.0;  // raw log-log slope; may exceed 1 on trended data
  double stderr = 0.0;
  std::size_t n_windows = 0;
  std::vector<double> per_coordinate;
  // (log window, log mean R/S) pairs behind the fit; empty for vector estimates.
  std::vector<double> log_windows;
  std::vector<double> log_rs;
};

// Mean rescaled range over the disjoint blocks of length `window`.
// Blocks with zero standard deviation are skipped.
double rescaled_range(std::span<const double> series, std::size_t window);

// Geometric window schedule min_window, 2*min_window, ... capped at max_window.
std::vector<std::size_t> window_schedule(std::size_t length, std::size_t min_window,
                                         std::size_t max_window);

// Smallest default window. Windows below 32 carry most of the small-sample
// R/S bias, which pushes anti-persistent estimates up by ~0.08.
inline constexpr std::size_t kDefaultMinWindow = 32;

// Slope of log(R/S) against log(window). max_window = 0 means length / 2.
HurstEstimate estimate_hurst_rs(std::span<const double> series, std::size_t min_window = kDefaultMinWindow,
                                std::size_t max_window = 0);

struct Subsample {
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

struct VectorHurstOptions {
  std::optional<Subsample> subsample;  // empty: every coordinate
  std::size_t min_window = kDefaultMinWindow;
};

// Per-coordinate R/S estimates over the K iterations, averaged.
HurstEstimate estimate_hurst_from_vectors(const SeriesMatrix& m, const VectorHurstOptions& options = {});

}  // namespace trajbound
