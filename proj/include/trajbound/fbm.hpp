#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "trajbound/series.hpp"

namespace trajbound {

// Hurst index, strictly inside (0, 1).
class HurstParam {
 public:
  explicit HurstParam(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

enum class FgnMethod { davies_harte, hosking, cholesky };

FgnMethod parse_fgn_method(std::string_view name);
std::string_view to_string(FgnMethod method) noexcept;

// Sampled fBm trajectory on a uniform grid. values is (n+1) x d, row 0 is the origin.
struct FbmPath {
  HurstParam h{0.5};
  double dt = 1.0;
  std::uint64_t seed = 0;
  SeriesMatrix values;

  std::size_t steps() const noexcept { return values.rows() == 0 ? 0 : values.rows() - 1; }
  std::size_t dim() const noexcept { return values.cols(); }
};

// E[B_t B_s] = (t^2H + s^2H - |t-s|^2H) / 2.
double fbm_covariance(double t, double s, HurstParam h);

// Autocovariance of unit-step fGn at integer lag k.
double fgn_autocovariance(std::size_t lag, HurstParam h);

// Unit-step fGn of length n; deterministic in (n, h, method, seed).
std::vector<double> sample_fgn(std::size_t n, HurstParam h, FgnMethod method = FgnMethod::davies_harte,
                               std::uint64_t seed = 0);

// Applies the lower-triangular covariance factor to standard-normal innovations.
// Only hosking and cholesky are accepted; both realize the same unique factor.
std::vector<double> fgn_from_innovations(std::span<const double> innovations, HurstParam h,
                                         FgnMethod method);

// Eigenvalues of the 2n circulant embedding of the fGn covariance.
std::vector<double> circulant_eigenvalues(std::size_t n, HurstParam h);

// path[0] = 0, path[k] = path[k-1] + dt^H * increments[k-1].
FbmPath fgn_to_fbm(std::span<const double> increments, double dt, HurstParam h);

// d independent components; component i is drawn with derive_seed(seed, i).
FbmPath sample_fbm_multi(std::size_t n, std::size_t d, HurstParam h, double dt = 1.0,
                         FgnMethod method = FgnMethod::davies_harte, std::uint64_t seed = 0);

}  // namespace trajbound
