#include "trajbound/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <mutex>
#include <random>
#include <string>

#include "trajbound/error.hpp"
#include "trajbound/stats.hpp"

namespace trajbound {

namespace {

constexpr double kEigenTolerance = -1e-10;

// FFTW's planner is not reentrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place forward DFT of length data.size().
void forward_dft(std::vector<std::complex<double>>& data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

std::vector<double> standard_normals(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(count);
  for (auto& v : z) v = normal(gen);
  return z;
}

std::vector<double> davies_harte(std::size_t n, HurstParam h, std::uint64_t seed) {
  const std::size_t m = 2 * n;
  const std::vector<double> lambda = circulant_eigenvalues(n, h);
  const std::vector<double> z = standard_normals(m, seed);

  std::vector<std::complex<double>> w(m);
  const auto md = static_cast<double>(m);
  w[0] = std::sqrt(lambda[0] / md) * z[0];
  w[n] = std::sqrt(lambda[n] / md) * z[1];
  for (std::size_t k = 1; k < n; ++k) {
    const double scale = std::sqrt(lambda[k] / (2.0 * md));
    w[k] = scale * std::complex<double>(z[2 * k], z[2 * k + 1]);
    w[m - k] = std::conj(w[k]);
  }
  forward_dft(w);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i].real();
  return out;
}

std::vector<double> hosking(std::span<const double> z, HurstParam h) {
  const std::size_t n = z.size();
  std::vector<double> gamma(n);
  for (std::size_t k = 0; k < n; ++k) gamma[k] = fgn_autocovariance(k, h);

  std::vector<double> x(n);
  std::vector<double> phi(n, 0.0), prev(n, 0.0);
  double v = gamma[0];
  x[0] = std::sqrt(v) * z[0];
  for (std::size_t t = 1; t < n; ++t) {
    double acc = gamma[t];
    for (std::size_t j = 1; j < t; ++j) acc -= prev[j] * gamma[t - j];
    const double reflection = acc / v;
    phi[t] = reflection;
    for (std::size_t j = 1; j < t; ++j) phi[j] = prev[j] - reflection * prev[t - j];
    v *= 1.0 - reflection * reflection;
    if (!(v > 0.0)) throw InternalError("hosking: innovation variance collapsed");
    double mean = 0.0;
    for (std::size_t j = 1; j <= t; ++j) mean += phi[j] * x[t - j];
    x[t] = mean + std::sqrt(v) * z[t];
    std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(t) + 1, prev.begin());
  }
  return x;
}

std::vector<double> cholesky(std::span<const double> z, HurstParam h) {
  const auto n = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      cov(i, j) = cov(j, i) = fgn_autocovariance(static_cast<std::size_t>(i - j), h);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw InternalError("cholesky: fGn covariance not positive definite");
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), n);
  const Eigen::VectorXd x = llt.matrixL() * zv;
  return {x.data(), x.data() + n};
}

}  // namespace

HurstParam::HurstParam(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw DomainError("Hurst parameter must lie strictly inside (0, 1), got " + std::to_string(value));
  }
}

FgnMethod parse_fgn_method(std::string_view name) {
  if (name == "davies_harte") return FgnMethod::davies_harte;
  if (name == "hosking") return FgnMethod::hosking;
  if (name == "cholesky") return FgnMethod::cholesky;
  throw DomainError("unknown fGn method '" + std::string(name) + "'");
}

std::string_view to_string(FgnMethod method) noexcept {
  switch (method) {
    case FgnMethod::davies_harte: return "davies_harte";
    case FgnMethod::hosking: return "hosking";
    case FgnMethod::cholesky: return "cholesky";
  }
  return "unknown";
}

double fbm_covariance(double t, double s, HurstParam h) {
  if (!(t >= 0.0) || !(s >= 0.0) || !std::isfinite(t) || !std::isfinite(s)) {
    throw DomainError("fbm_covariance: times must be finite and non-negative");
  }
  const double two_h = 2.0 * h.value();
  return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(std::abs(t - s), two_h));
}

double fgn_autocovariance(std::size_t lag, HurstParam h) {
  const double two_h = 2.0 * h.value();
  const auto k = static_cast<double>(lag);
  return 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + std::pow(std::abs(k - 1.0), two_h));
}

std::vector<double> circulant_eigenvalues(std::size_t n, HurstParam h) {
  if (n == 0) throw DomainError("circulant_eigenvalues: n must be >= 1");
  const std::size_t m = 2 * n;
  std::vector<std::complex<double>> row(m);
  for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocovariance(k, h);
  for (std::size_t k = 1; k < n; ++k) row[m - k] = row[k];
  forward_dft(row);
  std::vector<double> lambda(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double value = row[k].real();
    if (value < kEigenTolerance) {
      throw InternalError("davies_harte: negative circulant eigenvalue " + std::to_string(value) +
                          " at index " + std::to_string(k));
    }
    lambda[k] = std::max(value, 0.0);
  }
  return lambda;
}

std::vector<double> sample_fgn(std::size_t n, HurstParam h, FgnMethod method, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample_fgn: n must be >= 1");
  if (method == FgnMethod::davies_harte) return davies_harte(n, h, seed);
  const std::vector<double> z = standard_normals(n, seed);
  return fgn_from_innovations(z, h, method);
}

std::vector<double> fgn_from_innovations(std::span<const double> innovations, HurstParam h,
                                         FgnMethod method) {
  if (innovations.empty()) throw DomainError("fgn_from_innovations: empty innovation sequence");
  switch (method) {
    case FgnMethod::hosking: return hosking(innovations, h);
    case FgnMethod::cholesky: return cholesky(innovations, h);
    case FgnMethod::davies_harte: break;
  }
  throw DomainError("fgn_from_innovations: davies_harte does not use a triangular factor");
}

FbmPath fgn_to_fbm(std::span<const double> increments, double dt, HurstParam h) {
  if (increments.empty()) throw DomainError("fgn_to_fbm: increments must be nonempty");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("fgn_to_fbm: dt must be positive");
  const double scale = std::pow(dt, h.value());
  FbmPath path{h, dt, 0, SeriesMatrix(increments.size() + 1, 1)};
  for (std::size_t k = 1; k <= increments.size(); ++k) {
    path.values(k, 0) = path.values(k - 1, 0) + scale * increments[k - 1];
  }
  return path;
}

FbmPath sample_fbm_multi(std::size_t n, std::size_t d, HurstParam h, double dt, FgnMethod method,
                         std::uint64_t seed) {
  if (d == 0) throw DomainError("sample_fbm_multi: dimension must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("sample_fbm_multi: dt must be positive");
  FbmPath path{h, dt, seed, SeriesMatrix(n + 1, d)};
  for (std::size_t c = 0; c < d; ++c) {
    const FbmPath component = fgn_to_fbm(sample_fgn(n, h, method, derive_seed(seed, c)), dt, h);
    for (std::size_t k = 0; k <= n; ++k) path.values(k, c) = component.values(k, 0);
  }
  return path;
}

}  // namespace trajbound
