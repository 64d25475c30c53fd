#include "trajbound/bound.hpp"

#include <cmath>
#include <numbers>

#include "trajbound/error.hpp"

namespace trajbound {

namespace {

constexpr double kUpperClamp = 0.999;
constexpr double kLowerClamp = 0.001;

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw DomainError(std::string("bound: ") + name + " must be finite");
}

}  // namespace

double rademacher_bound(double diam, std::size_t m, HurstParam h) {
  check_finite(diam, "diam");
  if (diam < 0.0) throw DomainError("rademacher_bound: diam must be non-negative");
  if (m < 1) throw DomainError("rademacher_bound: m must be >= 1");
  const double ln4 = 2.0 * std::numbers::ln2;
  return 12.0 * diam / static_cast<double>(m) * std::sqrt(ln4 / h.value());
}

BoundReport full_bound(const BoundInputs& in) {
  check_finite(in.zeta, "zeta");
  check_finite(in.beta, "beta");
  check_finite(in.tau, "tau");
  check_finite(in.empirical_risk, "empirical_risk");
  if (!(in.zeta > 0.0)) throw DomainError("full_bound: zeta must be positive");
  if (in.beta < 0.0) throw DomainError("full_bound: beta must be non-negative");
  if (!(in.tau > 0.0 && in.tau < 1.0)) throw DomainError("full_bound: tau must lie in (0, 1)");
  if (in.empirical_risk < 0.0) throw DomainError("full_bound: empirical risk must be non-negative");

  BoundReport r;
  r.rademacher_term = 2.0 * in.zeta * rademacher_bound(in.diam, in.m, in.h);
  const auto m = static_cast<double>(in.m);
  r.concentration_term = (in.zeta + 2.0 * in.beta * m) * std::sqrt(std::log(1.0 / in.tau) / (2.0 * m));
  r.total = in.empirical_risk + r.rademacher_term + r.concentration_term;
  return r;
}

ClampedHurst clamp_hurst(double raw) {
  if (std::isnan(raw)) throw DomainError("clamp_hurst: estimate is NaN");
  if (raw >= 1.0) return {HurstParam(kUpperClamp), true};
  if (raw <= 0.0) return {HurstParam(kLowerClamp), true};
  return {HurstParam(raw), false};
}

}  // namespace trajbound
