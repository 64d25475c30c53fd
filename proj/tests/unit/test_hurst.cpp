#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "trajbound/error.hpp"
#include "trajbound/fbm.hpp"
#include "trajbound/hurst.hpp"

using namespace trajbound;

TEST_CASE("rescaled_range hand example and errors") {
  const std::vector<double> alt{1, -1, 1, -1, 1, -1, 1, -1};
  CHECK(rescaled_range(alt, 8) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(rescaled_range(std::vector<double>(64, 3.0), 8), EstimationError);
  CHECK_THROWS_AS(rescaled_range(alt, 16), DomainError);
  CHECK_THROWS_AS(rescaled_range(std::vector<double>(64, 1.0), 4), DomainError);
}

TEST_CASE("rescaled_range skips degenerate blocks") {
  std::vector<double> s(16, 2.0);
  for (std::size_t i = 8; i < 16; ++i) s[i] = (i % 2) ? -1.0 : 1.0;
  CHECK(rescaled_range(s, 8) == doctest::Approx(1.0));
}

TEST_CASE("rescaled_range is shift invariant") {
  const auto x = oracle::gaussian(512, 3);
  auto shifted = x;
  for (auto& v : shifted) v += 1234.5;
  CHECK(rescaled_range(shifted, 64) == doctest::Approx(rescaled_range(x, 64)).epsilon(1e-9));
}

TEST_CASE("window schedule is geometric") {
  const auto w = window_schedule(4096, 8, 0);
  CHECK(w == std::vector<std::size_t>{8, 16, 32, 64, 128, 256, 512, 1024, 2048});
  CHECK(window_schedule(100, 8, 0) == std::vector<std::size_t>{8, 16, 32});
}

TEST_CASE("estimate_hurst_rs on white noise sits in the small-sample band") {
  double total = 0;
  for (int s = 0; s < 20; ++s) total += estimate_hurst_rs(oracle::gaussian(4096, 500 + s)).h_hat;
  const double avg = total / 20;
  CHECK(avg >= 0.45);
  CHECK(avg <= 0.62);
}

TEST_CASE("estimate_hurst_rs recovers H = 0.7 from fGn") {
  double total = 0;
  for (int s = 0; s < 20; ++s) total += estimate_hurst_rs(sample_fgn(4096, HurstParam(0.7), FgnMethod::davies_harte, 900 + s)).h_hat;
  CHECK(std::abs(total / 20 - 0.7) <= 0.07);
}

TEST_CASE("pure trend saturates the estimate") {
  std::vector<double> ramp(4096);
  std::iota(ramp.begin(), ramp.end(), 1.0);
  const auto est = estimate_hurst_rs(ramp);
  CHECK(est.h_hat >= 0.9);
  CHECK(est.n_windows == 7);
  CHECK(est.stderr >= 0.0);
}

TEST_CASE("estimate_hurst_rs preconditions") {
  CHECK_THROWS_AS(estimate_hurst_rs(oracle::gaussian(31, 1)), DomainError);
  // 40 samples only admit windows 8 and 16.
  CHECK_THROWS_AS(estimate_hurst_rs(oracle::gaussian(40, 1), 8), EstimationError);
  CHECK_THROWS_AS(estimate_hurst_rs(oracle::gaussian(200, 1)), EstimationError);
  CHECK(estimate_hurst_rs(oracle::gaussian(200, 1), 8).n_windows == 4);
  CHECK_THROWS_AS(estimate_hurst_rs(std::vector<double>(256, 1.0)), EstimationError);
}

TEST_CASE("estimate_hurst_rs scale invariance") {
  const auto x = sample_fgn(2048, HurstParam(0.4), FgnMethod::davies_harte, 77);
  const double base = estimate_hurst_rs(x).h_hat;
  for (double c : {0.25, 2.0, 1024.0}) {
    auto y = x;
    for (auto& v : y) v *= c;
    CHECK(estimate_hurst_rs(y).h_hat == base);
  }
  for (double c : {0.3, 7.0, 1e5}) {
    auto y = x;
    for (auto& v : y) v *= c;
    CHECK(estimate_hurst_rs(y).h_hat == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("vector estimates") {
  const auto s = sample_fgn(512, HurstParam(0.6), FgnMethod::davies_harte, 5);
  SeriesMatrix m(512, 7, SeriesKind::sgn);
  for (std::size_t r = 0; r < 512; ++r)
    for (std::size_t c = 0; c < 7; ++c) m(r, c) = s[r];
  const auto est = estimate_hurst_from_vectors(m);
  CHECK(est.h_hat == estimate_hurst_rs(s).h_hat);
  CHECK(est.per_coordinate.size() == 7);

  SeriesMatrix mixed(300, 12);
  for (std::size_t c = 0; c < 12; ++c) {
    const auto col = oracle::gaussian(300, 40 + c);
    for (std::size_t r = 0; r < 300; ++r) mixed(r, c) = col[r];
  }
  const auto all = estimate_hurst_from_vectors(mixed);
  const auto full = estimate_hurst_from_vectors(mixed, {Subsample{12, 99}});
  CHECK(full.h_hat == all.h_hat);
  CHECK_THROWS_AS(estimate_hurst_from_vectors(mixed, {Subsample{13, 1}}), DomainError);
  CHECK_THROWS_AS(estimate_hurst_from_vectors(mixed, {Subsample{0, 1}}), DomainError);
  const auto a = estimate_hurst_from_vectors(mixed, {Subsample{5, 1}});
  const auto b = estimate_hurst_from_vectors(mixed, {Subsample{5, 1}});
  CHECK(a.h_hat == b.h_hat);

  SeriesMatrix loss(64, 2, SeriesKind::loss_vectors);
  CHECK_THROWS_AS(estimate_hurst_from_vectors(loss), DomainError);
  CHECK_THROWS_AS(estimate_hurst_from_vectors(SeriesMatrix(31, 3)), DomainError);
}

TEST_CASE("vector estimate fails when most coordinates are constant") {
  SeriesMatrix m(128, 5);
  const auto g = oracle::gaussian(128, 2);
  for (std::size_t r = 0; r < 128; ++r) {
    m(r, 0) = g[r];
    m(r, 1) = g[127 - r];
  }
  const VectorHurstOptions small{std::nullopt, 8};
  CHECK_THROWS_AS(estimate_hurst_from_vectors(m, small), EstimationError);
  for (std::size_t r = 0; r < 128; ++r) m(r, 2) = g[(r * 7) % 128];
  CHECK_NOTHROW(estimate_hurst_from_vectors(m, small));
}

TEST_CASE("subsampling is insensitive to which coordinates are drawn") {
  const std::size_t k = 256, d = 10000;
  SeriesMatrix m(k, d);
  const auto g = oracle::gaussian(k * d, 31337);
  m.data() = g;
  const auto a = estimate_hurst_from_vectors(m, {Subsample{100, 1}});
  const auto b = estimate_hurst_from_vectors(m, {Subsample{100, 2}});
  CHECK(std::abs(a.h_hat - b.h_hat) <= 0.05);
}
