#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "trajbound/error.hpp"
#include "trajbound/fbm.hpp"
#include "trajbound/fractal.hpp"

using namespace trajbound;

namespace {

PointCloud segment(std::size_t n, std::size_t d) {
  std::vector<double> coords(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) coords[i * d] = static_cast<double>(i) / static_cast<double>(n - 1);
  return PointCloud(n, d, std::move(coords));
}

PointCloud uniform_cloud(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> coords(n * d);
  for (auto& c : coords) c = u(rng);
  return PointCloud(n, d, std::move(coords));
}

}  // namespace

TEST_CASE("box_count examples") {
  CHECK(box_count(PointCloud(2, 1, {0.0, 10.0}), 100.0) == 1);
  const auto c = box_count(segment(1000, 3), 0.01);
  CHECK(c >= 100);
  CHECK(c <= 101);
  CHECK(box_count(PointCloud(5, 2, std::vector<double>(10, 3.25)), 1e-6) == 1);
  CHECK_THROWS_AS(box_count(segment(10, 1), 0.0), DomainError);
}

TEST_CASE("box_count is monotone and bounded") {
  const auto cloud = uniform_cloud(2000, 4, 11);
  std::size_t prev = cloud.size() + 1;
  for (double delta = 1e-3; delta < 2.0; delta *= 1.3) {
    const auto n = box_count(cloud, delta);
    CHECK(n >= 1);
    CHECK(n <= cloud.size());
    CHECK(n <= prev);
    prev = n;
  }
}

TEST_CASE("segment and square dimensions") {
  CHECK(estimate_boxdim(segment(10000, 1), 1e-3, 1e-1).dim_hat == doctest::Approx(1.0).epsilon(0.1));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> coords(100000 * 3, 0.0);
  for (std::size_t i = 0; i < 100000; ++i) {
    coords[3 * i] = u(rng);
    coords[3 * i + 1] = u(rng);
  }
  const auto est = estimate_boxdim(PointCloud(100000, 3, std::move(coords)), 1e-2, 1e-1);
  CHECK(est.dim_hat >= 1.8);
  CHECK(est.dim_hat <= 2.2);
  CHECK(est.r_squared > 0.99);
  CHECK(est.scales.size() == 12);
  for (std::size_t i = 1; i < est.scales.size(); ++i) {
    CHECK(est.scales[i].delta > est.scales[i - 1].delta);
    CHECK(est.scales[i].count <= est.scales[i - 1].count);
  }
}

TEST_CASE("Brownian path in R^3 has dimension near two") {
  const auto path = sample_fbm_multi(100000, 3, HurstParam(0.5), 1e-5, FgnMethod::davies_harte, 21);
  const PointCloud cloud(path.values);
  const auto [lo, hi] = trajectory_scaling_regime(cloud);
  CHECK(hi / lo >= std::pow(10.0, 1.0));
  const double top = lo * std::pow(10.0, 1.5);
  const auto est = estimate_boxdim(cloud, lo, std::min(top, 10 * hi));
  CHECK(est.dim_hat >= 1.7);
  CHECK(est.dim_hat <= 2.3);
}

TEST_CASE("estimate_boxdim errors") {
  const auto cloud = segment(100, 2);
  CHECK_THROWS_AS(estimate_boxdim(cloud, 0.0, 0.1), DomainError);
  CHECK_THROWS_AS(estimate_boxdim(cloud, 0.2, 0.1), DomainError);
  CHECK_THROWS_AS(estimate_boxdim(cloud, 0.01, 0.1, {2, 0, 0}), DomainError);
  CHECK_THROWS_AS(estimate_boxdim(PointCloud(3, 2, std::vector<double>(6, 1.0)), 0.01, 0.1), EstimationError);
  // Coarser than the whole cloud: one cell at every scale.
  CHECK_THROWS_AS(estimate_boxdim(cloud, 2.0, 20.0), EstimationError);
}

TEST_CASE("dimension collapses at scales beyond the cloud") {
  const auto cloud = uniform_cloud(500, 2, 8);
  const double diam = oracle::brute_diameter(cloud.matrix().data(), cloud.dim());
  const auto est = estimate_boxdim(cloud, 0.5 * diam, 50 * diam);
  CHECK(est.dim_hat < 0.2);
  CHECK(est.dim_hat >= 0.0);
}

TEST_CASE("similarity invariance") {
  const auto cloud = uniform_cloud(3000, 3, 5);
  const auto base = estimate_boxdim(cloud, 0.01, 0.3);
  for (double c : {0.125, 4.0}) {
    auto scaled = cloud.matrix();
    for (auto& v : scaled.data()) v *= c;
    const auto est = estimate_boxdim(PointCloud(scaled), 0.01 * c, 0.3 * c);
    CHECK(est.dim_hat == base.dim_hat);
    for (std::size_t i = 0; i < est.scales.size(); ++i) CHECK(est.scales[i].count == base.scales[i].count);
  }
}

TEST_CASE("regimes and projection") {
  const auto cloud = segment(101, 2);
  const auto [lo, hi] = auto_scaling_regime(cloud);
  CHECK(lo == doctest::Approx(1e-3));
  CHECK(hi == doctest::Approx(0.1));
  const auto [tlo, thi] = trajectory_scaling_regime(cloud);
  CHECK(tlo == doctest::Approx(0.01));
  CHECK(thi == doctest::Approx(0.1));

  const auto wide = uniform_cloud(50, 100, 4);
  const auto p = random_orthogonal_projection(wide, 16, 9);
  CHECK(p.dim() == 16);
  CHECK(p.size() == 50);
  // Orthonormal rows: pairwise distances never grow.
  for (std::size_t i = 1; i < 50; ++i) {
    double orig = 0, proj = 0;
    for (std::size_t k = 0; k < 100; ++k) orig += std::pow(wide.point(i)[k] - wide.point(0)[k], 2);
    for (std::size_t k = 0; k < 16; ++k) proj += std::pow(p.point(i)[k] - p.point(0)[k], 2);
    CHECK(proj <= orig * (1 + 1e-12));
  }
  const auto est = estimate_boxdim(wide, 0.1, 1.0);
  CHECK(est.projected_dim == 16);
  CHECK(estimate_boxdim(uniform_cloud(50, 5, 4), 0.1, 1.0).projected_dim == 0);
}
