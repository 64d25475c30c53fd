#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "trajbound/ball.hpp"
#include "trajbound/error.hpp"

using namespace trajbound;

namespace {

PointCloud gaussian_cloud(std::size_t n, std::size_t d, std::uint64_t seed) {
  return PointCloud(n, d, oracle::gaussian(n * d, seed));
}

void check_contains(const PointCloud& cloud, const Ball& b) {
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double s = 0;
    for (std::size_t k = 0; k < cloud.dim(); ++k) s += std::pow(cloud.point(i)[k] - b.center[k], 2);
    CHECK(std::sqrt(s) <= b.radius * (1 + b.eps) + 1e-12);
  }
}

}  // namespace

TEST_CASE("miniball examples") {
  const PointCloud two(2, 2, {0, 0, 2, 0});
  const auto b = miniball_core_set(two);
  CHECK(b.center[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(b.center[1]) < 1e-3);
  CHECK(b.radius == doctest::Approx(1.0).epsilon(1e-3));
  check_contains(two, b);

  const PointCloud tri(3, 2, {0, 0, 1, 0, 0.5, std::sqrt(3.0) / 2});
  const auto t = miniball_core_set(tri);
  CHECK(std::abs(t.radius - 1 / std::sqrt(3.0)) <= 1e-3);
  check_contains(tri, t);

  const auto one = miniball_core_set(PointCloud(1, 3, {1, 2, 3}));
  CHECK(one.radius == 0.0);
  CHECK(one.diameter() == 0.0);
  CHECK_THROWS_AS(miniball_core_set(two, 0.0), DomainError);
  CHECK_THROWS_AS(miniball_core_set(PointCloud()), DomainError);
}

TEST_CASE("welzl examples") {
  const auto sq = exact_ball_welzl(PointCloud(4, 2, {0, 0, 1, 0, 0, 1, 1, 1}));
  CHECK(sq.center[0] == doctest::Approx(0.5));
  CHECK(sq.center[1] == doctest::Approx(0.5));
  CHECK(sq.radius == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(sq.eps == 0.0);

  const auto line = exact_ball_welzl(PointCloud(3, 1, {0, 1, 5}));
  CHECK(line.radius == doctest::Approx(2.5));
  CHECK(line.center[0] == doctest::Approx(2.5));

  CHECK_THROWS_AS(exact_ball_welzl(gaussian_cloud(10, 4, 1)), UnsupportedDimension);
}

TEST_CASE("welzl agrees with the core-set iteration") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto cloud = gaussian_cloud(100, 3, 100 + seed);
    const auto exact = exact_ball_welzl(cloud);
    const auto approx = miniball_core_set(cloud, 1e-4);
    check_contains(cloud, exact);
    check_contains(cloud, approx);
    CHECK(std::abs(approx.radius - exact.radius) <= 2e-4 * exact.radius);
    CHECK(approx.radius >= exact.radius * (1 - 1e-12));
    CHECK(2 * exact.radius >= oracle::brute_diameter(cloud.matrix().data(), cloud.dim()) * (1 - 1e-12));
  }
}

TEST_CASE("diameter lower bound") {
  CHECK(diameter_lower_bound(PointCloud(2, 2, {0, 0, 3, 4})) == doctest::Approx(5.0));
  std::vector<double> hex;
  for (int k = 0; k < 6; ++k) {
    hex.push_back(std::cos(k * M_PI / 3));
    hex.push_back(std::sin(k * M_PI / 3));
  }
  CHECK(diameter_lower_bound(PointCloud(6, 2, hex)) == doctest::Approx(2.0));
  const auto cloud = gaussian_cloud(200, 5, 7);
  const double brute = oracle::brute_diameter(cloud.matrix().data(), cloud.dim());
  const double lb = diameter_lower_bound(cloud);
  CHECK(lb <= brute);
  CHECK(lb >= brute / std::sqrt(3.0));
}

TEST_CASE("jung sandwich and containment across backends") {
  // Small d uses the coordinate backend; larger d the Gram backend.
  for (std::size_t d : {2, 5, 40, 300}) {
    const auto cloud = gaussian_cloud(150, d, d);
    const auto b = miniball_core_set(cloud);
    check_contains(cloud, b);
    const double lb = diameter_lower_bound(cloud);
    CHECK(lb / 2 <= b.radius);
    CHECK(b.radius <= (1 + b.eps) * lb * std::sqrt(3.0));
    CHECK(2 * b.radius >= oracle::brute_diameter(cloud.matrix().data(), cloud.dim()) * (1 - 1e-12));
  }
}

TEST_CASE("translation and scale equivariance") {
  for (std::size_t d : {3, 50}) {
    const auto cloud = gaussian_cloud(80, d, 33);
    const auto b = miniball_core_set(cloud);
    auto moved = cloud.matrix();
    std::vector<double> v(d);
    for (std::size_t k = 0; k < d; ++k) v[k] = 0.5 * static_cast<double>(k) - 3.0;
    for (std::size_t i = 0; i < moved.rows(); ++i)
      for (std::size_t k = 0; k < d; ++k) moved(i, k) += v[k];
    const auto bm = miniball_core_set(PointCloud(moved));
    CHECK(bm.radius == doctest::Approx(b.radius).epsilon(1e-9));
    for (std::size_t k = 0; k < d; ++k) CHECK(std::abs(bm.center[k] - b.center[k] - v[k]) <= 1e-9);

    for (double c : {0.01, 3.0, 1e4}) {
      auto scaled = cloud.matrix();
      for (auto& x : scaled.data()) x *= c;
      CHECK(miniball_core_set(PointCloud(scaled)).radius == doctest::Approx(c * b.radius).epsilon(1e-9));
    }
  }
}

TEST_CASE("high-dimensional loss vectors") {
  // A trajectory-like cloud: few hundred points in 5e4 dimensions.
  const auto cloud = gaussian_cloud(200, 50000, 77);
  const auto b = miniball_core_set(cloud);
  check_contains(cloud, b);
  CHECK(b.radius >= diameter_lower_bound(cloud) / 2);
}
