#include <array>
#include <cmath>

#include "doctest.h"
#include "trajbound/bound.hpp"
#include "trajbound/error.hpp"

using namespace trajbound;

TEST_CASE("rademacher_bound examples") {
  const double hand = 1.2 * std::sqrt(2 * std::log(4.0));
  CHECK(rademacher_bound(10, 100, HurstParam(0.5)) == doctest::Approx(hand).epsilon(1e-14));
  CHECK(std::abs(rademacher_bound(10, 100, HurstParam(0.5)) - 1.99813) < 5e-6);
  CHECK(rademacher_bound(10, 200, HurstParam(0.5)) ==
        doctest::Approx(rademacher_bound(10, 100, HurstParam(0.5)) / 2).epsilon(1e-15));
  const double near_one = rademacher_bound(10, 100, HurstParam(1.0 - 1e-12));
  CHECK(rademacher_bound(10, 100, HurstParam(0.25)) / near_one == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rademacher_bound(0, 100, HurstParam(0.5)) == 0.0);
  CHECK_THROWS_AS(rademacher_bound(-1, 100, HurstParam(0.5)), DomainError);
  CHECK_THROWS_AS(rademacher_bound(1, 0, HurstParam(0.5)), DomainError);
}

TEST_CASE("full_bound example") {
  const BoundReport r = full_bound({10, 100, HurstParam(0.5), 1, 0, 0.05, 0});
  CHECK(std::abs(r.rademacher_term - 3.99626) < 5e-6);
  CHECK(std::abs(r.concentration_term - 0.12239) < 5e-6);
  CHECK(std::abs(r.total - 4.11865) < 5e-6);
  CHECK(r.concentration_term == doctest::Approx(std::sqrt(std::log(20.0) / 200)).epsilon(1e-14));
  CHECK(r.rademacher_term == 2 * 1 * rademacher_bound(10, 100, HurstParam(0.5)));
}

TEST_CASE("concentration vanishes as tau -> 1 and total is homogeneous in zeta") {
  const BoundReport r = full_bound({10, 100, HurstParam(0.5), 1, 0, 1 - 1e-12, 0});
  CHECK(r.concentration_term < 1e-6);
  const BoundReport one = full_bound({3, 50, HurstParam(0.4), 1, 0, 0.1, 0});
  const BoundReport two = full_bound({3, 50, HurstParam(0.4), 2, 0, 0.1, 0});
  CHECK(two.total == doctest::Approx(2 * one.total).epsilon(1e-14));
}

TEST_CASE("full_bound input validation") {
  CHECK_THROWS_AS(full_bound({1, 10, HurstParam(0.5), 0, 0, 0.1, 0}), DomainError);
  CHECK_THROWS_AS(full_bound({1, 10, HurstParam(0.5), 1, -1, 0.1, 0}), DomainError);
  CHECK_THROWS_AS(full_bound({1, 10, HurstParam(0.5), 1, 0, 1.0, 0}), DomainError);
  CHECK_THROWS_AS(full_bound({1, 10, HurstParam(0.5), 1, 0, 0.0, 0}), DomainError);
  CHECK_THROWS_AS(full_bound({1, 10, HurstParam(0.5), 1, 0, 0.1, -0.5}), DomainError);
  CHECK_THROWS_AS(full_bound({INFINITY, 10, HurstParam(0.5), 1, 0, 0.1, 0}), DomainError);
}

TEST_CASE("clamp_hurst") {
  CHECK(clamp_hurst(1.07).h.value() == 0.999);
  CHECK(clamp_hurst(1.07).clamped);
  CHECK(clamp_hurst(1.0).clamped);
  CHECK(clamp_hurst(-0.2).h.value() == 0.001);
  CHECK_FALSE(clamp_hurst(0.6).clamped);
  CHECK(clamp_hurst(0.6).h.value() == 0.6);
}

TEST_CASE("terms are non-negative") {
  for (double h : {0.1, 0.5, 0.9})
    for (double beta : {0.0, 0.3}) {
      const BoundReport r = full_bound({2, 40, HurstParam(h), 1.5, beta, 0.2, 0.1});
      CHECK(r.rademacher_term >= 0);
      CHECK(r.concentration_term >= 0);
      CHECK(r.total >= r.rademacher_term + r.concentration_term);
    }
}
