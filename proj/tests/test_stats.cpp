#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "graphboot/rng.hpp"
#include "graphboot/stats.hpp"

using namespace graphboot;

TEST_SUITE("stats") {

TEST_CASE("nearest-rank percentile interval") {
  std::vector<double> xs;
  for (int i = 100; i >= 1; --i) xs.push_back(i);
  const auto [lo, hi] = percentile_interval(xs, 0.9);
  CHECK(lo == 5.0);
  CHECK(hi == 95.0);
  const std::vector<double> flat(20, 2.5);
  CHECK(percentile_interval(flat, 0.95) == std::pair{2.5, 2.5});
  CHECK_THROWS_AS(percentile_interval(xs, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(percentile_interval(xs, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(percentile_interval(std::vector<double>(9, 1.0), 0.9), std::invalid_argument);
}

TEST_CASE("two-sample KS examples") {
  const std::vector<double> a{1, 2, 3};
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(ks_two_sample(a, std::vector<double>{4, 5}) == 1.0);
  CHECK(ks_two_sample(a, std::vector<double>{1.5, 2.5, 3.5}) == doctest::Approx(1.0 / 3.0));
  CHECK(ks_two_sample(std::vector<double>{1, 1, 2}, std::vector<double>{1, 2, 2}) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(ks_two_sample(a, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("KS is symmetric and invariant under increasing transforms") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(50 + t);
    std::vector<double> y(80 - t);
    for (auto& v : x) v = std::floor(rng.uniform() * 40.0) / 10.0;
    for (auto& v : y) v = std::floor(rng.uniform() * 45.0) / 10.0;
    const double d = ks_two_sample(x, y);
    CHECK(d == ks_two_sample(y, x));
    std::vector<double> ex;
    std::vector<double> ey;
    for (double v : x) ex.push_back(std::exp(3.0 * v) - 7.0);
    for (double v : y) ey.push_back(std::exp(3.0 * v) - 7.0);
    CHECK(ks_two_sample(ex, ey) == d);
  }
}

TEST_CASE("KS against a normal") {
  std::vector<double> q;
  for (int i = 1; i < 1000; ++i) {
    // inverse CDF by bisection on erfc
    const double p = i / 1000.0;
    double lo = -10.0;
    double hi = 10.0;
    for (int k = 0; k < 100; ++k) {
      const double mid = 0.5 * (lo + hi);
      (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
    }
    q.push_back(2.0 + 3.0 * lo);
  }
  CHECK(ks_normal(q, 2.0, 3.0) < 0.0015);
  CHECK(ks_normal(q, 5.0, 3.0) > 0.3);
  CHECK_THROWS_AS(ks_normal(q, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("summaries") {
  const std::vector<double> xs{4, 1, 3, 2};
  CHECK(mean(xs) == 2.5);
  CHECK(stddev(xs) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(median(xs) == 2.5);
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK_THROWS(median({}));
}

}
