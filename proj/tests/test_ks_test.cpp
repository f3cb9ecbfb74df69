#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "betalog/ks_test.hpp"
#include "betalog/rng.hpp"

using namespace betalog;
using Catch::Matchers::WithinAbs;

TEST_CASE("ks_cdf closed form at n = 1") {
  // D_1 = max(U, 1-U) is uniform on [1/2, 1]: P(D_1 < d) = 2d - 1
  for (double d : {0.55, 0.7, 0.9}) {
    CAPTURE(d);
    CHECK_THAT(ks_cdf(1, d), WithinAbs(2.0 * d - 1.0, 1e-12));
  }
  CHECK(ks_cdf(1, 0.4) == 0.0);
  CHECK(ks_cdf(5, 1.0) == 1.0);
}

TEST_CASE("ks_cdf against an empirical oracle at n = 5") {
  // 2e5 simulated five-point samples; exact CDF evaluated inside the MC
  // error band
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int reps = 200000;
  const double d0 = 0.4;
  int below = 0;
  for (int r = 0; r < reps; ++r) {
    double u[5];
    for (auto& x : u) x = u01(gen);
    std::sort(std::begin(u), std::end(u));
    double d = 0.0;
    for (int i = 0; i < 5; ++i) {
      d = std::max(d, u[i] - i / 5.0);
      d = std::max(d, (i + 1) / 5.0 - u[i]);
    }
    if (d < d0) ++below;
  }
  const double emp = double(below) / reps;
  const double se = std::sqrt(emp * (1.0 - emp) / reps);
  CHECK_THAT(ks_cdf(5, d0), WithinAbs(emp, 4.0 * se));
}

TEST_CASE("ks_cdf approaches the Kolmogorov limit") {
  for (double x : {0.6, 0.8, 1.0, 1.4}) {
    CAPTURE(x);
    const std::int64_t n = 5000;
    const double exact = ks_cdf(n, x / std::sqrt(double(n)));
    const double lim = 1.0 - kolmogorov_survival(x);
    CHECK_THAT(exact, WithinAbs(lim, 0.02));
  }
}

TEST_CASE("kolmogorov critical value round trip") {
  for (double alpha : {0.01, 0.05, 0.2}) {
    CAPTURE(alpha);
    CHECK_THAT(kolmogorov_survival(kolmogorov_critical(alpha)), WithinAbs(alpha, 1e-10));
  }
  // the usual 1% constant
  CHECK_THAT(kolmogorov_critical(0.01), WithinAbs(1.6276, 2e-3));
}

TEST_CASE("one-sample KS accepts its own distribution and rejects a shift") {
  Pcg64 rng(RngSeed{17, 0});
  std::vector<double> xs(4000);
  for (auto& x : xs) x = rng.normal();
  const auto good = ks_test_one_sample(xs, [](double x) { return normal_cdf(x); });
  CHECK(good.p_value > 0.01);
  const auto bad = ks_test_one_sample(xs, [](double x) { return normal_cdf(x - 0.25); });
  CHECK(bad.p_value < 1e-6);
}

TEST_CASE("two-sample KS") {
  Pcg64 rng(RngSeed{18, 0});
  std::vector<double> a(3000), b(3000), c(3000);
  for (auto& x : a) x = rng.normal();
  for (auto& x : b) x = rng.normal();
  for (auto& x : c) x = rng.normal() + 0.3;
  CHECK(ks_test_two_sample(a, b).p_value > 0.01);
  CHECK(ks_test_two_sample(a, c).p_value < 1e-6);
  CHECK(ks_test_two_sample(a, a).statistic == 0.0);
}

TEST_CASE("normal_cdf reference points") {
  CHECK_THAT(normal_cdf(0.0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(normal_cdf(1.959963984540054), WithinAbs(0.975, 1e-9));
  CHECK_THAT(normal_cdf(-1.959963984540054), WithinAbs(0.025, 1e-9));
}

TEST_CASE("pcg64 streams are independent and reproducible") {
  Pcg64 a(RngSeed{1234, 0}), b(RngSeed{1234, 0}), c(RngSeed{1234, 1});
  bool same = true, differ = false;
  for (int i = 0; i < 2000; ++i) {
    const auto x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
    same = same && (x == y);
    differ = differ || (x != z);
  }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("pcg64 uniform in [0,1) and roughly uniform") {
  Pcg64 rng(RngSeed{9, 9});
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK_THAT(sum / n, WithinAbs(0.5, 3.0 / std::sqrt(12.0 * n)));
}
