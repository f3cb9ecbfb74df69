#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <numeric>
#include <vector>

#include "betalog/equilibrium.hpp"
#include "betalog/partition.hpp"
#include "betalog/sampler.hpp"

using namespace betalog;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> uniform_grid(double lo, double hi, std::int64_t g) {
  std::vector<double> x(static_cast<std::size_t>(g));
  for (std::int64_t i = 0; i < g; ++i)
    x[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(g - 1);
  return x;
}

std::vector<double> semicircle_density(const std::vector<double>& grid) {
  std::vector<double> rho(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    rho[i] = std::fabs(x) <= 2.0 ? std::sqrt(std::max(4.0 - x * x, 0.0)) / (2.0 * M_PI) : 0.0;
  }
  return rho;
}

const Potential kQuadratic{{0.0, 0.0, 0.5}};  // V = x^2/2

}  // namespace

TEST_CASE("potential polynomial evaluation and confinement") {
  const Potential v{{1.0, 0.0, 0.5}};
  CHECK_THAT(v(2.0), WithinAbs(3.0, 1e-15));
  CHECK(v.is_confining());
  CHECK(Potential{{0.0, 0.0, -1.0, 0.0, 0.25}}.is_confining());
  CHECK_FALSE(Potential{{0.0, 1.0}}.is_confining());        // odd degree
  CHECK_FALSE(Potential{{0.0, 0.0, -0.5}}.is_confining());  // negative leading
  CHECK_FALSE(Potential{{3.0}}.is_confining());             // constant
}

TEST_CASE("solver reproduces the semicircle for V = x^2/2") {
  const auto m = solve_equilibrium(kQuadratic, 1200, 3.0, 1e-3);
  REQUIRE(m.converged);
  CHECK(m.el_residual <= 1e-3);

  // support within one grid cell of [-2, 2]
  const double h = m.grid[1] - m.grid[0];
  REQUIRE(m.support.size() == 1);
  CHECK_THAT(m.support[0].first, WithinAbs(-2.0, 1.5 * h));
  CHECK_THAT(m.support[0].second, WithinAbs(2.0, 1.5 * h));

  const auto rho_sc = semicircle_density(m.grid);
  double sup_err = 0.0;
  for (std::size_t i = 0; i < m.grid.size(); ++i)
    sup_err = std::max(sup_err, std::fabs(m.density[i] - rho_sc[i]));
  CHECK(sup_err < 5e-3);

  CHECK_THAT(energy_functional(m, kQuadratic), WithinAbs(-0.75, 1e-3));
  CHECK_THAT(m.lagrange_l, WithinAbs(-1.0, 5e-3));
  CHECK_THAT(entropy_functional(m), WithinAbs(-0.5, 5e-3));
}

TEST_CASE("solver weights lie exactly on the simplex") {
  const auto m = solve_equilibrium(kQuadratic, 400, 3.0, 1e-2);
  double sum = 0.0;
  for (double w : m.weights) {
    CHECK(w >= 0.0);
    sum += w;
  }
  CHECK_THAT(sum, WithinAbs(1.0, 1e-12));
}

TEST_CASE("solver rejects bad inputs") {
  CHECK_THROWS_AS(solve_equilibrium(Potential{{0.0, 1.0}}, 500, 3.0, 1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_equilibrium(kQuadratic, 100, 3.0, 1e-3), std::invalid_argument);
  // box too small for the confinement margin
  CHECK_THROWS_AS(solve_equilibrium(kQuadratic, 500, 1.0, 1e-3), std::invalid_argument);
}

TEST_CASE("el_residual: exact semicircle is small, uniform is not") {
  const auto grid = uniform_grid(-3.0, 3.0, 2000);
  const auto sc = make_measure(grid, semicircle_density(grid));
  CHECK(el_residual(sc, kQuadratic) < 5e-3);

  std::vector<double> uni(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::fabs(grid[i]) <= 2.0) uni[i] = 0.25;
  const auto um = make_measure(grid, uni);
  CHECK(el_residual(um, kQuadratic) > 0.05);
}

TEST_CASE("el_residual of solver output equals the reported value") {
  const auto m = solve_equilibrium(kQuadratic, 600, 3.0, 1e-3);
  CHECK_THAT(el_residual(m, kQuadratic), WithinAbs(m.el_residual, 1e-12));
}

TEST_CASE("constant potential shift leaves density, shifts lagrange_l by -c") {
  const auto m0 = solve_equilibrium(kQuadratic, 600, 3.0, 5e-4);
  const Potential shifted{{0.7, 0.0, 0.5}};
  const auto m1 = solve_equilibrium(shifted, 600, 3.0, 5e-4);
  REQUIRE(m0.converged);
  REQUIRE(m1.converged);
  double dmax = 0.0;
  for (std::size_t i = 0; i < m0.density.size(); ++i)
    dmax = std::max(dmax, std::fabs(m0.density[i] - m1.density[i]));
  CHECK(dmax < 5e-3);
  CHECK_THAT(m1.lagrange_l - m0.lagrange_l, WithinAbs(-0.7, 5e-3));
}

TEST_CASE("energy functional stable under grid refinement") {
  const double e1 = energy_functional(solve_equilibrium(kQuadratic, 1000, 3.0, 1e-3), kQuadratic);
  const double e2 = energy_functional(solve_equilibrium(kQuadratic, 2000, 3.0, 1e-3), kQuadratic);
  const double e4 = energy_functional(solve_equilibrium(kQuadratic, 4000, 3.0, 1e-3), kQuadratic);
  // O(h log 1/h) drift, halving h: differences shrink
  CHECK(std::fabs(e2 - e4) < std::fabs(e1 - e4));
  CHECK(std::fabs(e2 - e4) < 2e-3);
}

TEST_CASE("two-cut quartic yields two symmetric support intervals") {
  const Potential quartic{{0.0, 0.0, -1.0, 0.0, 0.25}};  // x^4/4 - x^2
  const auto m = solve_equilibrium(quartic, 1500, 3.0, 1e-3);
  REQUIRE(m.converged);
  REQUIRE(m.support.size() == 2);
  // symmetric about 0
  CHECK_THAT(m.support[0].first, WithinAbs(-m.support[1].second, 0.02));
  CHECK_THAT(m.support[0].second, WithinAbs(-m.support[1].first, 0.02));
  CHECK(m.support[0].second < 0.0);
  CHECK(m.support[1].first > 0.0);
}

TEST_CASE("entropy functional closed forms") {
  // normalized rho = 1 on [0,1]: S = 0 - 1 + log 2pi
  {
    const auto grid = uniform_grid(-0.25, 1.25, 1501);
    std::vector<double> rho(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] >= 0.0 && grid[i] <= 1.0) rho[i] = 1.0;
    const auto m = make_measure(grid, rho);
    CHECK_THAT(entropy_functional(m), WithinAbs(-1.0 + kConstants.log_2pi, 5e-3));
  }
  // semicircle: S = -1/2 via the sin^2 log sin integral
  {
    const auto grid = uniform_grid(-2.5, 2.5, 2001);
    const auto m = make_measure(grid, semicircle_density(grid));
    CHECK_THAT(entropy_functional(m), WithinAbs(-0.5, 5e-3));
  }
}

TEST_CASE("entropy functional shifts by log c under scaling") {
  // rho_c(x) = c rho(c x): S increases by log c
  const double c = 2.0;
  const auto grid1 = uniform_grid(-2.5, 2.5, 2001);
  const auto m1 = make_measure(grid1, semicircle_density(grid1));
  const auto grid2 = uniform_grid(-1.25, 1.25, 2001);
  std::vector<double> rho2(grid2.size());
  for (std::size_t i = 0; i < grid2.size(); ++i) {
    const double x = c * grid2[i];
    rho2[i] = std::fabs(x) <= 2.0 ? c * std::sqrt(std::max(4.0 - x * x, 0.0)) / (2.0 * M_PI)
                                  : 0.0;
  }
  const auto m2 = make_measure(grid2, rho2);
  CHECK_THAT(entropy_functional(m2) - entropy_functional(m1), WithinAbs(std::log(c), 5e-3));
}

TEST_CASE("entropy functional rejects interior zeros") {
  const auto grid = uniform_grid(-1.0, 1.0, 999);
  std::vector<double> rho(grid.size(), 1.0);
  rho[499] = 0.0;  // hole strictly inside, merged over by support detection
  const auto m = make_measure(grid, rho);
  CHECK_THROWS_AS(entropy_functional(m), std::domain_error);
}

TEST_CASE("entropy_constant_general raw and normalized variants") {
  const auto m = solve_equilibrium(kQuadratic, 1200, 3.0, 1e-3);
  for (double beta : {1.0, 2.0}) {
    CAPTURE(beta);
    const auto ge = entropy_constant_general(beta, m);
    const double e_her = entropy_constant(EnsembleSpec::hermite(beta));
    // quadratic potential: normalized reproduces E^Her, raw = E^Her + 1/2
    CHECK_THAT(ge.normalized, WithinAbs(e_her, 5e-3));
    CHECK_THAT(ge.raw, WithinAbs(e_her + 0.5, 5e-3));
    // normalized - raw = S[rho_sc] = -1/2 by definition
    CHECK_THAT(ge.normalized - ge.raw, WithinAbs(-0.5, 1e-12));
  }
}

TEST_CASE("sampler single-point density matches the solver (quartic)") {
  // general-potential MCMC histogram converges to the equilibrium
  // density as n grows
  const Potential quartic{{0.0, 0.0, -1.0, 0.0, 0.25}};
  const auto m = solve_equilibrium(quartic, 800, 3.0, 1e-3);
  const auto spec = EnsembleSpec::general(2.0, quartic);
  McmcParams p;
  p.burn_in = 1000;

  auto sup_distance = [&](std::int64_t n, int reps) {
    // smoothed empirical density on a coarse grid
    const int bins = 40;
    std::vector<double> hist(bins, 0.0);
    const double lo = -3.0, hi = 3.0, bw = (hi - lo) / bins;
    for (int r = 0; r < reps; ++r) {
      const auto c = sample_mcmc(spec, n, p, {606, std::uint64_t(r)});
      for (double x : c.values) {
        const int b = std::min(bins - 1, std::max(0, int((x - lo) / bw)));
        hist[b] += 1.0;
      }
    }
    const double total = std::accumulate(hist.begin(), hist.end(), 0.0);
    double d = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double xc = lo + (b + 0.5) * bw;
      // coarse-bin average of the solver density
      double rho = 0.0;
      int cnt = 0;
      for (std::size_t i = 0; i < m.grid.size(); ++i)
        if (m.grid[i] >= xc - 0.5 * bw && m.grid[i] < xc + 0.5 * bw) {
          rho += m.density[i];
          ++cnt;
        }
      rho /= std::max(1, cnt);
      d = std::max(d, std::fabs(hist[b] / (total * bw) - rho));
    }
    return d;
  };
  const double d50 = sup_distance(50, 40);
  const double d200 = sup_distance(200, 10);
  CHECK(d200 < d50 + 0.05);  // shrinking within MC noise
  CHECK(d200 < 0.15);
}

TEST_CASE("potential file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "betalog_test.coeffs";
  {
    std::ofstream out(path);
    out << "0.0\n0.0\n0.5\n";
  }
  const auto v = load_potential(path.string());
  REQUIRE(v.coefficients.size() == 3);
  CHECK(v.coefficients[2] == 0.5);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_potential("/nonexistent/file.coeffs"), std::runtime_error);
}
