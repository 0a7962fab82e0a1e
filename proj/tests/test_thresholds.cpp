#include "steerlab/thresholds.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace steerlab;

TEST_CASE("MUB pair thresholds match (1 + 1/sqrt(d))/2") {
  const NstResult q = nst_enumerate(mub_pair(2));
  CHECK(std::abs(q.f_plus - (1 + 1 / std::sqrt(2.0)) / 2) < 1e-10);
  CHECK(std::abs(q.f_minus - (1 - 1 / std::sqrt(2.0)) / 2) < 1e-10);
  CHECK(q.assignments == 4);
  const NstResult t = nst_enumerate(mub_pair(3));
  CHECK(std::abs(t.f_plus - (1 + 1 / std::sqrt(3.0)) / 2) < 1e-10);
  CHECK(std::abs(t.f_minus) < 1e-10);
  for (int d = 2; d <= 5; ++d)
    CHECK(two_setting_f_plus(mub_pair(d)) == doctest::Approx(nst_enumerate(mub_pair(d)).f_plus).epsilon(1e-12));
}

TEST_CASE("witness eigenvector attains the threshold") {
  Rng rng(31);
  const MeasurementSet bob = haar_measurements(3, 3, rng, true);
  const NstResult r = nst_enumerate(bob);
  const CMatrix rb = rho_bar(bob, r.witness_plus.assignment);
  const CVector& v = r.witness_plus.eigenvector;
  CHECK((v.adjoint() * rb * v)(0).real() == doctest::Approx(r.f_plus).epsilon(1e-12));
  const CMatrix rm = rho_bar(bob, r.witness_minus.assignment);
  const CVector& u = r.witness_minus.eigenvector;
  CHECK((u.adjoint() * rm * u)(0).real() == doctest::Approx(r.f_minus).epsilon(1e-10));
}

TEST_CASE("enumeration cap") {
  Rng rng(32);
  const MeasurementSet bob = haar_measurements(4, 11, rng);
  CHECK_THROWS_AS(nst_enumerate(bob), EnumerationCapExceeded);
  CHECK_THROWS_AS(nst_enumerate(mub_pair(3), 8), EnumerationCapExceeded);
  CHECK_NOTHROW(nst_enumerate(mub_pair(3), 9));
}

TEST_CASE("optimal outcome ties resolve to the smallest index") {
  RVector v(4);
  v << 0.25, 0.5, 0.5 - 1e-13, 0.1;
  CHECK(optimal_outcome(v, Extremum::Max) == 1);
  v << 0.1, 0.3, 0.1, 0.2;
  CHECK(optimal_outcome(v, Extremum::Min) == 0);
}

TEST_CASE("rho_bar of a probabilistic table is the mixture of its deterministic vertices") {
  Rng rng(33);
  const MeasurementSet bob = haar_measurements(2, 2, rng);
  ResponseFunction p(1, 2, 2);
  p(0, 0, 0) = 0.25;
  p(0, 0, 1) = 0.75;
  p(0, 1, 0) = 1.0;
  const CMatrix expected = 0.25 * rho_bar(bob, DeterministicAssignment{{0, 0}}) +
                           0.75 * rho_bar(bob, DeterministicAssignment{{1, 0}});
  CHECK((rho_bar(bob, p, 0) - expected).norm() < 1e-14);
}

TEST_CASE("qubit thresholds sum to one and agree with the geometric form") {
  Rng rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 6;
    const MeasurementSet bob = haar_measurements(2, n, rng, true);
    const NstResult r = nst_enumerate(bob);
    CHECK(std::abs(r.f_plus + r.f_minus - 1) < 1e-10);
    const GeometricNst g = geometric_nst(bob);
    CHECK(std::abs(g.g_plus - (2 * r.f_plus - 1)) < 1e-10);
    CHECK(std::abs(g.g_minus - (2 * r.f_minus - 1)) < 1e-10);
    CHECK(g.signs.front() == 1);
  }
}

TEST_CASE("geometric NST for orthogonal directions is sqrt(q^2 + q_perp^2)") {
  const GeometricNst g = geometric_nst({BlochVector{1, 0, 0}, BlochVector{0, 1, 0}}, {0.3, 0.7});
  CHECK(g.r_opt == doctest::Approx(std::hypot(0.3, 0.7)).epsilon(1e-14));
  CHECK_THROWS_AS(geometric_nst({BlochVector{1, 1, 0}}, {1.0}), std::invalid_argument);
}

TEST_CASE("many random qubit directions push r_opt down towards 1/2") {
  // The continuous limit of the qubit geometric threshold is 2 F^+ - 1 = 1/2.
  Rng rng(35);
  double previous = 1.0;
  for (int n : {2, 6, 12, 18}) {
    double mean = 0;
    const int trials = 8;
    for (int t = 0; t < trials; ++t) {
      std::vector<BlochVector> dirs;
      for (int i = 0; i < n; ++i) dirs.push_back(random_direction(rng));
      const double r = geometric_nst(dirs, std::vector<double>(n, 1.0 / n)).r_opt;
      CHECK(r >= 0.5 - 1e-12);
      mean += r / trials;
    }
    CHECK(mean < previous);
    previous = mean;
  }
  // Sampling fluctuations shrink like N^(-1/2), so at N = 18 the mean sits well above 1/2.
  CHECK(previous < 0.7);
}

TEST_CASE("r_opt equals the largest projected length max_m sum q |n.m|") {
  // Independent oracle: a direction grid lower-bounds the maximum over m.
  Rng rng(37);
  std::vector<BlochVector> dirs;
  for (int i = 0; i < 5; ++i) dirs.push_back(random_direction(rng));
  const std::vector<double> q{0.1, 0.3, 0.2, 0.25, 0.15};
  const double r = geometric_nst(dirs, q).r_opt;
  double grid = 0;
  const int n = 400;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j < 2 * n; ++j) {
      const double th = std::numbers::pi * i / n, ph = std::numbers::pi * j / n;
      const BlochVector m{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
      double s = 0;
      for (int k = 0; k < 5; ++k) s += q[k] * std::abs(dirs[k].dot(m));
      grid = std::max(grid, s);
    }
  CHECK(grid <= r + 1e-12);
  CHECK(r - grid < 1e-4);
}

TEST_CASE("continuous thresholds closed form") {
  CHECK(harmonic_number(3) == doctest::Approx(11.0 / 6));
  const auto t2 = continuous_thresholds(2);
  CHECK(t2.f_plus == doctest::Approx(0.75));
  CHECK(t2.f_minus == doctest::Approx(0.25));
  const auto t3 = continuous_thresholds(3);
  CHECK(t3.f_plus == doctest::Approx(11.0 / 18));
  CHECK(t3.f_minus == doctest::Approx(1.0 / 9));
}

TEST_CASE("continuous Monte Carlo estimate is reproducible and sane") {
  const auto a = continuous_threshold_mc(2, 20000, 7);
  const auto b = continuous_threshold_mc(2, 20000, 7);
  CHECK(a.plus == b.plus);
  CHECK(std::abs(a.plus - 0.75) < 4 * a.stderr_plus);
  CHECK(std::abs(a.minus - 0.25) < 4 * a.stderr_minus);
  double sum = 0;
  for (double c : a.plus_contributions) sum += c;
  CHECK(sum == doctest::Approx(a.plus).epsilon(1e-12));
  CHECK_THROWS_AS(continuous_threshold_mc(2, 999, 7), std::invalid_argument);
}

TEST_CASE("probabilistic response tables never beat the deterministic optimum") {
  Rng rng(36);
  const MeasurementSet bob = haar_measurements(3, 3, rng, true);
  const auto rep = nst_probabilistic_check(bob, 2000, 99);
  CHECK(rep.violations == 0);
  CHECK(rep.max_value <= rep.f_plus + 1e-9);
  CHECK(rep.min_value >= rep.f_minus - 1e-9);
}
