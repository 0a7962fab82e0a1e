// Randomized invariants across modules.
#include "steerlab/criteria.hpp"

#include <doctest.h>

using namespace steerlab;

TEST_CASE("no false positives on random separable two-qubit states") {
  Rng rng(71);
  for (int k = 0; k < 100; ++k) {
    std::uniform_int_distribution<int> terms(1, 8);
    const DensityMatrix w = random_separable_state(2, terms(rng), rng);
    const MeasurementSet bob = haar_measurements(2, 1 + k % 4, rng, true);
    const NstResult nst = nst_enumerate(bob);
    const ExtremalFidelity ext = extremal_fidelity(w, bob);
    CHECK_FALSE(wjd_type_criterion(ext, nst).steerable());
    CHECK_FALSE(werner_type_criterion(ext, nst).steerable());
    CHECK_FALSE(evaluate_lsi(w, haar_measurements(2, bob.size(), rng), bob, nst).steerable());
    CHECK_FALSE(general_two_qubit_criterion(w).steerable());
    const auto c = continuous_thresholds(2);
    // Monte Carlo over Bob's basis: the bound holds for the Haar mean, so allow sampling noise.
    const auto mc = extremal_fidelity_continuous(w, 200, static_cast<std::uint64_t>(k));
    CHECK(mc.f_plus_bar <= c.f_plus + 4 * mc.stderr_plus + 1e-9);
    CHECK(mc.f_minus_bar >= c.f_minus - 4 * mc.stderr_minus - 1e-9);
  }
}

TEST_CASE("geometric and plain averaged fidelities agree") {
  Rng rng(72);
  for (int k = 0; k < 50; ++k) {
    const DensityMatrix w = random_density_matrix(4, rng);
    const int n = 1 + k % 4;
    std::vector<BlochVector> a, b;
    std::vector<double> q;
    for (int i = 0; i < n; ++i) {
      a.push_back(random_direction(rng));
      b.push_back(random_direction(rng));
      q.push_back(1.0 / n);
    }
    const CriterionReport r = geometric_criterion(w, a, b, q);
    CHECK(std::abs(r.f_bar - (2 * r.details.at("F_bar_direct") - 1)) < 1e-10);
  }
}

TEST_CASE("qubit WJD-type fires exactly when Werner-type fires") {
  Rng rng(73);
  int fired = 0;
  for (int k = 0; k < 60; ++k) {
    const DensityMatrix w = k % 2 ? random_pure_density(4, rng) : random_density_matrix(4, rng, 2);
    const MeasurementSet bob = haar_measurements(2, 2 + k % 3, rng, true);
    const NstResult nst = nst_enumerate(bob);
    const ExtremalFidelity ext = extremal_fidelity(w, bob);
    CHECK(std::abs(ext.f_plus_bar + ext.f_minus_bar - 1) < 1e-10);
    const bool wjd = wjd_type_criterion(ext, nst).steerable();
    CHECK(wjd == werner_type_criterion(ext, nst).steerable());
    fired += wjd;
  }
  CHECK(fired > 0);
}

TEST_CASE("Kraus gauge: assemblages from the decomposition match the state") {
  // rho~^a = eps(S (Pi^a)* S) with S = sqrt(rho_A^T); S = sqrt(rho_A) when rho_A is real.
  Rng rng(74);
  for (int d = 2; d <= 3; ++d) {
    for (int k = 0; k < 5; ++k) {
      const DensityMatrix w0 = random_density_matrix(d * d, rng, k % 2 ? -1 : 2);
      const MeasurementSet alice = haar_measurements(d, 2, rng);
      for (bool real_basis : {false, true}) {
        DensityMatrix w = w0;
        if (real_basis) {
          const CMatrix u = hermitian_eig(partial_trace(w0.matrix(), d, d, Subsystem::B)).eigenvectors.adjoint();
          const CMatrix big = kron(u, CMatrix(CMatrix::Identity(d, d)));
          w = DensityMatrix(CMatrix(big * w0.matrix() * big.adjoint()));
        }
        const StateDecomposition dec = decompose_state(w);
        const CMatrix s = real_basis ? dec.sqrt_rho_a : CMatrix(dec.sqrt_rho_a.transpose());
        if (real_basis) CHECK(dec.sqrt_rho_a.imag().norm() < 1e-12);
        const Assemblage as = assemblage_from_state(w, alice);
        for (int mu = 0; mu < 2; ++mu)
          for (int a = 0; a < d; ++a) {
            const CMatrix inner = s * CMatrix(alice.projector(mu, a).conjugate()) * s;
            CHECK((dec.channel.apply(inner) - as(mu, a)).norm() < 1e-9);
          }
      }
    }
  }
}

TEST_CASE("assemblages generated through EB channels admit LHS models") {
  Rng rng(75);
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 2;
    const EbChannel eb = random_eb_channel(d, 2 + k % 3, rng);
    const QuantumChannel ch = eb_channel_as_kraus(eb);
    const CMatrix sqrt_a = psd_sqrt(random_density_matrix(d, rng).matrix());
    const CVector psi = vectorize(sqrt_a);
    const DensityMatrix w(ch.apply_to_second(psi * psi.adjoint(), d));
    const MeasurementSet bob = haar_measurements(d, 2, rng, true);
    const NstResult nst = nst_enumerate(bob);
    CHECK_FALSE(evaluate_lsi(w, haar_measurements(d, 2, rng), bob, nst).steerable());
    CHECK_FALSE(evaluate_lsi(w, bob.conjugate(), bob, nst).steerable());
    const ExtremalFidelity ext = extremal_fidelity(w, bob);
    CHECK_FALSE(wjd_type_criterion(ext, nst).steerable());
    CHECK_FALSE(werner_type_criterion(ext, nst).steerable());
  }
}

TEST_CASE("geometric violation implies CHSH violation") {
  Rng rng(76);
  int violating = 0;
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int k = 0; k < 2000 && violating < 20; ++k) {
    const double p = 0.75 + 0.25 * u(rng);
    const CMatrix mix = p * t_state(TState{{-1, -1, -1}}).matrix() + (1 - p) * random_density_matrix(4, rng).matrix();
    const DensityMatrix w(mix);
    const BlochVector n = random_direction(rng);
    const BlochVector np = n.cross(random_direction(rng)).normalized();
    const Eigen::Matrix3d t = correlation_matrix(w);
    const BlochVector a = optimal_alice_direction(t, n), b = optimal_alice_direction(t, np);
    const double q = u(rng);
    const std::vector<double> weights{q / (q + 0.5), 0.5 / (q + 0.5)};
    const CriterionReport r = geometric_criterion(w, {a, b}, {n, np}, weights);
    if (!r.steerable()) continue;
    ++violating;
    const double chsh = chsh_value(w, a, b, n, np, weights[0], weights[1]);
    CHECK(chsh > 2);
    CHECK(chsh == doctest::Approx(2 * r.details.at("explicit_form")).epsilon(1e-10));
  }
  CHECK(violating == 20);
}

TEST_CASE("extremal ascent never exceeds an exhaustive Alice search at d = 3") {
  // Any Alice basis gives a lower bound on F+; the ascent must match the best of many.
  Rng rng(77);
  const DensityMatrix w = random_density_matrix(9, rng, 2);
  const MeasurementSet bob(3, {Setting{1.0, haar_unitary(3, rng)}});
  const ExtremalFidelity ext = extremal_fidelity(w, bob);
  double best = 0, worst = 1;
  for (int k = 0; k < 20000; ++k) {
    const MeasurementSet alice(3, {Setting{1.0, haar_unitary(3, rng)}});
    const double f = averaged_fidelity(w, alice, bob);
    best = std::max(best, f);
    worst = std::min(worst, f);
  }
  CHECK(ext.f_plus_bar >= best - 1e-12);
  CHECK(ext.f_minus_bar <= worst + 1e-12);
  CHECK(ext.f_plus_bar - best < 0.02);
}
