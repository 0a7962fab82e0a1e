// One line per acceptance criterion; exit status is the number of failures.
#include "steerlab/channels.hpp"
#include "steerlab/criteria.hpp"
#include "steerlab/thresholds.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace steerlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

void run(const char* id, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  report(id, ok, detail.str());
}

// First grid point (step 0.01) at which `fires` holds, or -1.
double first_flip(const std::function<bool(double)>& fires) {
  for (int i = 0; i <= 100; ++i)
    if (fires(i / 100.0)) return i / 100.0;
  return -1;
}

bool ac1(std::ostringstream& out) {
  const auto t0 = Clock::now();
  const NstResult two = nst_enumerate(mub_pair(2));
  const NstResult three = nst_enumerate(mub_pair(3));
  const double secs = seconds_since(t0);
  const double e2 = std::abs(two.f_plus - (1 + 1 / std::sqrt(2.0)) / 2);
  const double e3 = std::max(std::abs(three.f_plus - (1 + 1 / std::sqrt(3.0)) / 2), std::abs(three.f_minus));
  out << "d=2 err " << e2 << ", d=3 err " << e3 << ", " << secs << " s";
  return e2 < 1e-10 && e3 < 1e-10 && secs < 1.0;
}

bool ac2(std::ostringstream& out) {
  bool ok = true;
  for (int d = 2; d <= 4; ++d) {
    const auto t0 = Clock::now();
    const auto mc = continuous_threshold_mc(d, 100000, 20240917 + d);
    const double secs = seconds_since(t0);
    const auto exact = continuous_thresholds(d);
    const double dp = std::abs(mc.plus - exact.f_plus), dm = std::abs(mc.minus - exact.f_minus);
    const bool good = dp < 3 * mc.stderr_plus && dm < 3 * mc.stderr_minus && dp < 0.01 && dm < 0.01 && secs < 30;
    out << "d=" << d << " z+=" << dp / mc.stderr_plus << " z-=" << dm / mc.stderr_minus << " " << secs << "s; ";
    ok = ok && good;
  }
  return ok;
}

bool ac3(std::ostringstream& out) {
  const auto mc = continuous_threshold_mc(2, 100000, 7);
  const double north = mc.plus_contributions.at(0);
  out << "northern hemisphere " << north << " vs 0.375";
  return std::abs(north - 0.375) < 0.01 * 0.375;
}

bool ac4(std::ostringstream& out) {
  bool ok = true;
  for (int d = 2; d <= 4; ++d) {
    const auto nst = continuous_thresholds(d);
    const double w_flip = first_flip([&](double w) {
      return werner_type_criterion(werner_extremal_fidelity(d, w).f_minus, nst.f_minus).steerable();
    });
    const double eta_flip = first_flip([&](double eta) {
      return wjd_type_criterion(isotropic_extremal_fidelity(d, eta).f_plus, nst.f_plus).steerable();
    });
    const double w_star = 1 - 1.0 / d, eta_star = (harmonic_number(d) - 1) / (d - 1);
    out << "d=" << d << " w " << w_flip << "/" << w_star << " eta " << eta_flip << "/" << eta_star << "; ";
    ok = ok && w_flip >= 0 && std::abs(w_flip - w_star) <= 0.01 + 1e-12 && eta_flip >= 0 &&
         std::abs(eta_flip - eta_star) <= 0.01 + 1e-12;
  }
  return ok;
}

bool ac5(std::ostringstream& out) {
  bool ok = true;
  for (int d = 3; d <= 5; ++d) {
    const auto nst = continuous_thresholds(d);
    const double top = werner_extremal_fidelity(d, 1.0).f_plus;
    int fired = 0;
    for (int i = 0; i <= 100; ++i)
      fired += wjd_type_criterion(werner_extremal_fidelity(d, i / 100.0).f_plus, nst.f_plus).steerable();
    out << "d=" << d << " " << top << " < " << nst.f_plus << " fired " << fired << "; ";
    ok = ok && top < nst.f_plus && fired == 0;
  }
  return ok;
}

bool ac6(std::ostringstream& out) {
  double worst = 0;
  for (double t : {-1.0, -0.75, -0.5, -0.3, -0.1, 0.1, 0.2, 1.0 / 3}) {
    const SphereIntegral s = t_state_integral(TState{{t, t, t}}, kDefaultThetaNodes, 1.0);
    worst = std::max(worst, std::abs(s.value - 2 * std::abs(t)));
    if (s.theta_nodes != kDefaultThetaNodes || s.phi_nodes != kDefaultPhiNodes) return false;
  }
  const bool below = t_state_criterion(TState{{-0.49, -0.49, -0.49}}).steerable();
  const bool above = t_state_criterion(TState{{-0.51, -0.51, -0.51}}).steerable();
  Rng rng(606);
  // resolution starts at 64 x 128 and doubles on demand
  double worst_err = 0, worst_fixed = 0;
  int max_nodes = 0;
  for (int k = 0; k < 100; ++k) {
    const TState t = random_valid_tstate(rng);
    const SphereIntegral s = t_state_integral(t);
    worst_err = std::max(worst_err, s.error);
    max_nodes = std::max(max_nodes, s.theta_nodes);
    worst_fixed = std::max(worst_fixed, t_state_integral(t, kDefaultThetaNodes, 1.0).error);
  }
  out << "isotropic err " << worst << ", flip " << (below ? "before" : "after") << " |t|=0.49/"
      << (above ? "at" : "not at") << " 0.51, max error estimate " << worst_err << " (" << max_nodes
      << " theta nodes; " << worst_fixed << " without refinement)";
  return worst < 1e-6 && !below && above && worst_err < 1e-4;
}

bool ac7(std::ostringstream& out) {
  Rng rng(707);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const BlochVector a = random_direction(rng), b = random_direction(rng), n = random_direction(rng);
    const BlochVector np = n.cross(random_direction(rng)).normalized();
    const double q = u(rng);
    worst = std::max(worst, chsh_operator_deviation(a, b, n, np, q, 1 - q));
  }
  out << "max deviation " << worst;
  return worst < 1e-12;
}

bool ac8(std::ostringstream& out) {
  // f = (1 + 3 eta)/4 for the qubit depolarizing channel.
  const auto eta_of = [](double f) { return (4 * f - 1) / 3; };
  const double steer = first_flip([&](double f) {
    return f >= 0.25 && entanglement_fidelity_criterion(depolarizing_channel(2, eta_of(f))).steerable();
  });
  const double ep = first_flip([&](double f) {
    return f >= 0.25 &&
           entanglement_fidelity_criterion(depolarizing_channel(2, eta_of(f))).details.at("entanglement_preserving") > 0;
  });
  const auto steers = [&](double f) {
    return entanglement_fidelity_criterion(depolarizing_channel(2, eta_of(f))).steerable();
  };
  const auto preserves = [&](double f) {
    return entanglement_fidelity_criterion(depolarizing_channel(2, eta_of(f))).details.at("entanglement_preserving") > 0;
  };
  const double fine = 1e-6;
  const bool sharp = !steers(0.625 - fine) && steers(0.625 + fine) && !preserves(0.5 - fine) && preserves(0.5 + fine) &&
                     std::abs(eta_of(0.625) - 0.5) < 1e-15 && std::abs(eta_of(0.5) - 1.0 / 3) < 1e-15;
  out << "steering flip on grid f=" << steer << ", EP flip on grid f=" << ep << ", sharp at 5/8 and 1/2: " << sharp;
  return std::abs(steer - 0.625) <= 0.01 + 1e-12 && std::abs(ep - 0.5) <= 0.01 + 1e-12 && sharp;
}

DensityMatrix deficient_state(int d, int k, Rng& rng) {
  if (k % 2 == 0) return random_density_matrix(d * d, rng, 1 + k % d);
  // rho_A supported on a (d - 1)-dimensional subspace
  const DensityMatrix small = random_density_matrix((d - 1) * d, rng, 1 + k % 3);
  CMatrix big = CMatrix::Zero(d * d, d * d);
  big.topLeftCorner((d - 1) * d, (d - 1) * d) = small.matrix();
  const CMatrix u = kron(haar_unitary(d, rng), CMatrix(CMatrix::Identity(d, d)));
  return DensityMatrix(CMatrix(u * big * u.adjoint()));
}

bool ac9(std::ostringstream& out) {
  Rng rng(909);
  const auto t0 = Clock::now();
  double worst = 0;
  int count = 0;
  for (int d = 2; d <= 3; ++d) {
    for (int k = 0; k < 70; ++k) {
      const DensityMatrix w = k < 50 ? random_density_matrix(d * d, rng) : deficient_state(d, k, rng);
      worst = std::max(worst, (decompose_state(w).reconstruct() - w.matrix()).norm());
      ++count;
    }
  }
  const double secs = seconds_since(t0);
  out << count << " states, max Frobenius error " << worst << ", " << secs << " s";
  return worst < 1e-9 && secs < 10;
}

bool ac10(std::ostringstream& out) {
  Rng rng(1010);
  double worst = -1;
  for (int d = 2; d <= 3; ++d)
    for (int k = 0; k < 100; ++k)
      worst = std::max(worst, entanglement_fidelity(random_eb_channel(d, 2 + k % 4, rng)) - 1.0 / d);
  int violations = 0;
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 2;
    const QuantumChannel ch = eb_channel_as_kraus(random_eb_channel(d, 2 + k % 3, rng));
    const CVector psi = vectorize(psd_sqrt(random_density_matrix(d, rng).matrix()));
    const DensityMatrix w(ch.apply_to_second(psi * psi.adjoint(), d));
    const MeasurementSet bob = haar_measurements(d, 2 + k % 2, rng, true);
    const NstResult nst = nst_enumerate(bob);
    violations += evaluate_lsi(w, haar_measurements(d, bob.size(), rng), bob, nst).steerable();
    violations += evaluate_lsi(w, bob.conjugate(), bob, nst).steerable();
  }
  out << "max f - 1/d " << worst << ", LSI violations " << violations;
  return worst <= 1e-12 && violations == 0;
}

bool ac11(std::ostringstream& out) {
  Rng rng(1111);
  // deterministic optimality
  const MeasurementSet probe = haar_measurements(3, 3, rng, true);
  const auto prob = nst_probabilistic_check(probe, 10000, 11);
  bool ok = prob.violations == 0;
  out << "probabilistic violations " << prob.violations << "; ";

  // state-independent bounds
  double slack_plus = 1, slack_minus = 1;
  for (int d = 2; d <= 4; ++d) {
    const auto c = continuous_thresholds(d);
    const int max_settings = d == 2 ? 6 : d == 3 ? 4 : 3;
    for (int k = 0; k < 100; ++k) {
      const NstResult r = nst_enumerate(haar_measurements(d, 1 + k % max_settings, rng, true));
      slack_plus = std::min(slack_plus, r.f_plus - c.f_plus);
      slack_minus = std::min(slack_minus, c.f_minus - r.f_minus);
    }
  }
  ok = ok && slack_plus >= -1e-12 && slack_minus >= -1e-12;
  out << "min F+ - H_d/d " << slack_plus << ", min 1/d^2 - F- " << slack_minus << "; ";

  // qubit identity and geometric consistency
  double sum_err = 0, geo_err = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 5;
    const NstResult r = nst_enumerate(haar_measurements(2, n, rng, true));
    sum_err = std::max(sum_err, std::abs(r.f_plus + r.f_minus - 1));
    std::vector<BlochVector> a, b;
    std::vector<double> q(n, 1.0 / n);
    for (int i = 0; i < n; ++i) {
      a.push_back(random_direction(rng));
      b.push_back(random_direction(rng));
    }
    const CriterionReport g = geometric_criterion(random_density_matrix(4, rng), a, b, q);
    geo_err = std::max(geo_err, std::abs(g.f_bar - (2 * g.details.at("F_bar_direct") - 1)));
  }
  ok = ok && sum_err < 1e-10 && geo_err < 1e-10;
  out << "max |F+ + F- - 1| " << sum_err << ", max |f - (2F - 1)| " << geo_err << "; ";

  // separable states
  int verdicts = 0, fidelity_checked = 0;
  std::uniform_int_distribution<int> terms(1, 8);
  for (int k = 0; k < 100; ++k) {
    const int d = 2 + k % 2;
    const DensityMatrix w = random_separable_state(d, terms(rng), rng);
    const MeasurementSet bob = haar_measurements(d, 1 + k % 3, rng, true);
    const NstResult nst = nst_enumerate(bob);
    const ExtremalFidelity ext = extremal_fidelity(w, bob);
    verdicts += wjd_type_criterion(ext, nst).steerable();
    verdicts += werner_type_criterion(ext, nst).steerable();
    verdicts += evaluate_lsi(w, haar_measurements(d, bob.size(), rng), bob, nst).steerable();
    verdicts += evaluate_lsi(w, bob.conjugate(), bob, nst).steerable();
    if (d == 2) verdicts += general_two_qubit_criterion(w).steerable();
    // The fidelity criterion judges (I x eps)(P_+); that state is W up to an
    // invertible local filter only when rho_A has full rank.
    const StateDecomposition dec = decompose_state(w);
    if (dec.rank_rho_a == d) {
      verdicts += entanglement_fidelity_criterion(dec.channel).steerable();
      ++fidelity_checked;
    }
  }
  ok = ok && verdicts == 0;
  out << "separable verdicts " << verdicts << " (fidelity criterion on " << fidelity_checked << " full-rank rho_A)";
  return ok;
}

}  // namespace

int main() {
  run("AC1", ac1);
  run("AC2", ac2);
  run("AC3", ac3);
  run("AC4", ac4);
  run("AC5", ac5);
  run("AC6", ac6);
  run("AC7", ac7);
  run("AC8", ac8);
  run("AC9", ac9);
  run("AC10", ac10);
  run("AC11", ac11);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
