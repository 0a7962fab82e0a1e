// Nonsteering thresholds F+-_NST.
//
// For a finite set {q_mu, Phi^a_mu} the thresholds are the extremal eigenvalues of
// rho_bar_k = sum_mu q_mu Phi^{k_mu}_mu over all d^N deterministic assignments k.
// For qubits the geometric form uses the 2^N sign patterns of sum_mu +-q_mu n_mu.
// Continuous (Haar) settings have closed forms H_d/d and 1/d^2, which are also
// estimated here by Monte Carlo over Haar-random pure states.
#pragma once

#include "steerlab/measurements.hpp"
#include "steerlab/qmat.hpp"
#include "steerlab/states.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace steerlab {

struct DeterministicAssignment {
  std::vector<int> k;  // outcome index per setting
};

struct NstWitness {
  DeterministicAssignment assignment;
  CVector eigenvector;
};

struct NstResult {
  double f_plus = 0;
  double f_minus = 0;
  NstWitness witness_plus;
  NstWitness witness_minus;
  std::uint64_t assignments = 0;
};

class EnumerationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

enum class Extremum { Max, Min };

/// Index of the largest (smallest) entry; entries within 1e-12 of the extremum
/// resolve to the smallest index.
int optimal_outcome(const RVector& values, Extremum which);

/// rho_bar for one deterministic assignment.
CMatrix rho_bar(const MeasurementSet& bob, const DeterministicAssignment& k);
/// rho_bar for a single hidden variable xi of a probabilistic response table.
CMatrix rho_bar(const MeasurementSet& bob, const ResponseFunction& p, int xi);

/// Exact thresholds by enumerating all d^N assignments. Throws
/// EnumerationCapExceeded when d^N > cap.
NstResult nst_enumerate(const MeasurementSet& bob, std::uint64_t cap = kDefaultEnumerationCap);

/// (1 + max_ab |U_ab|)/2 for two equal-weight settings.
double two_setting_f_plus(const MeasurementSet& bob);

struct ProbabilisticCheckReport {
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  double max_value = 0;
  double min_value = 0;
  double f_plus = 0;
  double f_minus = 0;
};

/// Randomized oracle for deterministic optimality: draws random probabilistic
/// response tables and unit vectors and checks that
/// sum_mu q_mu <phi| sum_a p(a|mu) Phi^a_mu |phi> stays inside [f_minus, f_plus]
/// (1e-9 slack). Each trial also evaluates the extremal eigenvalues of the
/// sampled rho_bar, i.e. the best |phi> for that table.
ProbabilisticCheckReport nst_probabilistic_check(const MeasurementSet& bob, std::uint64_t trials,
                                                 std::uint64_t seed, const NstResult& nst);
ProbabilisticCheckReport nst_probabilistic_check(const MeasurementSet& bob, std::uint64_t trials,
                                                 std::uint64_t seed);

struct GeometricNst {
  double g_plus = 0;
  double g_minus = 0;
  double r_opt = 0;
  std::vector<int> signs;  // +1 / -1 per setting for the optimal pattern
};

GeometricNst geometric_nst(const std::vector<BlochVector>& directions,
                           const std::vector<double>& weights);
/// Qubit sets only; N <= 30.
GeometricNst geometric_nst(const MeasurementSet& bob);

struct ContinuousThresholds {
  double f_plus = 0;
  double f_minus = 0;
};

double harmonic_number(int d);
/// (H_d / d, 1 / d^2)
ContinuousThresholds continuous_thresholds(int d);

struct ContinuousThresholdEstimate {
  int d = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double plus = 0;
  double minus = 0;
  double stderr_plus = 0;
  double stderr_minus = 0;
  /// <a| int p*(a|w) |phi_w><phi_w| dmu |a> per outcome a. For d = 2 the
  /// entry a = 0 is the northern-hemisphere part of the plus threshold.
  std::vector<double> plus_contributions;
  std::vector<double> minus_contributions;
};

/// Monte Carlo over |phi_w> = U_w|0> with Haar U_w; each sample is assigned to
/// the outcome maximizing (minimizing) |<a|phi_w>|^2. Requires samples >= 1000.
ContinuousThresholdEstimate continuous_threshold_mc(int d, std::uint64_t samples,
                                                    std::uint64_t seed);

}  // namespace steerlab
