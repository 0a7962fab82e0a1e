// Steering criteria built on averaged fidelities.
#pragma once

#include "steerlab/channels.hpp"
#include "steerlab/measurements.hpp"
#include "steerlab/qmat.hpp"
#include "steerlab/states.hpp"
#include "steerlab/thresholds.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace steerlab {

/// Base margin a criterion must clear on top of its numerical error.
inline constexpr double kVerdictTol = 1e-9;

enum class CriterionKind {
  Lsi,                  // both sides of the linear steering inequality
  WjdType,              // F_bar^+ > F^+_NST
  WernerType,           // F_bar^- < F^-_NST
  Geometric,            // qubit Bloch form, |f_bar| > r_opt
  TState,               // sphere integral of ||T n||
  GeneralTwoQubit,      // same integral from the full correlation matrix
  EntanglementFidelity  // f > (1/d)((d+1) H_d/d - 1)
};

enum class Verdict { SteerableAToB, Inconclusive };

std::string to_string(CriterionKind kind);
std::string to_string(Verdict verdict);
CriterionKind criterion_kind_from_string(const std::string& s);

struct CriterionReport {
  CriterionKind kind = CriterionKind::Lsi;
  double f_bar = 0;  // the compared quantity (F_bar, f_bar, or the sphere integral)
  double f_minus = 0;
  double f_plus = 0;
  /// Signed distance past the nearest violated threshold; negative inside the bounds.
  double margin = 0;
  /// kVerdictTol plus the numerical error of f_bar and the thresholds.
  double error_budget = kVerdictTol;
  Verdict verdict = Verdict::Inconclusive;
  /// |margin| <= error_budget: too close to the threshold to call either way.
  bool boundary_adjacent = false;
  std::map<std::string, double> details;
  std::optional<MeasurementSet> witness;

  bool steerable() const { return verdict == Verdict::SteerableAToB; }
};

/// Verdict logic shared by all kinds. Upper-only kinds ignore f_minus and
/// lower-only kinds ignore f_plus.
CriterionReport make_report(CriterionKind kind, double f_bar, double f_minus, double f_plus,
                            double numerical_error = 0);

/// F_bar = sum_mu q_mu sum_a Tr[(Pi^a_mu (x) Phi^a_mu) W], weights from bob.
double averaged_fidelity(const DensityMatrix& w, const MeasurementSet& alice,
                         const MeasurementSet& bob);

/// B^a = Tr_B[(I (x) Phi^a) W]
std::vector<CMatrix> alice_operators(const DensityMatrix& w, const Setting& bob_setting);

struct ExtremalFidelity {
  double f_plus_bar = 0;
  double f_minus_bar = 0;
  MeasurementSet alice_plus;
  MeasurementSet alice_minus;
  /// True at d = 2. For d > 2 the values are a lower (f_plus_bar) and
  /// upper (f_minus_bar) bound from multistart ascent.
  bool exact = false;
  /// Objective after each ascent sweep of the best start, summed over settings.
  std::vector<double> trace_plus;
  std::vector<double> trace_minus;
};

struct AscentOptions {
  int multistarts = 16;
  double tolerance = 1e-10;
  int max_iterations = 2000;
  std::uint64_t seed = 0x5eed;
};

ExtremalFidelity extremal_fidelity(const DensityMatrix& w, const MeasurementSet& bob,
                                   const AscentOptions& options = {});

struct ContinuousExtremalFidelity {
  double f_plus_bar = 0;
  double f_minus_bar = 0;
  double stderr_plus = 0;
  double stderr_minus = 0;
  std::uint64_t samples = 0;
  bool exact_per_sample = false;
};

/// Haar average over Bob's basis of the per-basis extremal fidelities.
ContinuousExtremalFidelity extremal_fidelity_continuous(const DensityMatrix& w,
                                                        std::uint64_t samples, std::uint64_t seed);

/// Closed forms, independent of Bob's measurements.
ContinuousThresholds werner_extremal_fidelity(int d, double w);
ContinuousThresholds isotropic_extremal_fidelity(int d, double eta);

/// Both-sided LSI with the exact finite-setting NST for bob.
CriterionReport evaluate_lsi(const DensityMatrix& w, const MeasurementSet& alice,
                             const MeasurementSet& bob);
CriterionReport evaluate_lsi(const DensityMatrix& w, const MeasurementSet& alice,
                             const MeasurementSet& bob, const NstResult& nst);

/// F_bar^+ against F^+_NST. The witness is the maximizing Alice measurement.
CriterionReport wjd_type_criterion(double f_plus_bar, double f_plus_nst, double numerical_error = 0);
CriterionReport wjd_type_criterion(const ExtremalFidelity& ext, const NstResult& nst);
/// F_bar^- against F^-_NST.
CriterionReport werner_type_criterion(double f_minus_bar, double f_minus_nst,
                                      double numerical_error = 0);
CriterionReport werner_type_criterion(const ExtremalFidelity& ext, const NstResult& nst);

/// f_bar = sum_mu q_mu <r_mu.sigma (x) n_mu.sigma> against +-r_opt. details carry
/// "F_bar" = (1 + f_bar)/2, "explicit_form" = f_bar / r_opt and "r_opt".
CriterionReport geometric_criterion(const DensityMatrix& w, const std::vector<BlochVector>& alice,
                                    const std::vector<BlochVector>& bob,
                                    const std::vector<double>& weights);

struct ChshAngles {
  double cos_theta = 0;  // |cos theta|
  double sin_theta = 0;  // |sin theta|
};

/// |cos| = q_n / sqrt(q_n^2 + q_perp^2), |sin| = q_perp / sqrt(q_n^2 + q_perp^2).
ChshAngles chsh_mapping(double q_n, double q_perp);

struct ChshDirections {
  BlochVector n1, n2;
};
/// n1 - n2 = 2|cos| n, n1 + n2 = 2|sin| n_perp.
ChshDirections chsh_bob_directions(const ChshAngles& angles, const BlochVector& n,
                                   const BlochVector& n_perp);

/// Normalized steering operator for two orthogonal Bob directions.
CMatrix steering_operator(const BlochVector& a, const BlochVector& b, const BlochVector& n,
                          const BlochVector& n_perp, double q_n, double q_perp);
/// Half the CHSH operator a(x)(n1 - n2) + b(x)(n1 + n2).
CMatrix chsh_operator(const BlochVector& a, const BlochVector& b, const ChshDirections& dirs);

/// Largest entrywise |T_steer - T_CHSH| for the given directions and weights.
double chsh_operator_deviation(const BlochVector& a, const BlochVector& b, const BlochVector& n,
                               const BlochVector& n_perp, double q_n, double q_perp);

/// <a(x)(n1 - n2)> + <b(x)(n1 + n2)> under the mapping.
double chsh_value(const DensityMatrix& w, const BlochVector& a, const BlochVector& b,
                  const BlochVector& n, const BlochVector& n_perp, double q_n, double q_perp);

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

struct SphereIntegral {
  double value = 0;
  double error = 0;  // |I(n) - I(n/2)| at the final resolution
  int theta_nodes = 0;
  int phi_nodes = 0;
};

inline constexpr int kDefaultThetaNodes = 64;
inline constexpr int kDefaultPhiNodes = 128;
inline constexpr int kMaxThetaNodes = 1024;

/// (1/2 pi) int ||T n|| d^2n for T with the given singular values. Starts at
/// theta_nodes x 2 theta_nodes and doubles while the error exceeds `target`.
SphereIntegral correlation_sphere_integral(const Eigen::Vector3d& singular_values,
                                           int theta_nodes = kDefaultThetaNodes,
                                           double target = 1e-10);

/// (1/2 pi) int sqrt(n^T T^2 n) d^2n for T = diag(t); any real t.
SphereIntegral t_state_integral(const TState& t, int theta_nodes = kDefaultThetaNodes,
                                double target = 1e-10);

/// Alice's optimal direction a = T n / ||T n|| (zero vector if T n = 0).
BlochVector optimal_alice_direction(const Eigen::Matrix3d& t, const BlochVector& n);

/// Throws std::invalid_argument when t is not a valid T-state.
CriterionReport t_state_criterion(const TState& t, int theta_nodes = kDefaultThetaNodes);

/// Same integral with T_jk = Tr[W sigma_j (x) sigma_k].
CriterionReport general_two_qubit_criterion(const DensityMatrix& w,
                                            int theta_nodes = kDefaultThetaNodes);

/// f*(d) = (1/d)((d+1) H_d/d - 1)
double entanglement_fidelity_threshold(int d);

/// Steering verdict for W_eps = (I (x) eps)(P_+) from f; details carry "f",
/// "f_star", "entanglement_preserving" (f > 1/d) and "ep_threshold".
CriterionReport entanglement_fidelity_criterion(const QuantumChannel& channel);

}  // namespace steerlab
