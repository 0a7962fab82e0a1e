#include "steerlab/criteria.hpp"

#include "steerlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace steerlab {

std::string to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::Lsi: return "lsi";
    case CriterionKind::WjdType: return "wjd-type";
    case CriterionKind::WernerType: return "werner-type";
    case CriterionKind::Geometric: return "geometric";
    case CriterionKind::TState: return "t-state";
    case CriterionKind::GeneralTwoQubit: return "general-two-qubit";
    case CriterionKind::EntanglementFidelity: return "entanglement-fidelity";
  }
  return "unknown";
}

std::string to_string(Verdict verdict) {
  return verdict == Verdict::SteerableAToB ? "steerable-A-to-B" : "inconclusive";
}

CriterionKind criterion_kind_from_string(const std::string& s) {
  for (auto k : {CriterionKind::Lsi, CriterionKind::WjdType, CriterionKind::WernerType,
                 CriterionKind::Geometric, CriterionKind::TState, CriterionKind::GeneralTwoQubit,
                 CriterionKind::EntanglementFidelity}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown criterion kind '" + s + "'");
}

CriterionReport make_report(CriterionKind kind, double f_bar, double f_minus, double f_plus,
                            double numerical_error) {
  CriterionReport r;
  r.kind = kind;
  r.f_bar = f_bar;
  r.f_minus = f_minus;
  r.f_plus = f_plus;
  const double upper = f_bar - f_plus;
  const double lower = f_minus - f_bar;
  switch (kind) {
    case CriterionKind::Lsi:
    case CriterionKind::Geometric: r.margin = std::max(upper, lower); break;
    case CriterionKind::WernerType: r.margin = lower; break;
    default: r.margin = upper; break;
  }
  r.error_budget = kVerdictTol + std::abs(numerical_error);
  r.verdict = r.margin > r.error_budget ? Verdict::SteerableAToB : Verdict::Inconclusive;
  r.boundary_adjacent = std::abs(r.margin) <= r.error_budget;
  return r;
}

namespace {

void require_bipartite(const DensityMatrix& w, int d, const char* who) {
  if (w.dim() != d * d)
    throw std::invalid_argument(std::string(who) + ": state and measurement dimensions differ");
}

double setting_fidelity(const CMatrix& w, const Setting& alice, const Setting& bob) {
  double f = 0;
  for (int a = 0; a < bob.outcomes(); ++a) {
    const CVector v = kron(alice.basis.col(a), bob.basis.col(a));
    f += (v.adjoint() * w * v)(0).real();
  }
  return f;
}

double objective(const std::vector<CMatrix>& ops, const CMatrix& v) {
  double f = 0;
  for (std::size_t a = 0; a < ops.size(); ++a) {
    const auto col = v.col(static_cast<Eigen::Index>(a));
    f += (col.adjoint() * ops[a] * col)(0).real();
  }
  return f;
}

struct Ascent {
  double value = -std::numeric_limits<double>::infinity();
  CMatrix basis;
  std::vector<double> trace;
};

// Maximizes sum_a <v_a|P_a|v_a> over unitaries V = [v_a] for PSD P_a. The
// objective is convex in V, so replacing V by the unitary polar factor of
// G = [P_a v_a] never decreases it.
Ascent ascend(const std::vector<CMatrix>& ops, CMatrix v, const AscentOptions& opt) {
  Ascent out;
  double value = objective(ops, v);
  out.trace.push_back(value);
  CMatrix g(v.rows(), v.cols());
  for (int it = 0; it < opt.max_iterations; ++it) {
    for (std::size_t a = 0; a < ops.size(); ++a) {
      const auto i = static_cast<Eigen::Index>(a);
      g.col(i) = ops[a] * v.col(i);
    }
    const CMatrix next = unitary_polar_factor(g);
    const double next_value = objective(ops, next);
    if (next_value < value) break;
    v = next;
    const double gain = next_value - value;
    value = next_value;
    out.trace.push_back(value);
    if (gain < opt.tolerance) break;
  }
  out.value = value;
  out.basis = v;
  return out;
}

Ascent best_ascent(const std::vector<CMatrix>& ops, const CMatrix& bob_basis, const AscentOptions& opt,
                   std::uint64_t stream) {
  const Eigen::Index d = bob_basis.rows();
  std::vector<CMatrix> starts{bob_basis.conjugate(), bob_basis, CMatrix::Identity(d, d)};
  CMatrix shifted(d, d);
  for (Eigen::Index a = 0; a < d; ++a) shifted.col(a) = bob_basis.conjugate().col((a + 1) % d);
  starts.push_back(shifted);
  Rng rng(stream_seed(opt.seed, stream));
  for (int s = 0; s < opt.multistarts; ++s) starts.push_back(haar_unitary(d, rng));

  Ascent best;
  for (const auto& start : starts) {
    Ascent run = ascend(ops, start, opt);
    if (run.value > best.value + 1e-14) best = std::move(run);
  }
  return best;
}

void accumulate_trace(std::vector<double>& total, const std::vector<double>& part, double weight,
                      double sign, double offset) {
  const std::size_t n = std::max(total.size(), part.size());
  const double last_total = total.empty() ? 0.0 : total.back();
  total.resize(n, last_total);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = i < part.size() ? part[i] : part.back();
    total[i] += weight * (offset + sign * v);
  }
}

}  // namespace

double averaged_fidelity(const DensityMatrix& w, const MeasurementSet& alice, const MeasurementSet& bob) {
  if (alice.size() != bob.size() || alice.dim() != bob.dim())
    throw std::invalid_argument("averaged_fidelity: Alice and Bob measurement sets differ in shape");
  require_bipartite(w, bob.dim(), "averaged_fidelity");
  double f = 0;
  for (int mu = 0; mu < bob.size(); ++mu) f += bob.weight(mu) * setting_fidelity(w.matrix(), alice[mu], bob[mu]);
  return f;
}

std::vector<CMatrix> alice_operators(const DensityMatrix& w, const Setting& bob_setting) {
  const int d = static_cast<int>(bob_setting.basis.rows());
  require_bipartite(w, d, "alice_operators");
  const CMatrix id = CMatrix::Identity(d, d);
  std::vector<CMatrix> ops;
  for (int a = 0; a < bob_setting.outcomes(); ++a) {
    CMatrix b = partial_trace(CMatrix(kron(id, bob_setting.projector(a)) * w.matrix()), d, d, Subsystem::B);
    ops.push_back((b + b.adjoint()) / 2.0);
  }
  return ops;
}

ExtremalFidelity extremal_fidelity(const DensityMatrix& w, const MeasurementSet& bob,
                                   const AscentOptions& options) {
  const int d = bob.dim();
  require_bipartite(w, d, "extremal_fidelity");
  ExtremalFidelity out;
  out.exact = d == 2;
  std::vector<Setting> plus_settings, minus_settings;

  for (int mu = 0; mu < bob.size(); ++mu) {
    const double q = bob.weight(mu);
    const auto ops = alice_operators(w, bob[mu]);
    CMatrix basis_plus(d, d), basis_minus(d, d);
    double f_plus = 0, f_minus = 0;

    if (d == 2) {
      const auto eig = hermitian_eig(CMatrix(ops[0] - ops[1]));
      const double base = ops[1].trace().real();
      f_plus = base + eig.max_eigenvalue();
      f_minus = base + eig.min_eigenvalue();
      basis_plus.col(0) = eig.top_vector();
      basis_plus.col(1) = eig.bottom_vector();
      basis_minus.col(0) = eig.bottom_vector();
      basis_minus.col(1) = eig.top_vector();
      accumulate_trace(out.trace_plus, {f_plus}, q, 1, 0);
      accumulate_trace(out.trace_minus, {f_minus}, q, 1, 0);
    } else {
      const Ascent up = best_ascent(ops, bob[mu].basis, options, 2 * static_cast<std::uint64_t>(mu));
      double c = 0;
      for (const auto& b : ops) c = std::max(c, hermitian_eig(b).max_eigenvalue());
      std::vector<CMatrix> flipped;
      for (const auto& b : ops) flipped.push_back(c * CMatrix::Identity(d, d) - b);
      const Ascent down = best_ascent(flipped, bob[mu].basis, options, 2 * static_cast<std::uint64_t>(mu) + 1);
      f_plus = up.value;
      f_minus = d * c - down.value;
      basis_plus = up.basis;
      basis_minus = down.basis;
      accumulate_trace(out.trace_plus, up.trace, q, 1, 0);
      accumulate_trace(out.trace_minus, down.trace, q, -1, d * c);
    }
    out.f_plus_bar += q * f_plus;
    out.f_minus_bar += q * f_minus;
    plus_settings.push_back({q, basis_plus});
    minus_settings.push_back({q, basis_minus});
  }
  out.f_minus_bar = std::max(0.0, out.f_minus_bar);
  out.alice_plus = MeasurementSet(d, std::move(plus_settings));
  out.alice_minus = MeasurementSet(d, std::move(minus_settings));
  return out;
}

ContinuousExtremalFidelity extremal_fidelity_continuous(const DensityMatrix& w, std::uint64_t samples,
                                                        std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("extremal_fidelity_continuous: need at least 2 samples");
  const int d = w.local_dim();
  struct Sums {
    double plus = 0, plus2 = 0, minus = 0, minus2 = 0;
  };
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(samples, kSampleChunks));
  const auto parts = map_chunks<Sums>(chunks, [&](std::size_t c) {
    Rng rng(stream_seed(seed, c));
    Sums s;
    const auto [begin, end] = chunk_range(samples, chunks, c);
    for (std::uint64_t i = begin; i < end; ++i) {
      const MeasurementSet bob(d, {Setting{1.0, haar_unitary(d, rng)}});
      AscentOptions opt;
      opt.seed = stream_seed(seed, i + 0x100000);
      const auto ext = extremal_fidelity(w, bob, opt);
      s.plus += ext.f_plus_bar;
      s.plus2 += ext.f_plus_bar * ext.f_plus_bar;
      s.minus += ext.f_minus_bar;
      s.minus2 += ext.f_minus_bar * ext.f_minus_bar;
    }
    return s;
  });
  Sums total;
  for (const auto& p : parts) {
    total.plus += p.plus;
    total.plus2 += p.plus2;
    total.minus += p.minus;
    total.minus2 += p.minus2;
  }
  const double n = static_cast<double>(samples);
  ContinuousExtremalFidelity out;
  out.samples = samples;
  out.exact_per_sample = d == 2;
  out.f_plus_bar = total.plus / n;
  out.f_minus_bar = total.minus / n;
  const auto stderr_of = [n](double sum, double sum2) {
    const double var = std::max(0.0, (sum2 - sum * sum / n) / (n - 1));
    return std::sqrt(var / n);
  };
  out.stderr_plus = stderr_of(total.plus, total.plus2);
  out.stderr_minus = stderr_of(total.minus, total.minus2);
  return out;
}

ContinuousThresholds werner_extremal_fidelity(int d, double w) {
  if (d < 2 || !(w >= 0 && w <= 1)) throw std::invalid_argument("werner_extremal_fidelity: bad parameters");
  const double dd = d;
  return {(dd - 1 + w) / (dd * (dd - 1)), (1 - w) / dd};
}

ContinuousThresholds isotropic_extremal_fidelity(int d, double eta) {
  if (d < 2) throw std::invalid_argument("isotropic_extremal_fidelity: d must be >= 2");
  const double dd = d;
  if (!(eta >= -1.0 / (dd * dd - 1) - 1e-15 && eta <= 1))
    throw std::invalid_argument("isotropic_extremal_fidelity: eta is unphysical");
  const double matched = (1 + (dd - 1) * eta) / dd;
  const double deranged = (1 - eta) / dd;
  return {std::max(matched, deranged), std::min(matched, deranged)};
}

CriterionReport evaluate_lsi(const DensityMatrix& w, const MeasurementSet& alice, const MeasurementSet& bob,
                             const NstResult& nst) {
  CriterionReport r = make_report(CriterionKind::Lsi, averaged_fidelity(w, alice, bob), nst.f_minus, nst.f_plus);
  r.witness = alice;
  return r;
}

CriterionReport evaluate_lsi(const DensityMatrix& w, const MeasurementSet& alice, const MeasurementSet& bob) {
  return evaluate_lsi(w, alice, bob, nst_enumerate(bob));
}

CriterionReport wjd_type_criterion(double f_plus_bar, double f_plus_nst, double numerical_error) {
  return make_report(CriterionKind::WjdType, f_plus_bar, 0.0, f_plus_nst, numerical_error);
}

CriterionReport wjd_type_criterion(const ExtremalFidelity& ext, const NstResult& nst) {
  CriterionReport r = make_report(CriterionKind::WjdType, ext.f_plus_bar, nst.f_minus, nst.f_plus);
  r.witness = ext.alice_plus;
  r.details["exact"] = ext.exact ? 1 : 0;
  return r;
}

CriterionReport werner_type_criterion(double f_minus_bar, double f_minus_nst, double numerical_error) {
  return make_report(CriterionKind::WernerType, f_minus_bar, f_minus_nst, 1.0, numerical_error);
}

CriterionReport werner_type_criterion(const ExtremalFidelity& ext, const NstResult& nst) {
  CriterionReport r = make_report(CriterionKind::WernerType, ext.f_minus_bar, nst.f_minus, nst.f_plus);
  r.witness = ext.alice_minus;
  r.details["exact"] = ext.exact ? 1 : 0;
  return r;
}

CriterionReport geometric_criterion(const DensityMatrix& w, const std::vector<BlochVector>& alice,
                                    const std::vector<BlochVector>& bob, const std::vector<double>& weights) {
  if (w.dim() != 4) throw std::invalid_argument("geometric_criterion: two-qubit state required");
  if (alice.size() != bob.size() || bob.size() != weights.size())
    throw std::invalid_argument("geometric_criterion: directions and weights differ in length");
  double f_bar = 0;
  for (std::size_t mu = 0; mu < bob.size(); ++mu) {
    if (!alice[mu].is_unit() || !bob[mu].is_unit())
      throw std::invalid_argument("geometric_criterion: directions must be unit vectors");
    const CMatrix op = kron(bloch_operator(alice[mu]), bloch_operator(bob[mu]));
    f_bar += weights[mu] * (w.matrix() * op).trace().real();
  }
  const GeometricNst g = geometric_nst(bob, weights);
  CriterionReport r = make_report(CriterionKind::Geometric, f_bar, g.g_minus, g.g_plus);
  const MeasurementSet a_set = qubit_measurements(alice, weights);
  const MeasurementSet b_set = qubit_measurements(bob, weights);
  r.details["r_opt"] = g.r_opt;
  r.details["F_bar"] = (1 + f_bar) / 2;
  r.details["F_bar_direct"] = averaged_fidelity(w, a_set, b_set);
  r.details["F_plus_nst"] = (1 + g.r_opt) / 2;
  r.details["F_minus_nst"] = (1 - g.r_opt) / 2;
  r.details["explicit_form"] = g.r_opt > 0 ? f_bar / g.r_opt : 0.0;
  r.witness = a_set;
  return r;
}

ChshAngles chsh_mapping(double q_n, double q_perp) {
  if (!(q_n > 0 && q_perp > 0)) throw std::invalid_argument("chsh_mapping: weights must be positive");
  const double norm = std::hypot(q_n, q_perp);
  return {q_n / norm, q_perp / norm};
}

namespace {
void require_orthonormal_pair(const BlochVector& n, const BlochVector& n_perp) {
  if (!n.is_unit() || !n_perp.is_unit() || std::abs(n.dot(n_perp)) > 1e-12)
    throw std::invalid_argument("CHSH mapping needs orthonormal Bob directions");
}
}  // namespace

ChshDirections chsh_bob_directions(const ChshAngles& angles, const BlochVector& n, const BlochVector& n_perp) {
  require_orthonormal_pair(n, n_perp);
  return {n * angles.cos_theta + n_perp * angles.sin_theta, n_perp * angles.sin_theta - n * angles.cos_theta};
}

CMatrix steering_operator(const BlochVector& a, const BlochVector& b, const BlochVector& n,
                          const BlochVector& n_perp, double q_n, double q_perp) {
  require_orthonormal_pair(n, n_perp);
  const double norm = std::hypot(q_n, q_perp);
  return (q_n * kron(bloch_operator(a), bloch_operator(n)) +
          q_perp * kron(bloch_operator(b), bloch_operator(n_perp))) /
         norm;
}

CMatrix chsh_operator(const BlochVector& a, const BlochVector& b, const ChshDirections& dirs) {
  return (kron(bloch_operator(a), bloch_operator(dirs.n1 - dirs.n2)) +
          kron(bloch_operator(b), bloch_operator(dirs.n1 + dirs.n2))) /
         2.0;
}

double chsh_operator_deviation(const BlochVector& a, const BlochVector& b, const BlochVector& n,
                               const BlochVector& n_perp, double q_n, double q_perp) {
  const ChshDirections dirs = chsh_bob_directions(chsh_mapping(q_n, q_perp), n, n_perp);
  return (steering_operator(a, b, n, n_perp, q_n, q_perp) - chsh_operator(a, b, dirs)).cwiseAbs().maxCoeff();
}

double chsh_value(const DensityMatrix& w, const BlochVector& a, const BlochVector& b, const BlochVector& n,
                  const BlochVector& n_perp, double q_n, double q_perp) {
  if (w.dim() != 4) throw std::invalid_argument("chsh_value: two-qubit state required");
  const ChshDirections dirs = chsh_bob_directions(chsh_mapping(q_n, q_perp), n, n_perp);
  return 2.0 * (w.matrix() * chsh_operator(a, b, dirs)).trace().real();
}

namespace {
// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1)};
}
}  // namespace

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  GaussLegendre gl;
  gl.nodes.resize(static_cast<std::size_t>(n));
  gl.weights.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    gl.nodes[0] = 0;
    gl.weights[0] = 2;
    return gl;
  }
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2 / ((1 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
    gl.nodes[lo] = -x;
    gl.nodes[hi] = x;
    gl.weights[lo] = w;
    gl.weights[hi] = w;
  }
  return gl;
}

namespace {

// (1/2 pi) int ||diag(s) n|| d^2n with s[2] on the polar axis. The integrand is
// even under n -> -n, so cos(theta) runs over [0, 1] and the result doubles.
double sphere_rule(const Eigen::Vector3d& s, int theta_nodes) {
  const GaussLegendre gl = gauss_legendre(theta_nodes);
  const int phi_nodes = 2 * theta_nodes;
  const double dphi = 2 * std::numbers::pi / phi_nodes;
  const double s0 = s[0] * s[0], s1 = s[1] * s[1], s2 = s[2] * s[2];
  const auto rows = map_chunks<double>(static_cast<std::size_t>(theta_nodes), [&](std::size_t i) {
    const double u = 0.5 * (gl.nodes[i] + 1);
    const double sin2 = 1 - u * u;
    double acc = 0;
    for (int j = 0; j < phi_nodes; ++j) {
      const double phi = (j + 0.5) * dphi;
      const double c = std::cos(phi), sn = std::sin(phi);
      acc += std::sqrt(sin2 * (s0 * c * c + s1 * sn * sn) + s2 * u * u);
    }
    return 0.5 * gl.weights[i] * acc * dphi;
  });
  double total = 0;
  for (double r : rows) total += r;
  return 2 * total / (2 * std::numbers::pi);
}

}  // namespace

SphereIntegral correlation_sphere_integral(const Eigen::Vector3d& singular_values, int theta_nodes,
                                           double target) {
  if (theta_nodes < 2) throw std::invalid_argument("correlation_sphere_integral: need at least 2 nodes");
  Eigen::Vector3d s = singular_values.cwiseAbs();
  std::sort(s.data(), s.data() + 3);
  // Polar axis: the smallest value, unless T has rank one; then the nonzero one.
  const double scale = s[2];
  Eigen::Vector3d oriented;
  if (scale > 0 && s[1] <= 1e-14 * scale) {
    oriented = Eigen::Vector3d(s[0], s[1], s[2]);
  } else {
    oriented = Eigen::Vector3d(s[1], s[2], s[0]);
  }
  SphereIntegral out;
  if (scale == 0) {
    out.theta_nodes = theta_nodes;
    out.phi_nodes = 2 * theta_nodes;
    return out;
  }
  int n = theta_nodes;
  double coarse = sphere_rule(oriented, std::max(1, n / 2));
  double fine = sphere_rule(oriented, n);
  while (std::abs(fine - coarse) > target && n < kMaxThetaNodes) {
    n *= 2;
    coarse = fine;
    fine = sphere_rule(oriented, n);
  }
  out.value = fine;
  out.error = std::abs(fine - coarse);
  out.theta_nodes = n;
  out.phi_nodes = 2 * n;
  return out;
}

SphereIntegral t_state_integral(const TState& t, int theta_nodes, double target) {
  return correlation_sphere_integral(Eigen::Vector3d(t.t[0], t.t[1], t.t[2]), theta_nodes, target);
}

BlochVector optimal_alice_direction(const Eigen::Matrix3d& t, const BlochVector& n) {
  const Eigen::Vector3d tn = t * n.vec();
  const double norm = tn.norm();
  if (norm == 0) return {};
  return BlochVector::from(tn / norm);
}

namespace {
CriterionReport integral_report(CriterionKind kind, const SphereIntegral& integral) {
  CriterionReport r = make_report(kind, integral.value, 0.0, 1.0, integral.error);
  r.details["integral"] = integral.value;
  r.details["quadrature_error"] = integral.error;
  r.details["theta_nodes"] = integral.theta_nodes;
  r.details["phi_nodes"] = integral.phi_nodes;
  return r;
}
}  // namespace

CriterionReport t_state_criterion(const TState& t, int theta_nodes) {
  (void)t_state(t);
  CriterionReport r = integral_report(CriterionKind::TState, t_state_integral(t, theta_nodes));
  r.details["t1"] = t.t[0];
  r.details["t2"] = t.t[1];
  r.details["t3"] = t.t[2];
  return r;
}

CriterionReport general_two_qubit_criterion(const DensityMatrix& w, int theta_nodes) {
  if (w.dim() != 4) throw std::invalid_argument("general_two_qubit_criterion: two-qubit state required");
  const Eigen::Matrix3d t = correlation_matrix(w);
  const Eigen::Vector3d s = Eigen::JacobiSVD<Eigen::Matrix3d>(t).singularValues();
  CriterionReport r = integral_report(CriterionKind::GeneralTwoQubit, correlation_sphere_integral(s, theta_nodes));
  r.details["singular_value_1"] = s[0];
  r.details["singular_value_2"] = s[1];
  r.details["singular_value_3"] = s[2];
  return r;
}

double entanglement_fidelity_threshold(int d) {
  const double dd = d;
  return ((dd + 1) * harmonic_number(d) / dd - 1) / dd;
}

CriterionReport entanglement_fidelity_criterion(const QuantumChannel& channel) {
  const int d = channel.dim();
  const double dd = d;
  const double f = entanglement_fidelity(channel);
  const double f_direct = entanglement_fidelity_direct(channel);
  const double f_bar = (dd * f + 1) / (dd + 1);
  const ContinuousThresholds nst = continuous_thresholds(d);
  CriterionReport r = make_report(CriterionKind::EntanglementFidelity, f_bar, nst.f_minus, nst.f_plus,
                                  std::abs(f - f_direct));
  r.details["f"] = f;
  r.details["f_star"] = entanglement_fidelity_threshold(d);
  r.details["ep_threshold"] = 1 / dd;
  r.details["entanglement_preserving"] = f > 1 / dd + kVerdictTol ? 1 : 0;
  return r;
}

}  // namespace steerlab
