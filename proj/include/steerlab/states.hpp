// Bipartite state families, assemblages and local-hidden-state constructions.
#pragma once

#include "steerlab/measurements.hpp"
#include "steerlab/qmat.hpp"

#include <array>
#include <utility>
#include <vector>

namespace steerlab {

/// Hermitian (1e-10), unit trace (1e-10), smallest eigenvalue >= -1e-10.
/// Slightly negative eigenvalues are clipped to zero on construction.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(const CMatrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  /// d for a d x d bipartite state; throws unless dim() is a perfect square.
  int local_dim() const;
  const CMatrix& matrix() const { return m_; }
  operator const CMatrix&() const { return m_; }

  static bool is_valid(const CMatrix& m, double tol = 1e-10);

 private:
  CMatrix m_;
};

/// members[mu][a] is the unnormalized conditional state rho~^a_mu.
struct Assemblage {
  std::vector<std::vector<CMatrix>> members;

  int settings() const { return static_cast<int>(members.size()); }
  int outcomes() const { return members.empty() ? 0 : static_cast<int>(members[0].size()); }
  int dim() const { return members.empty() ? 0 : static_cast<int>(members[0][0].rows()); }
  const CMatrix& operator()(int mu, int a) const {
    return members.at(static_cast<std::size_t>(mu)).at(static_cast<std::size_t>(a));
  }
  /// sum_a rho~^a_mu
  CMatrix reduced(int mu) const;

  /// Throws std::invalid_argument naming the first violated invariant: members
  /// PSD (1e-10), sum_a Tr = 1 per setting (1e-9), sum_a identical across
  /// settings (1e-9).
  void validate() const;
};

/// Response table p(a | mu, xi), indexed [xi][mu][a].
class ResponseFunction {
 public:
  ResponseFunction(int hidden, int settings, int outcomes);
  ResponseFunction(int hidden, int settings, int outcomes, std::vector<double> table);

  int hidden() const { return hidden_; }
  int settings() const { return settings_; }
  int outcomes() const { return outcomes_; }
  double& operator()(int xi, int mu, int a) { return table_[index(xi, mu, a)]; }
  double operator()(int xi, int mu, int a) const { return table_[index(xi, mu, a)]; }

  /// Every entry in [0,1] and sum_a p = 1 within 1e-12 for each (mu, xi).
  void validate() const;

 private:
  std::size_t index(int xi, int mu, int a) const {
    return (static_cast<std::size_t>(xi) * settings_ + mu) * outcomes_ + a;
  }
  int hidden_, settings_, outcomes_;
  std::vector<double> table_;
};

/// Diagonal correlations of a T-state.
struct TState {
  std::array<double, 3> t{0, 0, 0};
};

/// Swap operator V|ij> = |ji>.
CMatrix flip_operator(int d);
/// |psi_+> = sum_i |ii> / sqrt(d)
CVector max_entangled(int d);

DensityMatrix werner_state(int d, double w);
DensityMatrix isotropic_state(int d, double eta);
DensityMatrix t_state(const TState& t);
DensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix pure_state(const CVector& psi);

/// Smallest eigenvalue of the partial transpose on B.
double ppt_min_eigenvalue(const DensityMatrix& w);

/// rho~^a_mu = Tr_A[(Pi^a_mu (x) I) W].
Assemblage assemblage_from_state(const DensityMatrix& w, const MeasurementSet& alice);

/// rho~^a_mu = sum_xi Omega(xi) p(a|mu,xi) rho_xi.
Assemblage lhs_assemblage(const std::vector<std::pair<double, DensityMatrix>>& ensemble,
                          const ResponseFunction& responses);

/// Two-qubit correlation matrix T_jk = Tr[W sigma_j (x) sigma_k].
Eigen::Matrix3d correlation_matrix(const DensityMatrix& w);
/// Bloch vectors of the reduced states of a two-qubit state.
std::pair<BlochVector, BlochVector> local_bloch_vectors(const DensityMatrix& w);

// Random generators used by tests, the acceptance suite and the CLI.
DensityMatrix random_density_matrix(int d, Rng& rng, int rank = -1);
DensityMatrix random_pure_density(int d, Rng& rng);
/// Mixture of `terms` random product states on C^d (x) C^d.
DensityMatrix random_separable_state(int d, int terms, Rng& rng);
/// Uniform over the tetrahedron of valid T-states.
TState random_valid_tstate(Rng& rng);

}  // namespace steerlab
