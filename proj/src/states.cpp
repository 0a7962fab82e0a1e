#include "steerlab/states.hpp"

#include <stdexcept>
#include <string>

namespace steerlab {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kAssemblageTol = 1e-9;

int perfect_sqrt(int n) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) throw std::invalid_argument("dimension " + std::to_string(n) + " is not a square");
  return d;
}

}  // namespace

DensityMatrix::DensityMatrix(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
  if (!m.allFinite()) throw std::invalid_argument("DensityMatrix: non-finite entries");
  if (hermiticity_defect(m) > kStateTol * std::max(1.0, m.norm()))
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kStateTol)
    throw std::invalid_argument("DensityMatrix: trace is " + std::to_string(tr));
  const auto eig = hermitian_eig(m);
  if (eig.min_eigenvalue() < -kStateTol) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(eig.min_eigenvalue()));
  }
  if (eig.min_eigenvalue() < 0) {
    RVector clipped = eig.eigenvalues.cwiseMax(0.0);
    clipped /= clipped.sum();
    m_ = eig.eigenvectors * clipped.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
  } else {
    m_ = (m + m.adjoint()) / 2.0;
  }
}

int DensityMatrix::local_dim() const { return perfect_sqrt(dim()); }

bool DensityMatrix::is_valid(const CMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1 || !m.allFinite()) return false;
  if (hermiticity_defect(m) > tol * std::max(1.0, m.norm())) return false;
  if (std::abs(m.trace().real() - 1.0) > tol) return false;
  return hermitian_eig(m).min_eigenvalue() >= -tol;
}

CMatrix Assemblage::reduced(int mu) const {
  CMatrix sum = CMatrix::Zero(dim(), dim());
  for (const auto& m : members.at(static_cast<std::size_t>(mu))) sum += m;
  return sum;
}

void Assemblage::validate() const {
  if (members.empty()) throw std::invalid_argument("Assemblage: no settings");
  const int n = dim();
  CMatrix reference;
  for (int mu = 0; mu < settings(); ++mu) {
    const auto& row = members[static_cast<std::size_t>(mu)];
    if (static_cast<int>(row.size()) != outcomes())
      throw std::invalid_argument("Assemblage: ragged outcome count");
    double total = 0;
    for (std::size_t a = 0; a < row.size(); ++a) {
      const CMatrix& m = row[a];
      if (m.rows() != n || m.cols() != n) throw std::invalid_argument("Assemblage: ragged member dims");
      if (hermiticity_defect(m) > kStateTol) throw std::invalid_argument("Assemblage: non-Hermitian member");
      if (hermitian_eig(m).min_eigenvalue() < -kStateTol) {
        throw std::invalid_argument("Assemblage: member (" + std::to_string(mu) + "," +
                                    std::to_string(a) + ") is not PSD");
      }
      total += m.trace().real();
    }
    if (std::abs(total - 1.0) > kAssemblageTol) {
      throw std::invalid_argument("Assemblage: setting " + std::to_string(mu) +
                                  " has total weight " + std::to_string(total));
    }
    const CMatrix red = reduced(mu);
    if (mu == 0) {
      reference = red;
    } else if ((red - reference).norm() > kAssemblageTol) {
      throw std::invalid_argument("Assemblage: reduced state of setting " + std::to_string(mu) +
                                  " differs (signalling)");
    }
  }
}

ResponseFunction::ResponseFunction(int hidden, int settings, int outcomes)
    : hidden_(hidden), settings_(settings), outcomes_(outcomes),
      table_(static_cast<std::size_t>(hidden) * settings * outcomes, 0.0) {
  if (hidden < 1 || settings < 1 || outcomes < 1)
    throw std::invalid_argument("ResponseFunction: dimensions must be positive");
}

ResponseFunction::ResponseFunction(int hidden, int settings, int outcomes, std::vector<double> table)
    : ResponseFunction(hidden, settings, outcomes) {
  if (table.size() != table_.size()) throw std::invalid_argument("ResponseFunction: table size mismatch");
  table_ = std::move(table);
}

void ResponseFunction::validate() const {
  for (int xi = 0; xi < hidden_; ++xi) {
    for (int mu = 0; mu < settings_; ++mu) {
      double total = 0;
      for (int a = 0; a < outcomes_; ++a) {
        const double p = (*this)(xi, mu, a);
        if (!(p >= 0.0 && p <= 1.0))
          throw std::invalid_argument("ResponseFunction: probability outside [0,1]");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("ResponseFunction: p(.|" + std::to_string(mu) + "," +
                                    std::to_string(xi) + ") sums to " + std::to_string(total));
      }
    }
  }
}

CMatrix flip_operator(int d) {
  CMatrix v = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v(j * d + i, i * d + j) = 1.0;
  return v;
}

CVector max_entangled(int d) {
  CVector psi = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return psi;
}

DensityMatrix werner_state(int d, double w) {
  if (d < 2) throw std::invalid_argument("werner_state: d must be >= 2");
  if (!(w >= 0.0 && w <= 1.0))
    throw std::invalid_argument("werner_state: w = " + std::to_string(w) + " outside [0,1]");
  const double dd = d;
  const CMatrix id = CMatrix::Identity(d * d, d * d);
  return DensityMatrix((dd - 1 + w) / (dd - 1) * id / (dd * dd) - w / (dd - 1) * flip_operator(d) / dd);
}

DensityMatrix isotropic_state(int d, double eta) {
  if (d < 2) throw std::invalid_argument("isotropic_state: d must be >= 2");
  const double dd = d;
  if (!(eta >= -1.0 / (dd * dd - 1) - 1e-15 && eta <= 1.0))
    throw std::invalid_argument("isotropic_state: eta = " + std::to_string(eta) + " is unphysical");
  const CVector psi = max_entangled(d);
  return DensityMatrix((1 - eta) * CMatrix::Identity(d * d, d * d) / (dd * dd) +
                       eta * psi * psi.adjoint());
}

DensityMatrix t_state(const TState& t) {
  CMatrix m = CMatrix::Identity(4, 4);
  for (int j = 0; j < 3; ++j) m += t.t[static_cast<std::size_t>(j)] * kron(pauli(j + 1), pauli(j + 1));
  m /= 4.0;
  if (!DensityMatrix::is_valid(m)) {
    throw std::invalid_argument("t_state: correlations (" + std::to_string(t.t[0]) + ", " +
                                std::to_string(t.t[1]) + ", " + std::to_string(t.t[2]) +
                                ") do not give a positive semidefinite state");
  }
  return DensityMatrix(m);
}

DensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

DensityMatrix pure_state(const CVector& psi) {
  const double n = psi.norm();
  if (n == 0) throw std::invalid_argument("pure_state: zero vector");
  const CVector u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

double ppt_min_eigenvalue(const DensityMatrix& w) {
  const int d = w.local_dim();
  return hermitian_eig(partial_transpose_b(w.matrix(), d, d)).min_eigenvalue();
}

Assemblage assemblage_from_state(const DensityMatrix& w, const MeasurementSet& alice) {
  const int d = alice.dim();
  if (w.dim() != d * d) {
    throw std::invalid_argument("assemblage_from_state: state has dimension " +
                                std::to_string(w.dim()) + ", measurements need " +
                                std::to_string(d * d));
  }
  const CMatrix id = CMatrix::Identity(d, d);
  Assemblage out;
  out.members.resize(static_cast<std::size_t>(alice.size()));
  for (int mu = 0; mu < alice.size(); ++mu) {
    for (int a = 0; a < d; ++a) {
      const CMatrix op = kron(alice.projector(mu, a), id) * w.matrix();
      out.members[static_cast<std::size_t>(mu)].push_back(partial_trace(op, d, d, Subsystem::A));
    }
  }
  return out;
}

Assemblage lhs_assemblage(const std::vector<std::pair<double, DensityMatrix>>& ensemble,
                          const ResponseFunction& responses) {
  responses.validate();
  if (ensemble.empty()) throw std::invalid_argument("lhs_assemblage: empty ensemble");
  if (static_cast<int>(ensemble.size()) != responses.hidden())
    throw std::invalid_argument("lhs_assemblage: ensemble and response table disagree on |xi|");
  double total = 0;
  for (const auto& [weight, rho] : ensemble) {
    if (!(weight >= 0)) throw std::invalid_argument("lhs_assemblage: negative weight");
    total += weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("lhs_assemblage: weights sum to " + std::to_string(total));

  const int n = ensemble.front().second.dim();
  Assemblage out;
  out.members.assign(static_cast<std::size_t>(responses.settings()),
                     std::vector<CMatrix>(static_cast<std::size_t>(responses.outcomes()),
                                          CMatrix::Zero(n, n)));
  for (int xi = 0; xi < responses.hidden(); ++xi) {
    const auto& [weight, rho] = ensemble[static_cast<std::size_t>(xi)];
    if (rho.dim() != n) throw std::invalid_argument("lhs_assemblage: mixed state dimensions");
    for (int mu = 0; mu < responses.settings(); ++mu) {
      for (int a = 0; a < responses.outcomes(); ++a) {
        const double p = responses(xi, mu, a);
        if (p != 0.0) out.members[static_cast<std::size_t>(mu)][static_cast<std::size_t>(a)] += weight * p * rho.matrix();
      }
    }
  }
  return out;
}

Eigen::Matrix3d correlation_matrix(const DensityMatrix& w) {
  if (w.dim() != 4) throw std::invalid_argument("correlation_matrix: not a two-qubit state");
  Eigen::Matrix3d t;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      t(j, k) = (w.matrix() * kron(pauli(j + 1), pauli(k + 1))).trace().real();
  return t;
}

std::pair<BlochVector, BlochVector> local_bloch_vectors(const DensityMatrix& w) {
  if (w.dim() != 4) throw std::invalid_argument("local_bloch_vectors: not a two-qubit state");
  const CMatrix ra = partial_trace(w.matrix(), 2, 2, Subsystem::B);
  const CMatrix rb = partial_trace(w.matrix(), 2, 2, Subsystem::A);
  auto bloch = [](const CMatrix& r) {
    return BlochVector{(r * pauli(1)).trace().real(), (r * pauli(2)).trace().real(),
                       (r * pauli(3)).trace().real()};
  };
  return {bloch(ra), bloch(rb)};
}

DensityMatrix random_density_matrix(int d, Rng& rng, int rank) {
  if (rank < 1 || rank > d) rank = d;
  const CMatrix g = ginibre(d, rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

DensityMatrix random_pure_density(int d, Rng& rng) { return pure_state(haar_state(d, rng)); }

DensityMatrix random_separable_state(int d, int terms, Rng& rng) {
  if (terms < 1) throw std::invalid_argument("random_separable_state: need at least one term");
  std::exponential_distribution<double> expo(1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<double> w(static_cast<std::size_t>(terms));
  double total = 0;
  for (auto& x : w) total += (x = expo(rng));
  CMatrix m = CMatrix::Zero(d * d, d * d);
  for (int k = 0; k < terms; ++k) {
    // Mix pure and mixed local factors so both extremal and interior products occur.
    const DensityMatrix a = coin(rng) ? random_pure_density(d, rng) : random_density_matrix(d, rng);
    const DensityMatrix b = coin(rng) ? random_pure_density(d, rng) : random_density_matrix(d, rng);
    m += w[static_cast<std::size_t>(k)] / total * kron(a.matrix(), b.matrix());
  }
  return DensityMatrix(m);
}

TState random_valid_tstate(Rng& rng) {
  static constexpr std::array<std::array<double, 3>, 4> kVertices{
      {{-1, -1, -1}, {-1, 1, 1}, {1, -1, 1}, {1, 1, -1}}};
  std::exponential_distribution<double> expo(1.0);
  std::array<double, 4> lambda{};
  double total = 0;
  for (auto& x : lambda) total += (x = expo(rng));
  TState out;
  for (std::size_t v = 0; v < 4; ++v)
    for (std::size_t j = 0; j < 3; ++j) out.t[j] += lambda[v] / total * kVertices[v][j];
  return out;
}

}  // namespace steerlab
