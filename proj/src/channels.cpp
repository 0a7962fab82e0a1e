#include "steerlab/channels.hpp"

#include "steerlab/parallel.hpp"

#include <stdexcept>
#include <string>

namespace steerlab {

namespace {

constexpr double kTpTol = 1e-9;
constexpr double kRankTol = 1e-10;

template <typename Fn>
CMatrix apply_kraus(const std::vector<CMatrix>& kraus, Fn&& lift, const CMatrix& x) {
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (const auto& k : kraus) {
    const CMatrix big = lift(k);
    out.noalias() += big * x * big.adjoint();
  }
  return out;
}

}  // namespace

QuantumChannel::QuantumChannel(int dim, std::vector<CMatrix> kraus)
    : dim_(dim), kraus_(std::move(kraus)) {
  if (dim_ < 1 || kraus_.empty()) throw std::invalid_argument("QuantumChannel: empty channel");
  CMatrix sum = CMatrix::Zero(dim_, dim_);
  for (const auto& k : kraus_) {
    if (k.rows() != dim_ || k.cols() != dim_)
      throw std::invalid_argument("QuantumChannel: Kraus operator has wrong shape");
    if (!k.allFinite()) throw std::invalid_argument("QuantumChannel: non-finite Kraus operator");
    sum.noalias() += k.adjoint() * k;
  }
  const double defect = (sum - CMatrix::Identity(dim_, dim_)).norm();
  if (defect > kTpTol) {
    throw std::invalid_argument("QuantumChannel: not trace preserving (defect " +
                                std::to_string(defect) + ")");
  }
}

CMatrix QuantumChannel::apply(const CMatrix& a) const {
  if (a.rows() != dim_ || a.cols() != dim_)
    throw std::invalid_argument("QuantumChannel::apply: dimension mismatch");
  return apply_kraus(kraus_, [](const CMatrix& k) { return k; }, a);
}

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply(rho.matrix()));
}

CMatrix QuantumChannel::apply_to_second(const CMatrix& w, int d_a) const {
  if (w.rows() != d_a * dim_ || w.cols() != d_a * dim_)
    throw std::invalid_argument("QuantumChannel::apply_to_second: dimension mismatch");
  const CMatrix id = CMatrix::Identity(d_a, d_a);
  return apply_kraus(kraus_, [&](const CMatrix& k) { return kron(id, k); }, w);
}

void EbChannel::validate() const {
  if (effects.empty()) throw std::invalid_argument("EbChannel: no effects");
  if (effects.size() != preparations.size())
    throw std::invalid_argument("EbChannel: effect and preparation counts differ");
  const int d = dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (std::size_t y = 0; y < effects.size(); ++y) {
    const CMatrix& m = effects[y];
    if (m.rows() != d || m.cols() != d || preparations[y].dim() != d)
      throw std::invalid_argument("EbChannel: inconsistent dimensions");
    if (hermiticity_defect(m) > kTpTol) throw std::invalid_argument("EbChannel: effect not Hermitian");
    if (hermitian_eig(m).min_eigenvalue() < -kTpTol)
      throw std::invalid_argument("EbChannel: effect " + std::to_string(y) + " is not PSD");
    sum += m;
  }
  if ((sum - CMatrix::Identity(d, d)).norm() > kTpTol)
    throw std::invalid_argument("EbChannel: effects do not sum to the identity");
}

CMatrix process_matrix(const QuantumChannel& channel) {
  const int d = channel.dim();
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (const auto& k : channel.kraus()) out += kron(k, k.conjugate());
  return out;
}

CMatrix process_matrix(const EbChannel& eb) {
  eb.validate();
  const int d = eb.dim();
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (std::size_t y = 0; y < eb.effects.size(); ++y)
    out += vectorize(eb.preparations[y].matrix()) * vectorize(eb.effects[y]).adjoint();
  return out;
}

double trace_preservation_defect(const CMatrix& process) {
  const auto d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(process.rows()))));
  const CVector id = vectorize(CMatrix::Identity(d, d));
  return (id.adjoint() * process - id.adjoint()).cwiseAbs().maxCoeff();
}

QuantumChannel eb_channel_as_kraus(const EbChannel& eb) {
  eb.validate();
  const int d = eb.dim();
  std::vector<CMatrix> kraus;
  for (std::size_t y = 0; y < eb.effects.size(); ++y) {
    const auto effect = hermitian_eig(eb.effects[y]);
    const auto prep = hermitian_eig(eb.preparations[y].matrix());
    for (int k = 0; k < d; ++k) {
      const double mk = effect.eigenvalues(k);
      if (mk <= 0) continue;
      for (int l = 0; l < d; ++l) {
        const double rl = prep.eigenvalues(l);
        if (rl <= 0) continue;
        kraus.push_back(std::sqrt(mk * rl) * prep.eigenvectors.col(l) *
                        effect.eigenvectors.col(k).adjoint());
      }
    }
  }
  return {d, std::move(kraus)};
}

QuantumChannel identity_channel(int d) { return {d, {CMatrix::Identity(d, d)}}; }

QuantumChannel channel_from_choi(const CMatrix& choi, int d) {
  if (choi.rows() != d * d || choi.cols() != d * d)
    throw std::invalid_argument("channel_from_choi: Choi matrix must be d^2 x d^2");
  const auto eig = hermitian_eig(choi);
  const double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  std::vector<CMatrix> kraus;
  for (int m = 0; m < d * d; ++m) {
    const double lambda = eig.eigenvalues(m);
    if (lambda < -1e-9 * scale) throw std::invalid_argument("channel_from_choi: map is not completely positive");
    if (lambda <= kRankTol * scale) continue;
    // (I (x) K)|I>> = |K^T>>, so the eigenvector |v>> = |Gamma>> gives K = Gamma^T.
    kraus.push_back(std::sqrt(lambda) * devectorize(eig.eigenvectors.col(m)).transpose());
  }
  return {d, std::move(kraus)};
}

QuantumChannel depolarizing_channel(int d, double eta) {
  if (d < 2) throw std::invalid_argument("depolarizing_channel: d must be >= 2");
  const double dd = d;
  if (!(eta >= -1.0 / (dd * dd - 1) - 1e-15 && eta <= 1.0))
    throw std::invalid_argument("depolarizing_channel: eta outside the completely positive range");
  if (eta >= 0) {
    std::vector<CMatrix> kraus{std::sqrt(eta) * CMatrix::Identity(d, d)};
    const double c = std::sqrt((1 - eta) / dd);
    if (c > 0) {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          CMatrix e = CMatrix::Zero(d, d);
          e(i, j) = c;
          kraus.push_back(e);
        }
    }
    if (eta == 1.0) kraus.resize(1);
    return {d, std::move(kraus)};
  }
  const CVector psi = max_entangled(d);
  const CMatrix iso = (1 - eta) * CMatrix::Identity(d * d, d * d) / (dd * dd) + eta * psi * psi.adjoint();
  return channel_from_choi(dd * iso, d);
}

QuantumChannel amplitude_damping_channel(double gamma) {
  if (!(gamma >= 0 && gamma <= 1)) throw std::invalid_argument("amplitude_damping_channel: gamma outside [0,1]");
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1;
  k0(1, 1) = std::sqrt(1 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return {2, {k0, k1}};
}

CMatrix StateDecomposition::reconstruct() const {
  const CVector psi = vectorize(sqrt_rho_a);
  return channel.apply_to_second(psi * psi.adjoint(), channel.dim());
}

StateDecomposition decompose_state(const DensityMatrix& w) {
  const int d = w.local_dim();
  const CMatrix rho_a = partial_trace(w.matrix(), d, d, Subsystem::B);
  const CMatrix rho_a_t = rho_a.transpose();
  const auto eig_a = hermitian_eig(rho_a_t);

  // Pseudo-inverse square root of rho_A^T on its support, and the kernel projector.
  CMatrix inv_sqrt = CMatrix::Zero(d, d);
  CMatrix kernel = CMatrix::Zero(d, d);
  int rank = 0;
  for (int i = 0; i < d; ++i) {
    const auto v = eig_a.eigenvectors.col(i);
    if (eig_a.eigenvalues(i) > kRankTol) {
      inv_sqrt += v * v.adjoint() / std::sqrt(eig_a.eigenvalues(i));
      ++rank;
    } else {
      kernel += v * v.adjoint();
    }
  }

  const auto eig_w = hermitian_eig(w.matrix());
  std::vector<CMatrix> kraus;
  for (int m = 0; m < d * d; ++m) {
    const double lambda = eig_w.eigenvalues(m);
    if (lambda <= kRankTol) continue;
    const CMatrix gamma = devectorize(eig_w.eigenvectors.col(m));
    kraus.push_back(std::sqrt(lambda) * gamma.transpose() * inv_sqrt);
  }
  if (rank < d) kraus.push_back(kernel);

  // The kept eigenvalues drop a tail below kRankTol; re-normalize the Kraus
  // operators so the channel is trace preserving on the nose.
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  const CMatrix fix = hermitian_function(sum, [](double x) { return x > 0 ? 1.0 / std::sqrt(x) : 0.0; });
  for (auto& k : kraus) k = (k * fix).eval();

  return {psd_sqrt(rho_a), QuantumChannel(d, std::move(kraus)), rank};
}

double entanglement_fidelity(const QuantumChannel& channel) {
  const double d = channel.dim();
  return process_matrix(channel).trace().real() / (d * d);
}

double entanglement_fidelity_direct(const QuantumChannel& channel) {
  const int d = channel.dim();
  const CVector psi = max_entangled(d);
  const CMatrix out = channel.apply_to_second(psi * psi.adjoint(), d);
  return (psi.adjoint() * out * psi)(0).real();
}

double entanglement_fidelity(const EbChannel& eb) {
  const double d = eb.dim();
  return process_matrix(eb).trace().real() / (d * d);
}

DensityMatrix twirl(const DensityMatrix& w, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("twirl: need at least one sample");
  const int d = w.local_dim();
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(samples, kSampleChunks));
  const auto parts = map_chunks<CMatrix>(chunks, [&](std::size_t c) {
    Rng rng(stream_seed(seed, c));
    CMatrix acc = CMatrix::Zero(d * d, d * d);
    const auto [begin, end] = chunk_range(samples, chunks, c);
    for (std::uint64_t s = begin; s < end; ++s) {
      const CMatrix u = haar_unitary(d, rng);
      const CMatrix big = kron(u.conjugate(), u);
      acc.noalias() += big * w.matrix() * big.adjoint();
    }
    return acc;
  });
  CMatrix total = CMatrix::Zero(d * d, d * d);
  for (const auto& p : parts) total += p;
  total /= static_cast<double>(samples);
  return DensityMatrix(total);
}

EbChannel random_eb_channel(int d, int outcomes, Rng& rng) {
  if (outcomes < 1) throw std::invalid_argument("random_eb_channel: need at least one outcome");
  std::vector<CMatrix> raw;
  CMatrix sum;
  std::uniform_int_distribution<int> rank_dist(1, d);
  // Redraw until the raw effects span C^d, so S^(-1/2) exists.
  do {
    raw.clear();
    sum = CMatrix::Zero(d, d);
    for (int y = 0; y < outcomes; ++y) {
      const CMatrix g = ginibre(d, rank_dist(rng), rng);
      raw.push_back(g * g.adjoint());
      sum += raw.back();
    }
  } while (hermitian_eig(sum).min_eigenvalue() < 1e-6 * sum.trace().real());
  const CMatrix s = hermitian_function(sum, [](double x) { return 1.0 / std::sqrt(x); });
  EbChannel eb;
  std::uniform_int_distribution<int> coin(0, 1);
  for (int y = 0; y < outcomes; ++y) {
    CMatrix m = s * raw[static_cast<std::size_t>(y)] * s;
    eb.effects.push_back((m + m.adjoint()) / 2.0);
    eb.preparations.push_back(coin(rng) ? random_pure_density(d, rng) : random_density_matrix(d, rng));
  }
  return eb;
}

QuantumChannel random_channel(int d, int env, Rng& rng) {
  // Columns of a Haar unitary on C^(d*env) give an isometry V; K_e = (I (x) <e|) V.
  const CMatrix u = haar_unitary(d * env, rng);
  const CMatrix v = u.leftCols(d);
  std::vector<CMatrix> kraus;
  for (int e = 0; e < env; ++e) {
    CMatrix k(d, d);
    for (int i = 0; i < d; ++i) k.row(i) = v.row(i * env + e);
    kraus.push_back(k);
  }
  return {d, std::move(kraus)};
}

}  // namespace steerlab
