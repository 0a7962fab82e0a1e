// Kraus channels, process matrices and the decomposition
// W = (I (x) eps)(|sqrt(rho_A)>><<sqrt(rho_A)|).
#pragma once

#include "steerlab/qmat.hpp"
#include "steerlab/states.hpp"

#include <vector>

namespace steerlab {

/// Trace-preserving Kraus channel on C^d: sum_m K_m^dagger K_m = I within 1e-9.
class QuantumChannel {
 public:
  QuantumChannel() = default;
  QuantumChannel(int dim, std::vector<CMatrix> kraus);

  int dim() const { return dim_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }

  /// eps(A) for an arbitrary operator A.
  CMatrix apply(const CMatrix& a) const;
  DensityMatrix apply(const DensityMatrix& rho) const;
  /// (I (x) eps)(W) for an operator on C^d_A (x) C^d.
  CMatrix apply_to_second(const CMatrix& w, int d_a) const;

 private:
  int dim_ = 0;
  std::vector<CMatrix> kraus_;
};

/// Measure-and-prepare channel eps(rho) = sum_y rho_y Tr[M_y rho].
struct EbChannel {
  std::vector<CMatrix> effects;
  std::vector<DensityMatrix> preparations;

  int dim() const { return effects.empty() ? 0 : static_cast<int>(effects.front().rows()); }
  /// Effects PSD and summing to I within 1e-9, one preparation per effect.
  void validate() const;
};

/// lambda = sum_m K_m (x) conj(K_m), so |eps(rho)>> = lambda |rho>>.
CMatrix process_matrix(const QuantumChannel& channel);
/// lambda = sum_y |rho_y>><<M_y|
CMatrix process_matrix(const EbChannel& eb);
/// Largest deviation of <<I| lambda from <<I|.
double trace_preservation_defect(const CMatrix& process);

QuantumChannel eb_channel_as_kraus(const EbChannel& eb);

QuantumChannel identity_channel(int d);
/// eps_eta(A) = eta A + (1 - eta) Tr(A) I/d, -1/(d^2-1) <= eta <= 1.
QuantumChannel depolarizing_channel(int d, double eta);
QuantumChannel amplitude_damping_channel(double gamma);
/// Kraus form of the channel whose Choi matrix sum_ij |i><j| (x) eps(|i><j|) is `choi`.
QuantumChannel channel_from_choi(const CMatrix& choi, int d);

struct StateDecomposition {
  CMatrix sqrt_rho_a;
  QuantumChannel channel;
  int rank_rho_a = 0;

  /// (I (x) eps)(|sqrt(rho_A)>><<sqrt(rho_A)|)
  CMatrix reconstruct() const;
};

/// Kraus operators B_m = sqrt(lambda_m) Gamma_m^T (sqrt(rho_A^T))^+ from the
/// spectral decomposition of W; for rank-deficient rho_A the projector onto
/// the kernel of rho_A^T completes the channel.
StateDecomposition decompose_state(const DensityMatrix& w);

/// f = <psi_+|(I (x) eps)(P_+)|psi_+>, computed as Tr(lambda)/d^2.
double entanglement_fidelity(const QuantumChannel& channel);
/// Same quantity through the output state directly.
double entanglement_fidelity_direct(const QuantumChannel& channel);
double entanglement_fidelity(const EbChannel& eb);

/// Monte Carlo average of (U* (x) U) W (U* (x) U)^dagger over Haar U.
DensityMatrix twirl(const DensityMatrix& w, std::uint64_t samples, std::uint64_t seed);

/// Random measure-and-prepare channel with `outcomes` effects.
EbChannel random_eb_channel(int d, int outcomes, Rng& rng);
/// Random channel from a Haar isometry C^d -> C^d (x) C^env.
QuantumChannel random_channel(int d, int env, Rng& rng);

}  // namespace steerlab
