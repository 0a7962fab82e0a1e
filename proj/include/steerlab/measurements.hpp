// Weighted rank-one projective measurement sets.
#pragma once

#include "steerlab/qmat.hpp"

#include <vector>

namespace steerlab {

/// One measurement setting: weight q and an orthonormal basis stored as the
/// columns of `basis` (column a is |phi^a>).
struct Setting {
  double weight = 0;
  CMatrix basis;

  CMatrix projector(Eigen::Index a) const { return basis.col(a) * basis.col(a).adjoint(); }
  Eigen::Index outcomes() const { return basis.cols(); }
};

class MeasurementSet {
 public:
  MeasurementSet() = default;
  /// Validates: weights non-negative and summing to 1 (1e-12), every basis
  /// orthonormal (1e-10).
  MeasurementSet(int dim, std::vector<Setting> settings);

  /// Equal weights 1/N.
  static MeasurementSet uniform(int dim, const std::vector<CMatrix>& bases);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(settings_.size()); }
  const Setting& operator[](int mu) const { return settings_.at(static_cast<std::size_t>(mu)); }
  const std::vector<Setting>& settings() const { return settings_; }
  double weight(int mu) const { return (*this)[mu].weight; }
  CMatrix projector(int mu, int a) const { return (*this)[mu].projector(a); }

  /// Same weights, every basis vector complex conjugated.
  MeasurementSet conjugate() const;
  MeasurementSet with_weights(const std::vector<double>& weights) const;

 private:
  int dim_ = 0;
  std::vector<Setting> settings_;
};

/// U with |phi^b_2> = sum_a U_ba |phi^a_1>.
struct UnitaryRelation {
  CMatrix u;
  double max_abs_entry() const { return u.cwiseAbs().maxCoeff(); }
};

/// Computational basis plus the discrete Fourier basis, equal weights.
MeasurementSet mub_pair(int d);

/// Discrete Fourier matrix F_jk = exp(2 pi i jk / d) / sqrt(d).
CMatrix fourier_matrix(int d);

/// Two-outcome setting with Phi^+ = (I + n.sigma)/2 (column 0) and
/// Phi^- = (I - n.sigma)/2 (column 1). Throws for non-unit n.
Setting bloch_measurement(const BlochVector& n, double weight);

MeasurementSet qubit_measurements(const std::vector<BlochVector>& directions,
                                  const std::vector<double>& weights);

/// Bloch direction of the "+" outcome of each setting of a qubit set.
std::vector<BlochVector> bloch_directions(const MeasurementSet& set);

UnitaryRelation unitary_relation(const MeasurementSet& two_settings);

/// N Haar-random bases. With random_weights the weights are a uniform draw
/// from the simplex, otherwise 1/N.
MeasurementSet haar_measurements(int d, int n_settings, Rng& rng, bool random_weights = false);

}  // namespace steerlab
