#include "steerlab/measurements.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace steerlab {

MeasurementSet::MeasurementSet(int dim, std::vector<Setting> settings)
    : dim_(dim), settings_(std::move(settings)) {
  if (dim_ < 1) throw std::invalid_argument("MeasurementSet: dimension must be >= 1");
  if (settings_.empty()) throw std::invalid_argument("MeasurementSet: no settings");
  double total = 0;
  for (std::size_t mu = 0; mu < settings_.size(); ++mu) {
    const auto& s = settings_[mu];
    if (!(s.weight >= 0)) throw std::invalid_argument("MeasurementSet: negative weight");
    total += s.weight;
    if (s.basis.rows() != dim_ || s.basis.cols() != dim_) {
      throw std::invalid_argument("MeasurementSet: setting " + std::to_string(mu) +
                                  " is not a d x d basis");
    }
    if (!s.basis.allFinite()) throw std::invalid_argument("MeasurementSet: non-finite basis");
    const double gram_err = (s.basis.adjoint() * s.basis - CMatrix::Identity(dim_, dim_)).norm();
    if (gram_err > 1e-10) {
      throw std::invalid_argument("MeasurementSet: setting " + std::to_string(mu) +
                                  " is not orthonormal (Gram error " + std::to_string(gram_err) +
                                  ")");
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("MeasurementSet: weights sum to " + std::to_string(total));
  }
}

MeasurementSet MeasurementSet::uniform(int dim, const std::vector<CMatrix>& bases) {
  std::vector<Setting> settings;
  settings.reserve(bases.size());
  for (const auto& b : bases) settings.push_back({1.0 / static_cast<double>(bases.size()), b});
  return {dim, std::move(settings)};
}

MeasurementSet MeasurementSet::conjugate() const {
  auto settings = settings_;
  for (auto& s : settings) s.basis = s.basis.conjugate().eval();
  return {dim_, std::move(settings)};
}

MeasurementSet MeasurementSet::with_weights(const std::vector<double>& weights) const {
  if (weights.size() != settings_.size())
    throw std::invalid_argument("MeasurementSet::with_weights: wrong number of weights");
  auto settings = settings_;
  for (std::size_t mu = 0; mu < settings.size(); ++mu) settings[mu].weight = weights[mu];
  return {dim_, std::move(settings)};
}

CMatrix fourier_matrix(int d) {
  CMatrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      f(j, k) = std::polar(norm, 2.0 * std::numbers::pi * j * k / d);
  return f;
}

MeasurementSet mub_pair(int d) {
  if (d < 2) throw std::invalid_argument("mub_pair: d must be >= 2");
  return MeasurementSet::uniform(d, {CMatrix::Identity(d, d), fourier_matrix(d)});
}

Setting bloch_measurement(const BlochVector& n, double weight) {
  if (!n.is_unit()) {
    throw std::invalid_argument("bloch_measurement: direction has norm " + std::to_string(n.norm()));
  }
  const double theta = std::acos(std::clamp(n.z, -1.0, 1.0));
  const double phi = std::atan2(n.y, n.x);
  const Complex e = std::polar(1.0, phi);
  CMatrix basis(2, 2);
  basis(0, 0) = std::cos(theta / 2);
  basis(1, 0) = e * std::sin(theta / 2);
  basis(0, 1) = std::sin(theta / 2);
  basis(1, 1) = -e * std::cos(theta / 2);
  return {weight, basis};
}

MeasurementSet qubit_measurements(const std::vector<BlochVector>& directions,
                                  const std::vector<double>& weights) {
  if (directions.size() != weights.size())
    throw std::invalid_argument("qubit_measurements: directions and weights differ in length");
  std::vector<Setting> settings;
  for (std::size_t mu = 0; mu < directions.size(); ++mu)
    settings.push_back(bloch_measurement(directions[mu], weights[mu]));
  return {2, std::move(settings)};
}

std::vector<BlochVector> bloch_directions(const MeasurementSet& set) {
  if (set.dim() != 2) throw std::invalid_argument("bloch_directions: not a qubit measurement set");
  std::vector<BlochVector> out;
  for (const auto& s : set.settings()) {
    const CMatrix p = s.projector(0);
    out.push_back({(p * pauli(1)).trace().real(), (p * pauli(2)).trace().real(),
                   (p * pauli(3)).trace().real()});
  }
  return out;
}

UnitaryRelation unitary_relation(const MeasurementSet& two_settings) {
  if (two_settings.size() != 2) {
    throw std::invalid_argument("unitary_relation: expected 2 settings, got " +
                                std::to_string(two_settings.size()));
  }
  const CMatrix& b1 = two_settings[0].basis;
  const CMatrix& b2 = two_settings[1].basis;
  // U_ba = <phi^a_1|phi^b_2>
  UnitaryRelation rel{(b1.adjoint() * b2).transpose()};
  const CMatrix rebuilt = b1 * rel.u.transpose();
  if ((rebuilt - b2).norm() > 1e-10)
    throw std::logic_error("unitary_relation: reconstruction failed");
  return rel;
}

MeasurementSet haar_measurements(int d, int n_settings, Rng& rng, bool random_weights) {
  if (n_settings < 1) throw std::invalid_argument("haar_measurements: need at least one setting");
  std::vector<Setting> settings;
  std::vector<double> w(static_cast<std::size_t>(n_settings), 1.0 / n_settings);
  if (random_weights) {
    std::exponential_distribution<double> expo(1.0);
    double total = 0;
    for (auto& x : w) total += (x = expo(rng));
    for (auto& x : w) x /= total;
    // Absorb round-off so the weights sum to 1 within the set's tolerance.
    double rest = 1.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) rest -= w[i];
    w.back() = rest;
  }
  for (int mu = 0; mu < n_settings; ++mu)
    settings.push_back({w[static_cast<std::size_t>(mu)], haar_unitary(d, rng)});
  return {d, std::move(settings)};
}

}  // namespace steerlab
