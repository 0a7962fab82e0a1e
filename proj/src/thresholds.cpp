#include "steerlab/thresholds.hpp"

#include "steerlab/parallel.hpp"

#include <limits>
#include <string>

namespace steerlab {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kSlack = 1e-9;

DeterministicAssignment decode(std::uint64_t index, int d, int n_settings) {
  DeterministicAssignment k;
  k.k.assign(static_cast<std::size_t>(n_settings), 0);
  for (int mu = n_settings - 1; mu >= 0; --mu) {
    k.k[static_cast<std::size_t>(mu)] = static_cast<int>(index % static_cast<std::uint64_t>(d));
    index /= static_cast<std::uint64_t>(d);
  }
  return k;
}

std::uint64_t assignment_count(int d, int n_settings, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int mu = 0; mu < n_settings; ++mu) {
    if (total > cap / static_cast<std::uint64_t>(d)) {
      throw EnumerationCapExceeded("nst_enumerate: d^N = " + std::to_string(d) + "^" +
                                   std::to_string(n_settings) + " exceeds the cap of " +
                                   std::to_string(cap));
    }
    total *= static_cast<std::uint64_t>(d);
  }
  return total;
}

struct Extremes {
  double max_value = -std::numeric_limits<double>::infinity();
  double min_value = std::numeric_limits<double>::infinity();
  std::uint64_t max_index = 0, min_index = 0;
  CVector max_vec, min_vec;
};

RVector random_stochastic_row(int d, Rng& rng) {
  std::uniform_int_distribution<int> kind_dist(0, 2);
  RVector p = RVector::Zero(d);
  const int kind = kind_dist(rng);
  if (kind == 0) {
    std::uniform_int_distribution<int> pick(0, d - 1);
    p(pick(rng)) = 1.0;
    return p;
  }
  std::gamma_distribution<double> gamma(kind == 1 ? 1.0 : 0.1, 1.0);
  for (int a = 0; a < d; ++a) p(a) = gamma(rng) + 1e-300;
  return p / p.sum();
}

}  // namespace

int optimal_outcome(const RVector& values, Extremum which) {
  const double target = which == Extremum::Max ? values.maxCoeff() : values.minCoeff();
  for (Eigen::Index a = 0; a < values.size(); ++a) {
    if (std::abs(values(a) - target) <= kTieTol) return static_cast<int>(a);
  }
  return 0;
}

CMatrix rho_bar(const MeasurementSet& bob, const DeterministicAssignment& k) {
  if (static_cast<int>(k.k.size()) != bob.size())
    throw std::invalid_argument("rho_bar: assignment length differs from setting count");
  CMatrix out = CMatrix::Zero(bob.dim(), bob.dim());
  for (int mu = 0; mu < bob.size(); ++mu) {
    const int a = k.k[static_cast<std::size_t>(mu)];
    if (a < 0 || a >= bob.dim()) throw std::invalid_argument("rho_bar: outcome index out of range");
    const auto v = bob[mu].basis.col(a);
    out.noalias() += bob.weight(mu) * v * v.adjoint();
  }
  return out;
}

CMatrix rho_bar(const MeasurementSet& bob, const ResponseFunction& p, int xi) {
  if (p.settings() != bob.size() || p.outcomes() != bob.dim())
    throw std::invalid_argument("rho_bar: response table shape mismatch");
  CMatrix out = CMatrix::Zero(bob.dim(), bob.dim());
  for (int mu = 0; mu < bob.size(); ++mu)
    for (int a = 0; a < bob.dim(); ++a)
      out += bob.weight(mu) * p(xi, mu, a) * bob.projector(mu, a);
  return out;
}

NstResult nst_enumerate(const MeasurementSet& bob, std::uint64_t cap) {
  const int d = bob.dim();
  const int n = bob.size();
  const std::uint64_t total = assignment_count(d, n, cap);
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(total, kSampleChunks));

  const auto parts = map_chunks<Extremes>(chunks, [&](std::size_t c) {
    Extremes ex;
    const auto [begin, end] = chunk_range(total, chunks, c);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const auto eig = hermitian_eig(rho_bar(bob, decode(idx, d, n)));
      if (eig.max_eigenvalue() > ex.max_value) {
        ex.max_value = eig.max_eigenvalue();
        ex.max_index = idx;
        ex.max_vec = eig.top_vector();
      }
      if (eig.min_eigenvalue() < ex.min_value) {
        ex.min_value = eig.min_eigenvalue();
        ex.min_index = idx;
        ex.min_vec = eig.bottom_vector();
      }
    }
    return ex;
  });

  Extremes best;
  for (const auto& p : parts) {
    if (p.max_value > best.max_value) {
      best.max_value = p.max_value;
      best.max_index = p.max_index;
      best.max_vec = p.max_vec;
    }
    if (p.min_value < best.min_value) {
      best.min_value = p.min_value;
      best.min_index = p.min_index;
      best.min_vec = p.min_vec;
    }
  }
  NstResult out;
  out.f_plus = best.max_value;
  // Exact zeros come out of the eigensolver as +-1e-17; the threshold is >= 0.
  out.f_minus = std::max(0.0, best.min_value);
  out.witness_plus = {decode(best.max_index, d, n), best.max_vec};
  out.witness_minus = {decode(best.min_index, d, n), best.min_vec};
  out.assignments = total;
  return out;
}

double two_setting_f_plus(const MeasurementSet& bob) {
  if (bob.size() != 2 || std::abs(bob.weight(0) - bob.weight(1)) > 1e-12)
    throw std::invalid_argument("two_setting_f_plus: needs two equal-weight settings");
  return 0.5 * (1.0 + unitary_relation(bob).max_abs_entry());
}

ProbabilisticCheckReport nst_probabilistic_check(const MeasurementSet& bob, std::uint64_t trials,
                                                 std::uint64_t seed, const NstResult& nst) {
  const int d = bob.dim();
  const int n = bob.size();
  struct Part {
    std::uint64_t violations = 0;
    double max_value = -std::numeric_limits<double>::infinity();
    double min_value = std::numeric_limits<double>::infinity();
  };
  const std::size_t chunks = static_cast<std::size_t>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(trials, kSampleChunks)));
  const auto parts = map_chunks<Part>(chunks, [&](std::size_t c) {
    Part part;
    Rng rng(stream_seed(seed, c));
    const auto [begin, end] = chunk_range(trials, chunks, c);
    for (std::uint64_t t = begin; t < end; ++t) {
      ResponseFunction p(1, n, d);
      for (int mu = 0; mu < n; ++mu) {
        const RVector row = random_stochastic_row(d, rng);
        for (int a = 0; a < d; ++a) p(0, mu, a) = row(a);
      }
      const CMatrix rb = rho_bar(bob, p, 0);
      const CVector phi = haar_state(d, rng);
      const auto eig = hermitian_eig(rb);
      for (const double value :
           {(phi.adjoint() * rb * phi)(0).real(), eig.max_eigenvalue(), eig.min_eigenvalue()}) {
        part.max_value = std::max(part.max_value, value);
        part.min_value = std::min(part.min_value, value);
        if (value > nst.f_plus + kSlack || value < nst.f_minus - kSlack) ++part.violations;
      }
    }
    return part;
  });

  ProbabilisticCheckReport out;
  out.trials = trials;
  out.f_plus = nst.f_plus;
  out.f_minus = nst.f_minus;
  out.max_value = -std::numeric_limits<double>::infinity();
  out.min_value = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) {
    out.violations += p.violations;
    out.max_value = std::max(out.max_value, p.max_value);
    out.min_value = std::min(out.min_value, p.min_value);
  }
  return out;
}

ProbabilisticCheckReport nst_probabilistic_check(const MeasurementSet& bob, std::uint64_t trials,
                                                 std::uint64_t seed) {
  return nst_probabilistic_check(bob, trials, seed, nst_enumerate(bob));
}

GeometricNst geometric_nst(const std::vector<BlochVector>& directions,
                           const std::vector<double>& weights) {
  const std::size_t n = directions.size();
  if (n == 0 || n != weights.size())
    throw std::invalid_argument("geometric_nst: need matching, non-empty directions and weights");
  if (n > 30) throw std::invalid_argument("geometric_nst: at most 30 settings");
  for (const auto& dir : directions)
    if (!dir.is_unit()) throw std::invalid_argument("geometric_nst: directions must be unit vectors");

  // The pattern and its negation give the same length, so the first sign stays +1.
  const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
  struct Part {
    double best = -1;
    std::uint64_t mask = 0;
  };
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(patterns, kSampleChunks));
  const auto parts = map_chunks<Part>(chunks, [&](std::size_t c) {
    Part part;
    const auto [begin, end] = chunk_range(patterns, chunks, c);
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      Eigen::Vector3d r = weights[0] * directions[0].vec();
      for (std::size_t mu = 1; mu < n; ++mu) {
        const double s = (mask >> (mu - 1)) & 1u ? -1.0 : 1.0;
        r += s * weights[mu] * directions[mu].vec();
      }
      const double len = r.norm();
      if (len > part.best) {
        part.best = len;
        part.mask = mask;
      }
    }
    return part;
  });
  Part best;
  for (const auto& p : parts)
    if (p.best > best.best) best = p;

  GeometricNst out;
  out.r_opt = best.best;
  out.g_plus = best.best;
  out.g_minus = -best.best;
  out.signs.push_back(1);
  for (std::size_t mu = 1; mu < n; ++mu) out.signs.push_back((best.mask >> (mu - 1)) & 1u ? -1 : 1);
  return out;
}

GeometricNst geometric_nst(const MeasurementSet& bob) {
  if (bob.dim() != 2) throw std::invalid_argument("geometric_nst: qubit measurement set required");
  std::vector<double> w;
  for (const auto& s : bob.settings()) w.push_back(s.weight);
  auto dirs = bloch_directions(bob);
  for (auto& v : dirs) v = v.normalized();
  return geometric_nst(dirs, w);
}

double harmonic_number(int d) {
  double h = 0;
  for (int k = 1; k <= d; ++k) h += 1.0 / k;
  return h;
}

ContinuousThresholds continuous_thresholds(int d) {
  if (d < 2) throw std::invalid_argument("continuous_thresholds: d must be >= 2");
  return {harmonic_number(d) / d, 1.0 / (static_cast<double>(d) * d)};
}

ContinuousThresholdEstimate continuous_threshold_mc(int d, std::uint64_t samples,
                                                    std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("continuous_threshold_mc: d must be >= 2");
  if (samples < 1000) throw std::invalid_argument("continuous_threshold_mc: need at least 1000 samples");
  struct Part {
    double sum_plus = 0, sq_plus = 0, sum_minus = 0, sq_minus = 0;
    std::vector<double> contrib_plus, contrib_minus;
  };
  const auto parts = map_chunks<Part>(kSampleChunks, [&](std::size_t c) {
    Part part;
    part.contrib_plus.assign(static_cast<std::size_t>(d), 0.0);
    part.contrib_minus.assign(static_cast<std::size_t>(d), 0.0);
    Rng rng(stream_seed(seed, c));
    const auto [begin, end] = chunk_range(samples, kSampleChunks, c);
    for (std::uint64_t s = begin; s < end; ++s) {
      const CMatrix u = haar_unitary(d, rng);
      const RVector probs = u.col(0).cwiseAbs2();  // |<a|phi_w>|^2
      const int a_max = optimal_outcome(probs, Extremum::Max);
      const int a_min = optimal_outcome(probs, Extremum::Min);
      const double hi = probs(a_max), lo = probs(a_min);
      part.sum_plus += hi;
      part.sq_plus += hi * hi;
      part.sum_minus += lo;
      part.sq_minus += lo * lo;
      part.contrib_plus[static_cast<std::size_t>(a_max)] += hi;
      part.contrib_minus[static_cast<std::size_t>(a_min)] += lo;
    }
    return part;
  });

  Part total;
  total.contrib_plus.assign(static_cast<std::size_t>(d), 0.0);
  total.contrib_minus.assign(static_cast<std::size_t>(d), 0.0);
  for (const auto& p : parts) {
    total.sum_plus += p.sum_plus;
    total.sq_plus += p.sq_plus;
    total.sum_minus += p.sum_minus;
    total.sq_minus += p.sq_minus;
    for (int a = 0; a < d; ++a) {
      total.contrib_plus[static_cast<std::size_t>(a)] += p.contrib_plus[static_cast<std::size_t>(a)];
      total.contrib_minus[static_cast<std::size_t>(a)] += p.contrib_minus[static_cast<std::size_t>(a)];
    }
  }
  const double n = static_cast<double>(samples);
  auto stderr_of = [n](double sum, double sq) {
    const double mean = sum / n;
    const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
  };
  ContinuousThresholdEstimate out;
  out.d = d;
  out.samples = samples;
  out.seed = seed;
  out.plus = total.sum_plus / n;
  out.minus = total.sum_minus / n;
  out.stderr_plus = stderr_of(total.sum_plus, total.sq_plus);
  out.stderr_minus = stderr_of(total.sum_minus, total.sq_minus);
  for (int a = 0; a < d; ++a) {
    out.plus_contributions.push_back(total.contrib_plus[static_cast<std::size_t>(a)] / n);
    out.minus_contributions.push_back(total.contrib_minus[static_cast<std::size_t>(a)] / n);
  }
  return out;
}

}  // namespace steerlab
