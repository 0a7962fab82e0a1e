// Dense complex linear algebra used throughout steerlab.
//
// Everything here is a free function over Eigen expressions. Matrices are
// templated on the real scalar type; the rest of the library works with the
// double-precision aliases CMatrix / CVector.
//
// Basis convention: the computational basis |i>, i = 0..d-1. A bipartite index
// |ik> on H_A (x) H_B maps to row i * d_b + k. Vectorization is row-major,
// |A>> = sum_ij A_ij |ij>.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace steerlab {

template <typename Real>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RVector = RVectorT<double>;
using Complex = std::complex<double>;

/// Which subsystem partial_trace removes.
enum class Subsystem { A, B };

template <typename Derived>
using ScalarOf = typename Derived::Scalar;
template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Kronecker product, (a (x) b)[i*rb + k, j*cb + l] = a[i,j] * b[k,l].
template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<ScalarOf<DA>, ScalarOf<DB>>::ReturnType;
  const Eigen::Index rb = b.rows();
  const Eigen::Index cb = b.cols();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * rb, a.cols() * cb);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * rb, j * cb, rb, cb) = Scalar(a(i, j)) * b.template cast<Scalar>();
    }
  }
  return out;
}

/// Partial trace of a (d_a*d_b)-square operator. Tracing out A leaves a d_b x d_b
/// operator on H_B; tracing out B leaves d_a x d_a on H_A.
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& m, Eigen::Index d_a, Eigen::Index d_b,
                   Subsystem traced) {
  using Scalar = ScalarOf<Derived>;
  if (d_a < 1 || d_b < 1 || m.rows() != d_a * d_b || m.cols() != d_a * d_b) {
    throw std::invalid_argument("partial_trace: operator is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected " +
                                std::to_string(d_a * d_b) + " square");
  }
  using Out = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (traced == Subsystem::A) {
    Out out = Out::Zero(d_b, d_b);
    for (Eigen::Index i = 0; i < d_a; ++i) out += m.block(i * d_b, i * d_b, d_b, d_b);
    return out;
  }
  Out out(d_a, d_a);
  for (Eigen::Index i = 0; i < d_a; ++i)
    for (Eigen::Index j = 0; j < d_a; ++j)
      out(i, j) = m.block(i * d_b, j * d_b, d_b, d_b).trace();
  return out;
}

/// Transpose of the B factor: <ik|m^{T_B}|jl> = <il|m|jk>.
template <typename Derived>
auto partial_transpose_b(const Eigen::MatrixBase<Derived>& m, Eigen::Index d_a, Eigen::Index d_b) {
  if (m.rows() != d_a * d_b || m.cols() != d_a * d_b)
    throw std::invalid_argument("partial_transpose_b: dimension mismatch");
  Eigen::Matrix<ScalarOf<Derived>, Eigen::Dynamic, Eigen::Dynamic> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < d_a; ++i)
    for (Eigen::Index j = 0; j < d_a; ++j)
      out.block(i * d_b, j * d_b, d_b, d_b) = m.block(i * d_b, j * d_b, d_b, d_b).transpose();
  return out;
}

/// |A>> = sum_ij A_ij |ij>, row-major.
template <typename Derived>
auto vectorize(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("vectorize: matrix must be square");
  const Eigen::Index d = a.rows();
  Eigen::Matrix<ScalarOf<Derived>, Eigen::Dynamic, 1> v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = a(i, j);
  return v;
}

template <typename Derived>
auto devectorize(const Eigen::MatrixBase<Derived>& v) {
  const auto n = v.size();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) {
    throw std::invalid_argument("devectorize: length " + std::to_string(n) +
                                " is not a perfect square");
  }
  Eigen::Matrix<ScalarOf<Derived>, Eigen::Dynamic, Eigen::Dynamic> a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = v(i * d + j);
  return a;
}

template <typename Derived>
RealOf<Derived> hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).norm();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, RealOf<Derived> rel_tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  const auto scale = std::max<RealOf<Derived>>(m.norm(), std::numeric_limits<RealOf<Derived>>::min());
  return hermiticity_defect(m) <= rel_tol * scale;
}

/// Spectral decomposition of a Hermitian matrix.
template <typename Real>
struct HermitianEigT {
  RVectorT<Real> eigenvalues;   // ascending
  CMatrixT<Real> eigenvectors;  // column k belongs to eigenvalues[k]

  Real max_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
  Real min_eigenvalue() const { return eigenvalues(0); }
  CVectorT<Real> top_vector() const { return eigenvectors.col(eigenvectors.cols() - 1); }
  CVectorT<Real> bottom_vector() const { return eigenvectors.col(0); }

  CMatrixT<Real> reconstruct() const {
    return eigenvectors * eigenvalues.template cast<std::complex<Real>>().asDiagonal() *
           eigenvectors.adjoint();
  }
};
using HermitianEig = HermitianEigT<double>;

/// Cyclic Jacobi eigensolver for small dense Hermitian matrices.
///
/// Each rotation first removes the phase of a_pq with a diagonal unitary and then
/// applies a real Jacobi rotation; sweeps stop once the off-diagonal Frobenius norm
/// falls below 1e-12 of the matrix norm (ascending eigenvalues on return).
template <typename Derived>
HermitianEigT<RealOf<Derived>> hermitian_eig(const Eigen::MatrixBase<Derived>& m) {
  using Real = RealOf<Derived>;
  using C = std::complex<Real>;
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eig: matrix must be square");
  if (!all_finite(m)) throw std::invalid_argument("hermitian_eig: non-finite entries");
  if (!is_hermitian(m)) {
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian (defect " +
                                std::to_string(static_cast<double>(hermiticity_defect(m))) + ")");
  }
  const Eigen::Index n = m.rows();
  CMatrixT<Real> a = (m.template cast<C>() + m.template cast<C>().adjoint()) * Real(0.5);
  CMatrixT<Real> v = CMatrixT<Real>::Identity(n, n);

  const Real scale = a.norm();
  const Real target = Real(1e-12) * scale;
  auto off_norm = [&] {
    Real s = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += Real(2) * std::norm(a(p, q));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && scale > 0; ++sweep) {
    if (off_norm() <= target) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Real r = std::abs(a(p, q));
        if (r <= std::numeric_limits<Real>::min() || r <= Real(1e-300) * scale) continue;
        const C phase = a(p, q) / r;
        const Real app = a(p, p).real();
        const Real aqq = a(q, q).real();
        const Real zeta = (aqq - app) / (Real(2) * r);
        const Real t = (zeta >= 0 ? Real(1) : Real(-1)) / (std::abs(zeta) + std::sqrt(Real(1) + zeta * zeta));
        const Real c = Real(1) / std::sqrt(Real(1) + t * t);
        const Real s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on columns p, q.
        const C g_pp = c, g_pq = s, g_qp = -s * std::conj(phase), g_qq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {
          const C akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * g_pp + akq * g_qp;
          a(k, q) = akp * g_pq + akq * g_qq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const C apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
          a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
        }
        a(p, q) = a(q, p) = C(0);
        a(p, p) = C(a(p, p).real());
        a(q, q) = C(a(q, q).real());
        for (Eigen::Index k = 0; k < n; ++k) {
          const C vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * g_pp + vkq * g_qp;
          v(k, q) = vkp * g_pq + vkq * g_qq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigT<Real> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

/// f(M) = V f(Lambda) V^dagger for Hermitian M.
template <typename Derived, typename Fn>
CMatrixT<RealOf<Derived>> hermitian_function(const Eigen::MatrixBase<Derived>& m, Fn&& fn) {
  using Real = RealOf<Derived>;
  const auto eig = hermitian_eig(m);
  RVectorT<Real> f(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) f(k) = fn(eig.eigenvalues(k));
  return eig.eigenvectors * f.template cast<std::complex<Real>>().asDiagonal() *
         eig.eigenvectors.adjoint();
}

/// Square root of a PSD matrix; eigenvalues within round-off of zero are clipped.
template <typename Derived>
CMatrixT<RealOf<Derived>> psd_sqrt(const Eigen::MatrixBase<Derived>& m) {
  using Real = RealOf<Derived>;
  return hermitian_function(m, [](Real x) { return x > 0 ? std::sqrt(x) : Real(0); });
}

/// Trace distance (1/2)||a - b||_1 between Hermitian operators.
template <typename DA, typename DB>
RealOf<DA> trace_distance(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  const auto eig = hermitian_eig(a - b);
  return eig.eigenvalues.cwiseAbs().sum() / 2;
}

/// Polar factor U of g = U P, the unitary maximizing Re Tr(U^dagger g).
template <typename Derived>
CMatrixT<RealOf<Derived>> unitary_polar_factor(const Eigen::MatrixBase<Derived>& g) {
  using Real = RealOf<Derived>;
  Eigen::JacobiSVD<CMatrixT<Real>> svd(g.template cast<std::complex<Real>>(),
                                       Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// ---------------------------------------------------------------------------
// Random sampling. RNG state is always passed explicitly.

using Rng = std::mt19937_64;

/// Standard complex Gaussian, E|z|^2 = 1.
template <typename Real = double, typename Gen>
std::complex<Real> complex_gaussian(Gen& gen) {
  std::normal_distribution<Real> normal(Real(0), Real(1) / std::sqrt(Real(2)));
  const Real re = normal(gen);
  const Real im = normal(gen);
  return {re, im};
}

template <typename Real = double, typename Gen>
CMatrixT<Real> ginibre(Eigen::Index rows, Eigen::Index cols, Gen& gen) {
  CMatrixT<Real> z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) z(i, j) = complex_gaussian<Real>(gen);
  return z;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of diag(R)
/// moved into Q.
template <typename Real = double, typename Gen>
CMatrixT<Real> haar_unitary(Eigen::Index d, Gen& gen) {
  if (d < 1) throw std::invalid_argument("haar_unitary: d must be >= 1");
  const CMatrixT<Real> z = ginibre<Real>(d, d, gen);
  Eigen::HouseholderQR<CMatrixT<Real>> qr(z);
  CMatrixT<Real> q = qr.householderQ();
  const CMatrixT<Real>& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto rkk = r(k, k);
    const Real mod = std::abs(rkk);
    q.col(k) *= mod > 0 ? rkk / mod : std::complex<Real>(1);
  }
  return q;
}

/// Haar-random unit vector in C^d.
template <typename Real = double, typename Gen>
CVectorT<Real> haar_state(Eigen::Index d, Gen& gen) {
  CVectorT<Real> v = ginibre<Real>(d, 1, gen);
  return v / v.norm();
}

/// Deterministic per-chunk seed derived from a master seed.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eedu};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// ---------------------------------------------------------------------------
// Qubit helpers.

struct BlochVector {
  double x = 0, y = 0, z = 0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
  BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
  BlochVector normalized() const {
    const double n = norm();
    if (n == 0) throw std::invalid_argument("BlochVector: cannot normalize the zero vector");
    return {x / n, y / n, z / n};
  }
  bool is_unit(double tol = 1e-12) const { return std::abs(norm() - 1.0) <= tol; }
  BlochVector cross(const BlochVector& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  Eigen::Vector3d vec() const { return {x, y, z}; }
  static BlochVector from(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }
};

inline CMatrix pauli(int k) {
  CMatrix s(2, 2);
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::out_of_range("pauli: index must be 0..3");
  }
  return s;
}

/// n . sigma
inline CMatrix bloch_operator(const BlochVector& n) {
  return n.x * pauli(1) + n.y * pauli(2) + n.z * pauli(3);
}

/// Uniformly distributed direction on S^2.
template <typename Gen>
BlochVector random_direction(Gen& gen) {
  std::normal_distribution<double> normal;
  for (;;) {
    BlochVector v{normal(gen), normal(gen), normal(gen)};
    if (v.norm() > 1e-12) return v.normalized();
  }
}

}  // namespace steerlab
