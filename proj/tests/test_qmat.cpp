#include "steerlab/qmat.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace steerlab;

namespace {

CMatrix random_hermitian(int d, Rng& rng) {
  const CMatrix g = ginibre(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

// Element-by-element partial trace, written independently of the library.
CMatrix naive_trace_a(const CMatrix& m, int da, int db) {
  CMatrix out = CMatrix::Zero(db, db);
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  return out;
}

CMatrix naive_trace_b(const CMatrix& m, int da, int db) {
  CMatrix out = CMatrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

}  // namespace

TEST_CASE("kron matches the block definition") {
  Rng rng(1);
  const CMatrix a = ginibre(2, 3, rng), b = ginibre(3, 2, rng);
  const CMatrix k = kron(a, b);
  REQUIRE(k.rows() == 6);
  REQUIRE(k.cols() == 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 2; ++s) CHECK(std::abs(k(i * 3 + r, j * 2 + s) - a(i, j) * b(r, s)) < 1e-15);
}

TEST_CASE("partial traces agree with elementwise sums") {
  Rng rng(2);
  for (auto [da, db] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 3}}) {
    const CMatrix m = ginibre(da * db, da * db, rng);
    CHECK((partial_trace(m, da, db, Subsystem::A) - naive_trace_a(m, da, db)).norm() < 1e-13);
    CHECK((partial_trace(m, da, db, Subsystem::B) - naive_trace_b(m, da, db)).norm() < 1e-13);
  }
  const CMatrix a = random_hermitian(2, rng), b = random_hermitian(3, rng);
  CHECK((partial_trace(kron(a, b), 2, 3, Subsystem::A) - a.trace() * b).norm() < 1e-13);
  CHECK_THROWS_AS(partial_trace(CMatrix::Identity(5, 5), 2, 3, Subsystem::A), std::invalid_argument);
}

TEST_CASE("partial transpose of a product transposes the second factor") {
  Rng rng(3);
  const CMatrix a = ginibre(2, 2, rng), b = ginibre(3, 3, rng);
  CHECK((partial_transpose_b(kron(a, b), 2, 3) - kron(a, CMatrix(b.transpose()))).norm() < 1e-13);
}

TEST_CASE("row-major vectorization round trip and the (A x B*) action") {
  Rng rng(4);
  const CMatrix a = ginibre(3, 3, rng), k = ginibre(3, 3, rng);
  const CVector v = vectorize(a);
  CHECK(v(1) == a(0, 1));
  CHECK((devectorize(v) - a).norm() == 0.0);
  const CMatrix lhs = vectorize(CMatrix(k * a * k.adjoint()));
  const CVector rhs = kron(k, CMatrix(k.conjugate())) * v;
  CHECK((lhs - rhs).norm() < 1e-12);
  CHECK_THROWS_AS(devectorize(CVector::Zero(5)), std::invalid_argument);
}

TEST_CASE("Jacobi eigensolver against Eigen's self-adjoint solver") {
  Rng rng(5);
  for (int d : {1, 2, 3, 4, 7, 9, 16}) {
    for (int trial = 0; trial < 5; ++trial) {
      const CMatrix h = random_hermitian(d, rng);
      const auto ours = hermitian_eig(h);
      const Eigen::SelfAdjointEigenSolver<CMatrix> ref(h);
      CHECK((ours.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((ours.reconstruct() - h).norm() < 1e-10 * std::max(1.0, h.norm()));
      CHECK((ours.eigenvectors.adjoint() * ours.eigenvectors - CMatrix::Identity(d, d)).norm() < 1e-10);
      for (int i = 1; i < d; ++i) CHECK(ours.eigenvalues(i) >= ours.eigenvalues(i - 1));
    }
  }
}

TEST_CASE("Jacobi eigensolver handles degenerate spectra") {
  Rng rng(6);
  const CMatrix u = haar_unitary(4, rng);
  Eigen::VectorXd spec(4);
  spec << 1, 1, -2, -2;
  const CMatrix h = u * spec.cast<Complex>().asDiagonal() * u.adjoint();
  const auto eig = hermitian_eig(h);
  CHECK(std::abs(eig.eigenvalues(0) + 2) < 1e-12);
  CHECK(std::abs(eig.eigenvalues(3) - 1) < 1e-12);
  CHECK((eig.reconstruct() - h).norm() < 1e-11);
  const auto id = hermitian_eig(CMatrix(CMatrix::Identity(3, 3)));
  CHECK(id.min_eigenvalue() == doctest::Approx(1.0));
}

TEST_CASE("eigensolver rejects bad input") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1;
  CHECK_THROWS_AS(hermitian_eig(m), std::invalid_argument);
  CHECK_THROWS_AS(hermitian_eig(CMatrix::Zero(2, 3)), std::invalid_argument);
  CMatrix n = CMatrix::Identity(2, 2);
  n(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(hermitian_eig(n), std::invalid_argument);
}

TEST_CASE("eigensolver is templated on the scalar") {
  Eigen::Matrix<std::complex<float>, Eigen::Dynamic, Eigen::Dynamic> h(2, 2);
  h << 2.0f, std::complex<float>(0, 1), std::complex<float>(0, -1), 2.0f;
  const auto eig = hermitian_eig(h);
  CHECK(eig.eigenvalues(0) == doctest::Approx(1.0f));
  CHECK(eig.eigenvalues(1) == doctest::Approx(3.0f));
}

TEST_CASE("psd_sqrt squares back and trace distance of orthogonal pure states is one") {
  Rng rng(7);
  const CMatrix g = ginibre(3, 3, rng);
  const CMatrix p = g * g.adjoint();
  const CMatrix s = psd_sqrt(p);
  CHECK((s * s - p).norm() < 1e-11);
  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a(0, 0) = 1;
  b(1, 1) = 1;
  CHECK(trace_distance(a, b) == doctest::Approx(1.0));
}

TEST_CASE("polar factor is unitary and closest to the input") {
  Rng rng(8);
  const CMatrix g = ginibre(4, 4, rng);
  const CMatrix u = unitary_polar_factor(g);
  CHECK((u.adjoint() * u - CMatrix::Identity(4, 4)).norm() < 1e-12);
  // Re Tr(U^dagger G) equals the nuclear norm of G.
  const double nuclear = Eigen::JacobiSVD<CMatrix>(g).singularValues().sum();
  CHECK((u.adjoint() * g).trace().real() == doctest::Approx(nuclear).epsilon(1e-12));
}

TEST_CASE("Haar unitaries are unitary with |U_00|^2 averaging 1/d") {
  Rng rng(9);
  const int d = 3, n = 20000;
  double mean = 0, fourth = 0;
  for (int i = 0; i < n; ++i) {
    const CMatrix u = haar_unitary(d, rng);
    if (i < 50) CHECK((u.adjoint() * u - CMatrix::Identity(d, d)).norm() < 1e-12);
    const double p = std::norm(u(0, 0));
    mean += p;
    fourth += p * p;
  }
  mean /= n;
  fourth /= n;
  // Haar moments: E|U_00|^2 = 1/d, E|U_00|^4 = 2/(d(d+1)).
  CHECK(mean == doctest::Approx(1.0 / d).epsilon(0.02));
  CHECK(fourth == doctest::Approx(2.0 / (d * (d + 1))).epsilon(0.04));
}

TEST_CASE("stream seeds are deterministic and distinct") {
  CHECK(stream_seed(1, 2) == stream_seed(1, 2));
  CHECK(stream_seed(1, 2) != stream_seed(1, 3));
  CHECK(stream_seed(1, 2) != stream_seed(2, 2));
}

TEST_CASE("Pauli algebra and Bloch operators") {
  const Complex i(0, 1);
  CHECK((pauli(1) * pauli(2) - i * pauli(3)).norm() < 1e-15);
  const BlochVector n{0.6, 0.0, 0.8};
  const CMatrix op = bloch_operator(n);
  CHECK((op * op - CMatrix::Identity(2, 2)).norm() < 1e-14);
  Rng rng(10);
  for (int k = 0; k < 20; ++k) CHECK(random_direction(rng).is_unit());
  CHECK(n.cross(BlochVector{0, 1, 0}).dot(n) == doctest::Approx(0.0));
}
