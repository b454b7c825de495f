#include <doctest.h>

#include "shadowlab/linalg.hpp"

using namespace shadowlab;

namespace {

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix random_matrix(Eigen::Index d, RandomStream& rng) {
  CMatrix m(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return m;
}

}  // namespace

TEST_CASE("tensor_product basics") {
  const CMatrix i2 = CMatrix::Identity(2, 2);
  CHECK((tensor_product(i2, i2) - CMatrix::Identity(4, 4)).norm() == doctest::Approx(0.0));

  const CMatrix zz = tensor_product(pauli_z(), pauli_z());
  CHECK(zz(0, 0).real() == doctest::Approx(1.0));
  CHECK(zz(3, 3).real() == doctest::Approx(1.0));
  CHECK(zz(1, 1).real() == doctest::Approx(-1.0));

  // X ⊗ I applied to |00> gives |10>
  const CMatrix xi = tensor_product(pauli_x(), i2);
  CVector v00 = CVector::Zero(4);
  v00(0) = 1;
  const CVector out = xi * v00;
  CHECK(std::abs(out(2) - Complex(1, 0)) < 1e-14);

  // associativity on random 2x2 factors
  RandomStream rng(5);
  for (int t = 0; t < 5; ++t) {
    const CMatrix a = random_matrix(2, rng), b = random_matrix(2, rng), c = random_matrix(2, rng);
    CHECK((tensor_product(tensor_product(a, b), c) - tensor_product(a, tensor_product(b, c)))
              .norm() < 1e-14);
  }
}

TEST_CASE("hs_inner") {
  CHECK(hs_inner(pauli_x(), pauli_x()).real() == doctest::Approx(2.0));
  CHECK(std::abs(hs_inner(pauli_x(), pauli_z())) < 1e-15);
  const Eigen::Index d = 5;
  const CMatrix in = CMatrix::Identity(d, d) / std::sqrt(double(d));
  CHECK(hs_inner(in, in).real() == doctest::Approx(1.0));
  CHECK_THROWS(hs_inner(pauli_x(), CMatrix::Identity(3, 3)));
}

TEST_CASE("hermitian_eig") {
  const auto eig_z = hermitian_eig(pauli_z());
  CHECK(eig_z.values(0) == doctest::Approx(-1.0));
  CHECK(eig_z.values(1) == doctest::Approx(1.0));

  CMatrix had(2, 2);
  had << 1, 1, 1, -1;
  had /= std::sqrt(2.0);
  const auto eig_h = hermitian_eig(had);
  CHECK(eig_h.values(0) == doctest::Approx(-1.0));
  CHECK(eig_h.values(1) == doctest::Approx(1.0));

  RandomStream rng(7);
  for (Eigen::Index d : {8, 64}) {
    const CMatrix g = random_matrix(d, rng);
    const CMatrix a = g + g.adjoint();
    const auto eig = hermitian_eig(a);
    const CMatrix rec =
        eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    CHECK((rec - a).norm() <= 1e-9 * a.norm());
    CHECK((eig.vectors.adjoint() * eig.vectors - CMatrix::Identity(d, d)).norm() < 1e-9);
  }
  CHECK_THROWS(hermitian_eig(random_matrix(3, rng)));
}

TEST_CASE("expm") {
  CHECK((expm(CMatrix::Zero(3, 3)) - CMatrix::Identity(3, 3)).norm() < 1e-14);

  // expm(-i pi/2 Z) = diag(-i, i)
  const CMatrix p = expm(Complex(0, -1.5707963267948966) * pauli_z());
  CHECK(std::abs(p(0, 0) - Complex(0, -1)) < 1e-12);
  CHECK(std::abs(p(1, 1) - Complex(0, 1)) < 1e-12);

  RandomStream rng(11);
  const CMatrix g = random_matrix(6, rng);
  const CMatrix skew = g - g.adjoint();
  const CMatrix u = expm(skew);
  CHECK((u.adjoint() * u - CMatrix::Identity(6, 6)).norm() < 1e-9);

  // general (non-normal) input: expm(A) expm(-A) = I
  const CMatrix a = 0.3 * random_matrix(5, rng);
  CHECK((expm(a) * expm(CMatrix(-a)) - CMatrix::Identity(5, 5)).norm() < 1e-10);
}

TEST_CASE("logm_special_orthogonal") {
  CHECK(logm_special_orthogonal(CMatrix::Identity(4, 4)).norm() < 1e-12);

  RMatrix rot(2, 2);
  const double th = 0.3;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const RMatrix a = logm_special_orthogonal(rot.cast<Complex>());
  CHECK(a(0, 1) == doctest::Approx(-0.3));
  CHECK(a(1, 0) == doctest::Approx(0.3));

  // -1 eigenvalue pairs map to angle-pi planes
  RMatrix refl = RMatrix::Identity(4, 4);
  refl(0, 0) = -1;
  refl(1, 1) = -1;
  const RMatrix api = logm_special_orthogonal(refl.cast<Complex>());
  CHECK((expm(api.cast<Complex>()) - refl.cast<Complex>()).norm() < 1e-8);

  RandomStream rng(3);
  for (int t = 0; t < 6; ++t) {
    const Eigen::Index d = 2 * (2 + t % 3);  // SO(4), SO(6), SO(8)
    CMatrix g(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i) g(i, j) = rng.gaussian();
    Eigen::HouseholderQR<RMatrix> qr((RMatrix(g.real())));
    RMatrix q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1;
    const RMatrix log = logm_special_orthogonal(q.cast<Complex>());
    CHECK((log + log.transpose()).norm() < 1e-12);
    CHECK((expm(log.cast<Complex>()) - q.cast<Complex>()).norm() < 1e-8);
  }
  CHECK_THROWS(logm_special_orthogonal(pauli_z()));  // det -1
}

TEST_CASE("vectorize round trip and isometry") {
  CMatrix e01 = CMatrix::Zero(2, 2);
  e01(0, 1) = 1;  // |0><1|
  const CVector v = vectorize(e01);
  CHECK(std::abs(v(2) - Complex(1, 0)) < 1e-15);  // column stacking puts it at index 2

  RandomStream rng(13);
  const CMatrix a = random_matrix(4, rng), b = random_matrix(4, rng);
  CHECK((devectorize(vectorize(a)) - a).norm() == doctest::Approx(0.0));
  CHECK(std::abs(hs_inner(a, b) - vectorize(a).dot(vectorize(b))) < 1e-12);
  CHECK(std::abs(vectorize(pauli_x()).dot(vectorize(pauli_x())) - Complex(2, 0)) < 1e-14);
  CHECK_THROWS(devectorize(CVector::Ones(3)));
}

TEST_CASE("random_pure_state") {
  RandomStream rng(1);
  for (Eigen::Index d : {1, 2, 7}) {
    const CVector v = random_pure_state(d, rng);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
  }
  // mean |v_0|^2 = 1/d by Haar symmetry
  const Eigen::Index d = 4;
  double acc = 0;
  const int reps = 10000;
  for (int t = 0; t < reps; ++t) acc += std::norm(random_pure_state(d, rng)(0));
  CHECK(std::abs(acc / reps - 0.25) < 5.0 / std::sqrt(double(reps)));
}

TEST_CASE("superoperator adjoint action") {
  RandomStream rng(2);
  const CMatrix g = random_matrix(3, rng);
  const CMatrix u = expm(CMatrix(g - g.adjoint()));
  const CMatrix x = random_matrix(3, rng);
  const SuperOperator ad = SuperOperator::adjoint_action(u);
  CHECK((ad.apply(x) - u * x * u.adjoint()).norm() < 1e-12);
}

TEST_CASE("random stream determinism") {
  RandomStream a(42, 7), b(42, 7), c(42, 8);
  for (int t = 0; t < 100; ++t) CHECK(a.uniform() == b.uniform());
  CHECK(a.uniform() != c.uniform());
  RandomStream s1 = RandomStream(9).split(3), s2 = RandomStream(9).split(3);
  CHECK(s1.gaussian() == s2.gaussian());
}
