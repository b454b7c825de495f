#include <doctest.h>

#include <cmath>
#include <set>

#include "shadowlab/bases.hpp"
#include "shadowlab/ensembles.hpp"

using namespace shadowlab;

TEST_CASE("computational and split weight bases") {
  const MeasurementBasis comp = computational_basis(1);
  CHECK(comp.dim == 2);
  CHECK(comp.gram_defect() == 0.0);
  CHECK(computational_basis(3).dim == 8);

  const MeasurementBasis split = split_orthogonal_weight_basis(4);
  CHECK(split.gram_defect() == 0.0);
  CHECK(split.labels[0].weight == "+L1");
  CHECK(split.labels[1].weight == "+L2");
  CHECK(split.labels[2].weight == "-L1");
  CHECK(split.labels[3].weight == "-L2");
  CHECK(split.block_count() == 1);
}

TEST_CASE("bell pair basis") {
  const MeasurementBasis bell = bell_pair_basis(2);
  CHECK(bell.gram_defect() < 1e-12);
  // first vector is (|00> + |11>)/sqrt(2)
  CHECK(std::abs(bell.vectors(0, 0) - Complex(1 / std::sqrt(2.0), 0)) < 1e-14);
  CHECK(std::abs(bell.vectors(3, 0) - Complex(1 / std::sqrt(2.0), 0)) < 1e-14);
  // stabilized up to sign by X1X2 and Z1Z2
  CMatrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  const CMatrix xx = tensor_product(x, x), zz = tensor_product(z, z);
  for (int v = 0; v < 4; ++v) {
    const CVector b = bell.vectors.col(v);
    CHECK(std::abs(std::abs(b.dot(xx * b)) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(b.dot(zz * b)) - 1.0) < 1e-12);
  }
  // n=4 tensor structure
  const MeasurementBasis bell4 = bell_pair_basis(4);
  CHECK(bell4.dim == 16);
  CHECK(bell4.gram_defect() < 1e-12);
  CHECK_THROWS(bell_pair_basis(3));
}

TEST_CASE("cyclic fourier basis") {
  const int n = 5;
  const MeasurementBasis f = cyclic_fourier_basis(n);
  CHECK(f.gram_defect() < 1e-12);
  // k=0 is the uniform superposition
  for (int j = 0; j < n; ++j)
    CHECK(std::abs(f.vectors(j, 0) - Complex(1 / std::sqrt(5.0), 0)) < 1e-12);
  // the n-cycle acts with eigenvalue omega^k
  CMatrix c = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) c((i + 1) % n, i) = 1.0;
  for (int k = 0; k < n; ++k) {
    const Complex omega_k = std::exp(Complex(0, 2 * 3.14159265358979323846 * k / n));
    CHECK((c * f.vectors.col(k) - omega_k * f.vectors.col(k)).norm() < 1e-12);
  }
  CHECK(f.block_of[0] == 0);
  for (int k = 1; k < n; ++k) CHECK(f.block_of[k] == 1);
}

TEST_CASE("schur basis structure") {
  for (int n = 1; n <= 8; ++n) {
    const SchurBasis s = schur_basis(n);
    const Eigen::Index d = Eigen::Index{1} << n;
    CHECK((s.transform.adjoint() * s.transform - CMatrix::Identity(d, d)).norm() <= 1e-9);
    long long total = 0;
    for (const auto& blk : s.block_table) total += blk.size;
    CHECK(total == d);
    std::set<int> spins;
    for (const auto& blk : s.block_table) spins.insert(blk.two_s);
    for (int two_s : spins) CHECK(s.multiplicity(two_s) == schur_multiplicity(n, two_s));
  }
  // n=3 multiplicities: s=3/2 once, s=1/2 twice
  const SchurBasis s3 = schur_basis(3);
  CHECK(s3.multiplicity(3) == 1);
  CHECK(s3.multiplicity(1) == 2);
}

TEST_CASE("schur n=2 singlet") {
  const SchurBasis s = schur_basis(2);
  const Eigen::Index col = s.column_of(0, 1, 0);
  CVector expect = CVector::Zero(4);
  expect(1) = 1 / std::sqrt(2.0);
  expect(2) = -1 / std::sqrt(2.0);
  const double match = std::min((s.transform.col(col) - expect).norm(),
                                (s.transform.col(col) + expect).norm());
  CHECK(match < 1e-12);
}

TEST_CASE("schur block diagonalization and multiplicity independence") {
  RandomStream rng(31);
  for (int n : {2, 3, 4, 6}) {
    const SchurBasis s = schur_basis(n);
    for (int t = 0; t < (n <= 4 ? 10 : 4); ++t) {
      const CMatrix u2 =
          su2_from_quaternion(rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian());
      const CMatrix un = tensor_power(u2, n);
      const CMatrix b = s.transform.adjoint() * un * s.transform;
      double off = 0.0;
      for (const auto& bi : s.block_table)
        for (const auto& bj : s.block_table) {
          if (bi.offset == bj.offset) continue;
          off += b.block(bi.offset, bj.offset, bi.size, bj.size).squaredNorm();
        }
      CHECK(std::sqrt(off) <= 1e-8);
      for (const auto& blk : s.block_table) {
        const CMatrix w = su2_wigner_rotation(blk.two_s / 2.0, u2);
        CHECK((b.block(blk.offset, blk.offset, blk.size, blk.size) - w).norm() < 1e-8);
      }
    }
  }
}

TEST_CASE("spherical operator basis") {
  const SchurBasis s2 = schur_basis(2);
  // singlet block: O_{0,0} = |singlet><singlet|
  const SphericalOpBasis sing = spherical_operator_basis(s2, 0, 1);
  const Eigen::Index singlet_col = s2.column_of(0, 1, 0);
  const CMatrix proj = s2.transform.col(singlet_col) * s2.transform.col(singlet_col).adjoint();
  CHECK((sing.at(0, 0) - proj).norm() < 1e-12);

  // triplet block: O_{2,0} diagonal (1/sqrt6, -2/sqrt6, 1/sqrt6, 0) in the
  // Schur frame (m descending)
  const SphericalOpBasis trip = spherical_operator_basis(s2, 2, 1);
  const CMatrix o20 = s2.transform.adjoint() * trip.at(4, 0) * s2.transform;
  CHECK(o20(0, 0).real() == doctest::Approx(1 / std::sqrt(6.0)));
  CHECK(o20(1, 1).real() == doctest::Approx(-2 / std::sqrt(6.0)));
  CHECK(o20(2, 2).real() == doctest::Approx(1 / std::sqrt(6.0)));
  CHECK(std::abs(o20(3, 3)) < 1e-14);
  // O_{0,0} on the triplet is I_3/sqrt(3)
  const CMatrix o00 = s2.transform.adjoint() * trip.at(0, 0) * s2.transform;
  CHECK(o00(0, 0).real() == doctest::Approx(1 / std::sqrt(3.0)));
  CHECK(std::abs(o00(3, 3)) < 1e-14);

  // HS-orthonormality across the whole family for n=3
  const SchurBasis s3 = schur_basis(3);
  std::vector<CMatrix> all;
  for (const auto& blk : s3.block_table) {
    const SphericalOpBasis ops = spherical_operator_basis(s3, blk.two_s, blk.t_index);
    for (const auto& [key, op] : ops.ops) all.push_back(op);
  }
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a; b < all.size(); ++b) {
      const double expect = (a == b) ? 1.0 : 0.0;
      CHECK(std::abs(hs_inner(all[a], all[b]) - Complex(expect, 0)) < 1e-10);
    }
}

TEST_CASE("labels csv") {
  const std::string csv = labels_csv(cyclic_fourier_basis(3));
  CHECK(csv.find("index,irrep,multiplicity,weight") == 0);
  CHECK(csv.find("trivial") != std::string::npos);
  CHECK(csv.find("standard") != std::string::npos);
}
