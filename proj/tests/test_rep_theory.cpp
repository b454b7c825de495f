#include <doctest.h>

#include <cmath>
#include <set>

#include "shadowlab/rep_theory.hpp"

using namespace shadowlab;

namespace {

// independent oracle: diagonalize the total-spin operator on two qubits and
// read off the singlet amplitudes
double cg_half_half_singlet_oracle() {
  Su2Generators g = su2_generators(0.5);
  const CMatrix jx = tensor_product(g.jx, CMatrix::Identity(2, 2)) +
                     tensor_product(CMatrix::Identity(2, 2), g.jx);
  const CMatrix jy = tensor_product(g.jy, CMatrix::Identity(2, 2)) +
                     tensor_product(CMatrix::Identity(2, 2), g.jy);
  const CMatrix jz = tensor_product(g.jz, CMatrix::Identity(2, 2)) +
                     tensor_product(CMatrix::Identity(2, 2), g.jz);
  const CMatrix j2 = jx * jx + jy * jy + jz * jz;
  const HermitianEig eig = hermitian_eig(j2);
  // lowest eigenvalue 0 -> singlet; component on |01> (index 1)
  const CVector singlet = eig.vectors.col(0);
  return std::abs(singlet(1));  // |C^{1/2,1/2,0}_{1/2,-1/2,0}|
}

}  // namespace

TEST_CASE("clebsch_gordan pinned values") {
  CHECK(clebsch_gordan(0.5, 0.5, 1, 0.5, 0.5, 1) == doctest::Approx(1.0));
  CHECK(clebsch_gordan(1, 1, 0, 0, 0, 0) == doctest::Approx(-1.0 / std::sqrt(3.0)));
  // oracle: diagonalizing the two-qubit total spin gives |C| = 1/sqrt(2)
  CHECK(cg_half_half_singlet_oracle() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(clebsch_gordan(0.5, 0.5, 0, 0.5, -0.5, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(clebsch_gordan(1, 1, 1, 1, 0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(clebsch_gordan(1, 1, 2, 0, 0, 0) == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(clebsch_gordan(0.5, 0.5, 1, 0.5, -0.5, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(clebsch_gordan(1, 0.5, 1.5, 1, -0.5, 0.5) == doctest::Approx(1.0 / std::sqrt(3.0)));
  // C^{j,j,1}_{m,-m,0} = (-1)^{j-m} m / sqrt(j(j+1)(2j+1)/3)
  CHECK(clebsch_gordan(2, 2, 1, 1, -1, 0) == doctest::Approx(-1.0 / std::sqrt(10.0)));
  CHECK(clebsch_gordan(1, 1, 1, 1, -1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(clebsch_gordan(1, 1, 2, 1, 1, 2) == doctest::Approx(1.0));
  CHECK(clebsch_gordan(1, 1, 2, 1, -1, 0) == doctest::Approx(1.0 / std::sqrt(6.0)));

  CHECK(clebsch_gordan(1, 1, 1, 0, 0, 0) == doctest::Approx(0.0).epsilon(1e-12));
  // m1+m2 != m12 -> zero
  CHECK(clebsch_gordan(1, 1, 2, 1, 0, 0) == 0.0);
  CHECK_THROWS(clebsch_gordan(0.3, 0.5, 0.5, 0.3, 0.5, 0.5));
  CHECK_THROWS(clebsch_gordan(0.5, 0.5, 2, 0.5, 0.5, 1));
  CHECK_THROWS(clebsch_gordan(0.5, 0.5, 1, 1.5, -0.5, 1));
}

TEST_CASE("clebsch_gordan orthogonality up to spin 4") {
  for (double two_s1 : {1.0, 2.0, 4.0, 8.0}) {
    const double s1 = two_s1 / 2, s2 = two_s1 / 2;
    // sum over m1, m2 of C^{s1,s2,s}_{m1,m2,m} C^{s1,s2,s'}_{m1,m2,m'} = delta
    for (double s : {s1 + s2, s1 + s2 - 1}) {
      for (double sp : {s1 + s2, s1 + s2 - 1}) {
        for (double m : {0.0, 1.0}) {
          const double mp = m;
          if (m > s || mp > sp) continue;
          double acc = 0;
          for (double m1 = -s1; m1 <= s1; ++m1)
            for (double m2 = -s2; m2 <= s2; ++m2) {
              if (m1 + m2 != m) continue;
              acc += clebsch_gordan(s1, s2, s, m1, m2, m) *
                     clebsch_gordan(s1, s2, sp, m1, m2, mp);
            }
          const double expect = (s == sp) ? 1.0 : 0.0;
          CHECK(std::abs(acc - expect) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("su2_generators") {
  const Su2Generators g = su2_generators(0.5);
  CHECK((g.jx - 0.5 * (CMatrix(2, 2) << 0, 1, 1, 0).finished()).norm() < 1e-14);
  CHECK((g.jz - 0.5 * (CMatrix(2, 2) << 1, 0, 0, -1).finished()).norm() < 1e-14);

  const Su2Generators g1 = su2_generators(1.0);
  CHECK(g1.jz(0, 0).real() == doctest::Approx(1.0));
  CHECK(g1.jz(1, 1).real() == doctest::Approx(0.0));
  CHECK(g1.jz(2, 2).real() == doctest::Approx(-1.0));

  for (double spin : {0.5, 1.0, 1.5, 2.5}) {
    const Su2Generators gs = su2_generators(spin);
    CHECK((gs.jx * gs.jy - gs.jy * gs.jx - Complex(0, 1) * gs.jz).norm() < 1e-12);
    CHECK((gs.jy * gs.jz - gs.jz * gs.jy - Complex(0, 1) * gs.jx).norm() < 1e-12);
    CHECK((gs.jz * gs.jx - gs.jx * gs.jz - Complex(0, 1) * gs.jy).norm() < 1e-12);
  }
}

TEST_CASE("hook length dimensions") {
  for (int n : {3, 5, 8}) CHECK(hook_length_dim(Partition(std::vector<int>{n})) == 1);
  for (int n : {4, 5, 6, 7, 8})
    CHECK(hook_length_dim(Partition(std::vector<int>{n - 2, 2})) == n * (n - 3) / 2);
  CHECK(hook_length_dim(Partition(std::vector<int>{3, 1, 1})) == 6);
  CHECK(hook_length_dim(Partition(std::vector<int>{2, 2})) == 2);
}

TEST_CASE("standard tableaux") {
  CHECK(standard_tableaux(Partition(std::vector<int>{6})).size() == 1);

  // the shape [3,1,1] listing in row-reading order
  const auto tabs = standard_tableaux(Partition(std::vector<int>{3, 1, 1}));
  REQUIRE(tabs.size() == 6);
  CHECK(tabs[0].rows == std::vector<std::vector<int>>{{1, 2, 3}, {4}, {5}});
  CHECK(tabs[1].rows == std::vector<std::vector<int>>{{1, 2, 4}, {3}, {5}});
  CHECK(tabs[2].rows == std::vector<std::vector<int>>{{1, 2, 5}, {3}, {4}});
  CHECK(tabs[3].rows == std::vector<std::vector<int>>{{1, 3, 4}, {2}, {5}});
  CHECK(tabs[4].rows == std::vector<std::vector<int>>{{1, 3, 5}, {2}, {4}});
  CHECK(tabs[5].rows == std::vector<std::vector<int>>{{1, 4, 5}, {2}, {3}});

  // count equals the hook-length dimension for all partitions of n <= 8
  for (int n = 1; n <= 8; ++n) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    std::function<void(int, int)> gen = [&](int rem, int maxpart) {
      if (rem == 0) {
        parts.push_back(cur);
        return;
      }
      for (int p = std::min(rem, maxpart); p >= 1; --p) {
        cur.push_back(p);
        gen(rem - p, p);
        cur.pop_back();
      }
    };
    gen(n, n);
    for (const auto& p : parts) {
      const Partition lambda{p};
      CHECK(static_cast<long long>(standard_tableaux(lambda).size()) == hook_length_dim(lambda));
    }
  }
}

TEST_CASE("young orthogonal form") {
  const SnIrrep rep(Partition(std::vector<int>{2, 1}));
  // s_1 on the tableau with 1,2 in the first row: +1; 1,2 in the same column: -1
  const CMatrix s1 = rep.transposition(1);
  // tableaux in row-word order: [[1,2],[3]] then [[1,3],[2]]
  CHECK(s1(0, 0).real() == doctest::Approx(1.0));
  CHECK(s1(1, 1).real() == doctest::Approx(-1.0));

  const SnIrrep rep5(Partition(std::vector<int>{3, 1, 1}));
  for (int i = 1; i <= 4; ++i) {
    const CMatrix m = rep5.transposition(i);
    CHECK((m * m - CMatrix::Identity(6, 6)).norm() < 1e-12);
    CHECK((m * m.adjoint() - CMatrix::Identity(6, 6)).norm() < 1e-10);
  }
  for (int i = 1; i <= 3; ++i) {
    const CMatrix a = rep5.transposition(i), b = rep5.transposition(i + 1);
    CHECK((a * b * a - b * a * b).norm() < 1e-12);
  }
}

TEST_CASE("sn irrep homomorphism on S5") {
  const SnIrrep rep(Partition(std::vector<int>{3, 2}));
  RandomStream rng(17);
  std::vector<std::vector<int>> perms;
  for (int t = 0; t < 20; ++t) {
    std::vector<int> p{1, 2, 3, 4, 5};
    for (int i = 4; i > 0; --i) std::swap(p[i], p[rng.integer(i + 1)]);
    perms.push_back(p);
  }
  for (int t = 0; t < 200; ++t) {
    const auto& p = perms[rng.integer(perms.size())];
    const auto& q = perms[rng.integer(perms.size())];
    std::vector<int> pq(5);
    for (int i = 0; i < 5; ++i) pq[i] = p[q[i] - 1];  // (p∘q)(i) = p(q(i))
    CHECK((rep.permutation(pq) - rep.permutation(p) * rep.permutation(q)).norm() < 1e-10);
  }
}

TEST_CASE("sn characters") {
  // identity class gives the dimension
  CHECK(sn_character(Partition(std::vector<int>{3, 1, 1}), {1, 1, 1, 1, 1}) == 6);
  CHECK(sn_character(Partition(std::vector<int>{4, 1}), {1, 1, 1, 1, 1}) == 4);
  // sign character on a transposition
  CHECK(sn_character(Partition(std::vector<int>{1, 1, 1}), {2, 1}) == -1);
  // standard rep of S_n: fixed points - 1
  CHECK(sn_character(Partition(std::vector<int>{4, 1}), {2, 1, 1, 1}) == 2);
  CHECK(sn_character(Partition(std::vector<int>{4, 1}), {5}) == -1);
}

TEST_CASE("check_ndcse") {
  // computational basis with H = {I, Z}^{x2}: FB, CSE and non-degenerate
  const int d = 4;
  const CMatrix basis = CMatrix::Identity(d, d);
  CMatrix z(2, 2);
  z << 1, 0, 0, -1;
  const CMatrix i2 = CMatrix::Identity(2, 2);
  std::vector<CMatrix> subgroup = {tensor_product(i2, i2), tensor_product(i2, z),
                                   tensor_product(z, i2), tensor_product(z, z)};
  const std::vector<int> one_block(4, 0);
  const NdcseReport rep = check_ndcse(basis, one_block, subgroup);
  CHECK(rep.is_fb);
  CHECK(rep.is_cse);
  CHECK(rep.is_nondegenerate);

  // trivial subgroup on a block of dimension > 1: degenerate
  const NdcseReport rep2 = check_ndcse(basis, one_block, {tensor_product(i2, i2)});
  CHECK(rep2.is_cse);
  CHECK_FALSE(rep2.is_nondegenerate);

  // non-commuting subgroup rejected
  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  CHECK_THROWS(check_ndcse(basis, one_block, {tensor_product(z, i2), tensor_product(x, i2)}));
}

TEST_CASE("h_invariant_dimension") {
  // finite: trivial character of any group gives 1
  std::vector<Complex> ones(8, Complex(1, 0));
  CHECK(h_invariant_dimension(ones) == 1);

  // spin-j irrep of SU(2), H = U(1) about Z: one invariant (weight-zero line)
  for (int two_j : {2, 4, 6}) {
    auto chi = [two_j](std::span<const double> theta) {
      Complex acc = 0;
      for (int two_m = -two_j; two_m <= two_j; two_m += 2)
        acc += std::exp(Complex(0, theta[0] * two_m / 2.0));
      return acc;
    };
    CHECK(h_invariant_dimension_torus(chi, 1) == 1);
  }

  // adjoint of U(2^n) with the diagonal torus: 2^n - 1 invariants
  for (int n : {1, 2}) {
    const int d = 1 << n;
    auto chi = [d](std::span<const double> theta) {
      Complex tr = 0;
      for (int k = 0; k < d; ++k) tr += std::exp(Complex(0, theta[k]));
      return tr * std::conj(tr) - 1.0;
    };
    RandomStream rng(20);
    CHECK(h_invariant_dimension_torus(chi, d, &rng) == d - 1);
  }

  // large-dim torus goes through the Monte Carlo path
  {
    const int d = 8;
    auto chi = [d](std::span<const double> theta) {
      Complex tr = 0;
      for (int k = 0; k < d; ++k) tr += std::exp(Complex(0, theta[k]));
      return tr * std::conj(tr) - 1.0;
    };
    RandomStream rng(21);
    CHECK(h_invariant_dimension_torus(chi, d, &rng) == d - 1);
  }

  // inconsistent data: residual too large
  std::vector<Complex> bad = {Complex(0.5, 0), Complex(0.2, 0)};
  CHECK_THROWS(h_invariant_dimension(bad));
}
