#include <doctest.h>

#include <cmath>

#include "shadowlab/ensembles.hpp"

using namespace shadowlab;

namespace {

double unitarity_defect(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm();
}

CMatrix pauli1(char c) {
  CMatrix m(2, 2);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

}  // namespace

TEST_CASE("majorana operators") {
  const MajoranaSet m = majorana_operators(2);
  REQUIRE(m.gammas.size() == 4);
  CHECK((m.gammas[2] - tensor_product(pauli1('Z'), pauli1('X'))).norm() < 1e-14);  // gamma_3 = ZX
  for (std::size_t a = 0; a < 4; ++a) {
    CHECK((m.gammas[a] - m.gammas[a].adjoint()).norm() < 1e-14);
    for (std::size_t b = 0; b < 4; ++b) {
      const CMatrix anti = m.gammas[a] * m.gammas[b] + m.gammas[b] * m.gammas[a];
      const CMatrix expect =
          (a == b) ? CMatrix(2.0 * CMatrix::Identity(4, 4)) : CMatrix(CMatrix::Zero(4, 4));
      CHECK((anti - expect).norm() < 1e-13);
    }
  }
  // Hermitian monomial: -i g1 g2 = Z on one qubit
  const MajoranaSet m1 = majorana_operators(1);
  const CMatrix g12 = majorana_monomial(m1, {1, 2});
  CHECK((g12 - pauli1('Z')).norm() < 1e-14);
  CHECK((g12 - g12.adjoint()).norm() < 1e-14);
}

TEST_CASE("haar unitary") {
  RandomStream rng(1);
  for (int t = 0; t < 20; ++t) CHECK(unitarity_defect(haar_unitary(4, rng)) < 1e-10);
  // E|U_00|^2 = 1/d
  const int reps = 10000;
  double acc = 0;
  for (int t = 0; t < reps; ++t) acc += std::norm(haar_unitary(4, rng)(0, 0));
  CHECK(std::abs(acc / reps - 0.25) < 5.0 * 0.25 / std::sqrt(double(reps)));
  // determinism
  GroupEnsemble e = haar_unitary_ensemble(4);
  RandomStream a(3, 5), b(3, 5);
  CHECK((e.sample(a).unitary - e.sample(b).unitary).norm() == 0.0);
}

TEST_CASE("haar orthogonal identity and split forms") {
  RandomStream rng(2);
  for (int t = 0; t < 10; ++t) {
    const CMatrix o = haar_orthogonal(6, rng, FormMatrix::identity(6));
    CHECK(o.imag().norm() < 1e-12);
    CHECK(unitarity_defect(o) < 1e-10);
  }
  const FormMatrix q = FormMatrix::split_orthogonal(8);
  for (int t = 0; t < 10; ++t) {
    const CMatrix o = haar_orthogonal(8, rng, q);
    CHECK(unitarity_defect(o) < 1e-10);
    CHECK((o.transpose() * q.matrix * o - q.matrix).norm() < 1e-9);
  }
  // O(2): mean rotation cosine/sine vanish by angle uniformity
  double mc = 0, ms = 0;
  const int reps = 10000;
  int proper = 0;
  for (int t = 0; t < reps; ++t) {
    const CMatrix o = haar_orthogonal(2, rng, FormMatrix::identity(2));
    if (o.real().determinant() > 0) {
      mc += o(0, 0).real();
      ms += o(1, 0).real();
      ++proper;
    }
  }
  CHECK(std::abs(mc / proper) < 5.0 / std::sqrt(double(proper)));
  CHECK(std::abs(ms / proper) < 5.0 / std::sqrt(double(proper)));
  CHECK(std::abs(proper - reps / 2) < 5 * std::sqrt(reps / 4.0));
}

TEST_CASE("haar symplectic") {
  RandomStream rng(3);
  for (int d : {4, 8}) {
    const CMatrix omega = FormMatrix::symplectic_omega(d).matrix;
    for (int t = 0; t < 10; ++t) {
      const CMatrix u = haar_symplectic(d, rng);
      CHECK(unitarity_defect(u) < 1e-10);
      CHECK((u.transpose() * omega * u - omega).norm() < 1e-9);
    }
  }
  // d=2 is SU(2): E|U_00|^2 = 1/2
  const int reps = 10000;
  double acc = 0;
  for (int t = 0; t < reps; ++t) acc += std::norm(haar_symplectic(2, rng)(0, 0));
  CHECK(std::abs(acc / reps - 0.5) < 5.0 * 0.5 / std::sqrt(double(reps)));
  CHECK_THROWS(haar_symplectic(5, rng));
}

TEST_CASE("single qubit cliffords") {
  const auto& cl = single_qubit_cliffords();
  CHECK(cl.size() == 24);
  bool has_identity = false;
  for (const CMatrix& u : cl) {
    CHECK(unitarity_defect(u) < 1e-10);
    if ((u - CMatrix::Identity(2, 2)).norm() < 1e-9) has_identity = true;
    for (char c : {'X', 'Y', 'Z'}) {
      const CMatrix conj = u * pauli1(c) * u.adjoint();
      bool matches = false;
      for (char t : {'X', 'Y', 'Z'})
        for (double s : {1.0, -1.0})
          if ((conj - s * pauli1(t)).norm() < 1e-9) matches = true;
      CHECK(matches);
    }
  }
  CHECK(has_identity);
}

TEST_CASE("local clifford ensemble") {
  GroupEnsemble e1 = local_clifford_ensemble(1);
  CHECK(*e1.cardinality == 24);
  CHECK(e1.enumerate().size() == 24);
  GroupEnsemble e2 = local_clifford_ensemble(2);
  CHECK(*e2.cardinality == 576);
  RandomStream rng(4);
  const SampledElement s = e2.sample(rng);
  const auto idx = s.descriptor.params.at("indices").get<std::vector<int>>();
  const auto& table = single_qubit_cliffords();
  const CMatrix expect = tensor_product(table[idx[0]], table[idx[1]]);
  CHECK((s.unitary - expect).norm() < 1e-12);
  CHECK((e2.reconstruct(s.descriptor) - s.unitary).norm() == 0.0);
}

TEST_CASE("pauli group ensemble") {
  GroupEnsemble e = pauli_group_ensemble(1);
  CHECK(e.enumerate().size() == 4);
  GroupEnsemble e2 = pauli_group_ensemble(2);
  CHECK(*e2.cardinality == 16);
  for (const SampledElement& s : e2.enumerate()) {
    CHECK(unitarity_defect(s.unitary) < 1e-12);
    CHECK((s.unitary * s.unitary - CMatrix::Identity(4, 4)).norm() < 1e-12);
  }
  CHECK_THROWS(pauli_group_ensemble(7));
}

TEST_CASE("su2 ensembles") {
  RandomStream rng(5);
  GroupEnsemble tensor = su2_tensor_ensemble(2);
  CMatrix swap = CMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1;
  for (int t = 0; t < 10; ++t) {
    const CMatrix u = tensor.sample(rng).unitary;
    CHECK(unitarity_defect(u) < 1e-10);
    CHECK((u * swap - swap * u).norm() < 1e-10);
  }
  GroupEnsemble half = su2_spin_ensemble(0.5);
  for (int t = 0; t < 10; ++t) {
    const CMatrix u = half.sample(rng).unitary;
    CHECK(std::abs(u.determinant() - Complex(1, 0)) < 1e-10);
  }
  // spin-1/2 lift reproduces the SU(2) matrix itself
  for (int t = 0; t < 20; ++t) {
    const CMatrix u = su2_from_quaternion(rng.gaussian(), rng.gaussian(), rng.gaussian(),
                                          rng.gaussian());
    CHECK((su2_wigner_rotation(0.5, u) - u).norm() < 1e-12);
  }
  // spin-J homomorphism on random pairs
  for (double spin : {1.0, 1.5}) {
    for (int t = 0; t < 100; ++t) {
      const CMatrix u1 = su2_from_quaternion(rng.gaussian(), rng.gaussian(), rng.gaussian(),
                                             rng.gaussian());
      const CMatrix u2 = su2_from_quaternion(rng.gaussian(), rng.gaussian(), rng.gaussian(),
                                             rng.gaussian());
      const CMatrix w12 = su2_wigner_rotation(spin, CMatrix(u1 * u2));
      CHECK((w12 - su2_wigner_rotation(spin, u1) * su2_wigner_rotation(spin, u2)).norm() < 1e-8);
    }
  }
}

TEST_CASE("matchgate ensemble") {
  const int n = 3;
  RandomStream rng(6);
  GroupEnsemble e = matchgate_ensemble(n);
  const MajoranaSet m = majorana_operators(n);
  for (int t = 0; t < 5; ++t) {
    RandomStream sub = rng.split(t);
    const SampledElement s = e.sample(sub);
    CHECK(unitarity_defect(s.unitary) < 1e-9);
    // parity preservation between Hamming sectors
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        if (__builtin_popcount(a) % 2 != __builtin_popcount(b) % 2)
          CHECK(std::abs(s.unitary(a, b)) < 1e-10);
    // adjoint action: U gamma_mu U† = sum_nu Q_{nu,mu} gamma_nu
    RMatrix q(6, 6);
    const auto qj = s.descriptor.params.at("q");
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) q(i, j) = qj.at(i).at(j).get<double>();
    CHECK(std::abs(q.determinant() - 1.0) < 1e-8);
    for (int mu = 0; mu < 6; ++mu) {
      CMatrix lhs = s.unitary * m.gammas[mu] * s.unitary.adjoint();
      CMatrix rhs = CMatrix::Zero(8, 8);
      for (int nu = 0; nu < 6; ++nu) rhs += q(nu, mu) * m.gammas[nu];
      CHECK((lhs - rhs).norm() < 1e-8);
    }
    CHECK((e.reconstruct(s.descriptor) - s.unitary).norm() < 1e-12);
    // Givens product vs quadratic-generator exponential: equal up to the
    // global sign of the double-cover lift
    const CMatrix gen = matchgate_unitary_generator(m, q);
    const double plus = (gen - s.unitary).norm(), minus = (gen + s.unitary).norm();
    CHECK(std::min(plus, minus) < 1e-8);
  }
}

TEST_CASE("particle preserving ensemble") {
  const int n = 3;
  RandomStream rng(7);
  GroupEnsemble e = particle_preserving_ensemble(n);
  const MajoranaSet m = majorana_operators(n);
  CMatrix num = CMatrix::Zero(8, 8);
  for (int j = 0; j < n; ++j) {
    const CMatrix a = 0.5 * (m.gammas[2 * j] + Complex(0, 1) * m.gammas[2 * j + 1]);
    num += a.adjoint() * a;
  }
  for (int t = 0; t < 5; ++t) {
    RandomStream sub = rng.split(100 + t);
    const CMatrix u = e.sample(sub).unitary;
    CHECK(unitarity_defect(u) < 1e-9);
    CHECK((u * num - num * u).norm() < 1e-9);
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        if (__builtin_popcount(a) != __builtin_popcount(b)) CHECK(std::abs(u(a, b)) < 1e-10);
  }
  // single-particle block equals the underlying U(n) element
  RandomStream sub(7, 12345);
  RandomStream sub_copy = sub;
  const CMatrix big = e.sample(sub).unitary;
  const CMatrix u3 = haar_unitary(3, sub_copy);  // same stream, same draws
  CMatrix block(3, 3);
  const int states[3] = {4, 2, 1};  // modes 1,2,3 singly occupied
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) block(i, j) = big(states[i], states[j]);
  CHECK((block - u3).norm() < 1e-9);
}

TEST_CASE("symmetric group ensembles") {
  GroupEnsemble e = symmetric_group_ensemble(3);
  const auto elems = e.enumerate();
  CHECK(elems.size() == 6);
  for (const SampledElement& s : elems) {
    for (Eigen::Index i = 0; i < 3; ++i) {
      CHECK(s.unitary.row(i).cwiseAbs().sum() == doctest::Approx(1.0));
      CHECK(s.unitary.col(i).cwiseAbs().sum() == doctest::Approx(1.0));
    }
  }
  // composition matches permutation composition: R(p)R(q) = R(p∘q)
  const auto pm = [&](const std::vector<int>& p) {
    ElementDescriptor d;
    d.ensemble = "symmetric-group";
    d.params["perm"] = p;
    return e.reconstruct(d);
  };
  const std::vector<int> p{2, 3, 1}, q{1, 3, 2};
  std::vector<int> pq(3);
  for (int i = 0; i < 3; ++i) pq[i] = p[q[i] - 1];
  CHECK((pm(p) * pm(q) - pm(pq)).norm() < 1e-13);

  GroupEnsemble irrep = sn_irrep_ensemble(Partition(std::vector<int>{3, 1, 1}));
  CHECK(irrep.dim == 6);
  CHECK(*irrep.cardinality == 120);
  const auto all = irrep.enumerate();
  CHECK(all.size() == 120);
  double id_trace = 0;
  for (const SampledElement& s : all) {
    CHECK((s.unitary * s.unitary.transpose() - CMatrix::Identity(6, 6)).norm() < 1e-10);
    CHECK(s.unitary.imag().norm() < 1e-14);
    if ((s.unitary - CMatrix::Identity(6, 6)).norm() < 1e-9) id_trace = s.unitary.real().trace();
  }
  CHECK(id_trace == doctest::Approx(6.0));
}

TEST_CASE("ensemble enumerator closure spot check") {
  RandomStream rng(8);
  for (const GroupEnsemble& e :
       {pauli_group_ensemble(2), symmetric_group_ensemble(4), local_clifford_ensemble(1)}) {
    const auto elems = e.enumerate();
    for (int t = 0; t < 100; ++t) {
      const CMatrix& a = elems[rng.integer(elems.size())].unitary;
      const CMatrix& b = elems[rng.integer(elems.size())].unitary;
      const CMatrix ab = a * b;
      bool found = false;  // membership up to global phase
      for (const SampledElement& s : elems) {
        if (std::abs(std::abs(hs_inner(s.unitary, ab)) - static_cast<double>(e.dim)) < 1e-7) {
          found = true;
          break;
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("descriptor json round trip") {
  RandomStream rng(9);
  for (const GroupEnsemble& e : {haar_unitary_ensemble(4), matchgate_ensemble(2),
                                 su2_tensor_ensemble(3), particle_preserving_ensemble(2),
                                 haar_symplectic_ensemble(4),
                                 haar_orthogonal_ensemble(4, FormMatrix::Kind::SplitOrthogonal),
                                 su2_spin_ensemble(1.5)}) {
    for (int t = 0; t < 5; ++t) {
      RandomStream sub = rng.split(t * 31 + 7);
      const SampledElement s = e.sample(sub);
      const nlohmann::json j = s.descriptor.to_json();
      const ElementDescriptor back = ElementDescriptor::from_json(nlohmann::json::parse(j.dump()));
      CHECK((e.reconstruct(back) - s.unitary).norm() < 1e-9);
    }
  }
}
