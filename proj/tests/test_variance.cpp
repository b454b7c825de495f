#include <doctest.h>

#include <cmath>

#include "shadowlab/variance.hpp"

using namespace shadowlab;

namespace {

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

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("bound_l2") {
  const ChannelSpec lc2 = analytic_channel_spec("local-clifford", {.n = 2, .d = 0, .spin = 0});
  const Observable z1 = observable_pauli("ZI");
  CHECK(bound_l2(lc2, z1) == doctest::Approx(12.0));  // 3 * ||Z x I||_F^2
  const Observable ident{"id", CMatrix::Identity(4, 4)};
  CHECK(bound_l2(lc2, ident) == doctest::Approx(4.0));  // a_triv = 1, ||I||^2 = d
  // fully invisible observable: empty sum
  const ChannelSpec pa = analytic_channel_spec("pauli", {.n = 1, .d = 0, .spin = 0});
  CHECK(bound_l2(pa, Observable{"x", pauli1('X')}) == doctest::Approx(0.0));
}

TEST_CASE("bound_inf") {
  const ChannelSpec lc1 = analytic_channel_spec("local-clifford", {.n = 1, .d = 0, .spin = 0});
  CHECK(bound_inf(lc1, Observable{"z", pauli1('Z')}) == doctest::Approx(9.0));
  CHECK(bound_inf(lc1, Observable{"id", CMatrix::Identity(2, 2)}) == doctest::Approx(1.0));
  // isotypic projector under su2-tensor: trivial components, a = 1
  const Protocol su2 = make_protocol("su2-tensor", {.n = 3, .d = 0, .spin = 0});
  const Observable proj = observable_isotypic_projector(*su2.schur, 3);
  CHECK(bound_inf(*su2.spec, proj) == doctest::Approx(1.0));
}

TEST_CASE("bound_special") {
  // Pauli string under the global protocol: d + 1
  const ChannelSpec gh = analytic_channel_spec("global-haar", {.n = 2, .d = 4, .spin = 0});
  const Observable zz = observable_pauli("ZZ");
  const auto sp = bound_special(gh, zz);
  REQUIRE(sp.has_value());
  CHECK(*sp == doctest::Approx(5.0));
  // even Majorana monomial under matchgates: C(2n,2k)/C(n,k)
  const int n = 3;
  const ChannelSpec mg = analytic_channel_spec("matchgate", {.n = n, .d = 0, .spin = 0});
  const Observable gam = observable_majorana({1, 2}, n);
  const auto spm = bound_special(mg, gam);
  REQUIRE(spm.has_value());
  CHECK(*spm == doctest::Approx(static_cast<double>(binom(2 * n, 2)) / binom(n, 1)));
  CHECK(*spm <= bound_inf(mg, gam) + 1e-9);
  // PSD single-isotypic: su2 projector
  const Protocol su2 = make_protocol("su2-tensor", {.n = 2, .d = 0, .spin = 0});
  const Observable proj = observable_isotypic_projector(*su2.schur, 2);
  const auto spp = bound_special(*su2.spec, proj);
  REQUIRE(spp.has_value());
  CHECK(*spp == doctest::Approx(1.0));
  // indefinite multi-isotypic observable: absent
  const ChannelSpec lc2 = analytic_channel_spec("local-clifford", {.n = 2, .d = 0, .spin = 0});
  const Observable mix{"mix", CMatrix(observable_pauli("ZI").matrix + observable_pauli("XX").matrix)};
  CHECK_FALSE(bound_special(lc2, mix).has_value());
  // the split middle sector is excluded (condition (ii) fails there)
  const ChannelSpec mg2 = analytic_channel_spec("matchgate", {.n = 2, .d = 0, .spin = 0});
  CHECK_FALSE(bound_special(mg2, observable_majorana({1, 2}, 2)).has_value());
}

TEST_CASE("bound_su2_tensor") {
  const Protocol su2 = make_protocol("su2-tensor", {.n = 4, .d = 0, .spin = 0});
  const Observable proj = observable_isotypic_projector(*su2.schur, 4);
  CHECK(bound_su2_tensor(4, proj) == doctest::Approx(2500.0 / 3.0));
  CHECK(bound_su2_tensor(1, Observable{"z", pauli1('Z')}) == doctest::Approx(64.0 / 3.0));
  const SchurBasis s3 = schur_basis(3);
  CHECK(bound_su2_tensor(3, observable_zsym(s3)) == doctest::Approx(3072.0));
  // not permutation invariant: rejected
  CHECK_THROWS(bound_su2_tensor(2, observable_pauli("ZI")));
}

TEST_CASE("exact variance of zsym vs monte carlo") {
  // singlet state, n=2: the estimator is identically zero
  const SchurBasis s2 = schur_basis(2);
  CVector singlet = CVector::Zero(4);
  singlet(1) = 1 / std::sqrt(2.0);
  singlet(2) = -1 / std::sqrt(2.0);
  CHECK(exact_variance_zsym(s2, QuantumState::pure(singlet)) == doctest::Approx(0.0));

  const Protocol p2 = make_protocol("su2-tensor", {.n = 2, .d = 0, .spin = 0});
  const Observable z2 = observable_zsym(s2);
  // maximally mixed state n=2
  {
    const QuantumState mm = QuantumState::maximally_mixed(4);
    const double exact = exact_variance_zsym(s2, mm);
    const EmpiricalVariance ev =
        empirical_single_shot_variance(p2, mm, z2, 40000, RandomStream(21));
    CHECK(std::abs(ev.variance - exact) < 5 * ev.stderr_est);
  }
  // random pure states, n=2 and n=4
  for (int n : {2, 4}) {
    const Protocol p = make_protocol("su2-tensor", {.n = n, .d = 0, .spin = 0});
    const Observable z = observable_zsym(*p.schur);
    RandomStream rng(22 + n);
    const QuantumState rho = QuantumState::pure(random_pure_state(1 << n, rng));
    const double exact = exact_variance_zsym(*p.schur, rho);
    const EmpiricalVariance ev =
        empirical_single_shot_variance(p, rho, z, 40000, RandomStream(23 + n));
    CHECK(std::abs(ev.variance - exact) < 5 * ev.stderr_est);
  }
  CHECK_THROWS(exact_variance_zsym(schur_basis(3), QuantumState::maximally_mixed(8)));
}

TEST_CASE("exact variance of the isotypic projector") {
  const SchurBasis s3 = schur_basis(3);
  // state inside the [3] isotypic: p = 1, variance 0
  CVector top = CVector::Zero(8);
  top(0) = 1;  // |000> is in the symmetric subspace
  CHECK(exact_variance_projector(s3, QuantumState::pure(top), 3) == doctest::Approx(0.0));
  // p = 1/2 saturates at 1/4 (mix symmetric and mixed-symmetry states)
  const Eigen::Index sym_col = s3.column_of(3, 1, 3);
  const Eigen::Index mixed_col = s3.column_of(1, 1, 1);
  CVector half = (s3.transform.col(sym_col) + s3.transform.col(mixed_col)) / std::sqrt(2.0);
  CHECK(exact_variance_projector(s3, QuantumState::pure(half), 3) == doctest::Approx(0.25));
  // random state vs Monte Carlo, eta = [2,1]
  const Protocol p = make_protocol("su2-tensor", {.n = 3, .d = 0, .spin = 0});
  RandomStream rng(25);
  const QuantumState rho = QuantumState::pure(random_pure_state(8, rng));
  const Observable proj = observable_isotypic_projector(s3, 1);
  const double exact = exact_variance_projector(s3, rho, 1);
  CHECK(exact >= 0.0);
  CHECK(exact <= 0.25);
  const EmpiricalVariance ev =
      empirical_single_shot_variance(p, rho, proj, 40000, RandomStream(26));
  CHECK(std::abs(ev.variance - exact) < 5 * ev.stderr_est);
}

TEST_CASE("empirical second moment basics") {
  const Protocol lc = make_protocol("local-clifford", {.n = 2, .d = 0, .spin = 0});
  RandomStream rng(27);
  const QuantumState rho = QuantumState::pure(random_pure_state(4, rng));
  // O = I: second moment exactly 1 with zero spread
  const SecondMoment sm =
      empirical_second_moment(lc, rho, Observable{"id", CMatrix::Identity(4, 4)}, 1000,
                              RandomStream(28));
  CHECK(sm.value == doctest::Approx(1.0));
  CHECK(sm.stderr_est == doctest::Approx(0.0));
  // weight-2 Pauli: bounded by the special bound 3^2
  const Observable xx = observable_pauli("XX");
  const SecondMoment sm2 = empirical_second_moment(lc, rho, xx, 20000, RandomStream(29));
  const auto sp = bound_special(*lc.spec, xx);
  REQUIRE(sp.has_value());
  CHECK(*sp == doctest::Approx(9.0));
  CHECK(sm2.value <= *sp + 5 * sm2.stderr_est);
}

TEST_CASE("tight frame identity") {
  // 24-element single-qubit Clifford enumeration with the Pauli basis
  const GroupEnsemble lc = local_clifford_ensemble(1);
  const MeasurementBasis comp = computational_basis(1);
  const double r = 1 / std::sqrt(2.0);
  const std::vector<CMatrix> basis = {r * pauli1('X'), r * pauli1('Y'), r * pauli1('Z')};
  const TightFrameResult exact = tight_frame_check(lc, comp, basis, {2}, 0);
  CHECK(exact.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(exact.stderr_est == 0.0);

  // trivial group: D = the whole basis, any tau
  GroupEnsemble trivial;
  trivial.name = "trivial";
  trivial.dim = 2;
  trivial.enumerate = []() {
    ElementDescriptor d;
    d.ensemble = "trivial";
    return std::vector<SampledElement>{{CMatrix::Identity(2, 2), d}};
  };
  const TightFrameResult one = tight_frame_check(trivial, comp, basis, {0, 1, 2}, 1);
  CHECK(one.value == doctest::Approx(1.0));

  // diagonal-or-off-diagonal precondition
  CMatrix bad(2, 2);
  bad << 1, 1, 1, -1;
  CHECK_THROWS(tight_frame_check(lc, comp, {bad / bad.norm()}, {0}, 0));

  // matchgate n=3, degree-2 Majorana basis, tau = gamma1 gamma2: 1/5 (MC)
  const int n = 3;
  const GroupEnsemble mg = matchgate_ensemble(n);
  const MajoranaSet majo = majorana_operators(n);
  std::vector<CMatrix> gops;
  std::vector<int> diag;
  int tau = -1;
  const double root_d = std::sqrt(8.0);
  for (int a = 1; a <= 2 * n; ++a)
    for (int b = a + 1; b <= 2 * n; ++b) {
      const CMatrix g = majorana_monomial(majo, {a, b}) / root_d;
      if (b == a + 1 && a % 2 == 1) diag.push_back(static_cast<int>(gops.size()));
      if (a == 1 && b == 2) tau = static_cast<int>(gops.size());
      gops.push_back(g);
    }
  // deliberately probe an off-diagonal tau as well
  const MeasurementBasis comp3 = computational_basis(3);
  const TightFrameResult mc = tight_frame_check(mg, comp3, gops, diag, tau, 20000, RandomStream(31));
  CHECK(std::abs(mc.value - 0.2) < 5 * mc.stderr_est + 0.01);
}

TEST_CASE("variance report") {
  const Protocol lc = make_protocol("local-clifford", {.n = 2, .d = 0, .spin = 0});
  RandomStream rng(33);
  const QuantumState rho = QuantumState::pure(random_pure_state(4, rng));
  const VarianceReport rep =
      variance_report(lc, rho, observable_pauli("ZZ"), 10000, RandomStream(34));
  CHECK(rep.l2_bound > 0);
  CHECK(rep.inf_bound > 0);
  REQUIRE(rep.special_bound.has_value());
  CHECK(*rep.special_bound <= rep.inf_bound + 1e-9);
  CHECK(rep.empirical_variance <= std::min(rep.l2_bound, rep.inf_bound) + 5 * rep.stderr_est);
  const nlohmann::json j = rep.to_json();
  CHECK(j.contains("special_bound"));
}
