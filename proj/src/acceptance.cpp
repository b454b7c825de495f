#include "shadowlab/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>

#include "shadowlab/io.hpp"
#include "shadowlab/protocols.hpp"
#include "shadowlab/shadows.hpp"
#include "shadowlab/variance.hpp"

namespace shadowlab {

namespace {

struct Check {
  CriterionResult* result;

  void line(const std::string& text) { result->lines.push_back(text); }
  void expect(bool ok, const std::string& what) {
    result->pass &= ok;
    result->lines.push_back(std::string(ok ? "PASS  " : "FAIL  ") + what);
  }
};

std::string fmt(double v) { return format_double(v); }

// Eigenvalues of the channel compressed to the block-diagonal operator space
// of the protocol basis, with the annihilated complement reported separately.
struct RestrictedSpectrum {
  std::vector<EigenCluster> clusters;
  Eigen::Index complement = 0;
};

RestrictedSpectrum restricted_spectrum(const Protocol& p, double tol) {
  const SuperOperator m = measurement_channel_exact(p.ensemble, p.basis);
  const BlockRestriction r = block_diagonal_restriction(m, p.basis);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (r.matrix + r.matrix.adjoint()));
  return {cluster_eigenvalues(eig.eigenvalues(), tol), r.complement_dim};
}

bool clusters_equal(const std::vector<EigenCluster>& got,
                    const std::vector<std::pair<double, long long>>& want, double tol) {
  if (got.size() != want.size()) return false;
  auto sorted = want;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < got.size(); ++k) {
    if (std::abs(got[k].value - sorted[k].first) > tol) return false;
    if (got[k].multiplicity != sorted[k].second) return false;
  }
  return true;
}

std::string cluster_string(const std::vector<EigenCluster>& clusters) {
  std::ostringstream os;
  for (const EigenCluster& c : clusters) os << " " << fmt(c.value) << " x" << c.multiplicity;
  return os.str();
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

QuantumState random_pure(int d, std::uint64_t seed) {
  RandomStream rng(seed, 0x5eed);
  return QuantumState::pure(random_pure_state(d, rng));
}

QuantumState random_mixed(int d, std::uint64_t seed) {
  RandomStream rng(seed, 0x315ed);
  CMatrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return QuantumState::mixed(rho);
}

// ---------------------------------------------------------------------------

CriterionResult criterion_1() {
  CriterionResult r{1, "exact channel spectra (enumeration)", true, {}};
  Check c{&r};

  // Pauli group, n = 1 and 2: eigenvalue 1 exactly on span{I,Z}^{⊗n}
  for (int n : {1, 2}) {
    const Protocol p = make_protocol("pauli", {.n = n, .d = 0, .spin = 0});
    const RestrictedSpectrum s = restricted_spectrum(p, 1e-10);
    const long long d2 = 1LL << (2 * n), diag = 1LL << n;
    c.expect(clusters_equal(s.clusters, {{0.0, d2 - diag}, {1.0, diag}}, 1e-10) &&
                 s.complement == 0,
             "pauli n=" + std::to_string(n) + " spectrum {1 x" + std::to_string(diag) + ", 0 x" +
                 std::to_string(d2 - diag) + "}:" + cluster_string(s.clusters));
  }

  // local Cliffords n=2
  {
    const Protocol p = make_protocol("local-clifford", {.n = 2, .d = 0, .spin = 0});
    const RestrictedSpectrum s = restricted_spectrum(p, 1e-10);
    c.expect(clusters_equal(s.clusters, {{1.0, 1}, {1.0 / 3.0, 6}, {1.0 / 9.0, 9}}, 1e-10),
             "local-clifford n=2 spectrum {1, 1/3 x6, 1/9 x9}:" + cluster_string(s.clusters));
  }

  // Bell-basis local Cliffords n=2: {1, 1/3 x3} on the Bell-diagonal
  // operators plus a 12-dimensional annihilated complement
  {
    const Protocol p = make_protocol("local-clifford-bell", {.n = 2, .d = 0, .spin = 0});
    const RestrictedSpectrum s = restricted_spectrum(p, 1e-10);
    c.expect(clusters_equal(s.clusters, {{1.0, 1}, {1.0 / 3.0, 3}}, 1e-10) && s.complement == 12,
             "bell-basis local-clifford n=2 {1, 1/3 x3, 0 x12}:" + cluster_string(s.clusters) +
                 " + 0 x" + std::to_string(s.complement));
  }

  // S_5 permutation representation with the cyclic Fourier basis
  {
    const Protocol p = make_protocol("sn-permutation", {.n = 5, .d = 0, .spin = 0});
    const RestrictedSpectrum s = restricted_spectrum(p, 1e-10);
    c.expect(clusters_equal(s.clusters, {{1.0, 2}, {0.0, 4}, {0.2, 5}, {1.0 / 3.0, 6}}, 1e-10),
             "S_5 permutation spectrum {1 x2, 0 x4, 1/5 x5, 1/3 x6}:" + cluster_string(s.clusters));
  }
  return r;
}

CriterionResult criterion_2() {
  CriterionResult r{2, "Gelfand-Tsetlin counterexample", true, {}};
  Check c{&r};
  const Protocol p = make_protocol("sn-gt", {.n = 5, .d = 0, .spin = 0});
  const SuperOperator m = measurement_channel_exact(p.ensemble, p.basis);
  const auto clusters = channel_spectrum(m, 1e-9);
  c.line("S_5 channel on End(V^[3,1,1]) clusters:" + cluster_string(clusters));
  auto mult_of = [&](double v) {
    for (const EigenCluster& cl : clusters)
      if (std::abs(cl.value - v) < 1e-9) return cl.multiplicity;
    return 0;
  };
  c.expect(mult_of(11.0 / 90.0) == 5, "cluster 11/90 with multiplicity 5");
  c.expect(mult_of(43.0 / 120.0) == 5, "cluster 43/120 with multiplicity 5");
  c.expect(mult_of(1.0 / 24.0) >= 5, "cluster 1/24 with multiplicity >= 5");
  c.expect(!p.spec.has_value(), "no central channel spec exists for the GT protocol");
  return r;
}

void check_component_means(Check& c, const std::string& title, const Protocol& p, long long n,
                           std::uint64_t seed) {
  const auto means =
      channel_component_means_mc(p.ensemble, p.basis, *p.spec, n, RandomStream(seed));
  for (const ComponentMean& cm : means) {
    const double a = p.spec->component(cm.label).a.value();
    const double tol = std::max(5 * cm.stderr_est, 1e-6);
    c.expect(std::abs(cm.mean - a) <= tol, title + " " + cm.label + ": predicted " + fmt(a) +
                                               ", measured " + fmt(cm.mean) + " +- " +
                                               fmt(cm.stderr_est));
  }
}

CriterionResult criterion_3() {
  CriterionResult r{3, "Monte-Carlo channel spectra", true, {}};
  Check c{&r};
  const long long n_samples = 100000;

  for (int d : {4, 8}) {
    const Protocol p = make_protocol("global-haar", {.n = 0, .d = d, .spin = 0});
    check_component_means(c, "haar U(" + std::to_string(d) + ")", p, n_samples, 301 + d);
  }
  for (int n : {3, 4}) {
    const Protocol p = make_protocol("matchgate", {.n = n, .d = 0, .spin = 0});
    check_component_means(c, "matchgate n=" + std::to_string(n), p, n_samples, 311 + n);
    if (n % 2 == 0) {
      const Rational a_plus = p.spec->component("deg=" + std::to_string(n) + "+").a;
      const Rational a_minus = p.spec->component("deg=" + std::to_string(n) + "-").a;
      c.expect(a_plus == a_minus, "split middle sector shares one eigenvalue " + a_plus.str());
    }
  }
  {
    const Protocol p = make_protocol("su2-spin", {.n = 0, .d = 0, .spin = 1.5});
    check_component_means(c, "su2 spin-3/2", p, n_samples, 321);
  }
  {
    const Protocol p = make_protocol("orthogonal-split", {.n = 0, .d = 8, .spin = 0});
    check_component_means(c, "orthogonal split d=8", p, n_samples, 331);
  }
  {
    // real-form orthogonal: M(A) = (Tr[A] I + A + A^T)/(d+2) on probes
    const int d = 8;
    const Protocol p = make_protocol("orthogonal-real", {.n = 0, .d = d, .spin = 0});
    RandomStream prng(341);
    for (int t = 0; t < 3; ++t) {
      CMatrix g(d, d);
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) g(i, j) = Complex(prng.gaussian(), prng.gaussian());
      const CMatrix a = 0.5 * (g + g.adjoint());
      const McImage img = channel_apply_mc(p.ensemble, p.basis, a, n_samples / 2,
                                           RandomStream(342 + t));
      const CMatrix expect =
          (a.trace() * CMatrix::Identity(d, d) + a + a.transpose()) / static_cast<double>(d + 2);
      const double dev = (img.image - expect).norm();
      c.expect(dev <= 5 * img.stderr_est,
               "orthogonal real d=8 probe " + std::to_string(t) + ": |M(A) - formula| = " +
                   fmt(dev) + " vs 5*stderr = " + fmt(5 * img.stderr_est));
    }
  }
  for (int d : {4, 8}) {
    const Protocol p = make_protocol("symplectic", {.n = 0, .d = d, .spin = 0});
    check_component_means(c, "symplectic d=" + std::to_string(d), p, n_samples, 351 + d);
  }
  {
    const Protocol p = make_protocol("particle-preserving", {.n = 4, .d = 0, .spin = 0});
    check_component_means(c, "particle-preserving n=4", p, n_samples, 361);
  }
  return r;
}

CriterionResult criterion_4() {
  CriterionResult r{4, "SU(2) tensor protocol end-to-end, n=4", true, {}};
  Check c{&r};
  const int n = 4;
  const Protocol p = make_protocol("su2-tensor", {.n = n, .d = 0, .spin = 0});
  const SchurBasis& schur = *p.schur;
  const Eigen::Index d = 1 << n;

  c.expect((schur.transform.adjoint() * schur.transform - CMatrix::Identity(d, d)).norm() <= 1e-9,
           "Schur transform unitary within 1e-9");
  {
    RandomStream rng(401);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      RandomStream sub = rng.split(t);
      const CMatrix u = p.ensemble.sample(sub).unitary;
      const CMatrix b = schur.transform.adjoint() * u * schur.transform;
      double off = 0.0;
      for (const auto& bi : schur.block_table)
        for (const auto& bj : schur.block_table) {
          if (bi.offset == bj.offset) continue;
          off += b.block(bi.offset, bj.offset, bi.size, bj.size).squaredNorm();
        }
      worst = std::max(worst, std::sqrt(off));
    }
    c.expect(worst <= 1e-8, "off-block mass of conjugated samples <= 1e-8 (got " + fmt(worst) + ")");
  }

  check_component_means(c, "su2-tensor n=4", p, 100000, 402);

  // Z_sym estimator: unbiased and matching the closed-form variance
  {
    const Observable zsym = observable_zsym(schur);
    const QuantumState rho = random_pure(static_cast<int>(d), 403);
    const double truth = hs_inner(zsym.matrix, rho.density).real();
    const long long n_shots = 100000;
    const EmpiricalVariance ev =
        empirical_single_shot_variance(p, rho, zsym, n_shots, RandomStream(404));
    const double se = std::sqrt(ev.variance / n_shots);
    c.expect(std::abs(ev.mean - truth) <= 5 * se, "Z_sym estimator unbiased: mean " +
                                                      fmt(ev.mean) + " vs Tr[rho O] = " +
                                                      fmt(truth) + " +- 5 SE " + fmt(5 * se));
    const double exact = exact_variance_zsym(schur, rho);
    c.expect(std::abs(ev.variance - exact) <= 5 * ev.stderr_est,
             "Z_sym variance matches closed form: empirical " + fmt(ev.variance) + " vs exact " +
                 fmt(exact) + " +- 5*stderr " + fmt(5 * ev.stderr_est));
  }

  // isotypic projector estimator: Var = p(1-p) <= 1/4
  {
    const Observable proj = observable_isotypic_projector(schur, 2 * 1);  // lambda = [3,1]
    const QuantumState rho = random_pure(static_cast<int>(d), 405);
    const double prob = hs_inner(proj.matrix, rho.density).real();
    const double exact = prob * (1 - prob);
    const EmpiricalVariance ev =
        empirical_single_shot_variance(p, rho, proj, 100000, RandomStream(406));
    c.expect(std::abs(ev.variance - exact) <= 5 * ev.stderr_est,
             "projector variance = p(1-p): empirical " + fmt(ev.variance) + " vs " + fmt(exact) +
                 " +- 5*stderr " + fmt(5 * ev.stderr_est));
    c.expect(exact <= 0.25 && ev.variance <= 0.25 + 5 * ev.stderr_est,
             "projector variance never exceeds 1/4");
  }
  return r;
}

CriterionResult criterion_5() {
  CriterionResult r{5, "variance-bound ordering over a grid", true, {}};
  Check c{&r};
  const long long n_shots = 4000;
  long long triples = 0;
  int special_cases = 0;

  struct Case {
    Protocol protocol;
    Observable obs;
    QuantumState state;
    std::string name;
  };
  std::vector<Case> grid;

  auto visible_part = [](const Protocol& p, const CMatrix& m) {
    CMatrix vis = CMatrix::Zero(m.rows(), m.cols());
    for (const IsotypicComponent& comp : p.spec->components) {
      if (comp.a.is_zero()) continue;
      vis += p.spec->isotypic_project(m, comp.label);
    }
    return CMatrix(0.5 * (vis + vis.adjoint()));
  };

  std::uint64_t state_seed = 500;
  auto add = [&](const std::string& id, const ProtocolParams& params, const Observable& obs,
                 int n_states) {
    Protocol p = make_protocol(id, params);
    for (int s = 0; s < n_states; ++s) {
      const QuantumState rho = (s % 2 == 0)
                                   ? random_pure(static_cast<int>(p.basis.dim), ++state_seed)
                                   : random_mixed(static_cast<int>(p.basis.dim), ++state_seed);
      grid.push_back({p, obs, rho, id + "/" + obs.name + "/state" + std::to_string(s)});
    }
  };

  {
    RandomStream org(501);
    CMatrix g(4, 4);
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) g(i, j) = Complex(org.gaussian(), org.gaussian());
    const Observable rand4{"rand-herm", CMatrix(0.5 * (g + g.adjoint()))};
    add("global-haar", {.n = 0, .d = 4, .spin = 0}, rand4, 2);
    add("global-haar", {.n = 0, .d = 4, .spin = 0}, observable_pauli("ZZ"), 2);
    add("global-haar", {.n = 0, .d = 4, .spin = 0}, observable_ghz(2), 2);
    add("local-clifford", {.n = 2, .d = 0, .spin = 0}, observable_pauli("ZI"), 2);
    add("local-clifford", {.n = 2, .d = 0, .spin = 0}, observable_pauli("XX"), 2);
    add("local-clifford-bell", {.n = 2, .d = 0, .spin = 0}, observable_pauli("XY"), 2);
    add("pauli", {.n = 2, .d = 0, .spin = 0}, observable_pauli("IZ"), 1);
    add("pauli", {.n = 2, .d = 0, .spin = 0}, observable_pauli("ZZ"), 1);
    add("matchgate", {.n = 3, .d = 0, .spin = 0}, observable_majorana({1, 2}, 3), 2);
    add("matchgate", {.n = 3, .d = 0, .spin = 0}, observable_majorana({1, 2, 3, 4}, 3), 2);
    const SchurBasis s3 = schur_basis(3);
    add("su2-tensor", {.n = 3, .d = 0, .spin = 0}, observable_zsym(s3), 2);
    add("su2-tensor", {.n = 3, .d = 0, .spin = 0}, observable_isotypic_projector(s3, 3), 2);
    // random visible observables for the d-parameterized families
    auto rand_obs = [&](const std::string& id, const ProtocolParams& params, std::uint64_t sd) {
      Protocol p = make_protocol(id, params);
      RandomStream rng(sd);
      CMatrix h(p.basis.dim, p.basis.dim);
      for (Eigen::Index j = 0; j < p.basis.dim; ++j)
        for (Eigen::Index i = 0; i < p.basis.dim; ++i)
          h(i, j) = Complex(rng.gaussian(), rng.gaussian());
      return Observable{"rand-visible", visible_part(p, CMatrix(0.5 * (h + h.adjoint())))};
    };
    add("symplectic", {.n = 0, .d = 4, .spin = 0},
        rand_obs("symplectic", {.n = 0, .d = 4, .spin = 0}, 502), 2);
    add("orthogonal-split", {.n = 0, .d = 4, .spin = 0},
        rand_obs("orthogonal-split", {.n = 0, .d = 4, .spin = 0}, 503), 2);
    add("orthogonal-real", {.n = 0, .d = 4, .spin = 0},
        rand_obs("orthogonal-real", {.n = 0, .d = 4, .spin = 0}, 504), 2);
    add("su2-spin", {.n = 0, .d = 0, .spin = 1.5},
        rand_obs("su2-spin", {.n = 0, .d = 0, .spin = 1.5}, 505), 2);
    add("sn-permutation", {.n = 5, .d = 0, .spin = 0},
        rand_obs("sn-permutation", {.n = 5, .d = 0, .spin = 0}, 506), 2);
    add("particle-preserving", {.n = 3, .d = 0, .spin = 0},
        rand_obs("particle-preserving", {.n = 3, .d = 0, .spin = 0}, 507), 2);
  }

  std::uint64_t run_seed = 550;
  for (const Case& k : grid) {
    ++triples;
    const double l2 = bound_l2(*k.protocol.spec, k.obs);
    const double inf = bound_inf(*k.protocol.spec, k.obs);
    const auto special = bound_special(*k.protocol.spec, k.obs);
    const EmpiricalVariance ev =
        empirical_single_shot_variance(k.protocol, k.state, k.obs, n_shots, RandomStream(++run_seed));
    const double cap = std::min(l2, inf);
    c.expect(ev.variance <= cap + 5 * ev.stderr_est,
             k.name + ": Var " + fmt(ev.variance) + " <= min(l2 " + fmt(l2) + ", inf " + fmt(inf) +
                 ") + 5*stderr");
    if (special) {
      ++special_cases;
      c.expect(ev.variance <= *special + 5 * ev.stderr_est,
               k.name + ": Var " + fmt(ev.variance) + " <= special " + fmt(*special) +
                   " + 5*stderr");
      c.expect(*special <= inf + 1e-9, k.name + ": special " + fmt(*special) + " <= inf " + fmt(inf));
    }
  }
  c.expect(triples >= 30, "grid covers >= 30 (protocol, observable, state) triples (got " +
                              std::to_string(triples) + ")");
  c.expect(special_cases >= 6, "special bound exercised on definite/normalized cases (got " +
                                   std::to_string(special_cases) + ")");
  return r;
}

CriterionResult criterion_6() {
  CriterionResult r{6, "tight-frame identity", true, {}};
  Check c{&r};
  // 24-element single-qubit Clifford enumeration: exactly 1/3
  {
    const GroupEnsemble lc = local_clifford_ensemble(1);
    const MeasurementBasis comp = computational_basis(1);
    const double s = 1 / std::sqrt(2.0);
    CMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;
    const std::vector<CMatrix> basis = {s * x, s * y, s * z};
    const TightFrameResult res = tight_frame_check(lc, comp, basis, {2}, 0);
    c.expect(std::abs(res.value - 1.0 / 3.0) <= 1e-12,
             "single-qubit Clifford enumeration yields 1/3 exactly (got " + fmt(res.value) + ")");
  }
  // matchgate n=3, degree-2 Majoranas, tau = gamma1 gamma2: 1/5 within 5*stderr
  {
    const int n = 3;
    const GroupEnsemble mg = matchgate_ensemble(n);
    const MeasurementBasis comp = computational_basis(n);
    const MajoranaSet majo = majorana_operators(n);
    std::vector<CMatrix> ops;
    std::vector<int> diag;
    const double root_d = std::sqrt(8.0);
    for (int a = 1; a <= 2 * n; ++a)
      for (int b = a + 1; b <= 2 * n; ++b) {
        if (b == a + 1 && a % 2 == 1) diag.push_back(static_cast<int>(ops.size()));
        ops.push_back(majorana_monomial(majo, {a, b}) / root_d);
      }
    const TightFrameResult res = tight_frame_check(mg, comp, ops, diag, 0, 100000, RandomStream(601));
    c.expect(std::abs(res.value - 0.2) <= 5 * res.stderr_est,
             "matchgate n=3 Monte Carlo yields 1/5 within 5*stderr (got " + fmt(res.value) +
                 " +- " + fmt(res.stderr_est) + ")");
  }
  return r;
}

CriterionResult criterion_7() {
  CriterionResult r{7, "dephasing equals H-twirl", true, {}};
  Check c{&r};
  CMatrix z(2, 2), x(2, 2);
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  // computational basis with H = {I, Z}^{⊗2}
  {
    const MeasurementBasis comp = computational_basis(2);
    std::vector<CMatrix> subgroup;
    for (int mask = 0; mask < 4; ++mask) {
      CMatrix h = CMatrix::Ones(1, 1);
      for (int q = 0; q < 2; ++q)
        h = tensor_product(h, (mask >> q) & 1 ? z : CMatrix(CMatrix::Identity(2, 2)));
      subgroup.push_back(h);
    }
    const double dev = dephasing_equals_htwirl_check(comp, subgroup);
    c.expect(dev <= 1e-9, "computational basis, H = {I,Z}^2: deviation " + fmt(dev));
  }
  // Bell basis with its stabilizer subgroup
  {
    const MeasurementBasis bell = bell_pair_basis(2);
    const CMatrix xx = tensor_product(x, x), zz = tensor_product(z, z);
    const std::vector<CMatrix> stab = {CMatrix::Identity(4, 4), xx, zz, CMatrix(xx * zz)};
    const double dev = dephasing_equals_htwirl_check(bell, stab);
    c.expect(dev <= 1e-9, "Bell basis with its stabilizer subgroup: deviation " + fmt(dev));
    // degenerate control: H = {I} must be flagged
    const double degenerate = dephasing_equals_htwirl_check(bell, {CMatrix::Identity(4, 4)});
    c.expect(degenerate > 0.1, "degenerate control H = {I} flagged (deviation " + fmt(degenerate) +
                                   " > 0.1)");
  }
  return r;
}

CriterionResult criterion_8() {
  CriterionResult r{8, "published-table reproduction", true, {}};
  Check c{&r};
  struct Expect {
    std::string id;
    ProtocolParams params;
    long long dim;
    long long n_lambda;
    bool mult_free;
  };
  const std::vector<Expect> expects = {
      {"global-clifford", {.n = 2, .d = 4, .spin = 0}, 16, 2, true},      // 4^n, 2
      {"local-clifford", {.n = 2, .d = 0, .spin = 0}, 16, 4, true},       // 4^n, 2^n
      {"su2-spin", {.n = 0, .d = 0, .spin = 1.5}, 16, 4, true},           // (2S+1)^2, 2S+1
      {"su2-tensor", {.n = 4, .d = 0, .spin = 0}, 54, 5, false},          // sum m d^2, n+1
      {"matchgate", {.n = 3, .d = 0, .spin = 0}, 32, 4, false},           // 2^{2n-1}, n+1
      {"orthogonal-real", {.n = 0, .d = 8, .spin = 0}, 36, 3, true},      // d(d+1)/2, 3
      {"orthogonal-split", {.n = 0, .d = 8, .spin = 0}, 64, 3, true},     // d^2, 3
      {"symplectic", {.n = 0, .d = 8, .spin = 0}, 64, 3, true},           // d^2, 3
      {"sn-permutation", {.n = 5, .d = 0, .spin = 0}, 17, 5, false},      // n^2-2n+2, 5
  };
  for (const Expect& e : expects) {
    const TableRow row = table_row(e.id, e.params);
    c.expect(row.dim_lv == e.dim && row.n_lambda == e.n_lambda && row.mult_free == e.mult_free,
             e.id + ": dim " + std::to_string(row.dim_lv) + "/" + std::to_string(e.dim) +
                 ", #lambda " + std::to_string(row.n_lambda) + "/" + std::to_string(e.n_lambda) +
                 ", mult-free " + (row.mult_free ? "yes" : "no"));
  }
  return r;
}

CriterionResult criterion_9() {
  CriterionResult r{9, "variance scaling sweeps", true, {}};
  Check c{&r};
  const long long n_shots = 10000;

  // su2-tensor: polynomial growth for all four observables
  std::map<std::string, std::vector<std::pair<int, double>>> curves;
  for (int n = 2; n <= 8; ++n) {
    const Protocol p = make_protocol("su2-tensor", {.n = n, .d = 0, .spin = 0});
    const QuantumState rho = random_pure(static_cast<int>(p.basis.dim), 900 + n);
    std::vector<Observable> obs = {observable_zsym(*p.schur),
                                   observable_isotypic_projector(*p.schur, n),
                                   observable_ghz(n),
                                   observable_pauli(std::string(n, 'Z'))};
    const auto ests = estimate_batch(p, rho, obs, n_shots, 1, RandomStream(910, n));
    const char* names[4] = {"zsym", "sym-projector", "ghz-projector", "zpow"};
    for (int k = 0; k < 4; ++k)
      curves[names[k]].push_back({n, std::max(ests[k].single_shot_variance, 1e-6)});
  }
  for (const auto& [name, pts] : curves) {
    std::vector<double> lx, ly;
    std::ostringstream vals;
    for (const auto& [n, v] : pts) {
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(v));
      vals << " (" << n << ", " << fmt(v) << ")";
    }
    const double slope = fitted_slope(lx, ly);
    c.expect(slope < 4.0, "su2-tensor " + name + " log-log slope " + fmt(slope) +
                              " < 4 (polynomial growth):" + vals.str());
  }

  // local Cliffords on Z^{⊗n} at |0...0>: E[o^2] = 3^n exactly, so the
  // log-scale slope must track ln 3
  {
    std::vector<double> xs, ys;
    std::ostringstream vals;
    for (int n = 2; n <= 8; ++n) {
      const Protocol p = make_protocol("local-clifford", {.n = n, .d = 0, .spin = 0});
      CVector zero = CVector::Zero(p.basis.dim);
      zero(0) = 1;
      const Observable zpow = observable_pauli(std::string(n, 'Z'));
      const auto est =
          estimate_batch(p, QuantumState::pure(zero), {zpow}, n_shots, 1, RandomStream(930, n));
      xs.push_back(n);
      ys.push_back(std::log(std::max(est[0].single_shot_variance, 1e-6)));
      vals << " (" << n << ", " << fmt(est[0].single_shot_variance) << ")";
    }
    const double slope = fitted_slope(xs, ys);
    c.expect(slope >= 0.9 * std::log(3.0),
             "local-clifford zpow log slope " + fmt(slope) + " >= 0.9 ln3 = " +
                 fmt(0.9 * std::log(3.0)) + " (exponential growth):" + vals.str());
  }

  // bound compliance along the su2-tensor sweep
  {
    const int n = 6;
    const Protocol p = make_protocol("su2-tensor", {.n = n, .d = 0, .spin = 0});
    const QuantumState rho = random_pure(static_cast<int>(p.basis.dim), 940);
    const Observable proj = observable_isotypic_projector(*p.schur, n);
    const EmpiricalVariance ev =
        empirical_single_shot_variance(p, rho, proj, n_shots, RandomStream(941));
    c.expect(ev.variance <= 0.25 + 5 * ev.stderr_est,
             "sym-projector variance stays below 1/4 at n=6 (got " + fmt(ev.variance) + ")");
    const double su2b = bound_su2_tensor(n, proj);
    c.expect(ev.variance <= su2b, "permutation-invariant bound respected at n=6");
  }
  return r;
}

CriterionResult criterion_10(const std::string& cli_path) {
  CriterionResult r{10, "CLI determinism", true, {}};
  Check c{&r};
  namespace fs = std::filesystem;

  if (cli_path.empty()) {
    // library-level determinism contract when no binary is supplied
    const Protocol p = make_protocol("matchgate", {.n = 2, .d = 0, .spin = 0});
    const QuantumState rho = random_pure(4, 1001);
    const Observable gam = observable_majorana({1, 2}, 2);
    std::vector<Snapshot> rec1, rec2;
    const ShadowEstimate e1 = estimate(p, rho, gam, 500, 5, RandomStream(1002), &rec1);
    const ShadowEstimate e2 = estimate(p, rho, gam, 500, 5, RandomStream(1002), &rec2);
    c.expect(e1.mean == e2.mean && snapshots_to_jsonl("matchgate", 1002, rec1) ==
                                       snapshots_to_jsonl("matchgate", 1002, rec2),
             "library rerun with identical seed is byte-identical (no CLI path supplied)");
    return r;
  }

  const fs::path dir = fs::temp_directory_path() / "shadowlab-determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + cli_path + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  auto same_bytes = [&](const fs::path& a, const fs::path& b) {
    return read_text_file(a.string()) == read_text_file(b.string());
  };

  // estimate
  {
    const fs::path cfg = dir / "estimate.cfg";
    write_text_file(cfg.string(),
                    "protocol = matchgate\nn = 2\nobservable = majorana:1,2\n"
                    "snapshots = 400\ngroups = 4\nseed = 11\nstate = random-pure\n"
                    "state_seed = 3\nout = " +
                        (dir / "run").string() + "\n");
    bool ok = run("estimate --config " + cfg.string());
    fs::rename(dir / "run.snapshots.jsonl", dir / "a.snapshots.jsonl");
    fs::rename(dir / "run.result.json", dir / "a.result.json");
    ok = ok && run("estimate --config " + cfg.string());
    c.expect(ok && same_bytes(dir / "a.snapshots.jsonl", dir / "run.snapshots.jsonl") &&
                 same_bytes(dir / "a.result.json", dir / "run.result.json"),
             "estimate rerun produces byte-identical snapshots and result");
  }
  // sweep (+ SVG)
  {
    const fs::path cfg = dir / "sweep.cfg";
    write_text_file(cfg.string(),
                    "protocols = su2-tensor\nobservables = zsym\nn_min = 2\nn_max = 3\n"
                    "snapshots = 300\nseed = 12\n");
    bool ok = run("sweep --config " + cfg.string() + " --out " + (dir / "a.csv").string() +
                  " --svg " + (dir / "a.svg").string());
    ok = ok && run("sweep --config " + cfg.string() + " --out " + (dir / "b.csv").string() +
                   " --svg " + (dir / "b.svg").string());
    c.expect(ok && same_bytes(dir / "a.csv", dir / "b.csv") && same_bytes(dir / "a.svg", dir / "b.svg"),
             "sweep rerun produces byte-identical CSV and SVG");
  }
  // table and spec export
  {
    bool ok = run("table --out " + (dir / "t1.csv").string());
    ok = ok && run("table --out " + (dir / "t2.csv").string());
    ok = ok && run("spec export --protocol matchgate --n 3 --out " + (dir / "s1.json").string());
    ok = ok && run("spec export --protocol matchgate --n 3 --out " + (dir / "s2.json").string());
    c.expect(ok && same_bytes(dir / "t1.csv", dir / "t2.csv") &&
                 same_bytes(dir / "s1.json", dir / "s2.json"),
             "table and spec export reruns are byte-identical");
  }
  // channel report
  {
    bool ok = run("channel --protocol local-clifford --n 2 --exact --out " +
                  (dir / "c1.txt").string());
    ok = ok && run("channel --protocol local-clifford --n 2 --exact --out " +
                   (dir / "c2.txt").string());
    c.expect(ok && same_bytes(dir / "c1.txt", dir / "c2.txt"),
             "channel report rerun is byte-identical");
  }
  return r;
}

}  // namespace

CriterionResult acceptance_criterion(int id, const std::string& cli_path) {
  switch (id) {
    case 1: return criterion_1();
    case 2: return criterion_2();
    case 3: return criterion_3();
    case 4: return criterion_4();
    case 5: return criterion_5();
    case 6: return criterion_6();
    case 7: return criterion_7();
    case 8: return criterion_8();
    case 9: return criterion_9();
    case 10: return criterion_10(cli_path);
    default: throw std::invalid_argument("acceptance_criterion: unknown id");
  }
}

std::vector<int> acceptance_ids() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::vector<int> suite_criteria(const std::string& suite) {
  static const std::map<std::string, std::vector<int>> suites = {
      {"channels-exact", {1, 2}}, {"channels-mc", {3}}, {"su2", {4}},
      {"bounds", {5}},            {"tight-frame", {6}}, {"dephasing", {7}},
      {"table", {8}},             {"sweeps", {9}},      {"determinism", {10}},
  };
  const auto it = suites.find(suite);
  return it == suites.end() ? std::vector<int>{} : it->second;
}

std::vector<std::string> suite_names() {
  return {"channels-exact", "channels-mc", "su2",    "bounds", "tight-frame",
          "dephasing",      "table",       "sweeps", "determinism"};
}

}  // namespace shadowlab
