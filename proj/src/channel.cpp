#include "shadowlab/channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shadowlab {

namespace {

// Sum over outcomes of |vec(U† P_w U)><vec(U† P_w U)| added into acc.
void accumulate_sample(CMatrix& acc, const CMatrix& u, const MeasurementBasis& basis) {
  const Eigen::Index d = basis.dim;
  CMatrix v(d * d, d);
  const CMatrix w = u.adjoint() * basis.vectors;  // columns u_w
  for (Eigen::Index k = 0; k < d; ++k) {
    const CMatrix p = w.col(k) * w.col(k).adjoint();
    v.col(k) = vectorize(p);
  }
  acc.noalias() += v * v.adjoint();
}

std::vector<std::pair<long long, long long>> batch_ranges(long long n, int batches) {
  std::vector<std::pair<long long, long long>> out;
  const long long base = n / batches, rem = n % batches;
  long long start = 0;
  for (int b = 0; b < batches; ++b) {
    const long long len = base + (b < rem ? 1 : 0);
    out.emplace_back(start, start + len);
    start += len;
  }
  return out;
}

}  // namespace

SuperOperator dephasing_superoperator(const MeasurementBasis& basis) {
  const Eigen::Index d = basis.dim;
  CMatrix m = CMatrix::Zero(d * d, d * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const CMatrix p = basis.vectors.col(k) * basis.vectors.col(k).adjoint();
    const CVector v = vectorize(p);
    m.noalias() += v * v.adjoint();
  }
  return {d, std::move(m)};
}

SuperOperator measurement_channel_exact(const GroupEnsemble& ensemble,
                                        const MeasurementBasis& basis) {
  if (!ensemble.has_enumerator())
    throw std::invalid_argument("measurement_channel_exact: ensemble has no enumerator");
  if (basis.dim > 16)
    throw std::invalid_argument("measurement_channel_exact: dense output limited to d <= 16");
  if (ensemble.dim != basis.dim)
    throw std::invalid_argument("measurement_channel_exact: dimension mismatch");
  const Eigen::Index d = basis.dim;
  CMatrix m = CMatrix::Zero(d * d, d * d);
  const std::vector<SampledElement> elems = ensemble.enumerate();
  for (const SampledElement& e : elems) accumulate_sample(m, e.unitary, basis);
  m /= static_cast<double>(elems.size());
  return {d, std::move(m)};
}

McChannel measurement_channel_mc(const GroupEnsemble& ensemble, const MeasurementBasis& basis,
                                 long long n_samples, RandomStream rng, int batches) {
  if (n_samples < 100) throw std::invalid_argument("measurement_channel_mc: need N >= 100");
  if (basis.dim > 16)
    throw std::invalid_argument("measurement_channel_mc: dense output limited to d <= 16");
  const Eigen::Index d = basis.dim;
  const auto ranges = batch_ranges(n_samples, batches);
  std::vector<CMatrix> partial(static_cast<std::size_t>(batches));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int b = 0; b < batches; ++b) {
    CMatrix acc = CMatrix::Zero(d * d, d * d);
    for (long long i = ranges[static_cast<std::size_t>(b)].first;
         i < ranges[static_cast<std::size_t>(b)].second; ++i) {
      RandomStream sub = rng.split(static_cast<std::uint64_t>(i));
      accumulate_sample(acc, ensemble.sample(sub).unitary, basis);
    }
    partial[static_cast<std::size_t>(b)] = std::move(acc);
  }

  CMatrix total = CMatrix::Zero(d * d, d * d);
  for (const CMatrix& p : partial) total += p;
  total /= static_cast<double>(n_samples);

  double var = 0.0;
  for (int b = 0; b < batches; ++b) {
    const auto [lo, hi] = ranges[static_cast<std::size_t>(b)];
    const CMatrix mean_b = partial[static_cast<std::size_t>(b)] / static_cast<double>(hi - lo);
    var += (mean_b - total).squaredNorm();
  }
  var /= (batches - 1);
  McChannel out;
  out.op = {d, std::move(total)};
  out.stderr_est = std::sqrt(var / batches);
  out.samples = n_samples;
  return out;
}

SuperOperator measurement_channel_mc_serial(const GroupEnsemble& ensemble,
                                            const MeasurementBasis& basis, long long n_samples,
                                            RandomStream rng) {
  const Eigen::Index d = basis.dim;
  CMatrix m = CMatrix::Zero(d * d, d * d);
  for (long long i = 0; i < n_samples; ++i) {
    RandomStream sub = rng.split(static_cast<std::uint64_t>(i));
    accumulate_sample(m, ensemble.sample(sub).unitary, basis);
  }
  m /= static_cast<double>(n_samples);
  return {d, std::move(m)};
}

std::vector<EigenCluster> cluster_eigenvalues(const RVector& values, double tol) {
  std::vector<double> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end());
  std::vector<EigenCluster> out;
  for (double x : v) {
    if (!out.empty() && std::abs(out.back().value - x) <= tol) {
      EigenCluster& c = out.back();
      c.value = (c.value * c.multiplicity + x) / (c.multiplicity + 1);
      c.multiplicity += 1;
    } else {
      out.push_back({x, 1});
    }
  }
  return out;
}

std::vector<EigenCluster> channel_spectrum(const SuperOperator& m, double tol) {
  if (m.self_adjoint_defect() > std::max(tol, 1e-7) * std::max(1.0, m.matrix.norm()))
    throw std::invalid_argument("channel_spectrum: superoperator is not self-adjoint");
  const CMatrix sym = 0.5 * (m.matrix + m.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  return cluster_eigenvalues(solver.eigenvalues(), tol);
}

SparseOp SparseOp::from_dense(const CMatrix& m, double drop_tol) {
  SparseOp op;
  op.dim = m.rows();
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > drop_tol) {
        op.rows.push_back(i);
        op.cols.push_back(j);
        op.vals.push_back(m(i, j));
      }
  return op;
}

CMatrix SparseOp::dense() const {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < vals.size(); ++k) m(rows[k], cols[k]) += vals[k];
  return m;
}

Complex SparseOp::hs_with(const CMatrix& x) const {
  Complex acc = 0;
  for (std::size_t k = 0; k < vals.size(); ++k)
    acc += std::conj(vals[k]) * x(rows[k], cols[k]);
  return acc;
}

void SparseOp::accumulate(CMatrix& x, Complex coeff) const {
  for (std::size_t k = 0; k < vals.size(); ++k) x(rows[k], cols[k]) += coeff * vals[k];
}

double SparseOp::norm() const {
  double s = 0;
  for (const Complex& v : vals) s += std::norm(v);
  return std::sqrt(s);
}

CMatrix IsotypicComponent::project(const CMatrix& x_in_frame) const {
  CMatrix out = CMatrix::Zero(x_in_frame.rows(), x_in_frame.cols());
  for (const SparseOp& op : ops) op.accumulate(out, op.hs_with(x_in_frame));
  return out;
}

CMatrix IsotypicComponent::dense_projector() const {
  if (ops.empty()) return CMatrix();
  const Eigen::Index d = ops.front().dim;
  CMatrix p = CMatrix::Zero(d * d, d * d);
  for (const SparseOp& op : ops) {
    const CVector v = vectorize(op.dense());
    p.noalias() += v * v.adjoint();
  }
  return p;
}

CMatrix ChannelSpec::to_frame(const CMatrix& x) const {
  return has_frame() ? CMatrix(frame.adjoint() * x * frame) : x;
}

CMatrix ChannelSpec::from_frame(const CMatrix& x) const {
  return has_frame() ? CMatrix(frame * x * frame.adjoint()) : x;
}

long long ChannelSpec::dim_block_diagonal() const {
  long long s = 0;
  for (const IsotypicComponent& c : components) s += c.multiplicity * c.d_lambda;
  return s;
}

long long ChannelSpec::dim_visible() const {
  long long s = 0;
  for (const IsotypicComponent& c : components)
    if (!c.a.is_zero()) s += c.multiplicity * c.d_lambda;
  return s;
}

CMatrix ChannelSpec::apply_inverse(const CMatrix& o) const {
  const CMatrix x = to_frame(o);
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (const IsotypicComponent& c : components) {
    if (c.a.is_zero()) continue;
    const double inv = 1.0 / c.a.value();
    for (const SparseOp& op : c.ops) op.accumulate(acc, inv * op.hs_with(x));
  }
  return from_frame(acc);
}

CMatrix ChannelSpec::apply(const CMatrix& o) const {
  const CMatrix x = to_frame(o);
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (const IsotypicComponent& c : components) {
    if (c.a.is_zero()) continue;
    const double a = c.a.value();
    for (const SparseOp& op : c.ops) op.accumulate(acc, a * op.hs_with(x));
  }
  return from_frame(acc);
}

CMatrix ChannelSpec::isotypic_project(const CMatrix& o, const std::string& label) const {
  return from_frame(component(label).project(to_frame(o)));
}

const IsotypicComponent& ChannelSpec::component(const std::string& label) const {
  for (const IsotypicComponent& c : components)
    if (c.label == label) return c;
  throw std::invalid_argument("ChannelSpec: unknown component label " + label);
}

nlohmann::json ChannelSpec::to_json() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const IsotypicComponent& c : components) {
    comps.push_back({{"label", c.label},
                     {"a_num", c.a.num()},
                     {"a_den", c.a.den()},
                     {"d", c.d_lambda},
                     {"dH", c.d_h}});
  }
  return {{"protocol", protocol}, {"components", comps}};
}

std::vector<SparseOp> spin_tensor_ops(int two_j, int two_mu) {
  if (two_mu < 0 || two_mu > 2 * two_j || two_mu % 2 != 0)
    throw std::invalid_argument("spin_tensor_ops: invalid tensor rank");
  const Eigen::Index d = two_j + 1;
  const double s = two_j / 2.0;
  std::vector<SparseOp> out;
  for (int two_nu = -two_mu; two_nu <= two_mu; two_nu += 2) {
    SparseOp op;
    op.dim = d;
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
      const int two_mp = two_m - two_nu;
      if (std::abs(two_mp) > two_j) continue;
      double c =
          clebsch_gordan(s, s, two_mu / 2.0, two_m / 2.0, (two_nu - two_m) / 2.0, two_nu / 2.0);
      if (((two_m + two_j) / 2) % 2 != 0) c = -c;
      if (c == 0.0) continue;
      op.rows.push_back((two_j - two_m) / 2);    // m descending
      op.cols.push_back((two_j - two_mp) / 2);
      op.vals.push_back(c);
    }
    out.push_back(std::move(op));
  }
  return out;
}

// ---------------------------------------------------------------------------
// analytic channel specs
// ---------------------------------------------------------------------------

namespace {

SparseOp identity_op(Eigen::Index d) {
  SparseOp op;
  op.dim = d;
  const double v = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    op.rows.push_back(i);
    op.cols.push_back(i);
    op.vals.push_back(v);
  }
  return op;
}

SparseOp unit_op(Eigen::Index d, Eigen::Index i, Eigen::Index j) {
  SparseOp op;
  op.dim = d;
  op.rows.push_back(i);
  op.cols.push_back(j);
  op.vals.push_back(1.0);
  return op;
}

// Orthonormal basis of traceless operators: off-diagonal units plus the
// diagonal staircase combinations.
std::vector<SparseOp> traceless_ops(Eigen::Index d) {
  std::vector<SparseOp> out;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (i != j) out.push_back(unit_op(d, i, j));
  for (Eigen::Index k = 1; k < d; ++k) {
    SparseOp op;
    op.dim = d;
    const double nrm = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (Eigen::Index i = 0; i < k; ++i) {
      op.rows.push_back(i);
      op.cols.push_back(i);
      op.vals.push_back(nrm);
    }
    op.rows.push_back(k);
    op.cols.push_back(k);
    op.vals.push_back(-static_cast<double>(k) * nrm);
    out.push_back(std::move(op));
  }
  return out;
}

CMatrix pauli_matrix_1q(int label) {
  CMatrix m(2, 2);
  switch (label) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

CMatrix pauli_string(const std::vector<int>& labels) {
  CMatrix u = CMatrix::Ones(1, 1);
  for (int l : labels) u = tensor_product(u, pauli_matrix_1q(l));
  return u;
}

std::string pauli_name(const std::vector<int>& labels) {
  static const char kNames[] = "IXYZ";
  std::string s;
  for (int l : labels) s += kNames[l];
  return s;
}

ChannelSpec global_like_spec(const std::string& protocol, Eigen::Index d) {
  ChannelSpec spec;
  spec.protocol = protocol;
  spec.dim = d;
  spec.components.push_back(
      {"trivial", Rational(1, 1), 1, 1, 1, {identity_op(d)}});
  spec.components.push_back({"adjoint", Rational(1, d + 1), static_cast<long long>(d) * d - 1,
                             static_cast<long long>(d) - 1, 1, traceless_ops(d)});
  return spec;
}

ChannelSpec local_clifford_spec(const std::string& protocol, int n, bool bell) {
  const Eigen::Index d = static_cast<Eigen::Index>(1) << n;
  ChannelSpec spec;
  spec.protocol = protocol;
  spec.dim = d;
  const double root_d = std::sqrt(static_cast<double>(d));
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> support;
    for (int q = 0; q < n; ++q)
      if (mask & (1 << q)) support.push_back(q);
    const int k = static_cast<int>(support.size());
    // every assignment of X/Y/Z on the support
    std::vector<SparseOp> ops;
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    long long count = 1;
    for (int i = 0; i < k; ++i) count *= 3;
    for (long long t = 0; t < count; ++t) {
      long long rem = t;
      for (int q = 0; q < n; ++q) labels[static_cast<std::size_t>(q)] = 0;
      for (int i = 0; i < k; ++i) {
        labels[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])] =
            1 + static_cast<int>(rem % 3);
        rem /= 3;
      }
      ops.push_back(SparseOp::from_dense(pauli_string(labels) / root_d, 1e-14));
    }
    std::ostringstream lbl;
    lbl << "S={";
    for (std::size_t i = 0; i < support.size(); ++i)
      lbl << (i ? "," : "") << (support[i] + 1);
    lbl << "}";
    long long d_lambda = count;
    long long d_h = 0;
    Rational a(0, 1);
    if (!bell) {
      d_h = 1;  // the all-Z string on the support
      a = Rational(1, count);
      if (k == 0) {
        d_h = 1;
        a = Rational(1, 1);
      }
    } else {
      // invariant iff the support is a union of adjacent pairs (2i-1, 2i)
      bool pair_union = true;
      int t_pairs = 0;
      for (int q = 0; q < n; q += 2) {
        const bool a1 = (mask >> q) & 1, a2 = (mask >> (q + 1)) & 1;
        if (a1 != a2) pair_union = false;
        if (a1 && a2) ++t_pairs;
      }
      if (k == 0) {
        d_h = 1;
        a = Rational(1, 1);
      } else if (pair_union) {
        long long dh = 1;
        for (int i = 0; i < t_pairs; ++i) dh *= 3;
        d_h = dh;
        a = Rational(d_h, d_lambda);
      }
    }
    spec.components.push_back({lbl.str(), a, d_lambda, d_h, 1, std::move(ops)});
  }
  return spec;
}

ChannelSpec pauli_spec(int n) {
  const Eigen::Index d = static_cast<Eigen::Index>(1) << n;
  ChannelSpec spec;
  spec.protocol = "pauli";
  spec.dim = d;
  const double root_d = std::sqrt(static_cast<double>(d));
  const long long total = 1LL << (2 * n);
  for (long long t = 0; t < total; ++t) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    long long rem = t;
    bool iz_only = true;
    for (int q = 0; q < n; ++q) {
      labels[static_cast<std::size_t>(q)] = static_cast<int>(rem % 4);
      if (labels[static_cast<std::size_t>(q)] == 1 || labels[static_cast<std::size_t>(q)] == 2)
        iz_only = false;
      rem /= 4;
    }
    spec.components.push_back({pauli_name(labels), iz_only ? Rational(1, 1) : Rational(0, 1), 1,
                               iz_only ? 1 : 0, 1,
                               {SparseOp::from_dense(pauli_string(labels) / root_d, 1e-14)}});
  }
  return spec;
}

void majorana_subsets(int two_n, int size, std::vector<int>& cur, int next,
                      const std::function<void(const std::vector<int>&)>& fn) {
  if (static_cast<int>(cur.size()) == size) {
    fn(cur);
    return;
  }
  for (int k = next; k <= two_n; ++k) {
    cur.push_back(k);
    majorana_subsets(two_n, size, cur, k + 1, fn);
    cur.pop_back();
  }
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

ChannelSpec matchgate_spec(int n) {
  const Eigen::Index d = static_cast<Eigen::Index>(1) << n;
  const MajoranaSet majo = majorana_operators(n);
  ChannelSpec spec;
  spec.protocol = "matchgate";
  spec.dim = d;
  const double root_d = std::sqrt(static_cast<double>(d));
  std::vector<int> all(2 * static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 1);
  const CMatrix parity = majorana_monomial(majo, all);  // Z^{⊗n} up to the fixed phase
  for (int k = 0; k <= n; ++k) {
    const Rational a(binom(n, k), binom(2 * n, 2 * k));
    if (n % 2 == 0 && k == n / 2) {
      // split sector: (Γ ± P Γ) halves, one representative per complement pair
      std::vector<SparseOp> plus, minus;
      std::vector<int> cur;
      majorana_subsets(2 * n, 2 * k, cur, 1, [&](const std::vector<int>& idx) {
        if (idx[0] != 1) return;  // the complement of a set containing 1 does not
        const CMatrix g = majorana_monomial(majo, idx);
        const CMatrix pg = parity * g;
        CMatrix gp = g + pg;
        CMatrix gm = g - pg;
        plus.push_back(SparseOp::from_dense(gp / gp.norm(), 1e-14));
        minus.push_back(SparseOp::from_dense(gm / gm.norm(), 1e-14));
      });
      const long long dim_half = binom(2 * n, n) / 2;
      const long long dh_half = binom(n, n / 2) / 2;
      spec.components.push_back(
          {"deg=" + std::to_string(2 * k) + "+", a, dim_half, dh_half, 1, std::move(plus)});
      spec.components.push_back(
          {"deg=" + std::to_string(2 * k) + "-", a, dim_half, dh_half, 1, std::move(minus)});
    } else {
      std::vector<SparseOp> ops;
      std::vector<int> cur;
      majorana_subsets(2 * n, 2 * k, cur, 1, [&](const std::vector<int>& idx) {
        ops.push_back(SparseOp::from_dense(majorana_monomial(majo, idx) / root_d, 1e-14));
      });
      spec.components.push_back({"deg=" + std::to_string(2 * k), a, binom(2 * n, 2 * k),
                                 binom(n, k), 1, std::move(ops)});
    }
  }
  return spec;
}

ChannelSpec particle_preserving_spec(int n) {
  const Eigen::Index d = static_cast<Eigen::Index>(1) << n;
  const MajoranaSet majo = majorana_operators(n);
  std::vector<CMatrix> a_ops(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    a_ops[static_cast<std::size_t>(j)] =
        0.5 * (majo.gammas[static_cast<std::size_t>(2 * j)] +
               Complex(0, 1) * majo.gammas[static_cast<std::size_t>(2 * j + 1)]);

  ChannelSpec spec;
  spec.protocol = "particle-preserving";
  spec.dim = d;
  // components j = 0 .. floor(n/2), gathered across number sectors
  std::map<int, std::vector<SparseOp>> ops_by_j;
  std::map<int, int> mult_by_j;
  for (int r = 0; r <= n; ++r) {
    std::vector<Eigen::Index> states;
    for (Eigen::Index s = 0; s < d; ++s)
      if (__builtin_popcountll(static_cast<unsigned long long>(s)) == r) states.push_back(s);
    const Eigen::Index dr = static_cast<Eigen::Index>(states.size());
    CMatrix br = CMatrix::Zero(d, dr);
    for (Eigen::Index c = 0; c < dr; ++c) br(states[static_cast<std::size_t>(c)], c) = 1.0;
    // su(n) generators restricted to the sector
    std::vector<CMatrix> e(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        e[static_cast<std::size_t>(j * n + k)] =
            br.adjoint() *
            (a_ops[static_cast<std::size_t>(j)].adjoint() * a_ops[static_cast<std::size_t>(k)]) *
            br;
    // ad-Casimir superoperator on End(H_r)
    const Eigen::Index kk = dr * dr;
    CMatrix delta = CMatrix::Zero(kk, kk);
    for (Eigen::Index col = 0; col < kk; ++col) {
      CMatrix x = CMatrix::Zero(dr, dr);
      x(col % dr, col / dr) = 1.0;
      CMatrix dx = CMatrix::Zero(dr, dr);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const CMatrix& ejk = e[static_cast<std::size_t>(j * n + k)];
          const CMatrix& ekj = e[static_cast<std::size_t>(k * n + j)];
          const CMatrix inner = ekj * x - x * ekj;
          dx += ejk * inner - inner * ejk;
        }
      delta.col(col) = vectorize(dx);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (delta + delta.adjoint()));
    const auto clusters = cluster_eigenvalues(eig.eigenvalues(), 1e-6);
    // clusters ascending = j = 0, 1, ..., min(r, n-r)
    Eigen::Index col0 = 0;
    for (std::size_t cj = 0; cj < clusters.size(); ++cj) {
      const int j = static_cast<int>(cj);
      const long long expect = binom(n, j) * binom(n, j) - binom(n, j - 1) * binom(n, j - 1);
      if (clusters[cj].multiplicity != expect)
        throw std::logic_error("particle_preserving_spec: unexpected Casimir multiplicity");
      for (int t = 0; t < clusters[cj].multiplicity; ++t) {
        const CMatrix op_r = devectorize(eig.eigenvectors().col(col0 + t));
        ops_by_j[j].push_back(SparseOp::from_dense(br * op_r * br.adjoint(), 1e-13));
      }
      mult_by_j[j] += 1;
      col0 += clusters[cj].multiplicity;
    }
  }
  for (const auto& [j, ops] : ops_by_j) {
    const long long dj = binom(n, j) * binom(n, j) - binom(n, j - 1) * binom(n, j - 1);
    const long long dh = binom(n, j) - binom(n, j - 1);
    spec.components.push_back(
        {"j=" + std::to_string(j), Rational(dh, dj), dj, dh, mult_by_j[j], ops});
  }
  return spec;
}

ChannelSpec su2_spin_spec(double spin) {
  const int two_j = static_cast<int>(std::llround(2 * spin));
  const Eigen::Index d = two_j + 1;
  ChannelSpec spec;
  spec.protocol = "su2-spin";
  spec.dim = d;
  for (int j = 0; j <= two_j; ++j) {
    spec.components.push_back({"j=" + std::to_string(j), Rational(1, 2 * j + 1), 2 * j + 1, 1, 1,
                               spin_tensor_ops(two_j, 2 * j)});
  }
  return spec;
}

ChannelSpec su2_tensor_spec(int n) {
  const SchurBasis schur = schur_basis(n);
  const Eigen::Index d = schur.transform.rows();
  ChannelSpec spec;
  spec.protocol = "su2-tensor";
  spec.dim = d;
  spec.frame = schur.transform;
  for (int s = 0; s <= n; ++s) {
    std::vector<SparseOp> ops;
    int mult = 0;
    for (const SchurBasis::Block& blk : schur.block_table) {
      if (blk.two_s < s) continue;  // End(Q_eta) holds integer spins 0..2s_eta
      ++mult;
      const double seta = blk.two_s / 2.0;
      for (int two_nu = -2 * s; two_nu <= 2 * s; two_nu += 2) {
        SparseOp op;
        op.dim = d;
        for (int two_m = -blk.two_s; two_m <= blk.two_s; two_m += 2) {
          const int two_mp = two_m - two_nu;
          if (std::abs(two_mp) > blk.two_s) continue;
          double c = clebsch_gordan(seta, seta, s, two_m / 2.0, (two_nu - two_m) / 2.0,
                                    two_nu / 2.0);
          if (((two_m + blk.two_s) / 2) % 2 != 0) c = -c;
          if (c == 0.0) continue;
          op.rows.push_back(blk.offset + (blk.two_s - two_m) / 2);
          op.cols.push_back(blk.offset + (blk.two_s - two_mp) / 2);
          op.vals.push_back(c);
        }
        ops.push_back(std::move(op));
      }
    }
    if (ops.empty()) continue;
    spec.components.push_back(
        {"s=" + std::to_string(s), Rational(1, 2 * s + 1), 2 * s + 1, 1, mult, std::move(ops)});
  }
  return spec;
}

// Helmert-style orthonormal combinations of k slots with zero sum.
std::vector<std::vector<double>> helmert_rows(int k) {
  std::vector<std::vector<double>> out;
  for (int m = 1; m < k; ++m) {
    std::vector<double> row(static_cast<std::size_t>(k), 0.0);
    const double nrm = 1.0 / std::sqrt(static_cast<double>(m) * (m + 1));
    for (int i = 0; i < m; ++i) row[static_cast<std::size_t>(i)] = nrm;
    row[static_cast<std::size_t>(m)] = -static_cast<double>(m) * nrm;
    out.push_back(std::move(row));
  }
  return out;
}

ChannelSpec orthogonal_real_spec(int d) {
  ChannelSpec spec;
  spec.protocol = "orthogonal-real";
  spec.dim = d;
  spec.components.push_back({"trivial", Rational(1, 1), 1, 1, 1, {identity_op(d)}});
  std::vector<SparseOp> sym, antisym;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      SparseOp sp;
      sp.dim = d;
      sp.rows = {i, j};
      sp.cols = {j, i};
      sp.vals = {r, r};
      sym.push_back(sp);
      SparseOp am;
      am.dim = d;
      am.rows = {i, j};
      am.cols = {j, i};
      am.vals = {r, -r};
      antisym.push_back(am);
    }
  for (const auto& row : helmert_rows(d)) {
    SparseOp op;
    op.dim = d;
    for (int i = 0; i < d; ++i)
      if (row[static_cast<std::size_t>(i)] != 0.0) {
        op.rows.push_back(i);
        op.cols.push_back(i);
        op.vals.push_back(row[static_cast<std::size_t>(i)]);
      }
    sym.push_back(std::move(op));
  }
  const long long dim_sym = static_cast<long long>(d) * (d + 1) / 2 - 1;
  spec.components.push_back({"sym", Rational(d - 1, dim_sym), dim_sym, d - 1, 1, std::move(sym)});
  spec.components.push_back(
      {"antisym", Rational(0, 1), static_cast<long long>(d) * (d - 1) / 2, 0, 1,
       std::move(antisym)});
  return spec;
}

ChannelSpec orthogonal_split_spec(int d) {
  if (d % 2 != 0) throw std::invalid_argument("orthogonal-split spec: d must be even");
  const int h = d / 2;
  const CMatrix q = FormMatrix::split_orthogonal(d).matrix;
  ChannelSpec spec;
  spec.protocol = "orthogonal-split";
  spec.dim = d;
  spec.components.push_back({"trivial", Rational(1, 1), 1, 1, 1, {identity_op(d)}});

  auto push_times_q = [&](std::vector<SparseOp>& dst, const CMatrix& b) {
    dst.push_back(SparseOp::from_dense(b * q, 1e-14));
  };
  // Symmetric matrices S; ops are S·Q. The direction S ∝ Q gives the identity
  // and lives in the trivial component, so the paired off-diagonal slots
  // (i, i+h) enter through zero-sum Helmert combinations only.
  std::vector<SparseOp> u_ops;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    CMatrix b = CMatrix::Zero(d, d);
    b(i, i) = 1.0;
    push_times_q(u_ops, b);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      if (j == i + h) continue;  // handled by the Helmert block
      CMatrix b = CMatrix::Zero(d, d);
      b(i, j) = r;
      b(j, i) = r;
      push_times_q(u_ops, b);
    }
  for (const auto& row : helmert_rows(h)) {
    CMatrix b = CMatrix::Zero(d, d);
    for (int i = 0; i < h; ++i) {
      b(i, i + h) = row[static_cast<std::size_t>(i)] * r;
      b(i + h, i) = row[static_cast<std::size_t>(i)] * r;
    }
    push_times_q(u_ops, b);
  }
  const long long dim_u = static_cast<long long>(d) * (d + 1) / 2 - 1;
  spec.components.push_back({"sym-traceless",
                             Rational(d - 2, static_cast<long long>(d + 2) * (d - 1)), dim_u,
                             h - 1, 1, std::move(u_ops)});

  std::vector<SparseOp> l_ops;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      CMatrix b = CMatrix::Zero(d, d);
      b(i, j) = r;
      b(j, i) = -r;
      push_times_q(l_ops, b);
    }
  spec.components.push_back({"antisym", Rational(1, d - 1),
                             static_cast<long long>(d) * (d - 1) / 2, h, 1, std::move(l_ops)});
  return spec;
}

ChannelSpec symplectic_spec(int d) {
  if (d % 2 != 0) throw std::invalid_argument("symplectic spec: d must be even");
  const int h = d / 2;
  const CMatrix omega = FormMatrix::symplectic_omega(d).matrix;
  ChannelSpec spec;
  spec.protocol = "symplectic";
  spec.dim = d;
  spec.components.push_back({"trivial", Rational(1, 1), 1, 1, 1, {identity_op(d)}});

  auto push_times_omega = [&](std::vector<SparseOp>& dst, const CMatrix& b) {
    dst.push_back(SparseOp::from_dense(b * omega, 1e-14));
  };
  std::vector<SparseOp> sym_ops;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    CMatrix b = CMatrix::Zero(d, d);
    b(i, i) = 1.0;
    push_times_omega(sym_ops, b);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      CMatrix b = CMatrix::Zero(d, d);
      b(i, j) = r;
      b(j, i) = r;
      push_times_omega(sym_ops, b);
    }
  spec.components.push_back({"Sym2", Rational(1, d + 1), static_cast<long long>(d) * (d + 1) / 2,
                             h, 1, std::move(sym_ops)});

  // Antisymmetric matrices A; A ∝ Omega gives the identity (trivial), the
  // rest of the paired slots enter through Helmert combinations.
  std::vector<SparseOp> w_ops;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      if (j == i + h) continue;
      CMatrix b = CMatrix::Zero(d, d);
      b(i, j) = r;
      b(j, i) = -r;
      push_times_omega(w_ops, b);
    }
  for (const auto& row : helmert_rows(h)) {
    CMatrix b = CMatrix::Zero(d, d);
    for (int i = 0; i < h; ++i) {
      b(i, i + h) = row[static_cast<std::size_t>(i)] * r;
      b(i + h, i) = -row[static_cast<std::size_t>(i)] * r;
    }
    push_times_omega(w_ops, b);
  }
  spec.components.push_back({"W", Rational(1, d + 1),
                             static_cast<long long>(d) * (d - 1) / 2 - 1, h - 1, 1,
                             std::move(w_ops)});
  return spec;
}

ChannelSpec sn_permutation_spec(int n) {
  if (n < 4 || n > 8)
    throw std::invalid_argument("sn-permutation spec: need 4 <= n <= 8");
  const Eigen::Index d = n;
  // exact isotypic projectors of L via the character twirl, restricted to the
  // Fourier-block-diagonal operators
  const MeasurementBasis fourier = cyclic_fourier_basis(n);
  const GroupEnsemble sn = symmetric_group_ensemble(n);
  const std::vector<SampledElement> elems = sn.enumerate();

  const std::vector<Partition> lambdas = [&] {
    std::vector<Partition> out;
    out.push_back(Partition(std::vector<int>{n}));
    out.push_back(Partition(std::vector<int>{n - 1, 1}));
    out.push_back(Partition(std::vector<int>{n - 2, 2}));
    out.push_back(Partition(std::vector<int>{n - 2, 1, 1}));
    return out;
  }();

  // characters per cycle type
  std::map<std::vector<int>, std::vector<long long>> chars;
  for (const SampledElement& e : elems) {
    const std::vector<int> ct = cycle_type(e.descriptor.params.at("perm").get<std::vector<int>>());
    if (chars.count(ct)) continue;
    std::vector<long long> row;
    for (const Partition& l : lambdas) row.push_back(sn_character(l, ct));
    chars[ct] = row;
  }

  // projector onto the Fourier-block-diagonal operators
  CMatrix p_d = CMatrix::Zero(d * d, d * d);
  for (const auto& blk : fourier.blocks())
    for (Eigen::Index i : blk)
      for (Eigen::Index j : blk) {
        const CVector v = vectorize(
            CMatrix(fourier.vectors.col(i) * fourier.vectors.col(j).adjoint()));
        p_d.noalias() += v * v.adjoint();
      }

  ChannelSpec spec;
  spec.protocol = "sn-permutation";
  spec.dim = d;
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    const Partition& lambda = lambdas[li];
    const long long d_lambda = hook_length_dim(lambda);
    CMatrix proj = CMatrix::Zero(d * d, d * d);
    for (const SampledElement& e : elems) {
      const std::vector<int> ct =
          cycle_type(e.descriptor.params.at("perm").get<std::vector<int>>());
      const double chi = static_cast<double>(chars.at(ct)[li]);
      proj.noalias() += chi * tensor_product(e.unitary.conjugate(), e.unitary);
    }
    proj *= static_cast<double>(d_lambda) / static_cast<double>(elems.size());
    const CMatrix restricted = p_d * proj * p_d;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (restricted + restricted.adjoint()));
    std::vector<SparseOp> ops;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k)
      if (eig.eigenvalues()(k) > 0.5)
        ops.push_back(SparseOp::from_dense(devectorize(eig.eigenvectors().col(k)), 1e-12));
    const int mult = static_cast<int>(ops.size() / static_cast<std::size_t>(d_lambda));
    if (static_cast<long long>(ops.size()) != mult * d_lambda)
      throw std::logic_error("sn_permutation_spec: projector rank mismatch");
    spec.components.push_back({lambda.str(), Rational(0, 1), d_lambda, 0, mult, std::move(ops)});
  }
  // exact a-values per the parity-dependent lemma for the Z_n subgroup
  for (IsotypicComponent& c : spec.components) {
    if (c.label == Partition(std::vector<int>{n}).str()) {
      c.a = Rational(1, 1);
      c.d_h = 1;
    } else if (c.label == Partition(std::vector<int>{n - 1, 1}).str()) {
      c.a = Rational(0, 1);
      c.d_h = 0;
    } else if (c.label == Partition(std::vector<int>{n - 2, 2}).str()) {
      c.a = (n % 2 == 1) ? Rational(1, n) : Rational(n - 2, static_cast<long long>(n) * (n - 3));
      c.d_h = (n % 2 == 1) ? (n - 1) / 2 - 1 : n / 2 - 1;
    } else {
      c.a = (n % 2 == 1) ? Rational(1, n - 2) : Rational(1, n - 1);
      c.d_h = (n % 2 == 1) ? (n - 1) / 2 : n / 2 - 1;
    }
  }
  return spec;
}

}  // namespace

ChannelSpec analytic_channel_spec(const std::string& protocol, const ProtocolParams& params) {
  if (protocol == "global-haar" || protocol == "global-clifford")
    return global_like_spec(protocol, params.d ? params.d : (1 << params.n));
  if (protocol == "local-clifford") return local_clifford_spec(protocol, params.n, false);
  if (protocol == "local-clifford-bell") return local_clifford_spec(protocol, params.n, true);
  if (protocol == "pauli") return pauli_spec(params.n);
  if (protocol == "matchgate") return matchgate_spec(params.n);
  if (protocol == "particle-preserving") return particle_preserving_spec(params.n);
  if (protocol == "su2-spin") return su2_spin_spec(params.spin);
  if (protocol == "su2-tensor") return su2_tensor_spec(params.n);
  if (protocol == "orthogonal-real") return orthogonal_real_spec(params.d);
  if (protocol == "orthogonal-split") return orthogonal_split_spec(params.d);
  if (protocol == "symplectic") return symplectic_spec(params.d);
  if (protocol == "sn-permutation") return sn_permutation_spec(params.n);
  throw std::invalid_argument("analytic_channel_spec: unsupported protocol " + protocol);
}

std::vector<TwirlScalar> class_twirl_scalars(const GroupEnsemble& ensemble, const CMatrix& h,
                                             const ChannelSpec& spec, long long mc_samples,
                                             RandomStream rng) {
  const Eigen::Index d = ensemble.dim;
  CMatrix twirl = CMatrix::Zero(d * d, d * d);
  long long count = 0;
  if (ensemble.has_enumerator()) {
    for (const SampledElement& e : ensemble.enumerate()) {
      const CMatrix ghg = e.unitary.adjoint() * h * e.unitary;
      twirl.noalias() += tensor_product(ghg.conjugate(), ghg);
      ++count;
    }
  } else {
    for (long long i = 0; i < mc_samples; ++i) {
      RandomStream sub = rng.split(static_cast<std::uint64_t>(i));
      const CMatrix g = ensemble.sample(sub).unitary;
      const CMatrix ghg = g.adjoint() * h * g;
      twirl.noalias() += tensor_product(ghg.conjugate(), ghg);
      ++count;
    }
  }
  twirl /= static_cast<double>(count);
  std::vector<TwirlScalar> out;
  for (const IsotypicComponent& comp : spec.components) {
    double scalar = 0.0;
    for (const SparseOp& op : comp.ops) {
      const CMatrix o = spec.from_frame(op.dense());
      const CMatrix to = devectorize(twirl * vectorize(o));
      scalar += hs_inner(o, to).real();
    }
    scalar /= static_cast<double>(comp.ops.size());
    double residual = 0.0;
    for (const SparseOp& op : comp.ops) {
      const CMatrix o = spec.from_frame(op.dense());
      const CMatrix to = devectorize(twirl * vectorize(o));
      residual = std::max(residual, (to - scalar * o).norm());
    }
    out.push_back({comp.label, scalar, residual});
  }
  return out;
}

double dephasing_equals_htwirl_check(const MeasurementBasis& basis,
                                     const std::vector<CMatrix>& subgroup,
                                     const std::vector<int>& parent_block_of) {
  if (subgroup.empty())
    throw std::invalid_argument("dephasing_equals_htwirl_check: empty subgroup");
  const Eigen::Index d = basis.dim;
  const SuperOperator deph = dephasing_superoperator(basis);
  CMatrix twirl = CMatrix::Zero(d * d, d * d);
  for (const CMatrix& h : subgroup) twirl.noalias() += tensor_product(h.conjugate(), h);
  twirl /= static_cast<double>(subgroup.size());
  if (parent_block_of.empty()) return (deph.matrix - twirl).norm();
  CMatrix p_d = CMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      if (parent_block_of[static_cast<std::size_t>(i)] !=
          parent_block_of[static_cast<std::size_t>(j)])
        continue;
      const CVector v = vectorize(CMatrix(basis.vectors.col(i) * basis.vectors.col(j).adjoint()));
      p_d.noalias() += v * v.adjoint();
    }
  return (deph.matrix - twirl * p_d).norm();
}

BlockRestriction block_diagonal_restriction(const SuperOperator& m,
                                            const MeasurementBasis& basis) {
  std::vector<CVector> vecs;
  for (const auto& blk : basis.blocks())
    for (Eigen::Index i : blk)
      for (Eigen::Index j : blk)
        vecs.push_back(
            vectorize(CMatrix(basis.vectors.col(i) * basis.vectors.col(j).adjoint())));
  const Eigen::Index k = static_cast<Eigen::Index>(vecs.size());
  CMatrix r(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const CVector ma = m.matrix * vecs[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < k; ++b)
      r(b, a) = vecs[static_cast<std::size_t>(b)].dot(ma);
  }
  return {std::move(r), basis.dim * basis.dim - k};
}

std::vector<ComponentMean> channel_component_means_mc(const GroupEnsemble& ensemble,
                                                      const MeasurementBasis& basis,
                                                      const ChannelSpec& spec, long long n_samples,
                                                      RandomStream rng, int batches) {
  const Eigen::Index d = basis.dim;
  const std::size_t nc = spec.components.size();
  const auto ranges = batch_ranges(n_samples, batches);
  std::vector<std::vector<double>> batch_sums(static_cast<std::size_t>(batches),
                                              std::vector<double>(nc, 0.0));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int b = 0; b < batches; ++b) {
    std::vector<double>& sums = batch_sums[static_cast<std::size_t>(b)];
    for (long long i = ranges[static_cast<std::size_t>(b)].first;
         i < ranges[static_cast<std::size_t>(b)].second; ++i) {
      RandomStream sub = rng.split(static_cast<std::uint64_t>(i));
      const CMatrix u = ensemble.sample(sub).unitary;
      CMatrix w = u.adjoint() * basis.vectors;  // u_w columns
      if (spec.has_frame()) w = spec.frame.adjoint() * w;
      for (std::size_t c = 0; c < nc; ++c) {
        const IsotypicComponent& comp = spec.components[c];
        double acc = 0.0;
        for (const SparseOp& op : comp.ops) {
          for (Eigen::Index col = 0; col < d; ++col) {
            Complex q = 0;
            for (std::size_t t = 0; t < op.vals.size(); ++t)
              q += std::conj(w(op.rows[t], col)) * op.vals[t] * w(op.cols[t], col);
            acc += std::norm(q);
          }
        }
        sums[c] += acc / static_cast<double>(comp.ops.size());
      }
    }
  }

  std::vector<ComponentMean> out;
  for (std::size_t c = 0; c < nc; ++c) {
    double total = 0.0;
    for (int b = 0; b < batches; ++b) total += batch_sums[static_cast<std::size_t>(b)][c];
    const double mean = total / static_cast<double>(n_samples);
    double var = 0.0;
    for (int b = 0; b < batches; ++b) {
      const auto [lo, hi] = ranges[static_cast<std::size_t>(b)];
      const double mb = batch_sums[static_cast<std::size_t>(b)][c] / static_cast<double>(hi - lo);
      var += (mb - mean) * (mb - mean);
    }
    var /= (batches - 1);
    out.push_back({spec.components[c].label, mean, std::sqrt(var / batches)});
  }
  return out;
}

McImage channel_apply_mc(const GroupEnsemble& ensemble, const MeasurementBasis& basis,
                         const CMatrix& x, long long n_samples, RandomStream rng, int batches) {
  const Eigen::Index d = basis.dim;
  const auto ranges = batch_ranges(n_samples, batches);
  std::vector<CMatrix> partial(static_cast<std::size_t>(batches));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int b = 0; b < batches; ++b) {
    CMatrix acc = CMatrix::Zero(d, d);
    for (long long i = ranges[static_cast<std::size_t>(b)].first;
         i < ranges[static_cast<std::size_t>(b)].second; ++i) {
      RandomStream sub = rng.split(static_cast<std::uint64_t>(i));
      const CMatrix u = ensemble.sample(sub).unitary;
      const CMatrix w = u.adjoint() * basis.vectors;
      for (Eigen::Index k = 0; k < d; ++k) {
        const Complex val = w.col(k).dot(x * w.col(k));
        acc.noalias() += val * (w.col(k) * w.col(k).adjoint());
      }
    }
    partial[static_cast<std::size_t>(b)] = std::move(acc);
  }
  CMatrix total = CMatrix::Zero(d, d);
  for (const CMatrix& p : partial) total += p;
  total /= static_cast<double>(n_samples);
  double var = 0.0;
  for (int b = 0; b < batches; ++b) {
    const auto [lo, hi] = ranges[static_cast<std::size_t>(b)];
    const CMatrix mb = partial[static_cast<std::size_t>(b)] / static_cast<double>(hi - lo);
    var += (mb - total).squaredNorm();
  }
  var /= (batches - 1);
  return {std::move(total), std::sqrt(var / batches)};
}

}  // namespace shadowlab
