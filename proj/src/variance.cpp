#include "shadowlab/variance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shadowlab {

namespace {

double spectral_norm(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()));
  return std::max(std::abs(eig.eigenvalues().minCoeff()), std::abs(eig.eigenvalues().maxCoeff()));
}

}  // namespace

double bound_l2(const ChannelSpec& spec, const Observable& o) {
  const CMatrix x = spec.to_frame(o.matrix);
  double total = 0.0;
  for (const IsotypicComponent& c : spec.components) {
    if (c.a.is_zero()) continue;
    double norm2 = 0.0;
    for (const SparseOp& op : c.ops) norm2 += std::norm(op.hs_with(x));
    total += norm2 / c.a.value();
  }
  return total;
}

double bound_inf(const ChannelSpec& spec, const Observable& o) {
  const CMatrix minv = spec.apply_inverse(o.matrix);
  const double s = spectral_norm(minv);
  return s * s;
}

namespace {

bool is_power_of_two(Eigen::Index d) { return d > 0 && (d & (d - 1)) == 0; }

// Proportional to a single Pauli string? (up to the stated tolerance)
bool single_pauli_string(const CMatrix& x) {
  const Eigen::Index d = x.rows();
  if (!is_power_of_two(d)) return false;
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  CMatrix paulis[4];
  paulis[0] = CMatrix::Identity(2, 2);
  paulis[1] = (CMatrix(2, 2) << 0, 1, 1, 0).finished();
  paulis[2] = (CMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  paulis[3] = (CMatrix(2, 2) << 1, 0, 0, -1).finished();
  const double nrm2 = x.squaredNorm();
  int hits = 0;
  const long long total = 1LL << (2 * n);
  for (long long t = 0; t < total; ++t) {
    CMatrix p = CMatrix::Ones(1, 1);
    long long rem = t;
    for (int q = 0; q < n; ++q) {
      p = tensor_product(p, paulis[rem % 4]);
      rem /= 4;
    }
    const double w = std::norm(hs_inner(p, x)) / static_cast<double>(d);
    if (w > 1e-12 * nrm2) ++hits;
    if (hits > 1) return false;
  }
  return hits == 1;
}

// Is the observable proportional to a protocol-normalized basis operator
// (Pauli string under a Clifford-type ensemble, Majorana monomial of degree
// != n under matchgates)?
bool normalizer_family_member(const ChannelSpec& spec, const CMatrix& x) {
  const bool clifford_like = spec.protocol == "global-clifford" || spec.protocol == "global-haar" ||
                             spec.protocol == "local-clifford" ||
                             spec.protocol == "local-clifford-bell" || spec.protocol == "pauli";
  const bool matchgate_like = spec.protocol == "matchgate";
  if (clifford_like) return single_pauli_string(x);
  if (!matchgate_like) return false;
  // matchgate component bases are the Majorana monomials themselves except in
  // the split middle sector, where condition (ii) does not apply
  const CMatrix xf = spec.to_frame(x);
  const double nrm = xf.norm();
  if (nrm < 1e-12) return false;
  for (const IsotypicComponent& c : spec.components) {
    if (!c.label.empty() && (c.label.back() == '+' || c.label.back() == '-')) continue;
    for (const SparseOp& op : c.ops) {
      if (std::abs(std::abs(op.hs_with(xf) / nrm) - 1.0) < 1e-9) return true;
    }
  }
  return false;
}

}  // namespace

std::optional<double> bound_special(const ChannelSpec& spec, const Observable& o) {
  const CMatrix& x = o.matrix;
  const double norm_inf = spectral_norm(x);
  if (norm_inf < 1e-14) return 0.0;

  // locate the single supporting component
  const CMatrix xf = spec.to_frame(x);
  std::string support_label;
  int supports = 0;
  for (const IsotypicComponent& c : spec.components) {
    double norm2 = 0.0;
    for (const SparseOp& op : c.ops) norm2 += std::norm(op.hs_with(xf));
    if (norm2 > 1e-12 * xf.squaredNorm()) {
      ++supports;
      support_label = c.label;
    }
  }

  // condition (i): definite and single-isotypic
  if (supports == 1) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (x + x.adjoint()));
    const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
    const bool psd = lo >= -1e-10 * norm_inf;
    const bool nsd = hi <= 1e-10 * norm_inf;
    if (psd || nsd) {
      const Rational& a = spec.component(support_label).a;
      if (a.is_zero()) return std::nullopt;
      return norm_inf * norm_inf / a.value();
    }
  }

  // condition (ii): member of a G-permuted uniform-norm basis
  if (supports == 1 && normalizer_family_member(spec, x)) {
    const Rational& a = spec.component(support_label).a;
    if (a.is_zero()) return std::nullopt;
    return norm_inf * norm_inf / a.value();
  }
  return std::nullopt;
}

double bound_su2_tensor(int n, const Observable& o) {
  const Eigen::Index d = o.matrix.rows();
  if (d != (static_cast<Eigen::Index>(1) << n))
    throw std::invalid_argument("bound_su2_tensor: dimension mismatch");
  // permutation invariance against adjacent-qubit swaps (index bit swaps)
  for (int q = 0; q + 1 < n; ++q) {
    const int hi = n - 1 - q, lo = n - 2 - q;  // qubit q+1 is bit n-1-q
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(d));
    for (Eigen::Index v = 0; v < d; ++v) {
      const Eigen::Index b1 = (v >> hi) & 1, b2 = (v >> lo) & 1;
      Eigen::Index w = v & ~((Eigen::Index{1} << hi) | (Eigen::Index{1} << lo));
      w |= (b2 << hi) | (b1 << lo);
      perm[static_cast<std::size_t>(v)] = w;
    }
    double defect = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        defect += std::norm(o.matrix(i, j) - o.matrix(perm[static_cast<std::size_t>(i)],
                                                       perm[static_cast<std::size_t>(j)]));
    if (std::sqrt(defect) > 1e-9 * std::max(1.0, o.matrix.norm()))
      throw std::invalid_argument("bound_su2_tensor: observable is not permutation-invariant");
  }
  const double s = spectral_norm(o.matrix);
  const double np1 = static_cast<double>(n + 1);
  return (4.0 / 3.0) * np1 * np1 * np1 * np1 * s * s;
}

double exact_variance_zsym(const SchurBasis& schur, const QuantumState& state) {
  const int n = schur.n;
  if (n % 2 != 0) throw std::invalid_argument("exact_variance_zsym: closed form needs even n");
  const CMatrix rho = schur.transform.adjoint() * state.density * schur.transform;
  double first = 0.0, mean = 0.0;
  for (const SchurBasis::Block& blk : schur.block_table) {
    const int two_s = blk.two_s;
    const long long d_eta = two_s + 1;
    const double c3 = static_cast<double>((d_eta + 1) * d_eta * (d_eta - 1) / 6);
    if (c3 == 0.0) continue;
    const double s_eta = two_s / 2.0;
    // spherical components rho_{s,0} of the state on this block
    auto rho_component = [&](int two_mu) {
      double acc = 0.0;
      for (int two_m = -two_s; two_m <= two_s; two_m += 2) {
        double c = clebsch_gordan(s_eta, s_eta, two_mu / 2.0, two_m / 2.0, -two_m / 2.0, 0.0);
        if (((two_m + two_s) / 2) % 2 != 0) c = -c;
        const Eigen::Index idx = blk.offset + (two_s - two_m) / 2;
        acc += c * rho(idx, idx).real();
      }
      return acc;
    };
    const double r00 = rho_component(0);
    const double r10 = rho_component(2);
    double term = 6.0 * r00 / std::sqrt(static_cast<double>(d_eta));
    if (two_s >= 2) {
      const double r20 = rho_component(4);
      term += 12.0 * r20 * (4.0 * s_eta * (1.0 + s_eta) - 3.0) /
              (5.0 * std::sqrt(5.0 * s_eta * (s_eta + 1.0) * (2.0 * s_eta - 1.0) *
                               (2.0 * s_eta + 1.0) * (2.0 * s_eta + 3.0)));
    }
    first += c3 * term;
    mean += r10 * std::sqrt(2.0 * c3) * ((two_s % 2 == 0) ? 1.0 : -1.0);
  }
  return first - mean * mean;
}

double exact_variance_projector(const SchurBasis& schur, const QuantumState& state, int two_s) {
  CMatrix p = CMatrix::Zero(state.dim(), state.dim());
  for (const SchurBasis::Block& blk : schur.block_table) {
    if (blk.two_s != two_s) continue;
    for (Eigen::Index k = 0; k < blk.size; ++k) {
      const CVector col = schur.transform.col(blk.offset + k);
      p.noalias() += col * col.adjoint();
    }
  }
  const double prob = hs_inner(p, state.density).real();
  return prob * (1.0 - prob);
}

EmpiricalVariance empirical_single_shot_variance(const Protocol& protocol,
                                                 const QuantumState& state, const Observable& o,
                                                 long long n_snapshots, RandomStream rng,
                                                 int batches) {
  if (!protocol.spec) throw std::invalid_argument("empirical variance: no channel spec");
  const CMatrix minv_o = protocol.spec->apply_inverse(o.matrix);

  std::vector<double> sums(static_cast<std::size_t>(batches), 0.0);
  std::vector<double> sums2(static_cast<std::size_t>(batches), 0.0);
  const long long base = n_snapshots / batches, rem = n_snapshots % batches;
  std::vector<long long> starts(static_cast<std::size_t>(batches) + 1, 0);
  for (int b = 0; b < batches; ++b)
    starts[static_cast<std::size_t>(b) + 1] =
        starts[static_cast<std::size_t>(b)] + base + (b < rem ? 1 : 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int b = 0; b < batches; ++b) {
    double s = 0.0, s2 = 0.0;
    for (long long i = starts[static_cast<std::size_t>(b)];
         i < starts[static_cast<std::size_t>(b) + 1]; ++i) {
      RandomStream sub = rng.split(static_cast<std::uint64_t>(i));
      SampledElement elem = protocol.ensemble.sample(sub);
      RVector probs(protocol.basis.dim);
      const CVector amps = state.pure_vector
                               ? CVector(protocol.basis.vectors.adjoint() *
                                         (elem.unitary * (*state.pure_vector)))
                               : CVector();
      if (state.pure_vector) {
        for (Eigen::Index w = 0; w < probs.size(); ++w) probs(w) = std::norm(amps(w));
      } else {
        const CMatrix m = protocol.basis.vectors.adjoint() *
                          (elem.unitary * state.density * elem.unitary.adjoint()) *
                          protocol.basis.vectors;
        for (Eigen::Index w = 0; w < probs.size(); ++w) probs(w) = std::max(0.0, m(w, w).real());
      }
      const double total = probs.sum();
      const double u = sub.uniform() * total;
      double acc = 0.0;
      int w = static_cast<int>(probs.size()) - 1;
      for (Eigen::Index k = 0; k < probs.size(); ++k) {
        acc += probs(k);
        if (u < acc) {
          w = static_cast<int>(k);
          break;
        }
      }
      const CVector v = elem.unitary.adjoint() * protocol.basis.vectors.col(w);
      const double val = v.dot(minv_o * v).real();
      s += val;
      s2 += val * val;
    }
    sums[static_cast<std::size_t>(b)] = s;
    sums2[static_cast<std::size_t>(b)] = s2;
  }

  double sum = 0.0, sum2 = 0.0;
  for (int b = 0; b < batches; ++b) {
    sum += sums[static_cast<std::size_t>(b)];
    sum2 += sums2[static_cast<std::size_t>(b)];
  }
  const double mean = sum / static_cast<double>(n_snapshots);
  const double m2 = sum2 / static_cast<double>(n_snapshots);
  double var_b = 0.0;
  for (int b = 0; b < batches; ++b) {
    const long long len =
        starts[static_cast<std::size_t>(b) + 1] - starts[static_cast<std::size_t>(b)];
    const double mb = sums2[static_cast<std::size_t>(b)] / static_cast<double>(len);
    var_b += (mb - m2) * (mb - m2);
  }
  var_b /= (batches - 1);
  EmpiricalVariance out;
  out.mean = mean;
  out.variance = std::max(0.0, m2 - mean * mean);
  out.stderr_est = std::sqrt(var_b / batches);
  return out;
}

SecondMoment empirical_second_moment(const Protocol& protocol, const QuantumState& state,
                                     const Observable& o, long long n_snapshots, RandomStream rng,
                                     int batches) {
  const EmpiricalVariance ev =
      empirical_single_shot_variance(protocol, state, o, n_snapshots, rng, batches);
  return {ev.variance + ev.mean * ev.mean, ev.stderr_est, n_snapshots};
}

TightFrameResult tight_frame_check(const GroupEnsemble& ensemble, const MeasurementBasis& basis,
                                   const std::vector<CMatrix>& operator_basis,
                                   const std::vector<int>& diagonal_subset, int tau,
                                   long long mc_samples, RandomStream rng, int batches) {
  // classify elements against the measurement basis
  const CMatrix b = basis.vectors;
  for (std::size_t k = 0; k < operator_basis.size(); ++k) {
    const CMatrix e = b.adjoint() * operator_basis[k] * b;
    double diag = 0.0, off = 0.0;
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      for (Eigen::Index j = 0; j < e.cols(); ++j)
        ((i == j) ? diag : off) += std::norm(e(i, j));
    const bool is_diag = off < 1e-18 * std::max(1.0, diag + off);
    const bool is_off = diag < 1e-18 * std::max(1.0, diag + off);
    if (!is_diag && !is_off)
      throw std::invalid_argument(
          "tight_frame_check: basis element neither diagonal nor off-diagonal");
  }
  const CMatrix& e_tau = operator_basis.at(static_cast<std::size_t>(tau));

  auto orbit_mass = [&](const CMatrix& g) {
    const CMatrix rotated = g * e_tau * g.adjoint();
    double acc = 0.0;
    for (int s : diagonal_subset)
      acc += std::norm(hs_inner(operator_basis.at(static_cast<std::size_t>(s)), rotated));
    return acc;
  };

  if (ensemble.has_enumerator()) {
    double total = 0.0;
    long long count = 0;
    for (const SampledElement& e : ensemble.enumerate()) {
      total += orbit_mass(e.unitary);
      ++count;
    }
    return {total / static_cast<double>(count), 0.0};
  }

  std::vector<double> batch_sum(static_cast<std::size_t>(batches), 0.0);
  const long long base = mc_samples / batches, rem = mc_samples % batches;
  std::vector<long long> starts(static_cast<std::size_t>(batches) + 1, 0);
  for (int bb = 0; bb < batches; ++bb)
    starts[static_cast<std::size_t>(bb) + 1] =
        starts[static_cast<std::size_t>(bb)] + base + (bb < rem ? 1 : 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int bb = 0; bb < batches; ++bb) {
    double s = 0.0;
    for (long long i = starts[static_cast<std::size_t>(bb)];
         i < starts[static_cast<std::size_t>(bb) + 1]; ++i) {
      RandomStream sub = rng.split(static_cast<std::uint64_t>(i));
      s += orbit_mass(ensemble.sample(sub).unitary);
    }
    batch_sum[static_cast<std::size_t>(bb)] = s;
  }
  double total = 0.0;
  for (double s : batch_sum) total += s;
  const double mean = total / static_cast<double>(mc_samples);
  double var = 0.0;
  for (int bb = 0; bb < batches; ++bb) {
    const long long len =
        starts[static_cast<std::size_t>(bb) + 1] - starts[static_cast<std::size_t>(bb)];
    const double mb = batch_sum[static_cast<std::size_t>(bb)] / static_cast<double>(len);
    var += (mb - mean) * (mb - mean);
  }
  var /= (batches - 1);
  return {mean, std::sqrt(var / batches)};
}

nlohmann::json VarianceReport::to_json() const {
  nlohmann::json j{{"observable", observable},
                   {"l2_bound", l2_bound},
                   {"inf_bound", inf_bound},
                   {"empirical_second_moment", empirical_second_moment},
                   {"empirical_variance", empirical_variance},
                   {"stderr", stderr_est},
                   {"N", n}};
  if (special_bound) j["special_bound"] = *special_bound;
  if (su2_bound) j["su2_bound"] = *su2_bound;
  if (exact_value) j["exact_value"] = *exact_value;
  return j;
}

VarianceReport variance_report(const Protocol& protocol, const QuantumState& state,
                               const Observable& o, long long n_snapshots, RandomStream rng) {
  if (!protocol.spec) throw std::invalid_argument("variance_report: no channel spec");
  VarianceReport rep;
  rep.observable = o.name;
  rep.l2_bound = bound_l2(*protocol.spec, o);
  rep.inf_bound = bound_inf(*protocol.spec, o);
  rep.special_bound = bound_special(*protocol.spec, o);
  if (protocol.id == "su2-tensor") {
    try {
      rep.su2_bound = bound_su2_tensor(protocol.params.n, o);
    } catch (const std::invalid_argument&) {
      // not permutation-invariant; no bespoke bound
    }
    if (o.name == "zsym" && protocol.params.n % 2 == 0 && protocol.schur)
      rep.exact_value = exact_variance_zsym(*protocol.schur, state);
  }
  const EmpiricalVariance ev =
      empirical_single_shot_variance(protocol, state, o, n_snapshots, rng);
  rep.empirical_variance = ev.variance;
  rep.empirical_second_moment = ev.variance + ev.mean * ev.mean;
  rep.stderr_est = ev.stderr_est;
  rep.n = n_snapshots;
  return rep;
}

}  // namespace shadowlab
