#include "shadowlab/shadows.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shadowlab {

QuantumState QuantumState::pure(const CVector& v) {
  const double nrm = v.norm();
  if (std::abs(nrm - 1.0) > 1e-9) throw std::invalid_argument("QuantumState: vector not normalized");
  QuantumState s;
  s.pure_vector = v / nrm;
  s.density = (*s.pure_vector) * s.pure_vector->adjoint();
  return s;
}

QuantumState QuantumState::mixed(const CMatrix& rho, double tol) {
  if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9)
    throw std::invalid_argument("QuantumState: trace must be 1");
  const HermitianEig eig = hermitian_eig(rho, tol);
  if (eig.values.minCoeff() < -tol * std::max(1.0, rho.norm()))
    throw std::invalid_argument("QuantumState: not positive semidefinite");
  QuantumState s;
  s.density = rho;
  return s;
}

QuantumState QuantumState::maximally_mixed(Eigen::Index d) {
  QuantumState s;
  s.density = CMatrix::Identity(d, d) / static_cast<double>(d);
  return s;
}

void Observable::check_hermitian(double tol) const {
  if ((matrix - matrix.adjoint()).norm() > tol * std::max(1.0, matrix.norm()))
    throw std::invalid_argument("Observable: matrix is not Hermitian");
}

namespace {

int draw_outcome(const RVector& probs, RandomStream& rng) {
  double total = probs.sum();
  if (std::abs(total - 1.0) > 1e-12) {
    // renormalize small drift
    if (std::abs(total - 1.0) > 1e-6)
      throw std::runtime_error("draw_outcome: outcome distribution badly normalized");
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (Eigen::Index w = 0; w < probs.size(); ++w) {
    acc += probs(w);
    if (u < acc) return static_cast<int>(w);
  }
  return static_cast<int>(probs.size() - 1);
}

RVector outcome_probabilities(const Protocol& protocol, const QuantumState& state,
                              const CMatrix& u) {
  const Eigen::Index d = protocol.basis.dim;
  RVector probs(d);
  if (state.pure_vector) {
    const CVector amps = protocol.basis.vectors.adjoint() * (u * (*state.pure_vector));
    for (Eigen::Index w = 0; w < d; ++w) probs(w) = std::norm(amps(w));
  } else {
    const CMatrix m =
        protocol.basis.vectors.adjoint() * (u * state.density * u.adjoint()) * protocol.basis.vectors;
    for (Eigen::Index w = 0; w < d; ++w) probs(w) = std::max(0.0, m(w, w).real());
  }
  return probs;
}

}  // namespace

Snapshot sample_snapshot(const Protocol& protocol, const QuantumState& state, RandomStream& rng) {
  if (state.dim() != protocol.basis.dim)
    throw std::invalid_argument("sample_snapshot: state dimension mismatch");
  SampledElement elem = protocol.ensemble.sample(rng);
  const RVector probs = outcome_probabilities(protocol, state, elem.unitary);
  Snapshot snap;
  snap.descriptor = std::move(elem.descriptor);
  snap.outcome = draw_outcome(probs, rng);
  return snap;
}

namespace {

// Estimator core shared by all entry points: precomputed M^{-1}(O) probed by
// the rotated basis vector of the observed outcome.
double estimate_with_inverse(const Protocol& protocol, const CMatrix& minv_o, const CMatrix& u,
                             int outcome) {
  const CVector b = protocol.basis.vectors.col(outcome);
  const CVector v = u.adjoint() * b;
  return v.dot(minv_o * v).real();
}

struct PreparedObservable {
  CMatrix minv_o;
  bool partially_visible = false;
};

PreparedObservable prepare(const Protocol& protocol, const Observable& o) {
  if (!protocol.spec)
    throw std::invalid_argument("estimate: protocol has no analytic channel spec");
  o.check_hermitian();
  PreparedObservable prep;
  prep.minv_o = protocol.spec->apply_inverse(o.matrix);
  const CMatrix back = protocol.spec->apply(prep.minv_o);
  prep.partially_visible = (back - o.matrix).norm() > 1e-9 * std::max(1.0, o.matrix.norm());
  return prep;
}

ShadowEstimate aggregate(const std::vector<double>& values, int k_groups, bool partial) {
  const long long n = static_cast<long long>(values.size());
  if (k_groups < 1 || k_groups > n) throw std::invalid_argument("estimate: need N >= K >= 1");
  ShadowEstimate est;
  est.n = n;
  est.k_groups = k_groups;
  est.partially_visible = partial;
  double sum = 0.0, sum2 = 0.0;
  for (double v : values) {
    sum += v;
    sum2 += v * v;
  }
  est.mean = sum / static_cast<double>(n);
  est.single_shot_variance = std::max(0.0, sum2 / static_cast<double>(n) - est.mean * est.mean);
  // median of means over K contiguous groups
  std::vector<double> means;
  const long long base = n / k_groups, rem = n % k_groups;
  long long start = 0;
  for (int g = 0; g < k_groups; ++g) {
    const long long len = base + (g < rem ? 1 : 0);
    double s = 0.0;
    for (long long i = start; i < start + len; ++i) s += values[static_cast<std::size_t>(i)];
    means.push_back(s / static_cast<double>(len));
    start += len;
  }
  std::sort(means.begin(), means.end());
  const std::size_t k = means.size();
  est.median_of_means = (k % 2 == 1) ? means[k / 2] : 0.5 * (means[k / 2 - 1] + means[k / 2]);
  return est;
}

}  // namespace

double single_shot_estimate(const Protocol& protocol, const Snapshot& snap, const Observable& o) {
  const PreparedObservable prep = prepare(protocol, o);
  const CMatrix u = protocol.ensemble.reconstruct(snap.descriptor);
  return estimate_with_inverse(protocol, prep.minv_o, u, snap.outcome);
}

std::vector<ShadowEstimate> estimate_batch(const Protocol& protocol, const QuantumState& state,
                                           const std::vector<Observable>& obs,
                                           long long n_snapshots, int k_groups, RandomStream rng,
                                           std::vector<Snapshot>* record) {
  if (state.dim() != protocol.basis.dim)
    throw std::invalid_argument("estimate: state dimension mismatch");
  std::vector<PreparedObservable> preps;
  preps.reserve(obs.size());
  for (const Observable& o : obs) preps.push_back(prepare(protocol, o));

  std::vector<std::vector<double>> values(obs.size(),
                                          std::vector<double>(static_cast<std::size_t>(n_snapshots)));
  std::vector<int> outcomes(static_cast<std::size_t>(n_snapshots));
  std::vector<ElementDescriptor> descriptors(
      record ? static_cast<std::size_t>(n_snapshots) : std::size_t{0});

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < n_snapshots; ++i) {
    RandomStream sub = rng.split(static_cast<std::uint64_t>(i));
    SampledElement elem = protocol.ensemble.sample(sub);
    const RVector probs = outcome_probabilities(protocol, state, elem.unitary);
    const int w = draw_outcome(probs, sub);
    outcomes[static_cast<std::size_t>(i)] = w;
    for (std::size_t k = 0; k < obs.size(); ++k)
      values[k][static_cast<std::size_t>(i)] =
          estimate_with_inverse(protocol, preps[k].minv_o, elem.unitary, w);
    if (record) descriptors[static_cast<std::size_t>(i)] = std::move(elem.descriptor);
  }

  if (record) {
    record->clear();
    record->reserve(static_cast<std::size_t>(n_snapshots));
    for (long long i = 0; i < n_snapshots; ++i)
      record->push_back({std::move(descriptors[static_cast<std::size_t>(i)]),
                         outcomes[static_cast<std::size_t>(i)]});
  }

  std::vector<ShadowEstimate> out;
  out.reserve(obs.size());
  for (std::size_t k = 0; k < obs.size(); ++k)
    out.push_back(aggregate(values[k], k_groups, preps[k].partially_visible));
  return out;
}

std::vector<ShadowEstimate> estimate_batch_serial(const Protocol& protocol,
                                                  const QuantumState& state,
                                                  const std::vector<Observable>& obs,
                                                  long long n_snapshots, int k_groups,
                                                  RandomStream rng) {
  std::vector<PreparedObservable> preps;
  for (const Observable& o : obs) preps.push_back(prepare(protocol, o));
  std::vector<std::vector<double>> values(obs.size());
  for (auto& v : values) v.resize(static_cast<std::size_t>(n_snapshots));
  for (long long i = 0; i < n_snapshots; ++i) {
    RandomStream sub = rng.split(static_cast<std::uint64_t>(i));
    SampledElement elem = protocol.ensemble.sample(sub);
    const RVector probs = outcome_probabilities(protocol, state, elem.unitary);
    const int w = draw_outcome(probs, sub);
    for (std::size_t k = 0; k < obs.size(); ++k)
      values[k][static_cast<std::size_t>(i)] =
          estimate_with_inverse(protocol, preps[k].minv_o, elem.unitary, w);
  }
  std::vector<ShadowEstimate> out;
  for (std::size_t k = 0; k < obs.size(); ++k)
    out.push_back(aggregate(values[k], k_groups, preps[k].partially_visible));
  return out;
}

ShadowEstimate estimate(const Protocol& protocol, const QuantumState& state, const Observable& o,
                        long long n_snapshots, int k_groups, RandomStream rng,
                        std::vector<Snapshot>* record) {
  return estimate_batch(protocol, state, {o}, n_snapshots, k_groups, rng, record).front();
}

ShadowEstimate estimate_from_snapshots(const Protocol& protocol,
                                       const std::vector<Snapshot>& snaps, const Observable& o,
                                       int k_groups) {
  const PreparedObservable prep = prepare(protocol, o);
  std::vector<double> values(snaps.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < static_cast<long long>(snaps.size()); ++i) {
    const Snapshot& s = snaps[static_cast<std::size_t>(i)];
    const CMatrix u = protocol.ensemble.reconstruct(s.descriptor);
    values[static_cast<std::size_t>(i)] =
        estimate_with_inverse(protocol, prep.minv_o, u, s.outcome);
  }
  return aggregate(values, k_groups, prep.partially_visible);
}

double zsym_block_coefficient(int two_s) {
  const long long d_eta = two_s + 1;
  const long long c3 = (d_eta + 1) * d_eta * (d_eta - 1) / 6;  // C(d+1, 3)
  const double mag = std::sqrt(2.0 * static_cast<double>(c3));
  return (two_s % 2 == 0) ? mag : -mag;  // integer spins take the + sign
}

Observable observable_zsym(const SchurBasis& schur) {
  const int n = schur.n;
  const Eigen::Index d = schur.transform.rows();
  CMatrix z = CMatrix::Zero(d, d);
  for (Eigen::Index v = 0; v < d; ++v) {
    const int pop = __builtin_popcountll(static_cast<unsigned long long>(v));
    z(v, v) = static_cast<double>(n - 2 * pop);
  }
  return {"zsym", std::move(z)};
}

Observable observable_isotypic_projector(const SchurBasis& schur, int two_s) {
  const Eigen::Index d = schur.transform.rows();
  CMatrix p = CMatrix::Zero(d, d);
  for (const SchurBasis::Block& blk : schur.block_table) {
    if (blk.two_s != two_s) continue;
    for (Eigen::Index k = 0; k < blk.size; ++k) {
      const CVector col = schur.transform.col(blk.offset + k);
      p.noalias() += col * col.adjoint();
    }
  }
  return {"proj-2s=" + std::to_string(two_s), std::move(p)};
}

Observable observable_ghz(int n) {
  const Eigen::Index d = static_cast<Eigen::Index>(1) << n;
  CVector v = CVector::Zero(d);
  v(0) = 1.0 / std::sqrt(2.0);
  v(d - 1) = 1.0 / std::sqrt(2.0);
  return {"ghz", CMatrix(v * v.adjoint())};
}

Observable observable_pauli(const std::string& labels) {
  CMatrix m = CMatrix::Ones(1, 1);
  for (char c : labels) {
    CMatrix p(2, 2);
    switch (c) {
      case 'I': p << 1, 0, 0, 1; break;
      case 'X': p << 0, 1, 1, 0; break;
      case 'Y': p << 0, Complex(0, -1), Complex(0, 1), 0; break;
      case 'Z': p << 1, 0, 0, -1; break;
      default: throw std::invalid_argument("observable_pauli: bad label");
    }
    m = tensor_product(m, p);
  }
  return {"pauli-" + labels, std::move(m)};
}

Observable observable_majorana(const std::vector<int>& indices, int n) {
  const MajoranaSet majo = majorana_operators(n);
  std::string name = "majorana-";
  for (int i : indices) name += std::to_string(i) + ".";
  return {name, majorana_monomial(majo, indices)};
}

VisibleCheck visible_check(const ChannelSpec& spec, const Observable& o) {
  const CMatrix x = spec.to_frame(o.matrix);
  CMatrix vis = CMatrix::Zero(spec.dim, spec.dim);
  for (const IsotypicComponent& c : spec.components) {
    if (c.a.is_zero()) continue;
    for (const SparseOp& op : c.ops) op.accumulate(vis, op.hs_with(x));
  }
  VisibleCheck out;
  out.invisible_norm = (x - vis).norm();
  out.visible = out.invisible_norm <= 1e-9 * std::max(1.0, o.matrix.norm());
  return out;
}

}  // namespace shadowlab
