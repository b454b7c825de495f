#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shadowlab/channel.hpp"
#include "shadowlab/protocols.hpp"

namespace shadowlab {

struct QuantumState {
  CMatrix density;
  std::optional<CVector> pure_vector;

  Eigen::Index dim() const { return density.rows(); }
  static QuantumState pure(const CVector& v);
  static QuantumState mixed(const CMatrix& rho, double tol = 1e-10);
  static QuantumState maximally_mixed(Eigen::Index d);
};

struct Snapshot {
  ElementDescriptor descriptor;
  int outcome = 0;
};

struct Observable {
  std::string name;
  CMatrix matrix;  // Hermitian

  void check_hermitian(double tol = 1e-10) const;
};

// Draws one snapshot: sample the ensemble, measure in the protocol basis with
// Born probabilities (inverse CDF, ties toward the lower index).
Snapshot sample_snapshot(const Protocol& protocol, const QuantumState& state, RandomStream& rng);

// Single-shot estimator Tr[U† |w><w| U  M^{-1}(O)].
double single_shot_estimate(const Protocol& protocol, const Snapshot& snap, const Observable& o);

struct ShadowEstimate {
  double mean = 0.0;
  double single_shot_variance = 0.0;
  long long n = 0;
  int k_groups = 1;
  double median_of_means = 0.0;
  bool partially_visible = false;  // invisible component was dropped
};

// N independent snapshots aggregated by mean and median-of-means (K groups).
// Deterministic for fixed seed regardless of thread count. Snapshots are
// optionally recorded into *record.
ShadowEstimate estimate(const Protocol& protocol, const QuantumState& state, const Observable& o,
                        long long n_snapshots, int k_groups, RandomStream rng,
                        std::vector<Snapshot>* record = nullptr);

// Shared-snapshot batch version (one sampling pass, many observables).
std::vector<ShadowEstimate> estimate_batch(const Protocol& protocol, const QuantumState& state,
                                           const std::vector<Observable>& obs, long long n_snapshots,
                                           int k_groups, RandomStream rng,
                                           std::vector<Snapshot>* record = nullptr);
// Plain-loop reference for the parallel estimator kernel.
std::vector<ShadowEstimate> estimate_batch_serial(const Protocol& protocol,
                                                  const QuantumState& state,
                                                  const std::vector<Observable>& obs,
                                                  long long n_snapshots, int k_groups,
                                                  RandomStream rng);

// Re-evaluate estimates from stored snapshots (bit-exact re-aggregation).
ShadowEstimate estimate_from_snapshots(const Protocol& protocol,
                                       const std::vector<Snapshot>& snaps, const Observable& o,
                                       int k_groups);

// Observable library.
Observable observable_zsym(const SchurBasis& schur);
// Coefficient of Z_sym on the O^{eta,i}_{1,0} tensor op: (-1)^{2s} sqrt(2 C(d_eta+1,3)).
double zsym_block_coefficient(int two_s);
Observable observable_isotypic_projector(const SchurBasis& schur, int two_s);
Observable observable_ghz(int n);
Observable observable_pauli(const std::string& labels);  // e.g. "XZI"
Observable observable_majorana(const std::vector<int>& indices, int n);

struct VisibleCheck {
  bool visible = false;
  double invisible_norm = 0.0;
};
VisibleCheck visible_check(const ChannelSpec& spec, const Observable& o);

}  // namespace shadowlab
