#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shadowlab/shadows.hpp"

namespace shadowlab {

// Sum over visible components of ||O^lambda||_2^2 / a_lambda.
double bound_l2(const ChannelSpec& spec, const Observable& o);
// || sum_lambda O^lambda / a_lambda ||_inf^2.
double bound_inf(const ChannelSpec& spec, const Observable& o);
// ||O||_inf^2 / a_lambda for definite single-isotypic observables, or for
// protocol-normalized operator families (Pauli strings under Clifford-type
// ensembles, even Majorana monomials of degree != n under matchgates).
// Absent when neither condition applies.
std::optional<double> bound_special(const ChannelSpec& spec, const Observable& o);
// (4/3)(n+1)^4 ||O||_inf^2 for permutation-invariant O (checked against the
// qubit-swap generators).
double bound_su2_tensor(int n, const Observable& o);

// Closed-form single-shot variance of the symmetrized-Z estimator under the
// su2-tensor protocol, even n only.
double exact_variance_zsym(const SchurBasis& schur, const QuantumState& state);
// p(1-p) with p = Tr[rho Pi^(eta)].
double exact_variance_projector(const SchurBasis& schur, const QuantumState& state, int two_s);

struct SecondMoment {
  double value = 0.0;
  double stderr_est = 0.0;
  long long n = 0;
};
// Mean of the squared single-shot estimator over N snapshots (batch-means
// standard error).
SecondMoment empirical_second_moment(const Protocol& protocol, const QuantumState& state,
                                     const Observable& o, long long n_snapshots, RandomStream rng,
                                     int batches = 10);
struct EmpiricalVariance {
  double variance = 0.0;
  double stderr_est = 0.0;  // batch-means error of the second moment
  double mean = 0.0;
};
EmpiricalVariance empirical_single_shot_variance(const Protocol& protocol,
                                                 const QuantumState& state, const Observable& o,
                                                 long long n_snapshots, RandomStream rng,
                                                 int batches = 10);

// App-G identity: E_g sum_{sigma in D} |lambda(g)_{sigma,tau}|^2. Basis
// elements must each be diagonal or fully off-diagonal in the measurement
// basis. Exact over an enumerator, Monte Carlo otherwise.
struct TightFrameResult {
  double value = 0.0;
  double stderr_est = 0.0;  // zero for exact enumeration
};
TightFrameResult tight_frame_check(const GroupEnsemble& ensemble, const MeasurementBasis& basis,
                                   const std::vector<CMatrix>& operator_basis,
                                   const std::vector<int>& diagonal_subset, int tau,
                                   long long mc_samples = 100000,
                                   RandomStream rng = RandomStream(99), int batches = 10);

struct VarianceReport {
  std::string observable;
  double l2_bound = 0.0;
  double inf_bound = 0.0;
  std::optional<double> special_bound;
  std::optional<double> su2_bound;
  std::optional<double> exact_value;
  double empirical_second_moment = 0.0;
  double empirical_variance = 0.0;
  double stderr_est = 0.0;
  long long n = 0;

  nlohmann::json to_json() const;
};

VarianceReport variance_report(const Protocol& protocol, const QuantumState& state,
                               const Observable& o, long long n_snapshots, RandomStream rng);

}  // namespace shadowlab
