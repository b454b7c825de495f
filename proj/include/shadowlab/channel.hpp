#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shadowlab/bases.hpp"
#include "shadowlab/ensembles.hpp"
#include "shadowlab/linalg.hpp"
#include "shadowlab/rational.hpp"

namespace shadowlab {

// Rank-d completely dephasing channel in the given basis.
SuperOperator dephasing_superoperator(const MeasurementBasis& basis);

// Exact group average of Ad_{U†} ∘ A_W ∘ Ad_U over a finite enumerator.
SuperOperator measurement_channel_exact(const GroupEnsemble& ensemble,
                                        const MeasurementBasis& basis);

struct McChannel {
  SuperOperator op;
  double stderr_est = 0.0;  // Frobenius batch-means standard error
  long long samples = 0;
};

// Monte-Carlo estimate of the measurement channel. Deterministic for fixed
// (seed, stream) independent of thread count: samples are split into batches
// that are reduced in a fixed order.
McChannel measurement_channel_mc(const GroupEnsemble& ensemble, const MeasurementBasis& basis,
                                 long long n_samples, RandomStream rng, int batches = 10);
// Plain-loop reference used to cross-check the parallel kernel.
SuperOperator measurement_channel_mc_serial(const GroupEnsemble& ensemble,
                                            const MeasurementBasis& basis, long long n_samples,
                                            RandomStream rng);

struct EigenCluster {
  double value = 0.0;
  int multiplicity = 0;
};

// Real eigenvalues of a self-adjoint superoperator, clustered within tol.
std::vector<EigenCluster> channel_spectrum(const SuperOperator& m, double tol);
std::vector<EigenCluster> cluster_eigenvalues(const RVector& values, double tol);

// Sparse operator in a fixed frame; the channel-spec components store their
// HS-orthonormal operator bases this way (dense blocks stay cheap, the Schur
// frame ops have only O(d_eta) entries).
struct SparseOp {
  Eigen::Index dim = 0;
  std::vector<Eigen::Index> rows, cols;
  std::vector<Complex> vals;

  static SparseOp from_dense(const CMatrix& m, double drop_tol = 0.0);
  CMatrix dense() const;
  Complex hs_with(const CMatrix& x) const;           // Tr[op† x]
  void accumulate(CMatrix& x, Complex coeff) const;  // x += coeff * op
  double norm() const;
};

// One isotypic component of the analytic channel of Theorem-1 form.
struct IsotypicComponent {
  std::string label;
  Rational a;              // exact d_h / d_lambda
  long long d_lambda = 0;  // irrep dimension
  long long d_h = 0;       // H-invariant subspace dimension
  int multiplicity = 1;    // copies inside the block-diagonal operator space
  std::vector<SparseOp> ops;  // HS-orthonormal basis of the component

  CMatrix project(const CMatrix& x_in_frame) const;
  CMatrix dense_projector() const;  // explicit superoperator matrix (small dims)
};

// Analytic measurement channel: list of isotypic components with exact
// rational eigenvalues. `frame` (empty = computational) is the unitary whose
// columns define the frame the component ops are expressed in.
struct ChannelSpec {
  std::string protocol;
  Eigen::Index dim = 0;
  std::vector<IsotypicComponent> components;
  CMatrix frame;

  bool has_frame() const { return frame.size() != 0; }
  CMatrix to_frame(const CMatrix& x) const;
  CMatrix from_frame(const CMatrix& x) const;

  long long dim_block_diagonal() const;  // sum of multiplicity * d_lambda
  long long dim_visible() const;         // same, over components with a > 0

  // Pseudo-inverse: components with a = 0 and everything outside the listed
  // components are annihilated.
  CMatrix apply_inverse(const CMatrix& o) const;
  // M itself in analytic form.
  CMatrix apply(const CMatrix& o) const;
  CMatrix isotypic_project(const CMatrix& o, const std::string& label) const;
  const IsotypicComponent& component(const std::string& label) const;

  nlohmann::json to_json() const;
};

struct ProtocolParams {
  int n = 0;       // qubit / mode / symbol count
  int d = 0;       // Hilbert dimension for d-parameterized families
  double spin = 0; // su2-spin J
};

// Exact channel data for every supported protocol id:
//   global-haar, global-clifford, local-clifford, local-clifford-bell, pauli,
//   matchgate, particle-preserving, su2-spin, su2-tensor, orthogonal-real,
//   orthogonal-split, symplectic, sn-permutation.
ChannelSpec analytic_channel_spec(const std::string& protocol, const ProtocolParams& params);

// Irreducible-tensor operator basis on C^{2J+1} (standard basis, m descending).
std::vector<SparseOp> spin_tensor_ops(int two_j, int two_mu);

struct TwirlScalar {
  std::string label;
  double scalar = 0.0;
  double residual = 0.0;
};

// Fits E_g Ad_{g† h g} restricted to each isotypic of the spec as a scalar.
// Exact over an enumerator, Monte Carlo otherwise.
std::vector<TwirlScalar> class_twirl_scalars(const GroupEnsemble& ensemble, const CMatrix& h,
                                             const ChannelSpec& spec, long long mc_samples = 20000,
                                             RandomStream rng = RandomStream(1234));

// Frobenius distance between the dephasing map of `basis` and the H-twirl
// composed with the projector onto the parent action's block-diagonal
// operators. `parent_block_of` assigns each basis vector to its parent irrep
// block; empty means the parent acts irreducibly (projector = identity).
double dephasing_equals_htwirl_check(const MeasurementBasis& basis,
                                     const std::vector<CMatrix>& subgroup,
                                     const std::vector<int>& parent_block_of = {});

// Compression of a superoperator to the block-diagonal operator space of the
// basis (matrix elements over the orthonormal |b_i><b_j| same-block basis).
struct BlockRestriction {
  CMatrix matrix;                    // K x K
  Eigen::Index complement_dim = 0;   // dim End(H) - K
};
BlockRestriction block_diagonal_restriction(const SuperOperator& m, const MeasurementBasis& basis);

struct ComponentMean {
  std::string label;
  double mean = 0.0;
  double stderr_est = 0.0;
};

// Monte-Carlo channel eigenvalue per component: mean over samples of
// <op, M_sample(op)> averaged across each component's operator basis.
// Probe path; never materializes the dense superoperator.
std::vector<ComponentMean> channel_component_means_mc(const GroupEnsemble& ensemble,
                                                      const MeasurementBasis& basis,
                                                      const ChannelSpec& spec, long long n_samples,
                                                      RandomStream rng, int batches = 10);

// Monte-Carlo image of one operator under the channel, with batch-means
// standard error of the Frobenius fluctuation.
struct McImage {
  CMatrix image;
  double stderr_est = 0.0;
};
McImage channel_apply_mc(const GroupEnsemble& ensemble, const MeasurementBasis& basis,
                         const CMatrix& x, long long n_samples, RandomStream rng, int batches = 10);

}  // namespace shadowlab
