#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shadowlab/linalg.hpp"
#include "shadowlab/rep_theory.hpp"
#include "shadowlab/rng.hpp"

namespace shadowlab {

// Enough data to rebuild the represented unitary: index lists for finite
// groups, the SO(2n) rotation for matchgates, (seed, stream) for the other
// continuous families. Serializes to {"ensemble": ..., params...}.
struct ElementDescriptor {
  std::string ensemble;
  nlohmann::json params;

  nlohmann::json to_json() const;
  static ElementDescriptor from_json(const nlohmann::json& j);
};

struct SampledElement {
  CMatrix unitary;
  ElementDescriptor descriptor;
};

// A sampler (and optional exact enumerator) of represented unitaries.
// Samplers draw only from the RandomStream they are handed; one stream per
// element, or descriptors built from (seed, stream) stop being faithful.
struct GroupEnsemble {
  std::string name;
  Eigen::Index dim = 0;
  std::optional<long long> cardinality;
  std::function<SampledElement(RandomStream&)> sample;
  std::function<CMatrix(const ElementDescriptor&)> reconstruct;
  std::function<std::vector<SampledElement>()> enumerate;  // empty if none

  bool has_enumerator() const { return static_cast<bool>(enumerate); }
};

struct FormMatrix {
  enum class Kind { Identity, SplitOrthogonal, SymplecticOmega };
  Kind kind = Kind::Identity;
  CMatrix matrix;

  static FormMatrix identity(Eigen::Index d);
  static FormMatrix split_orthogonal(Eigen::Index d);  // [[0,I],[I,0]], d even
  static FormMatrix symplectic_omega(Eigen::Index d);  // [[0,I],[-I,0]], d even
};

struct MajoranaSet {
  int n = 0;                    // mode count
  std::vector<CMatrix> gammas;  // 2n Hermitian matrices, Jordan-Wigner
};

// Jordan-Wigner Majoranas: gamma_{2j-1} = Z^{j-1} X_j, gamma_{2j} = Z^{j-1} Y_j.
MajoranaSet majorana_operators(int n);
// Hermitian Majorana monomial (-i)^k gamma_{mu_1} ... gamma_{mu_2k};
// indices are 1-based, strictly increasing, of even count.
CMatrix majorana_monomial(const MajoranaSet& m, const std::vector<int>& indices);

CMatrix haar_unitary(Eigen::Index d, RandomStream& rng);
CMatrix haar_orthogonal(Eigen::Index d, RandomStream& rng, const FormMatrix& form);
CMatrix haar_special_orthogonal(Eigen::Index d, RandomStream& rng);
CMatrix haar_symplectic(Eigen::Index d, RandomStream& rng);  // U^T Omega U = Omega

// The 24 phase-normalized single-qubit Cliffords (closed under product up to
// global phase; first nonzero entry of each matrix is real positive).
const std::vector<CMatrix>& single_qubit_cliffords();

// SU(2) element from a unit quaternion; Haar when the quaternion is uniform.
CMatrix su2_from_quaternion(double w, double x, double y, double z);

// Spin-J representation matrix of an SU(2) element (exact lift; evaluates the
// z-y-z Euler factors on the spin-J generators).
CMatrix su2_wigner_rotation(double spin, const CMatrix& u2);

// Matchgate unitary implementing gamma_mu -> sum_nu Q_{nu,mu} gamma_nu,
// built as a product of plane-rotation factors exp(-(theta/2) g_mu g_nu).
CMatrix matchgate_unitary(const MajoranaSet& m, const RMatrix& q);
// Same action via the quadratic-generator exponential exp(-1/4 sum A g g);
// agrees with matchgate_unitary up to a global sign (double-cover lift).
CMatrix matchgate_unitary_generator(const MajoranaSet& m, const RMatrix& q);

GroupEnsemble haar_unitary_ensemble(int d);
GroupEnsemble haar_orthogonal_ensemble(int d, FormMatrix::Kind kind);
GroupEnsemble haar_symplectic_ensemble(int d);
GroupEnsemble local_clifford_ensemble(int n);       // enumerator for n <= 3
GroupEnsemble pauli_group_ensemble(int n);          // phase-stripped, 4^n elements, n <= 6
GroupEnsemble su2_tensor_ensemble(int n);           // U^{⊗n}, Haar SU(2)
GroupEnsemble su2_spin_ensemble(double spin);       // Wigner rotation, dim 2J+1
GroupEnsemble matchgate_ensemble(int n);            // n <= 7
GroupEnsemble particle_preserving_ensemble(int n);  // n <= 6
GroupEnsemble symmetric_group_ensemble(int n);      // permutation matrices, enumerates n <= 8
GroupEnsemble sn_irrep_ensemble(const Partition& lambda);  // Young-orthogonal matrices, n <= 6

}  // namespace shadowlab
