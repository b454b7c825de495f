#pragma once

#include <map>
#include <string>
#include <vector>

#include "shadowlab/linalg.hpp"
#include "shadowlab/rep_theory.hpp"

namespace shadowlab {

struct BasisLabel {
  std::string irrep;     // irrep label eta
  int multiplicity = 1;  // copy index i (1-based)
  std::string weight;    // weight / character index alpha
};

// Ordered orthonormal basis with irrep-block structure. block_of[v] gives the
// block id of column v; blocks partition the indices.
struct MeasurementBasis {
  Eigen::Index dim = 0;
  CMatrix vectors;  // columns
  std::vector<BasisLabel> labels;
  std::vector<int> block_of;

  int block_count() const;
  std::vector<std::vector<Eigen::Index>> blocks() const;
  double gram_defect() const;  // || V†V - I ||_F
  void check(double tol = 1e-10) const;
};

// Standard basis; single irrep block unless a caller overrides block_of.
MeasurementBasis computational_basis(int n);
// Tensor product of two-qubit Bell bases on adjacent pairs (1,2),(3,4),...
// Each Bell string is its own 1-dimensional block (stabilizer syndromes are
// the irrep labels the protocol dephases onto).
MeasurementBasis bell_pair_basis(int n);
// Normalized DFT vectors |w_k> = n^{-1/2} sum_j w^{jk}|j>; k=0 is the trivial
// block, k=1..n-1 the standard-representation block.
MeasurementBasis cyclic_fourier_basis(int n);
// Standard basis with +-L_i weight labels for the split-form orthogonal group.
MeasurementBasis split_orthogonal_weight_basis(int d);

// Schur basis of n qubits: columns grouped by two-row partition lambda
// (s descending), then multiplicity path t (lexicographically descending
// spin sequence), then weight m descending from s to -s.
struct SchurLabel {
  int two_s = 0;                // 2*s_lambda of the block
  int t_index = 0;              // multiplicity index, 1-based
  std::vector<int> path_two_s;  // coupling path (2*s_1, ..., 2*s_n)
  int two_m = 0;                // 2*m
  Partition lambda(int n) const;
};

struct SchurBasis {
  int n = 0;
  CMatrix transform;  // columns are Schur vectors in the computational basis
  std::vector<SchurLabel> labels;

  // distinct (two_s, t_index) block start offsets and sizes, in column order
  struct Block {
    int two_s = 0;
    int t_index = 0;
    Eigen::Index offset = 0;
    Eigen::Index size = 0;
  };
  std::vector<Block> block_table;

  Eigen::Index column_of(int two_s, int t_index, int two_m) const;
  int multiplicity(int two_s) const;  // number of paths with final spin s
  MeasurementBasis to_measurement_basis() const;
};

SchurBasis schur_basis(int n);  // 1 <= n <= 10

// Spin multiplicity m_lambda = n! (l1 - l2 + 1) / ((l1+1)! l2!) for the
// two-row partition with l1 - l2 = two_s.
long long schur_multiplicity(int n, int two_s);

// Irreducible-tensor operator basis of End(H^{eta,i}) embedded in 2^n dims:
// O_{mu,nu} = sum_m (-1)^{m+s} C^{s,s,mu}_{m,nu-m,nu} |eta,i,m><eta,i,m-nu|.
// HS-orthonormal across all (mu, nu).
struct SphericalOpBasis {
  int two_s_eta = 0;
  int t_index = 0;
  // at(two_mu, two_nu); two_mu in {0,2,...,2*two_s_eta}, |two_nu| <= two_mu
  const CMatrix& at(int two_mu, int two_nu) const;
  std::map<std::pair<int, int>, CMatrix> ops;
};

SphericalOpBasis spherical_operator_basis(const SchurBasis& basis, int two_s_eta, int t_index);

// Label table as CSV (index, eta, i, alpha).
std::string labels_csv(const MeasurementBasis& basis);

}  // namespace shadowlab
