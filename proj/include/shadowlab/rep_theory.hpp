#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shadowlab/linalg.hpp"
#include "shadowlab/rng.hpp"

namespace shadowlab {

// Clebsch-Gordan coefficient <s1 m1; s2 m2 | s12 m12> with the
// Condon-Shortley phase. Spins and projections are half-integers; the
// internal arithmetic is exact rational, emitted as a double.
// Returns 0 when m1+m2 != m12; throws for non-half-integer or out-of-range
// arguments and triangle violations.
double clebsch_gordan(double s1, double s2, double s12, double m1, double m2, double m12);

struct Su2Generators {
  CMatrix jx, jy, jz;
};
// Spin operators in the (2*spin+1)-dimensional irrep; Jz diagonal with
// entries spin, spin-1, ..., -spin.
Su2Generators su2_generators(double spin);

struct Partition {
  std::vector<int> parts;  // non-increasing, positive

  Partition() = default;
  explicit Partition(std::vector<int> p);
  int n() const;
  int rows() const { return static_cast<int>(parts.size()); }
  bool operator==(const Partition& o) const { return parts == o.parts; }
  std::string str() const;
  static Partition parse(const std::string& s);  // "3,1,1"
};

long long hook_length_dim(const Partition& lambda);

struct StandardTableau {
  Partition shape;
  std::vector<std::vector<int>> rows;

  // content = column - row (0-based) of the cell holding k
  int content(int k) const;
  std::vector<int> row_reading_word() const;
  // tableau with k and k+1 swapped (may fail to be standard)
  StandardTableau swapped(int k) const;
};

// All standard tableaux of shape lambda, sorted by row-reading word.
std::vector<StandardTableau> standard_tableaux(const Partition& lambda);

// Young orthogonal (= Gelfand-Tsetlin) matrices of an S_n irrep.
class SnIrrep {
 public:
  explicit SnIrrep(Partition lambda);

  const Partition& shape() const { return lambda_; }
  int n() const { return n_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(tableaux_.size()); }
  const std::vector<StandardTableau>& tableaux() const { return tableaux_; }

  // Matrix of the adjacent transposition s_i = (i, i+1), 1 <= i <= n-1.
  const CMatrix& transposition(int i) const;
  // Matrix of an arbitrary permutation given in one-line notation
  // (perm[i] = image of i+1, entries 1..n).
  CMatrix permutation(const std::vector<int>& one_line) const;

 private:
  Partition lambda_;
  int n_;
  std::vector<StandardTableau> tableaux_;
  std::vector<CMatrix> transpositions_;
};

// Decompose a permutation (one-line, 1-based) into adjacent transposition
// indices s_{i1} s_{i2} ... (left-to-right product equals the permutation).
std::vector<int> adjacent_transposition_word(const std::vector<int>& one_line);

// Cycle type of a permutation, parts sorted descending.
std::vector<int> cycle_type(const std::vector<int>& one_line);

// Character of the S_n irrep lambda on the class of the given cycle type
// (Murnaghan-Nakayama rule, exact).
long long sn_character(const Partition& lambda, const std::vector<int>& cycle);

struct IrrepSpec {
  std::string label;
  long long dim = 0;
  std::optional<long long> h_invariant_dim;
};

struct NdcseReport {
  bool is_fb = true;
  bool is_cse = false;
  bool is_nondegenerate = false;
  // characters(v, h) of basis vector v under subgroup element h
  CMatrix characters;
  double max_eigen_defect = 0.0;
};

// Checks the commuting-subgroup-eigenbasis conditions for a basis given as
// columns with a block id per column. `parent_generators`, when supplied,
// are used to test the Fourier-basis condition (blocks invariant under the
// parent action).
NdcseReport check_ndcse(const CMatrix& basis_columns, const std::vector<int>& block_of,
                        const std::vector<CMatrix>& subgroup,
                        const std::vector<CMatrix>& parent_generators = {});

// Rounds the mean of the supplied character values to the dimension of the
// H-invariant subspace; throws if the residual exceeds 0.1.
long long h_invariant_dimension(std::span<const Complex> character_values);

// Continuous version for H a torus U(1)^k: uniform 64-node-per-circle
// quadrature for k <= 3, Monte Carlo otherwise (requires rng).
long long h_invariant_dimension_torus(const std::function<Complex(std::span<const double>)>& chi,
                                      int torus_dim, RandomStream* rng = nullptr);

}  // namespace shadowlab
