#pragma once

#include <Eigen/Dense>
#include <complex>

#include "shadowlab/rng.hpp"

namespace shadowlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Kronecker product, row-major block convention: (a ⊗ b)[i*p+k, j*q+l] = a(i,j) b(k,l).
CMatrix tensor_product(const CMatrix& a, const CMatrix& b);
CMatrix tensor_power(const CMatrix& a, int k);

// Hilbert-Schmidt inner product Tr[a† b]. Throws on shape mismatch.
Complex hs_inner(const CMatrix& a, const CMatrix& b);

struct HermitianEig {
  RVector values;   // ascending
  CMatrix vectors;  // columns
};

// Eigendecomposition of a Hermitian matrix. Throws if the input deviates
// from Hermiticity by more than herm_tol (relative to its norm).
HermitianEig hermitian_eig(const CMatrix& a, double herm_tol = 1e-10);

// Matrix exponential. Hermitian and skew-Hermitian inputs go through an
// eigendecomposition; everything else through Pade scaling-and-squaring.
CMatrix expm(const CMatrix& a);

// Real antisymmetric logarithm of a special orthogonal matrix. Rotation
// angles lie in (-pi, pi]; eigenvalue -1 pairs map to angle-pi planes.
// Throws unless q is real, orthogonal and det +1 within tol.
RMatrix logm_special_orthogonal(const CMatrix& q, double tol = 1e-9);

// Column-stacking vectorization and its inverse.
CVector vectorize(const CMatrix& a);
CMatrix devectorize(const CVector& v);  // throws unless size is a perfect square

// Haar-random unit vector (complex Gaussian, then normalize).
CVector random_pure_state(Eigen::Index d, RandomStream& rng);

// Dense superoperator on End(H), acting on column-stacked vectorizations.
struct SuperOperator {
  Eigen::Index dim = 0;    // Hilbert dimension d
  CMatrix matrix;          // d^2 x d^2

  CMatrix apply(const CMatrix& x) const;
  static SuperOperator identity(Eigen::Index d);
  // Superoperator of X -> U X U†.
  static SuperOperator adjoint_action(const CMatrix& u);
  // Deviation from self-adjointness w.r.t. the HS inner product.
  double self_adjoint_defect() const { return (matrix - matrix.adjoint()).norm(); }
};

}  // namespace shadowlab
