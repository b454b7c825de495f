#include "shadowlab/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace shadowlab {

CMatrix tensor_product(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix tensor_power(const CMatrix& a, int k) {
  if (k < 1) throw std::invalid_argument("tensor_power: k must be positive");
  CMatrix out = a;
  for (int i = 1; i < k; ++i) out = tensor_product(out, a);
  return out;
}

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("hs_inner: shape mismatch");
  return (a.adjoint() * b).trace();
}

HermitianEig hermitian_eig(const CMatrix& a, double herm_tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eig: not square");
  const double scale = std::max(1.0, a.norm());
  if ((a - a.adjoint()).norm() > herm_tol * scale)
    throw std::invalid_argument("hermitian_eig: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: not square");
  const double scale = std::max(1.0, a.norm());
  if ((a - a.adjoint()).norm() <= 1e-12 * scale) {
    HermitianEig eig = hermitian_eig(a, 1e-10);
    return eig.vectors * eig.values.array().exp().matrix().asDiagonal() * eig.vectors.adjoint();
  }
  if ((a + a.adjoint()).norm() <= 1e-12 * scale) {
    // a = -i h with h Hermitian; exp(a) = V e^{-i w} V†
    HermitianEig eig = hermitian_eig(Complex(0, 1) * a, 1e-10);
    CVector phases(eig.values.size());
    for (Eigen::Index k = 0; k < eig.values.size(); ++k)
      phases(k) = std::exp(Complex(0, -eig.values(k)));
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  }
  return a.exp();
}

RMatrix logm_special_orthogonal(const CMatrix& q, double tol) {
  const Eigen::Index d = q.rows();
  if (q.cols() != d) throw std::invalid_argument("logm_special_orthogonal: not square");
  if (q.imag().norm() > tol) throw std::invalid_argument("logm_special_orthogonal: input not real");
  RMatrix qr = q.real();
  if ((qr.transpose() * qr - RMatrix::Identity(d, d)).norm() > tol)
    throw std::invalid_argument("logm_special_orthogonal: input not orthogonal");
  if (std::abs(qr.determinant() - 1.0) > tol)
    throw std::invalid_argument("logm_special_orthogonal: determinant is not +1");

  Eigen::ComplexEigenSolver<CMatrix> solver(qr.cast<Complex>());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("logm_special_orthogonal: eigensolver failed");
  const CVector vals = solver.eigenvalues();
  const CMatrix vecs = solver.eigenvectors();

  RMatrix a = RMatrix::Zero(d, d);
  // Eigenvalues come in conjugate pairs e^{±iθ}; build the generator from the
  // upper half-plane ones. θ=π shows up as eigenvalue -1 and is handled by
  // pairing real basis vectors of that eigenspace.
  std::vector<Eigen::Index> minus_ones;
  std::vector<Eigen::Index> upper;
  for (Eigen::Index k = 0; k < d; ++k) {
    const Complex lam = vals(k);
    if (std::abs(lam - Complex(-1.0, 0.0)) < 1e-7) {
      minus_ones.push_back(k);
    } else if (lam.imag() > 1e-9) {
      upper.push_back(k);
    }
  }
  // Orthonormalize within the selected set (degenerate angles may come back
  // with non-orthogonal eigenvectors).
  std::vector<CVector> vs;
  for (Eigen::Index k : upper) {
    CVector v = vecs.col(k);
    for (const CVector& u : vs) v -= u * (u.dot(v));
    const double nr = v.norm();
    if (nr < 1e-10) continue;
    v /= nr;
    vs.push_back(v);
    const double theta = std::atan2(vals(k).imag(), vals(k).real());
    RVector x = std::sqrt(2.0) * v.real();
    RVector y = std::sqrt(2.0) * v.imag();
    a += theta * (x * y.transpose() - y * x.transpose());
  }
  if (!minus_ones.empty()) {
    if (minus_ones.size() % 2 != 0)
      throw std::runtime_error("logm_special_orthogonal: odd count of -1 eigenvalues");
    // Real orthonormal basis of the -1 eigenspace.
    std::vector<RVector> basis;
    for (Eigen::Index k : minus_ones) {
      for (const RVector& cand : {RVector(vecs.col(k).real()), RVector(vecs.col(k).imag())}) {
        RVector w = cand;
        for (const RVector& u : basis) w -= u * u.dot(w);
        if (w.norm() > 1e-8) {
          w.normalize();
          basis.push_back(w);
        }
      }
    }
    if (basis.size() != minus_ones.size())
      throw std::runtime_error("logm_special_orthogonal: failed to split -1 eigenspace");
    const double pi = 3.14159265358979323846;
    for (std::size_t k = 0; k + 1 < basis.size(); k += 2) {
      const RVector& x = basis[k];
      const RVector& y = basis[k + 1];
      a += pi * (x * y.transpose() - y * x.transpose());
    }
  }
  // Enforce exact antisymmetry against roundoff.
  return 0.5 * (a - a.transpose());
}

CVector vectorize(const CMatrix& a) {
  CVector v(a.size());
  Eigen::Index t = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) v(t++) = a(i, j);
  return v;
}

CMatrix devectorize(const CVector& v) {
  const auto n = v.size();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) throw std::invalid_argument("devectorize: size is not a perfect square");
  CMatrix a(d, d);
  Eigen::Index t = 0;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = v(t++);
  return a;
}

CVector random_pure_state(Eigen::Index d, RandomStream& rng) {
  if (d < 1) throw std::invalid_argument("random_pure_state: d must be >= 1");
  CVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(rng.gaussian(), rng.gaussian());
  v /= v.norm();
  return v;
}

CMatrix SuperOperator::apply(const CMatrix& x) const {
  return devectorize(matrix * vectorize(x));
}

SuperOperator SuperOperator::identity(Eigen::Index d) {
  return {d, CMatrix::Identity(d * d, d * d)};
}

SuperOperator SuperOperator::adjoint_action(const CMatrix& u) {
  // vec(U X U†) = (conj(U) ⊗ U) vec(X) under column stacking
  return {u.rows(), tensor_product(u.conjugate(), u)};
}

}  // namespace shadowlab
