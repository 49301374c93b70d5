#pragma once

// Unrestarted GMRES for dense or matrix-free operators. Arnoldi uses
// classical Gram-Schmidt with one full reorthogonalization pass; the
// least-squares problem is updated with Givens rotations.

#include <cmath>
#include <vector>

#include "passage/types.hpp"

namespace passage {

template <typename Scalar>
struct GmresResult {
  VectorX<Scalar> x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Solves A x = b with x0 = 0. `apply(v)` returns A v. Stops when the
/// residual estimate drops to tol * |b| or after max_iterations steps.
template <typename Scalar, typename Apply>
GmresResult<Scalar> gmres(Apply&& apply, const VectorX<Scalar>& b, double tol, int max_iterations) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  const Eigen::Index n = b.size();
  GmresResult<Scalar> result;
  result.x = VectorX<Scalar>::Zero(n);
  const Real beta = b.norm();
  if (n == 0 || beta == Real(0)) {
    result.converged = true;
    return result;
  }

  const int m = static_cast<int>(std::min<Eigen::Index>(max_iterations, n));
  MatrixX<Scalar> basis(n, m + 1);
  MatrixX<Scalar> hess = MatrixX<Scalar>::Zero(m + 1, m);
  std::vector<Scalar> cs(m), sn(m);
  VectorX<Scalar> g = VectorX<Scalar>::Zero(m + 1);
  g(0) = beta;
  basis.col(0) = b / beta;

  int k = 0;
  Real residual = beta;
  while (k < m && residual > tol * beta) {
    VectorX<Scalar> w = apply(basis.col(k));
    for (int pass = 0; pass < 2; ++pass) {
      const VectorX<Scalar> coeffs = basis.leftCols(k + 1).adjoint() * w;
      w.noalias() -= basis.leftCols(k + 1) * coeffs;
      hess.col(k).head(k + 1) += coeffs;
    }
    const Real h_next = w.norm();
    hess(k + 1, k) = h_next;

    for (int i = 0; i < k; ++i) {
      const Scalar t = cs[i] * hess(i, k) + sn[i] * hess(i + 1, k);
      hess(i + 1, k) = -Eigen::numext::conj(sn[i]) * hess(i, k) + cs[i] * hess(i + 1, k);
      hess(i, k) = t;
    }
    const Scalar a = hess(k, k), c = hess(k + 1, k);
    const Real denom = std::sqrt(std::norm(a) + std::norm(c));
    if (denom == Real(0)) {
      cs[k] = Scalar(1);
      sn[k] = Scalar(0);
    } else if (std::abs(a) == Real(0)) {
      cs[k] = Scalar(0);
      sn[k] = Eigen::numext::conj(c) / std::abs(c);
    } else {
      // Rotation with real cosine mapping (a, c) to (r, 0).
      const Scalar phase = a / std::abs(a);
      cs[k] = Scalar(std::abs(a) / denom);
      sn[k] = phase * Eigen::numext::conj(c) / denom;
    }
    hess(k, k) = cs[k] * a + sn[k] * c;
    hess(k + 1, k) = Scalar(0);
    g(k + 1) = -Eigen::numext::conj(sn[k]) * g(k);
    g(k) = cs[k] * g(k);
    residual = std::abs(g(k + 1));
    ++k;

    if (h_next == Real(0)) break;  // happy breakdown: Krylov space is invariant
    basis.col(k) = w / h_next;
  }

  if (k > 0) {
    const VectorX<Scalar> y =
        hess.topLeftCorner(k, k).template triangularView<Eigen::Upper>().solve(g.head(k));
    result.x = basis.leftCols(k) * y;
  }
  result.iterations = k;
  result.relative_residual = static_cast<double>(residual / beta);
  result.converged = residual <= tol * beta;
  return result;
}

}  // namespace passage
