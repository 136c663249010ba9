// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMPC_LINALG_HPP
#define HELMPC_LINALG_HPP

#include <complex>
#include <functional>
#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace helmpc
{

using cplx = std::complex<double>;

using RealSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using ComplexSparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using ComplexDense = Eigen::MatrixXcd;

//
// Matrix-free action of a square operator C together with its adjoint C^dagger (with
// respect to the Euclidean inner product). Both callables must be reentrant.
//
struct LinearMap
{
  using Action = std::function<ComplexVector(const ComplexVector &)>;

  Eigen::Index size = 0;
  Action apply;
  Action apply_adjoint;
};

// Sparse matrix as a LinearMap (copies the matrix into the closures).
LinearMap MakeLinearMap(const ComplexSparse &C);

// Identity-scaled map s*I.
LinearMap ScaledIdentity(Eigen::Index n, cplx s);

inline ComplexSparse ToComplex(const RealSparse &A)
{
  return A.cast<cplx>();
}

// Largest entry magnitude of a sparse matrix.
double MaxAbs(const ComplexSparse &A);
double MaxAbs(const RealSparse &A);

// Induced 1-norm (maximum absolute column sum).
double Norm1(const ComplexSparse &A);

bool IsHermitian(const ComplexSparse &A, double rel_tol = 0.0);

}  // namespace helmpc

#endif  // HELMPC_LINALG_HPP
