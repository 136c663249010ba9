// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMPC_NUMERICS_HPP
#define HELMPC_NUMERICS_HPP

#include <cstdint>
#include <limits>
#include <memory>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include "helmpc/linalg.hpp"

namespace helmpc
{

//
// Cholesky factor D = L L^H of a Hermitian positive definite Gram matrix, computed
// without reordering so that L is lower triangular in the original dof numbering.
// Norms: ||V||_D = ||L^H V||_2.
//
class GramFactor
{
public:
  explicit GramFactor(const RealSparse &D);
  explicit GramFactor(const ComplexSparse &D);

  Eigen::Index size() const { return D_.rows(); }
  const ComplexSparse &matrix() const { return D_; }
  const ComplexSparse &L() const { return L_; }

  ComplexVector apply_L(const ComplexVector &x) const { return L_ * x; }
  ComplexVector apply_Lh(const ComplexVector &x) const { return Lh_ * x; }
  ComplexVector solve_L(const ComplexVector &x) const;
  ComplexVector solve_Lh(const ComplexVector &x) const;

  // D x
  ComplexVector apply(const ComplexVector &x) const { return D_ * x; }

  // D^{-1} x
  ComplexVector solve(const ComplexVector &x) const { return solve_Lh(solve_L(x)); }

  double norm(const ComplexVector &x) const { return (Lh_ * x).norm(); }

  // <u, v>_D = v^H D u
  cplx inner(const ComplexVector &u, const ComplexVector &v) const { return v.dot(D_ * u); }

private:
  ComplexSparse D_, L_, Lh_;
};

//
// Sparse LU of a complex square matrix. An exactly singular matrix (zero pivot) leaves
// the factor in the !ok() state instead of throwing.
//
class LuFactor
{
public:
  explicit LuFactor(const ComplexSparse &A);

  bool ok() const { return ok_; }
  Eigen::Index size() const { return n_; }

  // A^{-1} b and A^{-H} b; throw Error(SingularSystem) if !ok().
  ComplexVector solve(const ComplexVector &b) const;
  ComplexVector solve_adjoint(const ComplexVector &b) const;

private:
  using Solver = Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>>;
  Eigen::Index n_;
  bool ok_ = false;
  std::shared_ptr<Solver> lu_, lu_adj_;
};

struct EstimatorOptions
{
  double tol = 1e-10;
  // Cap on operator applications.
  int max_iterations = 50000;
  std::uint64_t seed = 0x2545f4914f6cdd1dULL;
  // Krylov subspace size between explicit restarts.
  int krylov_dim = 120;
};

struct SpectralEstimate
{
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

//
// Largest eigenvalue of a Hermitian positive semidefinite operator by Lanczos iteration
// with full reorthogonalization and explicit restarts from the current Ritz vector,
// started from a seeded random vector. Stops when the Ritz residual is below
// tol * (Ritz value), or when the Krylov space is invariant.
//
SpectralEstimate LargestEigenvalue(const LinearMap::Action &H, Eigen::Index n,
                                   const EstimatorOptions &opts = {});

// sigma_max(T), from the largest eigenvalue of T^H T.
SpectralEstimate LargestSingularValue(const LinearMap &T, const EstimatorOptions &opts = {});

// Deterministic complex start vector with entries uniform in the unit square.
ComplexVector SeededVector(Eigen::Index n, std::uint64_t seed);

enum class NormMode
{
  D,     // sigma_max(L^H C L^{-H})
  DInv,  // sigma_max(L^{-1} C L)
  Euclid
};

const char *ToString(NormMode mode);

double WeightedOperatorNorm(const LinearMap &C, const GramFactor *G, NormMode mode,
                            const EstimatorOptions &opts = {});

struct InfSupReport
{
  // sigma_min(L^{-1} A L^{-H}); zero for singular A.
  double gamma_dis = 0.0;
  // 1 / gamma_dis = ||L^H A^{-1} L||_2; +inf for singular A.
  double c_dis = std::numeric_limits<double>::infinity();
  bool singular = true;
  int iterations = 0;
  double residual = 0.0;
};

InfSupReport DiscreteInfSup(const ComplexSparse &A, const GramFactor &G,
                            const EstimatorOptions &opts = {});
InfSupReport DiscreteInfSup(const LuFactor &lu, const GramFactor &G,
                            const EstimatorOptions &opts = {});

struct MassExtremes
{
  double m_minus_sq = 0.0;
  double m_plus_sq = 0.0;

  // m_+ / m_-
  double ratio() const;
};

MassExtremes ComputeMassExtremes(const RealSparse &M, const EstimatorOptions &opts = {});
MassExtremes ComputeMassExtremes(const ComplexSparse &M, const EstimatorOptions &opts = {});
MassExtremes ComputeMassExtremes(const GramFactor &R, const EstimatorOptions &opts = {});

struct SolutionOperatorNorms
{
  double hstar_to_h = 0.0;  // ||L^H A^{-1} L||_2
  double h0_to_h = 0.0;     // ||L^H A^{-1} R||_2
  double h0_to_h0 = 0.0;    // ||R^H A^{-1} R||_2
};

// G factors D, R factors M. Throws Error(SingularSystem) for singular A.
SolutionOperatorNorms ComputeSolutionOperatorNorms(const ComplexSparse &A, const GramFactor &G,
                                                   const GramFactor &R,
                                                   const EstimatorOptions &opts = {});
SolutionOperatorNorms ComputeSolutionOperatorNorms(const LuFactor &lu, const GramFactor &G,
                                                   const GramFactor &R,
                                                   const EstimatorOptions &opts = {});

}  // namespace helmpc

#endif  // HELMPC_NUMERICS_HPP
