// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helmpc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>
#include <Eigen/Eigenvalues>
#include "helmpc/error.hpp"

namespace helmpc
{

GramFactor::GramFactor(const RealSparse &D) : GramFactor(ComplexSparse(D.cast<cplx>())) {}

GramFactor::GramFactor(const ComplexSparse &D) : D_(D)
{
  Require(D.rows() == D.cols() && D.rows() > 0, ErrorKind::InvalidArgument,
          "Gram matrix must be square and non-empty");
  Eigen::SimplicialLLT<ComplexSparse, Eigen::Lower, Eigen::NaturalOrdering<int>> llt(D);
  if (llt.info() != Eigen::Success)
  {
    throw Error(ErrorKind::NotPositiveDefinite,
                "Cholesky factorization hit a non-positive pivot");
  }
  L_ = llt.matrixL();
  L_.makeCompressed();
  Lh_ = L_.adjoint();
  Lh_.makeCompressed();
  D_.makeCompressed();
}

ComplexVector GramFactor::solve_L(const ComplexVector &x) const
{
  return L_.triangularView<Eigen::Lower>().solve(x);
}

ComplexVector GramFactor::solve_Lh(const ComplexVector &x) const
{
  return Lh_.triangularView<Eigen::Upper>().solve(x);
}

LuFactor::LuFactor(const ComplexSparse &A) : n_(A.rows())
{
  Require(A.rows() == A.cols(), ErrorKind::InvalidArgument, "LU needs a square matrix");
  auto factor = [](const ComplexSparse &X) -> std::shared_ptr<Solver>
  {
    auto s = std::make_shared<Solver>();
    ComplexSparse Xc = X;
    Xc.makeCompressed();
    s->analyzePattern(Xc);
    s->factorize(Xc);
    if (s->info() != Eigen::Success)
    {
      return nullptr;
    }
    return s;
  };
  // SparseLU does not terminate on an empty column; an empty row or column is singular anyway.
  std::vector<char> row_hit(n_, 0), col_hit(n_, 0);
  for (int j = 0; j < A.outerSize(); j++)
  {
    for (ComplexSparse::InnerIterator it(A, j); it; ++it)
    {
      if (it.value() != cplx(0.0))
      {
        row_hit[it.row()] = 1;
        col_hit[it.col()] = 1;
      }
    }
  }
  for (Eigen::Index i = 0; i < n_; i++)
  {
    if (!row_hit[i] || !col_hit[i])
    {
      ok_ = false;
      return;
    }
  }
  lu_ = factor(A);
  if (lu_)
  {
    lu_adj_ = factor(ComplexSparse(A.adjoint()));
  }
  ok_ = lu_ != nullptr && lu_adj_ != nullptr;
}

ComplexVector LuFactor::solve(const ComplexVector &b) const
{
  Require(ok_, ErrorKind::SingularSystem, "matrix is singular");
  return lu_->solve(b);
}

ComplexVector LuFactor::solve_adjoint(const ComplexVector &b) const
{
  Require(ok_, ErrorKind::SingularSystem, "matrix is singular");
  return lu_adj_->solve(b);
}

ComplexVector SeededVector(Eigen::Index n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    const double re = unit();
    const double im = unit();
    v(i) = cplx(re, im);
  }
  return v;
}

SpectralEstimate LargestEigenvalue(const LinearMap::Action &H, Eigen::Index n,
                                   const EstimatorOptions &opts)
{
  Require(n > 0, ErrorKind::InvalidArgument, "operator of size zero");
  const Eigen::Index m = std::min<Eigen::Index>(std::max(opts.krylov_dim, 2), n);
  ComplexDense Q(n, m + 1);
  std::vector<double> alpha, beta;
  ComplexVector v = SeededVector(n, opts.seed);
  SpectralEstimate est;
  double scale = 0.0;

  while (true)
  {
    Q.col(0) = v / v.norm();
    alpha.clear();
    beta.clear();
    for (Eigen::Index j = 0; j < m; j++)
    {
      if (est.iterations >= opts.max_iterations)
      {
        throw NoConvergenceError("Lanczos iteration cap of " +
                                     std::to_string(opts.max_iterations) + " reached",
                                 est.value);
      }
      ComplexVector w = H(Q.col(j));
      est.iterations++;
      const double a = Q.col(j).dot(w).real();
      alpha.push_back(a);
      w -= a * Q.col(j);
      if (j > 0)
      {
        w -= beta[j - 1] * Q.col(j - 1);
      }
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; pass++)
      {
        const ComplexVector c = Q.leftCols(j + 1).adjoint() * w;
        w -= Q.leftCols(j + 1) * c;
      }
      const double b = w.norm();
      beta.push_back(b);
      scale = std::max({scale, std::abs(a), b});

      // Ritz values of the (j+1)x(j+1) tridiagonal matrix.
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), j + 1);
      Eigen::VectorXd sub = j > 0 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
                                        beta.data(), j))
                                  : Eigen::VectorXd();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const Eigen::Index top = j;  // eigenvalues sorted ascending
      const double theta = tri.eigenvalues()(top);
      const Eigen::VectorXd s = tri.eigenvectors().col(top);
      const double res = b * std::abs(s(j));
      est.value = std::max(theta, 0.0);
      est.residual = res;

      const bool invariant = b <= 1e-14 * scale || j + 1 == n;
      if (invariant || res <= opts.tol * theta)
      {
        return est;
      }
      if (j + 1 == m)
      {
        v = Q.leftCols(m) * s.cast<cplx>();
        break;
      }
      Q.col(j + 1) = w / b;
    }
  }
}

SpectralEstimate LargestSingularValue(const LinearMap &T, const EstimatorOptions &opts)
{
  SpectralEstimate e = LargestEigenvalue(
      [&T](const ComplexVector &x) -> ComplexVector { return T.apply_adjoint(T.apply(x)); },
      T.size, opts);
  e.value = std::sqrt(e.value);
  return e;
}

const char *ToString(NormMode mode)
{
  switch (mode)
  {
    case NormMode::D:
      return "D";
    case NormMode::DInv:
      return "D_INV";
    case NormMode::Euclid:
      return "EUCLID";
  }
  return "?";
}

double WeightedOperatorNorm(const LinearMap &C, const GramFactor *G, NormMode mode,
                            const EstimatorOptions &opts)
{
  if (mode == NormMode::Euclid)
  {
    return LargestSingularValue(C, opts).value;
  }
  Require(G != nullptr, ErrorKind::InvalidArgument, "weighted norm needs a Gram factor");
  Require(G->size() == C.size, ErrorKind::InvalidArgument,
          "operator and Gram factor dimensions differ");
  LinearMap T;
  T.size = C.size;
  if (mode == NormMode::D)
  {
    // T = L^H C L^{-H}, T^H = L^{-1} C^H L
    T.apply = [&C, G](const ComplexVector &x) -> ComplexVector
    { return G->apply_Lh(C.apply(G->solve_Lh(x))); };
    T.apply_adjoint = [&C, G](const ComplexVector &x) -> ComplexVector
    { return G->solve_L(C.apply_adjoint(G->apply_L(x))); };
  }
  else
  {
    // T = L^{-1} C L, T^H = L^H C^H L^{-H}
    T.apply = [&C, G](const ComplexVector &x) -> ComplexVector
    { return G->solve_L(C.apply(G->apply_L(x))); };
    T.apply_adjoint = [&C, G](const ComplexVector &x) -> ComplexVector
    { return G->apply_Lh(C.apply_adjoint(G->solve_Lh(x))); };
  }
  return LargestSingularValue(T, opts).value;
}

InfSupReport DiscreteInfSup(const ComplexSparse &A, const GramFactor &G,
                            const EstimatorOptions &opts)
{
  return DiscreteInfSup(LuFactor(A), G, opts);
}

InfSupReport DiscreteInfSup(const LuFactor &lu, const GramFactor &G, const EstimatorOptions &opts)
{
  Require(lu.size() == G.size(), ErrorKind::InvalidArgument,
          "matrix and Gram factor dimensions differ");
  InfSupReport r;
  if (!lu.ok())
  {
    return r;
  }
  // sigma_min(L^{-1} A L^{-H}) = 1 / sigma_max(L^H A^{-1} L)
  LinearMap T{G.size(),
              [&](const ComplexVector &x) -> ComplexVector
              { return G.apply_Lh(lu.solve(G.apply_L(x))); },
              [&](const ComplexVector &x) -> ComplexVector
              { return G.apply_Lh(lu.solve_adjoint(G.apply_L(x))); }};
  const SpectralEstimate e = LargestSingularValue(T, opts);
  r.iterations = e.iterations;
  r.residual = e.residual;
  if (!(e.value > 0.0) || !std::isfinite(e.value))
  {
    return r;
  }
  r.singular = false;
  r.c_dis = e.value;
  r.gamma_dis = 1.0 / e.value;
  return r;
}

double MassExtremes::ratio() const
{
  return std::sqrt(m_plus_sq / m_minus_sq);
}

MassExtremes ComputeMassExtremes(const RealSparse &M, const EstimatorOptions &opts)
{
  return ComputeMassExtremes(GramFactor(M), opts);
}

MassExtremes ComputeMassExtremes(const ComplexSparse &M, const EstimatorOptions &opts)
{
  return ComputeMassExtremes(GramFactor(M), opts);
}

MassExtremes ComputeMassExtremes(const GramFactor &R, const EstimatorOptions &opts)
{
  MassExtremes m;
  m.m_plus_sq =
      LargestEigenvalue([&R](const ComplexVector &x) -> ComplexVector { return R.apply(x); },
                        R.size(), opts)
          .value;
  const double inv_min =
      LargestEigenvalue([&R](const ComplexVector &x) -> ComplexVector { return R.solve(x); },
                        R.size(), opts)
          .value;
  m.m_minus_sq = 1.0 / inv_min;
  return m;
}

SolutionOperatorNorms ComputeSolutionOperatorNorms(const ComplexSparse &A, const GramFactor &G,
                                                   const GramFactor &R,
                                                   const EstimatorOptions &opts)
{
  return ComputeSolutionOperatorNorms(LuFactor(A), G, R, opts);
}

SolutionOperatorNorms ComputeSolutionOperatorNorms(const LuFactor &lu, const GramFactor &G,
                                                   const GramFactor &R,
                                                   const EstimatorOptions &opts)
{
  Require(lu.ok(), ErrorKind::SingularSystem, "matrix is singular");
  Require(lu.size() == G.size() && G.size() == R.size(), ErrorKind::InvalidArgument,
          "matrix and Gram factor dimensions differ");
  // ||X^H A^{-1} Y||_2 for Gram factors X, Y.
  auto norm = [&](const GramFactor &X, const GramFactor &Y)
  {
    LinearMap T{G.size(),
                [&](const ComplexVector &x) -> ComplexVector
                { return X.apply_Lh(lu.solve(Y.apply_L(x))); },
                [&](const ComplexVector &x) -> ComplexVector
                { return Y.apply_Lh(lu.solve_adjoint(X.apply_L(x))); }};
    return LargestSingularValue(T, opts).value;
  };
  return {norm(G, G), norm(G, R), norm(R, R)};
}

}  // namespace helmpc
