// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helmpc/solvers.hpp"

#include <cmath>
#include "helmpc/error.hpp"

namespace helmpc
{

std::pair<std::vector<double>, std::vector<double>> Envelopes(double c, int n_max)
{
  Require(c >= 0.0, ErrorKind::InvalidArgument, "contraction factor must be >= 0");
  const double elman = 2.0 * std::sqrt(c) / ((1.0 + c) * (1.0 + c));
  std::vector<double> ec(n_max + 1), ee(n_max + 1);
  for (int n = 0; n <= n_max; n++)
  {
    ec[n] = std::pow(c, n);
    ee[n] = std::pow(elman, n);
  }
  return {ec, ee};
}

namespace
{

void FillEnvelopes(IterationTrace &t)
{
  if (!t.contraction || t.norms.empty())
  {
    return;
  }
  auto [ec, ee] = Envelopes(*t.contraction, t.iterations());
  for (std::size_t i = 0; i < ec.size(); i++)
  {
    ec[i] *= t.norms[0];
    ee[i] *= t.norms[0];
  }
  t.envelope_c = std::move(ec);
  t.envelope_elman = std::move(ee);
}

}  // namespace

ComplexVector DirectSolve(const ComplexSparse &A, const ComplexVector &b)
{
  Require(A.rows() == A.cols() && A.rows() == b.size(), ErrorKind::InvalidArgument,
          "direct solve: inconsistent dimensions");
  const LuFactor lu(A);
  Require(lu.ok(), ErrorKind::SingularSystem, "direct solve: matrix is singular");
  ComplexVector x = lu.solve(b);
  // One step of iterative refinement.
  x += lu.solve(b - A * x);
  return x;
}

IterationTrace FixedPoint(const ComplexSparse &A1, const ComplexSparse &A2, const GramFactor &G,
                          const ComplexVector &b, const ComplexVector &x0, int max_it, double tol,
                          std::optional<double> contraction)
{
  Require(A1.rows() == b.size() && A2.rows() == b.size() && x0.size() == b.size() &&
              G.size() == b.size(),
          ErrorKind::InvalidArgument, "fixed point: inconsistent dimensions");
  const LuFactor lu2(A2);
  Require(lu2.ok(), ErrorKind::SingularSystem, "fixed point: preconditioner is singular");
  const ComplexVector x_ref = DirectSolve(A1, b);

  IterationTrace t;
  t.kind = "fixed_point";
  t.contraction = contraction;
  ComplexVector x = x0;
  const double e0 = G.norm(x_ref - x);
  t.norms.push_back(e0);
  t.converged = e0 == 0.0;
  for (int it = 0; it < max_it && !t.converged; it++)
  {
    x += lu2.solve(b - A1 * x);
    const double e = G.norm(x_ref - x);
    t.norms.push_back(e);
    t.converged = e <= tol * e0;
  }
  t.final_relative = e0 > 0.0 ? t.norms.back() / e0 : 0.0;
  FillEnvelopes(t);
  return t;
}

IterationTrace Gmres(const LinearMap::Action &op, const ComplexVector &b, const GramFactor *inner,
                     int max_it, double tol, std::optional<double> contraction,
                     ComplexVector *solution)
{
  const Eigen::Index n = b.size();
  Require(inner == nullptr || inner->size() == n, ErrorKind::InvalidArgument,
          "GMRES: inner product dimension differs from right-hand side");
  auto dot = [inner](const ComplexVector &u, const ComplexVector &v) -> cplx
  { return inner ? inner->inner(u, v) : v.dot(u); };
  auto norm = [&dot](const ComplexVector &u) { return std::sqrt(std::max(0.0, dot(u, u).real())); };

  IterationTrace t;
  t.kind = "gmres";
  t.contraction = contraction;
  const double r0 = norm(b);
  t.norms.push_back(r0);
  if (solution)
  {
    *solution = ComplexVector::Zero(n);
  }
  if (r0 == 0.0)
  {
    t.converged = true;
    FillEnvelopes(t);
    return t;
  }

  const int m = static_cast<int>(std::min<Eigen::Index>(max_it, n));
  std::vector<ComplexVector> V;
  V.reserve(m + 1);
  V.push_back(b / r0);
  ComplexDense H = ComplexDense::Zero(m + 1, m);
  std::vector<double> cs(m);
  std::vector<cplx> sn(m);
  ComplexVector g = ComplexVector::Zero(m + 1);
  g(0) = r0;

  int j = 0;
  for (; j < m; j++)
  {
    ComplexVector w = op(V[j]);
    for (int i = 0; i <= j; i++)
    {
      H(i, j) = dot(w, V[i]);
      w -= H(i, j) * V[i];
    }
    const double hn = norm(w);
    H(j + 1, j) = hn;

    for (int i = 0; i < j; i++)
    {
      const cplx x = H(i, j), y = H(i + 1, j);
      H(i, j) = cs[i] * x + sn[i] * y;
      H(i + 1, j) = -std::conj(sn[i]) * x + cs[i] * y;
    }
    const cplx x = H(j, j), y = H(j + 1, j);
    const double r = std::hypot(std::abs(x), std::abs(y));
    if (std::abs(x) == 0.0)
    {
      cs[j] = 0.0;
      sn[j] = 1.0;
    }
    else
    {
      const cplx phase = x / std::abs(x);
      cs[j] = std::abs(x) / r;
      sn[j] = phase * std::conj(y) / r;
    }
    H(j, j) = cs[j] * x + sn[j] * y;
    H(j + 1, j) = 0.0;
    g(j + 1) = -std::conj(sn[j]) * g(j);
    g(j) = cs[j] * g(j);

    const double res = std::abs(g(j + 1));
    t.norms.push_back(res);
    const bool breakdown = hn <= 1e-14 * r0 || r == 0.0;
    if (res <= tol * r0 || breakdown)
    {
      t.converged = true;
      j++;
      break;
    }
    if (j + 1 < m)
    {
      V.push_back(w / hn);
    }
  }

  if (solution && j > 0)
  {
    const ComplexVector y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    for (int i = 0; i < j; i++)
    {
      *solution += y(i) * V[i];
    }
  }
  t.final_relative = t.norms.back() / r0;
  FillEnvelopes(t);
  return t;
}

}  // namespace helmpc
