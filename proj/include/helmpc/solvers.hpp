// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMPC_SOLVERS_HPP
#define HELMPC_SOLVERS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>
#include "helmpc/linalg.hpp"
#include "helmpc/numerics.hpp"

namespace helmpc
{

//
// Per-iteration norms of an iterative solve. norms[0] is the initial error (fixed point)
// or residual (GMRES). Envelopes are filled when a contraction factor c is supplied:
// envelope_c[n] = c^n norms[0], envelope_elman[n] = (2 sqrt(c) / (1 + c)^2)^n norms[0].
//
struct IterationTrace
{
  std::string kind;
  std::vector<double> norms;
  std::vector<double> envelope_c;
  std::vector<double> envelope_elman;
  std::optional<double> contraction;
  bool converged = false;
  double final_relative = 0.0;

  int iterations() const { return norms.empty() ? 0 : static_cast<int>(norms.size()) - 1; }
};

// LU-based solve; throws Error(SingularSystem) for singular A.
ComplexVector DirectSolve(const ComplexSparse &A, const ComplexVector &b);

// x^{n+1} = x^n + A2^{-1}(b - A1 x^n); errors ||x - x^n||_D against a direct solve.
// Stops once the relative error is <= tol or after max_it iterations.
IterationTrace FixedPoint(const ComplexSparse &A1, const ComplexSparse &A2, const GramFactor &G,
                          const ComplexVector &b, const ComplexVector &x0, int max_it, double tol,
                          std::optional<double> contraction = std::nullopt);

//
// Full (unrestarted) GMRES from x0 = 0 with modified Gram-Schmidt in the inner product
// <u, v>_D = v^H D u (Euclidean if inner == nullptr). Records the residual norm in that
// inner product at every step. Breakdown returns a converged trace; reaching max_it
// returns a non-converged trace.
//
IterationTrace Gmres(const LinearMap::Action &op, const ComplexVector &b, const GramFactor *inner,
                     int max_it, double tol, std::optional<double> contraction = std::nullopt,
                     ComplexVector *solution = nullptr);

// (c^n, (2 sqrt(c) / (1 + c)^2)^n) for n = 0..n_max.
std::pair<std::vector<double>, std::vector<double>> Envelopes(double c, int n_max);

}  // namespace helmpc

#endif  // HELMPC_SOLVERS_HPP
