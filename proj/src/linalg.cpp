// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helmpc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace helmpc
{

LinearMap MakeLinearMap(const ComplexSparse &C)
{
  auto mat = std::make_shared<const ComplexSparse>(C);
  auto adj = std::make_shared<const ComplexSparse>(C.adjoint());
  return {C.rows(), [mat](const ComplexVector &x) -> ComplexVector { return *mat * x; },
          [adj](const ComplexVector &x) -> ComplexVector { return *adj * x; }};
}

LinearMap ScaledIdentity(Eigen::Index n, cplx s)
{
  return {n, [s](const ComplexVector &x) -> ComplexVector { return s * x; },
          [s](const ComplexVector &x) -> ComplexVector { return std::conj(s) * x; }};
}

double MaxAbs(const ComplexSparse &A)
{
  double m = 0.0;
  for (int j = 0; j < A.outerSize(); j++)
  {
    for (ComplexSparse::InnerIterator it(A, j); it; ++it)
    {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

double MaxAbs(const RealSparse &A)
{
  double m = 0.0;
  for (int j = 0; j < A.outerSize(); j++)
  {
    for (RealSparse::InnerIterator it(A, j); it; ++it)
    {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

double Norm1(const ComplexSparse &A)
{
  double m = 0.0;
  for (int j = 0; j < A.outerSize(); j++)
  {
    double s = 0.0;
    for (ComplexSparse::InnerIterator it(A, j); it; ++it)
    {
      s += std::abs(it.value());
    }
    m = std::max(m, s);
  }
  return m;
}

bool IsHermitian(const ComplexSparse &A, double rel_tol)
{
  if (A.rows() != A.cols())
  {
    return false;
  }
  const ComplexSparse diff = A - ComplexSparse(A.adjoint());
  return MaxAbs(diff) <= rel_tol * MaxAbs(A);
}

}  // namespace helmpc
