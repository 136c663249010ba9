// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMPC_COEFFS_HPP
#define HELMPC_COEFFS_HPP

#include <array>
#include <functional>
#include <utility>
#include <vector>
#include <Eigen/Dense>
#include "helmpc/linalg.hpp"
#include "helmpc/mesh.hpp"

namespace helmpc
{

enum class CoefficientRole
{
  MuInv,
  Eps
};

const char *ToString(CoefficientRole role);

//
// A coefficient value on one element: a complex scalar, or (2D, mu^{-1} only) a complex
// symmetric 2x2 matrix. Scalars are stored as c*I so that both shapes share one
// representation.
//
class CoefficientValue
{
public:
  CoefficientValue(cplx c = 1.0) : m_(Eigen::Matrix2cd::Identity() * c), scalar_(true) {}
  CoefficientValue(double c) : CoefficientValue(cplx(c)) {}
  explicit CoefficientValue(const Eigen::Matrix2cd &m) : m_(m), scalar_(false) {}

  bool is_scalar() const { return scalar_; }
  cplx scalar() const { return m_(0, 0); }
  const Eigen::Matrix2cd &matrix() const { return m_; }

  bool operator==(const CoefficientValue &o) const
  {
    return scalar_ == o.scalar_ && m_ == o.m_;
  }

private:
  Eigen::Matrix2cd m_;
  bool scalar_;
};

//
// Piecewise-constant coefficient field: one value per mesh element.
//
class CoefficientField
{
public:
  CoefficientField(MeshPtr mesh, CoefficientRole role, std::vector<CoefficientValue> values);

  const MeshPtr &mesh() const { return mesh_; }
  CoefficientRole role() const { return role_; }
  bool is_scalar() const { return scalar_; }
  std::size_t size() const { return values_.size(); }
  const CoefficientValue &operator[](std::size_t e) const { return values_[e]; }
  const std::vector<CoefficientValue> &values() const { return values_; }

  // Largest value magnitude (spectral norm in the matrix case).
  double sup_norm() const;

  // True if every value is real (zero imaginary part).
  bool is_real() const;

private:
  MeshPtr mesh_;
  CoefficientRole role_;
  std::vector<CoefficientValue> values_;
  bool scalar_ = true;
};

struct AbsorptionSpec
{
  double alpha = 0.0;

  explicit AbsorptionSpec(double a);
};

using RegionRule = std::function<CoefficientValue(const std::array<double, 2> &)>;

CoefficientField ConstantField(MeshPtr mesh, const CoefficientValue &value,
                               CoefficientRole role);

// Evaluates the rule at element centroids.
CoefficientField PiecewiseField(MeshPtr mesh, const RegionRule &rule, CoefficientRole role);

// eps -> (1 + i alpha) eps.
CoefficientField AbsorptionShift(const CoefficientField &eps, const AbsorptionSpec &alpha);

// Stretch factor s(x) of the 1D layer: 1 for x <= start, otherwise
// 1 + (i sigma0 / k) ((x - start) / (end - start))^2.
cplx PmlStretch(double x, double k, double start, double end, double sigma0);

// Returns (mu^{-1}, eps) = (1/s, s) evaluated at element centroids.
std::pair<CoefficientField, CoefficientField> PmlProfile1d(MeshPtr mesh, double k, double start,
                                                           double sigma0);

// Maximum over elements of |f1 - f2| (spectral norm for matrix values).
double FieldDiffSupNorm(const CoefficientField &f1, const CoefficientField &f2);

// Spectral norm of a complex 2x2 matrix.
double SpectralNorm2x2(const Eigen::Matrix2cd &m);

}  // namespace helmpc

#endif  // HELMPC_COEFFS_HPP
