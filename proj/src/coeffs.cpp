// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helmpc/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include "helmpc/error.hpp"

namespace helmpc
{

const char *ToString(CoefficientRole role)
{
  return role == CoefficientRole::MuInv ? "mu_inv" : "eps";
}

double SpectralNorm2x2(const Eigen::Matrix2cd &m)
{
  // Largest eigenvalue of the Hermitian matrix m^H m, in closed form.
  const Eigen::Matrix2cd h = m.adjoint() * m;
  const double a = h(0, 0).real(), d = h(1, 1).real();
  const double b2 = std::norm(h(0, 1));
  const double mean = 0.5 * (a + d);
  const double rad = std::sqrt(0.25 * (a - d) * (a - d) + b2);
  return std::sqrt(std::max(0.0, mean + rad));
}

namespace
{

void CheckValue(const CoefficientValue &v, CoefficientRole role, int dim, std::size_t e)
{
  const std::string where = " (element " + std::to_string(e) + ")";
  if (!v.is_scalar())
  {
    Require(role == CoefficientRole::MuInv && dim == 2, ErrorKind::InvalidArgument,
            "matrix-valued coefficients are only allowed for mu_inv in 2D" + where);
    const auto &m = v.matrix();
    Require(m(0, 1) == m(1, 0), ErrorKind::InvalidCoefficient,
            "matrix-valued mu_inv must be symmetric" + where);
  }
  for (int i = 0; i < 2; i++)
  {
    for (int j = 0; j < 2; j++)
    {
      Require(std::isfinite(v.matrix()(i, j).real()) && std::isfinite(v.matrix()(i, j).imag()),
              ErrorKind::InvalidCoefficient, "non-finite coefficient" + where);
    }
  }
  if (role == CoefficientRole::MuInv)
  {
    const Eigen::Matrix2d re = v.matrix().real();
    double lmin;
    if (v.is_scalar())
    {
      lmin = re(0, 0);
    }
    else
    {
      const double mean = 0.5 * (re(0, 0) + re(1, 1));
      const double rad =
          std::sqrt(0.25 * (re(0, 0) - re(1, 1)) * (re(0, 0) - re(1, 1)) + re(0, 1) * re(0, 1));
      lmin = mean - rad;
    }
    Require(lmin > 0.0, ErrorKind::InvalidCoefficient,
            "mu_inv must have positive definite real part" + where);
  }
}

}  // namespace

CoefficientField::CoefficientField(MeshPtr mesh, CoefficientRole role,
                                   std::vector<CoefficientValue> values)
  : mesh_(std::move(mesh)), role_(role), values_(std::move(values))
{
  Require(mesh_ != nullptr, ErrorKind::InvalidArgument, "coefficient field without mesh");
  Require(values_.size() == mesh_->num_elements(), ErrorKind::InvalidArgument,
          "coefficient field needs one value per element");
  scalar_ = values_.front().is_scalar();
  for (std::size_t e = 0; e < values_.size(); e++)
  {
    Require(values_[e].is_scalar() == scalar_, ErrorKind::InvalidArgument,
            "coefficient field mixes scalar and matrix values");
    CheckValue(values_[e], role_, mesh_->dimension(), e);
  }
}

double CoefficientField::sup_norm() const
{
  double s = 0.0;
  for (const auto &v : values_)
  {
    s = std::max(s, v.is_scalar() ? std::abs(v.scalar()) : SpectralNorm2x2(v.matrix()));
  }
  return s;
}

bool CoefficientField::is_real() const
{
  return std::all_of(values_.begin(), values_.end(),
                     [](const CoefficientValue &v) { return v.matrix().imag().isZero(0.0); });
}

AbsorptionSpec::AbsorptionSpec(double a) : alpha(a)
{
  Require(std::isfinite(a) && a >= 0.0, ErrorKind::InvalidArgument,
          "absorption alpha must be non-negative");
}

CoefficientField ConstantField(MeshPtr mesh, const CoefficientValue &value,
                               CoefficientRole role)
{
  Require(mesh != nullptr, ErrorKind::InvalidArgument, "coefficient field without mesh");
  std::vector<CoefficientValue> values(mesh->num_elements(), value);
  return CoefficientField(std::move(mesh), role, std::move(values));
}

CoefficientField PiecewiseField(MeshPtr mesh, const RegionRule &rule, CoefficientRole role)
{
  Require(mesh != nullptr, ErrorKind::InvalidArgument, "coefficient field without mesh");
  std::vector<CoefficientValue> values;
  values.reserve(mesh->num_elements());
  for (std::size_t e = 0; e < mesh->num_elements(); e++)
  {
    values.push_back(rule(mesh->centroid(e)));
  }
  return CoefficientField(std::move(mesh), role, std::move(values));
}

CoefficientField AbsorptionShift(const CoefficientField &eps, const AbsorptionSpec &alpha)
{
  Require(eps.role() == CoefficientRole::Eps, ErrorKind::InvalidArgument,
          "absorption shift applies to eps fields only");
  const cplx factor(1.0, alpha.alpha);
  std::vector<CoefficientValue> values;
  values.reserve(eps.size());
  for (const auto &v : eps.values())
  {
    values.emplace_back(factor * v.scalar());
  }
  return CoefficientField(eps.mesh(), CoefficientRole::Eps, std::move(values));
}

cplx PmlStretch(double x, double k, double start, double end, double sigma0)
{
  if (x <= start)
  {
    return 1.0;
  }
  const double t = (x - start) / (end - start);
  return cplx(1.0, sigma0 / k * t * t);
}

std::pair<CoefficientField, CoefficientField> PmlProfile1d(MeshPtr mesh, double k, double start,
                                                           double sigma0)
{
  Require(mesh != nullptr && mesh->dimension() == 1, ErrorKind::InvalidArgument,
          "PML profile requires a 1D mesh");
  Require(k > 0.0, ErrorKind::InvalidArgument, "PML profile requires k > 0");
  Require(sigma0 >= 0.0, ErrorKind::InvalidArgument, "PML strength must be non-negative");
  const double a = mesh->nodes().front()[0], b = mesh->nodes().back()[0];
  Require(start >= a && start <= b, ErrorKind::InvalidArgument,
          "PML start must lie inside the mesh interval");
  std::vector<CoefficientValue> mu, eps;
  for (std::size_t e = 0; e < mesh->num_elements(); e++)
  {
    const cplx s = PmlStretch(mesh->centroid(e)[0], k, start, b, sigma0);
    mu.emplace_back(1.0 / s);
    eps.emplace_back(s);
  }
  return {CoefficientField(mesh, CoefficientRole::MuInv, std::move(mu)),
          CoefficientField(mesh, CoefficientRole::Eps, std::move(eps))};
}

double FieldDiffSupNorm(const CoefficientField &f1, const CoefficientField &f2)
{
  Require(f1.role() == f2.role(), ErrorKind::InvalidArgument,
          "coefficient fields have different roles");
  Require(f1.size() == f2.size() && f1.mesh()->same_geometry(*f2.mesh()),
          ErrorKind::InvalidArgument, "coefficient fields live on different meshes");
  Require(f1.is_scalar() == f2.is_scalar(), ErrorKind::InvalidArgument,
          "coefficient fields have different shapes");
  double s = 0.0;
  for (std::size_t e = 0; e < f1.size(); e++)
  {
    const double d = f1.is_scalar()
                         ? std::abs(f1[e].scalar() - f2[e].scalar())
                         : SpectralNorm2x2(f1[e].matrix() - f2[e].matrix());
    s = std::max(s, d);
  }
  return s;
}

}  // namespace helmpc
