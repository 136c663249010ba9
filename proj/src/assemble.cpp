// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helmpc/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <Eigen/SparseCholesky>
#include "helmpc/error.hpp"

namespace helmpc
{

ProblemSpec::ProblemSpec(double k_, MeshPtr mesh_, CoefficientField mu_inv_,
                         CoefficientField eps_, std::vector<double> theta_)
  : k(k_), mesh(std::move(mesh_)), mu_inv(std::move(mu_inv_)), eps(std::move(eps_)),
    theta(std::move(theta_))
{
  Require(std::isfinite(k) && k > 0.0, ErrorKind::InvalidArgument, "wavenumber must be > 0");
  Require(mesh != nullptr, ErrorKind::InvalidArgument, "problem without mesh");
  Require(mu_inv.role() == CoefficientRole::MuInv && eps.role() == CoefficientRole::Eps,
          ErrorKind::InvalidArgument, "coefficient roles do not match (mu_inv, eps)");
  Require(mu_inv.mesh()->same_geometry(*mesh) && eps.mesh()->same_geometry(*mesh),
          ErrorKind::InvalidArgument, "coefficient fields attached to a different mesh");
  Require(eps.is_scalar(), ErrorKind::InvalidArgument, "eps must be scalar-valued");
  Require(theta.size() == mesh->facets().size(), ErrorKind::InvalidArgument,
          "theta needs one value per boundary facet");
  for (std::size_t f = 0; f < theta.size(); f++)
  {
    if (mesh->facets()[f].tag == BoundaryTag::Impedance)
    {
      Require(std::isfinite(theta[f]) && theta[f] > 0.0, ErrorKind::InvalidArgument,
              "theta must be > 0 on impedance facet " + std::to_string(f));
    }
  }
}

ProblemSpec::ProblemSpec(double k_, MeshPtr mesh_, CoefficientField mu_inv_,
                         CoefficientField eps_, double theta_)
  : ProblemSpec(k_, mesh_, std::move(mu_inv_), std::move(eps_),
                std::vector<double>(mesh_ ? mesh_->facets().size() : 0, theta_))
{
}

ProblemSpec ProblemSpec::with_coefficients(CoefficientField mu, CoefficientField e) const
{
  return ProblemSpec(k, mesh, std::move(mu), std::move(e), theta);
}

bool ProblemSpec::is_canonical() const
{
  auto is_one = [](const CoefficientField &f)
  {
    return f.is_scalar() &&
           std::all_of(f.values().begin(), f.values().end(),
                       [](const CoefficientValue &v) { return v.scalar() == cplx(1.0); });
  };
  return is_one(mu_inv) && is_one(eps);
}

namespace
{

using Triplets = std::vector<Eigen::Triplet<cplx>>;
using RealTriplets = std::vector<Eigen::Triplet<double>>;

}  // namespace

GalerkinSystem AssembleSystem(const ProblemSpec &spec)
{
  const Mesh &mesh = *spec.mesh;
  const double k = spec.k;
  const double k2inv = 1.0 / (k * k);

  std::vector<char> dirichlet(mesh.num_nodes(), 0);
  for (const auto &f : mesh.facets())
  {
    if (f.tag == BoundaryTag::Dirichlet)
    {
      for (int v : f.nodes)
      {
        if (v >= 0)
        {
          dirichlet[v] = 1;
        }
      }
    }
  }
  std::vector<int> node_to_dof(mesh.num_nodes(), -1);
  GalerkinSystem sys;
  for (std::size_t i = 0; i < mesh.num_nodes(); i++)
  {
    if (!dirichlet[i])
    {
      node_to_dof[i] = static_cast<int>(sys.dof_to_node.size());
      sys.dof_to_node.push_back(static_cast<int>(i));
    }
  }
  const auto n = static_cast<Eigen::Index>(sys.dof_to_node.size());
  if (n == 0)
  {
    throw Error(ErrorKind::DegenerateSystem, "mesh has no free degrees of freedom");
  }

  Triplets ts, tm_eps, tb;
  RealTriplets tk, tm;
  const int nv = mesh.vertices_per_element();
  for (std::size_t e = 0; e < mesh.num_elements(); e++)
  {
    const auto &el = mesh.elements()[e];
    const double meas = mesh.measure(e);

    // Element stiffness (unweighted and mu-weighted) and mass, exact for P1.
    double kel[3][3] = {}, mel[3][3] = {};
    cplx sel[3][3] = {};
    if (mesh.dimension() == 1)
    {
      const cplx mu = spec.mu_inv[e].scalar();
      for (int a = 0; a < 2; a++)
      {
        for (int b = 0; b < 2; b++)
        {
          const double s = (a == b ? 1.0 : -1.0) / meas;
          kel[a][b] = s;
          sel[a][b] = mu * s;
          mel[a][b] = meas / 6.0 * (a == b ? 2.0 : 1.0);
        }
      }
    }
    else
    {
      const auto &p0 = mesh.nodes()[el[0]], &p1 = mesh.nodes()[el[1]], &p2 = mesh.nodes()[el[2]];
      // Gradients of barycentric coordinates.
      const double det = 2.0 * meas;
      const double g[3][2] = {{(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det},
                              {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det},
                              {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det}};
      const Eigen::Matrix2cd &mu = spec.mu_inv[e].matrix();
      for (int a = 0; a < 3; a++)
      {
        for (int b = 0; b < 3; b++)
        {
          kel[a][b] = meas * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
          // (mu grad phi_b) . grad phi_a
          const cplx mg0 = mu(0, 0) * g[b][0] + mu(0, 1) * g[b][1];
          const cplx mg1 = mu(1, 0) * g[b][0] + mu(1, 1) * g[b][1];
          sel[a][b] = meas * (mg0 * g[a][0] + mg1 * g[a][1]);
          mel[a][b] = meas / 12.0 * (a == b ? 2.0 : 1.0);
        }
      }
    }

    const cplx eps = spec.eps[e].scalar();
    for (int a = 0; a < nv; a++)
    {
      const int i = node_to_dof[el[a]];
      if (i < 0)
      {
        continue;
      }
      for (int b = 0; b < nv; b++)
      {
        const int j = node_to_dof[el[b]];
        if (j < 0)
        {
          continue;
        }
        ts.emplace_back(i, j, k2inv * sel[a][b]);
        tm_eps.emplace_back(i, j, eps * mel[a][b]);
        tk.emplace_back(i, j, kel[a][b]);
        tm.emplace_back(i, j, mel[a][b]);
      }
    }
  }

  for (std::size_t f = 0; f < mesh.facets().size(); f++)
  {
    const auto &facet = mesh.facets()[f];
    if (facet.tag != BoundaryTag::Impedance)
    {
      continue;
    }
    const cplx scale = cplx(0.0, -1.0) / k * spec.theta[f];
    if (mesh.dimension() == 1)
    {
      const int i = node_to_dof[facet.nodes[0]];
      if (i >= 0)
      {
        tb.emplace_back(i, i, scale);
      }
      continue;
    }
    const double len = mesh.facet_measure(f);
    for (int a = 0; a < 2; a++)
    {
      const int i = node_to_dof[facet.nodes[a]];
      if (i < 0)
      {
        continue;
      }
      for (int b = 0; b < 2; b++)
      {
        const int j = node_to_dof[facet.nodes[b]];
        if (j >= 0)
        {
          tb.emplace_back(i, j, scale * len / 6.0 * (a == b ? 2.0 : 1.0));
        }
      }
    }
  }

  sys.S.resize(n, n);
  sys.S.setFromTriplets(ts.begin(), ts.end());
  sys.M_eps.resize(n, n);
  sys.M_eps.setFromTriplets(tm_eps.begin(), tm_eps.end());
  sys.B.resize(n, n);
  sys.B.setFromTriplets(tb.begin(), tb.end());
  sys.M.resize(n, n);
  sys.M.setFromTriplets(tm.begin(), tm.end());
  RealSparse K(n, n);
  K.setFromTriplets(tk.begin(), tk.end());
  sys.D = k2inv * K + sys.M;
  sys.A = sys.S + sys.B - sys.M_eps;
  sys.S.makeCompressed();
  sys.M_eps.makeCompressed();
  sys.B.makeCompressed();
  sys.A.makeCompressed();
  sys.D.makeCompressed();
  sys.M.makeCompressed();
  sys.spec = std::make_shared<const ProblemSpec>(spec);
  return sys;
}

ComplexVector AssembleLoad(const GalerkinSystem &sys, const std::vector<cplx> &f)
{
  const Mesh &mesh = *sys.spec->mesh;
  Require(f.size() == mesh.num_elements(), ErrorKind::InvalidArgument,
          "load data needs one value per element");
  std::vector<int> node_to_dof(mesh.num_nodes(), -1);
  for (std::size_t i = 0; i < sys.dof_to_node.size(); i++)
  {
    node_to_dof[sys.dof_to_node[i]] = static_cast<int>(i);
  }
  ComplexVector F = ComplexVector::Zero(sys.n());
  const int nv = mesh.vertices_per_element();
  for (std::size_t e = 0; e < mesh.num_elements(); e++)
  {
    // Each hat function integrates to measure / (number of vertices).
    const cplx w = f[e] * mesh.measure(e) / static_cast<double>(nv);
    for (int a = 0; a < nv; a++)
    {
      const int i = node_to_dof[mesh.elements()[e][a]];
      if (i >= 0)
      {
        F(i) += w;
      }
    }
  }
  return F;
}

namespace
{

void CheckHpd(const ComplexSparse &X, const char *name)
{
  if (!IsHermitian(X, 1e-12))
  {
    throw Error(ErrorKind::InvalidSystem, std::string("matrix ") + name + " is not Hermitian");
  }
  Eigen::SimplicialLLT<ComplexSparse, Eigen::Lower> llt(X);
  if (llt.info() != Eigen::Success)
  {
    throw Error(ErrorKind::InvalidSystem,
                std::string("matrix ") + name + " is not positive definite");
  }
}

}  // namespace

const ExternalSystem &ValidateExternal(const ExternalSystem &sys)
{
  const Eigen::Index n = sys.A1.rows();
  auto check_dims = [n](const ComplexSparse &X, const char *name)
  {
    if (X.rows() != X.cols())
    {
      throw Error(ErrorKind::InvalidSystem, std::string("matrix ") + name + " is not square");
    }
    if (X.rows() != n)
    {
      throw Error(ErrorKind::InvalidSystem,
                  std::string("matrix ") + name + " has dimension " + std::to_string(X.rows()) +
                      ", expected " + std::to_string(n) + " (from A1)");
    }
  };
  if (n == 0)
  {
    throw Error(ErrorKind::InvalidSystem, "matrix A1 is empty");
  }
  check_dims(sys.A1, "A1");
  check_dims(sys.A2, "A2");
  check_dims(sys.D, "D");
  check_dims(sys.M, "M");
  CheckHpd(sys.D, "D");
  CheckHpd(sys.M, "M");
  if (!(sys.delta_mu >= 0.0) || !(sys.delta_eps >= 0.0))
  {
    throw Error(ErrorKind::InvalidSystem, "coefficient difference norms must be >= 0");
  }
  return sys;
}

}  // namespace helmpc
