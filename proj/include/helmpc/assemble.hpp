// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMPC_ASSEMBLE_HPP
#define HELMPC_ASSEMBLE_HPP

#include <memory>
#include <vector>
#include "helmpc/coeffs.hpp"
#include "helmpc/linalg.hpp"
#include "helmpc/mesh.hpp"

namespace helmpc
{

//
// Discrete Helmholtz problem a(u,v) = (mu^{-1} k^{-1} grad u, k^{-1} grad v)
//   - i k^{-1} (theta u, v)_{impedance} - (eps u, v).
//
struct ProblemSpec
{
  double k = 1.0;
  MeshPtr mesh;
  CoefficientField mu_inv;
  CoefficientField eps;
  // Impedance parameter per boundary facet (ignored on non-impedance facets).
  std::vector<double> theta;

  ProblemSpec(double k, MeshPtr mesh, CoefficientField mu_inv, CoefficientField eps,
              std::vector<double> theta);

  // Constant theta on every facet.
  ProblemSpec(double k, MeshPtr mesh, CoefficientField mu_inv, CoefficientField eps,
              double theta);

  // Same problem with different coefficient fields.
  ProblemSpec with_coefficients(CoefficientField mu, CoefficientField e) const;

  // mu^{-1} = 1, eps = 1, real theta: the case with Garding constants (1, 2).
  bool is_canonical() const;
};

//
// Assembled Galerkin matrices on the free (non-Dirichlet) dofs.
//
struct GalerkinSystem
{
  std::shared_ptr<const ProblemSpec> spec;
  // Node index of each free dof.
  std::vector<int> dof_to_node;

  ComplexSparse S;      // (mu^{-1} k^{-1} grad phi_j, k^{-1} grad phi_i)
  ComplexSparse B;      // -i k^{-1} (theta phi_j, phi_i) on impedance facets
  ComplexSparse M_eps;  // (eps phi_j, phi_i)
  ComplexSparse A;      // S + B - M_eps
  RealSparse D;         // k^{-2} K + M
  RealSparse M;         // (phi_j, phi_i)

  Eigen::Index n() const { return A.rows(); }
};

GalerkinSystem AssembleSystem(const ProblemSpec &spec);

// F_i = (f, phi_i) for piecewise-constant f (one value per element).
ComplexVector AssembleLoad(const GalerkinSystem &sys, const std::vector<cplx> &f);

//
// Matrices supplied from outside (e.g. Maxwell edge-element systems). The coefficient
// difference norms cannot be recovered from matrices and are carried alongside.
//
struct ExternalSystem
{
  ComplexSparse A1, A2;
  ComplexSparse D, M;
  double delta_mu = 0.0;
  double delta_eps = 0.0;
  bool mu_equal = true;

  Eigen::Index n() const { return A1.rows(); }
};

// Checks dimensions and Hermitian positive definiteness of D and M; throws
// Error(InvalidSystem) naming the offending matrix.
const ExternalSystem &ValidateExternal(const ExternalSystem &sys);

}  // namespace helmpc

#endif  // HELMPC_ASSEMBLE_HPP
