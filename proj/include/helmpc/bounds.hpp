// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMPC_BOUNDS_HPP
#define HELMPC_BOUNDS_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>
#include "helmpc/assemble.hpp"
#include "helmpc/numerics.hpp"

namespace helmpc
{

struct GardingConstants
{
  double c_g1 = 1.0;
  double c_g2 = 2.0;
};

// Multiplicative slack applied to every inequality check: lhs <= rhs * (1 + slack).
struct CheckOptions
{
  double slack = 1e-9;
  EstimatorOptions estimator;
};

// One inequality lhs <= rhs. Checks whose hypothesis does not hold are kept with
// applicable = false.
struct BoundCheck
{
  std::string name;
  bool applicable = true;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;

  double margin() const { return rhs - lhs; }
};

BoundCheck MakeCheck(std::string name, double lhs, double rhs, double slack,
                     bool applicable = true);

struct GardingReport
{
  GardingConstants constants;
  int samples = 0;
  int violations = 0;
  // min over samples of (|V^H A V + C_G2 V^H M V| - C_G1 V^H D V) / V^H D V
  double min_relative_margin = std::numeric_limits<double>::infinity();
  // Re(V^H A V) + 2 V^H M V = V^H D V, only evaluated for canonical systems.
  bool identity_checked = false;
  double identity_max_rel_error = 0.0;
  bool identity_pass = true;

  bool pass() const { return violations == 0 && identity_pass; }
};

GardingReport GardingCheck(const ComplexSparse &A, const ComplexSparse &D, const ComplexSparse &M,
                           const GardingConstants &g, int n_samples, std::uint64_t seed,
                           bool canonical, double slack = 1e-9);
GardingReport GardingCheck(const GalerkinSystem &sys, const GardingConstants &g, int n_samples,
                           std::uint64_t seed, double slack = 1e-9);

//
// Both sides of the nearby-preconditioning bounds for a pair (A1, A2) sharing D and M.
// The continuous constant C_1 ||A_1^{-1}|| of the asymptotic bounds is realized by the
// measured discrete C_dis,1 (labelled "proxy" in serialized output).
//
struct BoundReport
{
  Eigen::Index n = 0;
  double k = std::numeric_limits<double>::quiet_NaN();
  double h = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();

  double delta_mu = 0.0;
  double delta_eps = 0.0;
  bool mu_equal = true;

  double c_dis1 = 0.0;
  double c_dis2 = 0.0;
  bool singular1 = false;
  bool singular2 = false;
  double mass_ratio = 0.0;

  double lhs_D = 0.0;     // ||I - A2^{-1} A1||_D
  double lhs_Dinv = 0.0;  // ||I - A1 A2^{-1}||_{D^{-1}}
  double lhs_2 = 0.0;     // ||I - A2^{-1} A1||_2
  double lhs_2p = 0.0;    // ||I - A1 A2^{-1}||_2

  double rhs_nearby = 0.0;    // (dmu + deps) C_dis,2
  double rhs_nearby_euclid = std::numeric_limits<double>::quiet_NaN();  // (m+/m-) deps C_dis,2
  double cond = 0.0;         // (dmu + deps) C_dis,1
  double rhs_asymptotic = 0.0;    // 2 (dmu + deps) C_dis,1

  std::vector<BoundCheck> checks;

  double contraction() const { return lhs_D; }
  // False if any applicable check failed. A singular A2 is reported, not failed.
  bool pass() const;
};

BoundReport BoundReportFromMatrices(const ComplexSparse &A1, const ComplexSparse &A2,
                                    const ComplexSparse &D, const ComplexSparse &M,
                                    double delta_mu, double delta_eps, bool mu_equal,
                                    const CheckOptions &opts = {});

// Throws Error(InvalidPair) unless both systems share dimension, D and M.
BoundReport NearbyBoundReport(const GalerkinSystem &sys1, const GalerkinSystem &sys2,
                              const CheckOptions &opts = {});
BoundReport NearbyBoundReport(const ExternalSystem &ext, const CheckOptions &opts = {});

// Second system with eps2 = (1 + i alpha) eps1.
GalerkinSystem AbsorptionPartner(const GalerkinSystem &sys1, const AbsorptionSpec &alpha);
BoundReport AbsorptionReport(const GalerkinSystem &sys1, const AbsorptionSpec &alpha,
                             const CheckOptions &opts = {});

struct NormEquivalenceReport
{
  GardingConstants constants;
  SolutionOperatorNorms norms;
  InfSupReport inf_sup;
  std::vector<BoundCheck> checks;

  bool pass() const;
};

// Throws Error(SingularSystem) for singular A.
NormEquivalenceReport NormEquivalence(const GalerkinSystem &sys, const GardingConstants &g = {},
                                      const CheckOptions &opts = {});
NormEquivalenceReport NormEquivalence(const ComplexSparse &A, const ComplexSparse &D,
                                      const ComplexSparse &M, const GardingConstants &g,
                                      const CheckOptions &opts = {});

struct LadderEntry
{
  double k = 0.0;
  double h = 0.0;
  double h_ref = 0.0;
  Eigen::Index n = 0;
  Eigen::Index n_ref = 0;
  double c_dis = 0.0;
  double c_dis_ref = 0.0;
  // C_dis(h) / C_dis(h_ref); NaN if either system is singular.
  double ratio = std::numeric_limits<double>::quiet_NaN();
  bool singular = false;
};

struct InfSupLadder
{
  std::vector<LadderEntry> entries;
};

using ProblemFactory = std::function<ProblemSpec(double k, double h)>;
using MeshRule = std::function<double(double k)>;

InfSupLadder RunInfSupLadder(const ProblemFactory &make, const std::vector<double> &k_values,
                             const MeshRule &h_rule, const MeshRule &reference_h_rule,
                             const EstimatorOptions &opts = {});

}  // namespace helmpc

#endif  // HELMPC_BOUNDS_HPP
