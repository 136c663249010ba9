// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helmpc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include "helmpc/error.hpp"

namespace helmpc
{

BoundCheck MakeCheck(std::string name, double lhs, double rhs, double slack, bool applicable)
{
  BoundCheck c;
  c.name = std::move(name);
  c.applicable = applicable;
  c.lhs = lhs;
  c.rhs = rhs;
  c.pass = !applicable || lhs <= rhs + slack * std::abs(rhs);
  return c;
}

GardingReport GardingCheck(const ComplexSparse &A, const ComplexSparse &D, const ComplexSparse &M,
                           const GardingConstants &g, int n_samples, std::uint64_t seed,
                           bool canonical, double slack)
{
  Require(A.rows() == D.rows() && D.rows() == M.rows(), ErrorKind::InvalidArgument,
          "Garding check: inconsistent dimensions");
  GardingReport r;
  r.constants = g;
  r.identity_checked = canonical;
  for (int s = 0; s < n_samples; s++)
  {
    const ComplexVector v = SeededVector(A.rows(), seed + static_cast<std::uint64_t>(s));
    const cplx vav = v.dot(A * v);
    const double vmv = v.dot(M * v).real();
    const double vdv = v.dot(D * v).real();
    r.samples++;
    const double lhs = std::abs(vav + g.c_g2 * vmv);
    const double rhs = g.c_g1 * vdv;
    if (vdv > 0.0)
    {
      r.min_relative_margin = std::min(r.min_relative_margin, (lhs - rhs) / vdv);
    }
    if (lhs < rhs - slack * rhs)
    {
      r.violations++;
    }
    if (canonical)
    {
      const double err = std::abs(vav.real() + 2.0 * vmv - vdv) / std::max(vdv, 1e-300);
      r.identity_max_rel_error = std::max(r.identity_max_rel_error, err);
    }
  }
  r.identity_pass = !canonical || r.identity_max_rel_error <= 1e-12;
  return r;
}

GardingReport GardingCheck(const GalerkinSystem &sys, const GardingConstants &g, int n_samples,
                           std::uint64_t seed, double slack)
{
  // theta is real by construction, so B contributes nothing to the real part.
  const bool canonical = sys.spec->is_canonical();
  return GardingCheck(sys.A, ToComplex(sys.D), ToComplex(sys.M), g, n_samples, seed, canonical,
                      slack);
}

bool BoundReport::pass() const
{
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck &c) { return c.pass; });
}

BoundReport BoundReportFromMatrices(const ComplexSparse &A1, const ComplexSparse &A2,
                                    const ComplexSparse &D, const ComplexSparse &M,
                                    double delta_mu, double delta_eps, bool mu_equal,
                                    const CheckOptions &opts)
{
  const Eigen::Index n = A1.rows();
  if (A2.rows() != n || A1.cols() != n || A2.cols() != n || D.rows() != n || M.rows() != n)
  {
    throw Error(ErrorKind::InvalidPair, "systems have inconsistent dimensions");
  }
  BoundReport r;
  r.n = n;
  r.delta_mu = delta_mu;
  r.delta_eps = delta_eps;
  r.mu_equal = mu_equal;

  const GramFactor G(D);
  const GramFactor R(M);
  const LuFactor lu1(A1);
  const LuFactor lu2(A2);
  const auto &eo = opts.estimator;

  r.mass_ratio = ComputeMassExtremes(R, eo).ratio();
  const InfSupReport inf1 = DiscreteInfSup(lu1, G, eo);
  r.singular1 = inf1.singular;
  r.c_dis1 = inf1.c_dis;
  const double delta = delta_mu + delta_eps;
  r.cond = delta * r.c_dis1;
  r.rhs_asymptotic = 2.0 * r.cond;

  const InfSupReport inf2 = DiscreteInfSup(lu2, G, eo);
  r.singular2 = inf2.singular;
  r.c_dis2 = inf2.c_dis;
  if (r.singular2)
  {
    return r;
  }

  // I - A2^{-1} A1 = A2^{-1} E and I - A1 A2^{-1} = E A2^{-1}, E = A2 - A1.
  const ComplexSparse E = A2 - A1;
  const ComplexSparse Eh = E.adjoint();
  const LinearMap left{n, [&](const ComplexVector &x) -> ComplexVector { return lu2.solve(E * x); },
                       [&](const ComplexVector &x) -> ComplexVector
                       { return Eh * lu2.solve_adjoint(x); }};
  const LinearMap right{n, [&](const ComplexVector &x) -> ComplexVector { return E * lu2.solve(x); },
                        [&](const ComplexVector &x) -> ComplexVector
                        { return lu2.solve_adjoint(Eh * x); }};
  r.lhs_D = WeightedOperatorNorm(left, &G, NormMode::D, eo);
  r.lhs_Dinv = WeightedOperatorNorm(right, &G, NormMode::DInv, eo);
  r.lhs_2 = WeightedOperatorNorm(left, nullptr, NormMode::Euclid, eo);
  r.lhs_2p = WeightedOperatorNorm(right, nullptr, NormMode::Euclid, eo);

  const double s = opts.slack;
  r.rhs_nearby = delta * r.c_dis2;
  r.checks.push_back(MakeCheck("nearby_D", r.lhs_D, r.rhs_nearby, s));
  r.checks.push_back(MakeCheck("nearby_Dinv", r.lhs_Dinv, r.rhs_nearby, s));
  if (mu_equal)
  {
    r.rhs_nearby_euclid = r.mass_ratio * delta_eps * r.c_dis2;
  }
  r.checks.push_back(MakeCheck("nearby_euclid", r.lhs_2, r.rhs_nearby_euclid, s, mu_equal));
  r.checks.push_back(MakeCheck("nearby_euclid_right", r.lhs_2p, r.rhs_nearby_euclid, s, mu_equal));

  // Under (dmu + deps) C_dis,1 <= 1/2 the perturbed inverse at most doubles, and the
  // bounds hold with 2 C_dis,1 in place of C_dis,2.
  const bool small = !r.singular1 && r.cond <= 0.5;
  r.checks.push_back(MakeCheck("infsup_factor_two", r.c_dis2, 2.0 * r.c_dis1, s, small));
  r.checks.push_back(MakeCheck("asymptotic_D", r.lhs_D, r.rhs_asymptotic, s, small));
  r.checks.push_back(MakeCheck("asymptotic_Dinv", r.lhs_Dinv, r.rhs_asymptotic, s, small));
  const double rhs_main2 = 2.0 * r.mass_ratio * delta_eps * r.c_dis1;
  r.checks.push_back(MakeCheck("asymptotic_euclid", r.lhs_2, rhs_main2, s, small && mu_equal));
  r.checks.push_back(MakeCheck("asymptotic_euclid_right", r.lhs_2p, rhs_main2, s, small && mu_equal));
  return r;
}

namespace
{

bool SameSparse(const RealSparse &X, const RealSparse &Y)
{
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
  {
    return false;
  }
  return MaxAbs(ComplexSparse((X - Y).cast<cplx>())) == 0.0;
}

}  // namespace

BoundReport NearbyBoundReport(const GalerkinSystem &sys1, const GalerkinSystem &sys2,
                              const CheckOptions &opts)
{
  if (sys1.n() != sys2.n() || !SameSparse(sys1.D, sys2.D) || !SameSparse(sys1.M, sys2.M) ||
      !sys1.spec->mesh->same_geometry(*sys2.spec->mesh))
  {
    throw Error(ErrorKind::InvalidPair, "systems do not share the same discrete space (D, M)");
  }
  const double dmu = FieldDiffSupNorm(sys1.spec->mu_inv, sys2.spec->mu_inv);
  const double deps = FieldDiffSupNorm(sys1.spec->eps, sys2.spec->eps);
  BoundReport r = BoundReportFromMatrices(sys1.A, sys2.A, ToComplex(sys1.D), ToComplex(sys1.M),
                                          dmu, deps, dmu == 0.0, opts);
  r.k = sys1.spec->k;
  r.h = sys1.spec->mesh->h();
  return r;
}

BoundReport NearbyBoundReport(const ExternalSystem &ext, const CheckOptions &opts)
{
  ValidateExternal(ext);
  return BoundReportFromMatrices(ext.A1, ext.A2, ext.D, ext.M, ext.delta_mu, ext.delta_eps,
                                 ext.mu_equal, opts);
}

GalerkinSystem AbsorptionPartner(const GalerkinSystem &sys1, const AbsorptionSpec &alpha)
{
  const ProblemSpec &spec = *sys1.spec;
  return AssembleSystem(spec.with_coefficients(spec.mu_inv, AbsorptionShift(spec.eps, alpha)));
}

BoundReport AbsorptionReport(const GalerkinSystem &sys1, const AbsorptionSpec &alpha,
                             const CheckOptions &opts)
{
  const GalerkinSystem sys2 = AbsorptionPartner(sys1, alpha);
  BoundReport r = BoundReportFromMatrices(sys1.A, sys2.A, ToComplex(sys1.D), ToComplex(sys1.M),
                                          0.0, alpha.alpha * sys1.spec->eps.sup_norm(), true,
                                          opts);
  r.k = sys1.spec->k;
  r.h = sys1.spec->mesh->h();
  r.alpha = alpha.alpha;
  return r;
}

bool NormEquivalenceReport::pass() const
{
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck &c) { return c.pass; });
}

NormEquivalenceReport NormEquivalence(const ComplexSparse &A, const ComplexSparse &D,
                                      const ComplexSparse &M, const GardingConstants &g,
                                      const CheckOptions &opts)
{
  const GramFactor G(D);
  const GramFactor R(M);
  const LuFactor lu(A);
  Require(lu.ok(), ErrorKind::SingularSystem, "Galerkin matrix is singular");
  NormEquivalenceReport r;
  r.constants = g;
  r.norms = ComputeSolutionOperatorNorms(lu, G, R, opts.estimator);
  r.inf_sup = DiscreteInfSup(lu, G, opts.estimator);
  const auto &nm = r.norms;
  const double s = opts.slack;
  const double chain_upper = (1.0 + g.c_g2 * nm.h0_to_h) / g.c_g1;
  r.checks.push_back(MakeCheck("hstar_lower", nm.h0_to_h, nm.hstar_to_h, s));
  r.checks.push_back(MakeCheck("hstar_upper", nm.hstar_to_h, chain_upper, s));
  r.checks.push_back(MakeCheck("h0_lower", nm.h0_to_h0, nm.h0_to_h, s));
  r.checks.push_back(MakeCheck(
      "h0_upper", nm.h0_to_h,
      nm.h0_to_h0 * std::sqrt(g.c_g2 + 1.0 / nm.h0_to_h0) / std::sqrt(g.c_g1), s));
  // gamma_dis >= 1 / chain_upper, written as 1 / chain_upper <= gamma_dis.
  r.checks.push_back(MakeCheck("infsup_lower", 1.0 / chain_upper, r.inf_sup.gamma_dis, s));
  // C_dis from the inf-sup route and ||A^{-1}||_{H*->H} from the operator route agree.
  const double diff = std::abs(r.inf_sup.c_dis - nm.hstar_to_h);
  r.checks.push_back(MakeCheck("infsup_two_routes", diff, 1e-8 * nm.hstar_to_h, 0.0));
  return r;
}

NormEquivalenceReport NormEquivalence(const GalerkinSystem &sys, const GardingConstants &g,
                                      const CheckOptions &opts)
{
  return NormEquivalence(sys.A, ToComplex(sys.D), ToComplex(sys.M), g, opts);
}

InfSupLadder RunInfSupLadder(const ProblemFactory &make, const std::vector<double> &k_values,
                             const MeshRule &h_rule, const MeshRule &reference_h_rule,
                             const EstimatorOptions &opts)
{
  InfSupLadder ladder;
  for (double k : k_values)
  {
    LadderEntry e;
    e.k = k;
    auto cdis = [&](double h, double &h_out, Eigen::Index &n_out)
    {
      const GalerkinSystem sys = AssembleSystem(make(k, h));
      h_out = sys.spec->mesh->h();
      n_out = sys.n();
      return DiscreteInfSup(sys.A, GramFactor(sys.D), opts);
    };
    const InfSupReport coarse = cdis(h_rule(k), e.h, e.n);
    const InfSupReport fine = cdis(reference_h_rule(k), e.h_ref, e.n_ref);
    e.c_dis = coarse.c_dis;
    e.c_dis_ref = fine.c_dis;
    e.singular = coarse.singular || fine.singular;
    if (!e.singular)
    {
      e.ratio = e.c_dis / e.c_dis_ref;
    }
    ladder.entries.push_back(e);
  }
  return ladder;
}

}  // namespace helmpc
