// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <doctest.h>
#include "helmpc/assemble.hpp"
#include "helmpc/bounds.hpp"
#include "helmpc/error.hpp"
#include "helmpc/solvers.hpp"
#include "oracle.hpp"

using namespace helmpc;

namespace
{

GalerkinSystem Impedance1d(double k, int n)
{
  auto mesh = BuildIntervalMesh(0, 1, n, BoundaryTag::Impedance, BoundaryTag::Impedance);
  return AssembleSystem(ProblemSpec(k, mesh, ConstantField(mesh, 1.0, CoefficientRole::MuInv),
                                    ConstantField(mesh, 1.0, CoefficientRole::Eps), 1.0));
}

RealSparse Identity(int n)
{
  RealSparse I(n, n);
  I.setIdentity();
  return I;
}

}  // namespace

TEST_CASE("direct solve")
{
  const auto sys = Impedance1d(7.0, 50);
  const ComplexVector b = SeededVector(sys.n(), 1);
  const ComplexVector x = DirectSolve(sys.A, b);
  CHECK((sys.A * x - b).norm() <= 1e-12 * b.norm());
  const ComplexVector xo = oracle::Inverse(oracle::Dense(sys.A)) * b;
  CHECK((x - xo).norm() <= 1e-10 * xo.norm());

  ComplexSparse Z(3, 3);
  CHECK_THROWS_AS(DirectSolve(Z, ComplexVector::Ones(3)), Error);
}

TEST_CASE("fixed point")
{
  const auto s1 = Impedance1d(6.0, 40);
  const GramFactor G(s1.D);
  const ComplexVector b = SeededVector(s1.n(), 2);
  const ComplexVector zero = ComplexVector::Zero(s1.n());

  const auto same = FixedPoint(s1.A, s1.A, G, b, zero, 50, 1e-12);
  CHECK(same.converged);
  CHECK(same.iterations() == 1);

  const ComplexVector exact = DirectSolve(s1.A, b);
  const auto start = FixedPoint(s1.A, s1.A, G, b, exact, 50, 1e-12);
  CHECK(start.iterations() == 0);
  CHECK(start.converged);

  const auto s2 = AbsorptionPartner(s1, AbsorptionSpec(0.1));
  const auto r = AbsorptionReport(s1, AbsorptionSpec(0.1));
  REQUIRE(r.lhs_D < 1.0);
  const auto tr = FixedPoint(s1.A, s2.A, G, b, zero, 200, 1e-12, r.lhs_D);
  CHECK(tr.converged);
  REQUIRE(tr.envelope_c.size() == tr.norms.size());
  for (std::size_t n = 0; n < tr.norms.size(); n++)
  {
    CHECK(tr.norms[n] <= tr.envelope_c[n] * tr.norms[0] * (1 + 1e-8));
  }
}

TEST_CASE("GMRES")
{
  const int n = 10;
  const auto id = [](const ComplexVector &x) -> ComplexVector { return x; };
  const ComplexVector b = SeededVector(n, 3);
  ComplexVector x;
  const auto t0 = Gmres(id, b, nullptr, 20, 1e-12, std::nullopt, &x);
  CHECK(t0.converged);
  CHECK(t0.iterations() == 1);
  CHECK((x - b).norm() <= 1e-13 * b.norm());

  // Three distinct eigenvalues: at most three steps.
  ComplexVector diag(n);
  for (int i = 0; i < n; i++)
  {
    diag(i) = cplx(1.0 + i % 3, 0.5 * (i % 3));
  }
  const auto dop = [&](const ComplexVector &v) -> ComplexVector { return diag.cwiseProduct(v); };
  const auto t3 = Gmres(dop, b, nullptr, 20, 1e-12, std::nullopt, &x);
  CHECK(t3.converged);
  CHECK(t3.iterations() <= 3);
  CHECK((diag.cwiseProduct(x) - b).norm() <= 1e-10 * b.norm());

  // D = I reproduces Euclidean GMRES.
  const auto sys = Impedance1d(5.0, 30);
  const auto op = [&](const ComplexVector &v) -> ComplexVector { return sys.A * v; };
  const ComplexVector bb = SeededVector(sys.n(), 4);
  const GramFactor I(Identity(static_cast<int>(sys.n())));
  const auto te = Gmres(op, bb, nullptr, 100, 1e-10);
  const auto ti = Gmres(op, bb, &I, 100, 1e-10);
  REQUIRE(te.norms.size() == ti.norms.size());
  for (std::size_t i = 0; i < te.norms.size(); i++)
  {
    CHECK(te.norms[i] == doctest::Approx(ti.norms[i]).epsilon(1e-10));
  }

  // D-weighted residuals are non-increasing and the solution satisfies the system.
  const GramFactor G(sys.D);
  const auto td = Gmres(op, bb, &G, 200, 1e-10, std::nullopt, &x);
  CHECK(td.converged);
  for (std::size_t i = 1; i < td.norms.size(); i++)
  {
    CHECK(td.norms[i] <= td.norms[i - 1] * (1 + 1e-12));
  }
  CHECK(G.norm(ComplexVector(sys.A * x - bb)) <= 1e-9 * G.norm(bb));

  const auto capped = Gmres(op, bb, &G, 2, 1e-14);
  CHECK_FALSE(capped.converged);
  CHECK(capped.iterations() == 2);
}

TEST_CASE("preconditioned GMRES obeys the contraction envelope")
{
  const auto s1 = Impedance1d(10.0, 100);
  const auto s2 = AbsorptionPartner(s1, AbsorptionSpec(0.1));
  const auto r = NearbyBoundReport(s1, s2);
  REQUIRE(r.lhs_D < 1.0);
  const LuFactor lu2(s2.A);
  const auto op = [&](const ComplexVector &v) -> ComplexVector
  { return lu2.solve(s1.A * v); };
  const ComplexVector b = lu2.solve(SeededVector(s1.n(), 5));
  const GramFactor G(s1.D);
  const auto t = Gmres(op, b, &G, 100, 1e-12, r.lhs_D);
  CHECK(t.converged);
  for (std::size_t n = 0; n < t.norms.size(); n++)
  {
    CHECK(t.norms[n] <= t.envelope_c[n] * t.norms[0] * (1 + 1e-8));
  }
}

TEST_CASE("envelopes")
{
  const auto [c, e] = Envelopes(0.25, 1);
  CHECK(c[0] == 1.0);
  CHECK(c[1] == doctest::Approx(0.25));
  CHECK(e[1] == doctest::Approx(0.64));
  const auto [c1, e1] = Envelopes(1.0, 2);
  CHECK(c1[2] == 1.0);
  CHECK(e1[2] == doctest::Approx(0.25));
  const auto [cz, ez] = Envelopes(0.0, 3);
  CHECK(cz[3] == 0.0);
  CHECK(ez[3] == 0.0);
}
