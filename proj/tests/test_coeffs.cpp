// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <doctest.h>
#include "helmpc/assemble.hpp"
#include "helmpc/coeffs.hpp"
#include "helmpc/error.hpp"
#include "helmpc/numerics.hpp"

using namespace helmpc;

namespace
{

MeshPtr UnitInterval(int n)
{
  return BuildIntervalMesh(0, 1, n, BoundaryTag::Impedance, BoundaryTag::Impedance);
}

}  // namespace

TEST_CASE("constant fields and role checks")
{
  auto mesh = UnitInterval(4);
  auto eps = ConstantField(mesh, 1.0, CoefficientRole::Eps);
  CHECK(eps.size() == 4);
  CHECK(eps[2].scalar() == cplx(1.0));
  CHECK_NOTHROW(ConstantField(mesh, 2.0, CoefficientRole::MuInv));
  try
  {
    ConstantField(mesh, -1.0, CoefficientRole::MuInv);
    FAIL("expected invalid-coefficient error");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::InvalidCoefficient);
  }
  // eps may have any sign.
  CHECK_NOTHROW(ConstantField(mesh, -1.0, CoefficientRole::Eps));
}

TEST_CASE("matrix-valued mu_inv")
{
  auto mesh = BuildRectMesh(1, 1, 2, 2, {});
  Eigen::Matrix2cd m;
  m << 2.0, cplx(0.5, 0.1), cplx(0.5, 0.1), 1.0;
  CHECK_NOTHROW(ConstantField(mesh, CoefficientValue(m), CoefficientRole::MuInv));
  Eigen::Matrix2cd asym = m;
  asym(0, 1) = 0.4;
  CHECK_THROWS_AS(ConstantField(mesh, CoefficientValue(asym), CoefficientRole::MuInv), Error);
  Eigen::Matrix2cd indefinite;
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(ConstantField(mesh, CoefficientValue(indefinite), CoefficientRole::MuInv),
                  Error);
  CHECK_THROWS_AS(ConstantField(mesh, CoefficientValue(m), CoefficientRole::Eps), Error);
  CHECK_THROWS_AS(ConstantField(UnitInterval(2), CoefficientValue(m), CoefficientRole::MuInv),
                  Error);
}

TEST_CASE("piecewise fields")
{
  auto mesh = UnitInterval(4);
  auto f = PiecewiseField(mesh, [](const std::array<double, 2> &x)
                          { return CoefficientValue(x[0] < 0.5 ? 1.0 : 2.0); },
                          CoefficientRole::Eps);
  CHECK(f[0].scalar() == cplx(1.0));
  CHECK(f[1].scalar() == cplx(1.0));
  CHECK(f[2].scalar() == cplx(2.0));
  CHECK(f[3].scalar() == cplx(2.0));

  auto c = PiecewiseField(mesh, [](const auto &) { return CoefficientValue(3.0); },
                          CoefficientRole::Eps);
  CHECK(FieldDiffSupNorm(c, ConstantField(mesh, 3.0, CoefficientRole::Eps)) == 0.0);

  // Checkerboard on 2x2 cells: evaluate the predicate at each triangle centroid.
  auto rect = BuildRectMesh(1, 1, 2, 2, {});
  auto rule = [](const std::array<double, 2> &x)
  { return CoefficientValue(((x[0] < 0.5) != (x[1] < 0.5)) ? 2.0 : 1.0); };
  auto board = PiecewiseField(rect, rule, CoefficientRole::Eps);
  REQUIRE(board.size() == 8);
  for (std::size_t e = 0; e < 8; e++)
  {
    const auto c = rect->centroid(e);
    const double expect = ((c[0] < 0.5) != (c[1] < 0.5)) ? 2.0 : 1.0;
    CHECK(board[e].scalar().real() == expect);
    // Both triangles of a cell share the cell's value; cells alternate.
    const int cell = static_cast<int>(e / 2);
    const int i = cell / 2, j = cell % 2;
    CHECK(board[e].scalar().real() == ((i + j) % 2 == 1 ? 2.0 : 1.0));
  }
}

TEST_CASE("absorption shift")
{
  auto mesh = UnitInterval(3);
  auto eps = ConstantField(mesh, 1.0, CoefficientRole::Eps);
  auto e2 = AbsorptionShift(eps, AbsorptionSpec(0.5));
  CHECK(e2[0].scalar() == cplx(1.0, 0.5));
  CHECK(FieldDiffSupNorm(AbsorptionShift(eps, AbsorptionSpec(0.0)), eps) == 0.0);
  auto e3 = AbsorptionShift(ConstantField(mesh, 2.0, CoefficientRole::Eps), AbsorptionSpec(1.0));
  CHECK(e3[1].scalar() == cplx(2.0, 2.0));
  CHECK_THROWS_AS(AbsorptionSpec(-0.1), Error);
  CHECK_THROWS_AS(AbsorptionShift(ConstantField(mesh, 1.0, CoefficientRole::MuInv),
                                  AbsorptionSpec(0.1)),
                  Error);

  // Twice-shifted equals a single multiplication by (1 + i a1)(1 + i a2).
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2), a(0, 2);
  for (int t = 0; t < 20; t++)
  {
    auto f = PiecewiseField(mesh, [&](const auto &) { return CoefficientValue(cplx(u(rng), u(rng))); },
                            CoefficientRole::Eps);
    const double a1 = a(rng), a2 = a(rng);
    auto twice = AbsorptionShift(AbsorptionShift(f, AbsorptionSpec(a1)), AbsorptionSpec(a2));
    for (std::size_t e = 0; e < f.size(); e++)
    {
      const cplx expect = cplx(1, a1) * cplx(1, a2) * f[e].scalar();
      CHECK(std::abs(twice[e].scalar() - expect) <= 1e-14 * std::abs(expect));
    }
  }
}

TEST_CASE("PML profile")
{
  auto mesh = UnitInterval(10);
  const double k = 4.0;
  auto [mu, eps] = PmlProfile1d(mesh, k, 0.6, 3.0);
  for (std::size_t e = 0; e < mesh->num_elements(); e++)
  {
    if (mesh->centroid(e)[0] <= 0.6)
    {
      CHECK(mu[e].scalar() == cplx(1.0));
      CHECK(eps[e].scalar() == cplx(1.0));
    }
    else
    {
      CHECK(eps[e].scalar().imag() > 0.0);
      CHECK(std::abs(mu[e].scalar() * eps[e].scalar() - 1.0) < 1e-15);
    }
  }
  auto [mu0, eps0] = PmlProfile1d(mesh, k, 0.6, 0.0);
  CHECK(FieldDiffSupNorm(mu0, ConstantField(mesh, 1.0, CoefficientRole::MuInv)) == 0.0);
  CHECK(FieldDiffSupNorm(eps0, ConstantField(mesh, 1.0, CoefficientRole::Eps)) == 0.0);

  // At the outer end with sigma0 = k: s = 1 + i, 1/s = (1 - i)/2.
  const cplx s = PmlStretch(1.0, k, 0.6, 1.0, k);
  CHECK(std::abs(s - cplx(1, 1)) < 1e-15);
  CHECK(std::abs(1.0 / s - cplx(0.5, -0.5)) < 1e-15);

  CHECK_THROWS_AS(PmlProfile1d(mesh, k, 1.5, 1.0), Error);
  CHECK_THROWS_AS(PmlProfile1d(mesh, k, 0.5, -1.0), Error);
}

TEST_CASE("sup-norm differences")
{
  auto mesh = UnitInterval(2);
  auto f = ConstantField(mesh, 1.0, CoefficientRole::Eps);
  CHECK(FieldDiffSupNorm(f, f) == 0.0);
  CHECK(FieldDiffSupNorm(f, AbsorptionShift(f, AbsorptionSpec(0.37))) == doctest::Approx(0.37));
  auto p1 = CoefficientField(mesh, CoefficientRole::Eps, {1.0, 2.0});
  auto p2 = CoefficientField(mesh, CoefficientRole::Eps, {1.5, 2.5});
  CHECK(FieldDiffSupNorm(p1, p2) == 0.5);
  CHECK_THROWS_AS(FieldDiffSupNorm(f, ConstantField(mesh, 1.0, CoefficientRole::MuInv)), Error);
  CHECK_THROWS_AS(FieldDiffSupNorm(f, ConstantField(UnitInterval(3), 1.0, CoefficientRole::Eps)),
                  Error);

  // Matrix case: spectral norm of the difference.
  auto rect = BuildRectMesh(1, 1, 1, 1, {});
  Eigen::Matrix2cd a, b;
  a << 2.0, 0.5, 0.5, 1.0;
  b << 1.0, 0.0, 0.0, 1.0;
  auto fa = ConstantField(rect, CoefficientValue(a), CoefficientRole::MuInv);
  auto fb = ConstantField(rect, CoefficientValue(b), CoefficientRole::MuInv);
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(a - b);
  CHECK(FieldDiffSupNorm(fa, fb) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-14));
}

TEST_CASE("sup-norm difference is a metric")
{
  auto mesh = UnitInterval(7);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  auto random_field = [&]()
  {
    return PiecewiseField(mesh, [&](const auto &) { return CoefficientValue(cplx(u(rng), u(rng))); },
                          CoefficientRole::Eps);
  };
  for (int t = 0; t < 50; t++)
  {
    auto f = random_field(), g = random_field(), h = random_field();
    const double fg = FieldDiffSupNorm(f, g), gf = FieldDiffSupNorm(g, f);
    CHECK(fg == gf);
    CHECK(fg > 0.0);
    CHECK(FieldDiffSupNorm(f, h) <= fg + FieldDiffSupNorm(g, h) + 1e-14);
    CHECK(FieldDiffSupNorm(f, f) == 0.0);
  }
}

TEST_CASE("mass-matrix multiplication bound |V^H (M_e1 - M_e2) V| <= ||e1 - e2|| V^H M V")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int dim = 1; dim <= 2; dim++)
  {
    MeshPtr mesh = dim == 1 ? UnitInterval(12) : BuildRectMesh(1, 1, 3, 4, {});
    auto mu = ConstantField(mesh, 1.0, CoefficientRole::MuInv);
    for (int t = 0; t < 20; t++)
    {
      auto rnd = [&]()
      {
        return PiecewiseField(mesh,
                              [&](const auto &) { return CoefficientValue(cplx(u(rng), u(rng))); },
                              CoefficientRole::Eps);
      };
      auto e1 = rnd(), e2 = rnd();
      const ProblemSpec s1(3.0, mesh, mu, e1, 1.0), s2(3.0, mesh, mu, e2, 1.0);
      const auto A = AssembleSystem(s1), B = AssembleSystem(s2);
      const double d = FieldDiffSupNorm(e1, e2);
      const ComplexVector V = SeededVector(A.n(), 100 + t);
      const double lhs = std::abs(V.dot((A.M_eps - B.M_eps) * V));
      const double vmv = V.dot(A.M.cast<cplx>() * V).real();
      CHECK(lhs <= d * vmv * (1 + 1e-12));
    }
  }
}
