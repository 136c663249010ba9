// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <set>
#include <doctest.h>
#include "helmpc/error.hpp"
#include "helmpc/mesh.hpp"

using namespace helmpc;

TEST_CASE("interval mesh: single element")
{
  auto m = BuildIntervalMesh(0, 1, 1, BoundaryTag::Impedance, BoundaryTag::Impedance);
  CHECK(m->num_nodes() == 2);
  CHECK(m->num_elements() == 1);
  CHECK(m->nodes()[0][0] == 0.0);
  CHECK(m->nodes()[1][0] == 1.0);
  CHECK(m->h() == 1.0);
}

TEST_CASE("interval mesh: tags and spacing")
{
  auto m = BuildIntervalMesh(0, 1, 4, BoundaryTag::Dirichlet, BoundaryTag::Impedance);
  CHECK(m->num_nodes() == 5);
  CHECK(m->h() == doctest::Approx(0.25));
  REQUIRE(m->facets().size() == 2);
  CHECK(m->facets()[0].tag == BoundaryTag::Dirichlet);
  CHECK(m->facets()[0].nodes[0] == 0);
  CHECK(m->facets()[1].tag == BoundaryTag::Impedance);
  CHECK(m->facets()[1].nodes[0] == 4);

  auto m2 = BuildIntervalMesh(0, 2, 8, BoundaryTag::Neumann, BoundaryTag::Neumann);
  CHECK(m2->h() == 0.25);
}

TEST_CASE("interval mesh: invalid arguments")
{
  CHECK_THROWS_AS(BuildIntervalMesh(0, 1, 0, BoundaryTag::Impedance, BoundaryTag::Impedance),
                  Error);
  CHECK_THROWS_AS(BuildIntervalMesh(1, 1, 3, BoundaryTag::Impedance, BoundaryTag::Impedance),
                  Error);
  CHECK_THROWS_AS(BuildIntervalMesh(2, 1, 3, BoundaryTag::Impedance, BoundaryTag::Impedance),
                  Error);
}

TEST_CASE("rect mesh: counts and h")
{
  auto m = BuildRectMesh(1, 1, 1, 1, RectTags::All(BoundaryTag::Impedance));
  CHECK(m->num_nodes() == 4);
  CHECK(m->num_elements() == 2);
  CHECK(m->h() == doctest::Approx(std::sqrt(2.0)));

  auto m2 = BuildRectMesh(1, 1, 2, 2, RectTags::All(BoundaryTag::Impedance));
  CHECK(m2->num_nodes() == 9);
  CHECK(m2->num_elements() == 8);

  // Recompute the maximum diameter directly from the coordinates.
  auto m3 = BuildRectMesh(2, 1, 4, 2, RectTags::All(BoundaryTag::Neumann));
  double hmax = 0.0;
  for (const auto &el : m3->elements())
  {
    for (int a = 0; a < 3; a++)
    {
      const auto &p = m3->nodes()[el[a]], &q = m3->nodes()[el[(a + 1) % 3]];
      hmax = std::max(hmax, std::hypot(p[0] - q[0], p[1] - q[1]));
    }
  }
  CHECK(hmax == doctest::Approx(std::sqrt(2.0) * 0.5).epsilon(1e-15));
  CHECK(m3->h() == doctest::Approx(hmax).epsilon(1e-15));
}

TEST_CASE("rect mesh: invalid arguments")
{
  CHECK_THROWS_AS(BuildRectMesh(0, 1, 1, 1, {}), Error);
  CHECK_THROWS_AS(BuildRectMesh(1, -1, 1, 1, {}), Error);
  CHECK_THROWS_AS(BuildRectMesh(1, 1, 0, 1, {}), Error);
}

TEST_CASE("mesh invariants over random sizes")
{
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> cells(1, 9);
  std::uniform_real_distribution<double> len(0.1, 3.0);
  for (int trial = 0; trial < 30; trial++)
  {
    const int nx = cells(rng), ny = cells(rng);
    const double w = len(rng), hgt = len(rng);
    RectTags tags{BoundaryTag::Dirichlet, BoundaryTag::Impedance, BoundaryTag::Neumann,
                  BoundaryTag::Impedance};
    auto m = BuildRectMesh(w, hgt, nx, ny, tags);
    double area = 0.0;
    for (std::size_t e = 0; e < m->num_elements(); e++)
    {
      CHECK(m->measure(e) > 0.0);
      area += m->measure(e);
    }
    CHECK(std::abs(area - w * hgt) <= 1e-12 * w * hgt);
    CHECK(m->facets().size() == static_cast<std::size_t>(2 * (nx + ny)));

    // Every boundary facet is an edge of its owning element and of no other element.
    for (const auto &f : m->facets())
    {
      int owners = 0;
      for (std::size_t e = 0; e < m->num_elements(); e++)
      {
        std::set<int> verts(m->elements()[e].begin(), m->elements()[e].end());
        if (verts.count(f.nodes[0]) && verts.count(f.nodes[1]))
        {
          owners++;
          CHECK(static_cast<int>(e) == f.element);
        }
      }
      CHECK(owners == 1);
    }

    const int n = cells(rng);
    const double a = -len(rng), b = len(rng);
    auto m1 = BuildIntervalMesh(a, b, n, BoundaryTag::Impedance, BoundaryTag::Dirichlet);
    double total = 0.0;
    for (std::size_t e = 0; e < m1->num_elements(); e++)
    {
      total += m1->measure(e);
    }
    CHECK(std::abs(total - (b - a)) <= 1e-12 * (b - a));
    CHECK(m1->facets().size() == 2);
  }
}

TEST_CASE("rect mesh: nodes are lexicographic in (x, y)")
{
  auto m = BuildRectMesh(1, 1, 3, 2, {});
  for (std::size_t i = 1; i < m->num_nodes(); i++)
  {
    CHECK(m->nodes()[i - 1] < m->nodes()[i]);
  }
}
