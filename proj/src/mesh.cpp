// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helmpc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include "helmpc/error.hpp"

namespace helmpc
{

const char *ToString(BoundaryTag tag)
{
  switch (tag)
  {
    case BoundaryTag::Dirichlet:
      return "dirichlet";
    case BoundaryTag::Impedance:
      return "impedance";
    case BoundaryTag::Neumann:
      return "neumann";
  }
  return "?";
}

BoundaryTag BoundaryTagFromString(const std::string &name)
{
  if (name == "dirichlet")
  {
    return BoundaryTag::Dirichlet;
  }
  if (name == "impedance")
  {
    return BoundaryTag::Impedance;
  }
  if (name == "neumann")
  {
    return BoundaryTag::Neumann;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown boundary tag \"" + name + "\"");
}

namespace
{

double Dist(const std::array<double, 2> &p, const std::array<double, 2> &q)
{
  return std::hypot(p[0] - q[0], p[1] - q[1]);
}

}  // namespace

Mesh::Mesh(int dimension, std::vector<std::array<double, 2>> nodes,
           std::vector<std::array<int, 3>> elements, std::vector<BoundaryFacet> facets)
  : dim_(dimension), nodes_(std::move(nodes)), elements_(std::move(elements)),
    facets_(std::move(facets))
{
  Require(dim_ == 1 || dim_ == 2, ErrorKind::InvalidArgument, "mesh dimension must be 1 or 2");
  Require(!elements_.empty(), ErrorKind::InvalidArgument, "mesh has no elements");
  for (std::size_t e = 0; e < elements_.size(); e++)
  {
    for (int v = 0; v < vertices_per_element(); v++)
    {
      const int i = elements_[e][v];
      Require(i >= 0 && static_cast<std::size_t>(i) < nodes_.size(),
              ErrorKind::InvalidArgument, "element node index out of range");
    }
    Require(measure(e) > 0.0, ErrorKind::InvalidArgument,
            "element " + std::to_string(e) + " has non-positive measure");
    h_ = std::max(h_, diameter(e));
  }
  for (const auto &f : facets_)
  {
    Require(f.element >= 0 && static_cast<std::size_t>(f.element) < elements_.size(),
            ErrorKind::InvalidArgument, "boundary facet without owning element");
  }
}

double Mesh::measure(std::size_t e) const
{
  const auto &el = elements_[e];
  if (dim_ == 1)
  {
    return nodes_[el[1]][0] - nodes_[el[0]][0];
  }
  const auto &p0 = nodes_[el[0]], &p1 = nodes_[el[1]], &p2 = nodes_[el[2]];
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

double Mesh::diameter(std::size_t e) const
{
  const auto &el = elements_[e];
  if (dim_ == 1)
  {
    return std::abs(nodes_[el[1]][0] - nodes_[el[0]][0]);
  }
  return std::max({Dist(nodes_[el[0]], nodes_[el[1]]), Dist(nodes_[el[1]], nodes_[el[2]]),
                   Dist(nodes_[el[2]], nodes_[el[0]])});
}

std::array<double, 2> Mesh::centroid(std::size_t e) const
{
  const auto &el = elements_[e];
  const int nv = vertices_per_element();
  std::array<double, 2> c{0.0, 0.0};
  for (int v = 0; v < nv; v++)
  {
    c[0] += nodes_[el[v]][0];
    c[1] += nodes_[el[v]][1];
  }
  c[0] /= nv;
  c[1] /= nv;
  return c;
}

double Mesh::facet_measure(std::size_t f) const
{
  if (dim_ == 1)
  {
    return 1.0;
  }
  return Dist(nodes_[facets_[f].nodes[0]], nodes_[facets_[f].nodes[1]]);
}

bool Mesh::same_geometry(const Mesh &other) const
{
  if (this == &other)
  {
    return true;
  }
  if (dim_ != other.dim_ || nodes_ != other.nodes_ || elements_ != other.elements_ ||
      facets_.size() != other.facets_.size())
  {
    return false;
  }
  for (std::size_t i = 0; i < facets_.size(); i++)
  {
    if (facets_[i].nodes != other.facets_[i].nodes || facets_[i].tag != other.facets_[i].tag)
    {
      return false;
    }
  }
  return true;
}

MeshPtr BuildIntervalMesh(double a, double b, int n, BoundaryTag left_tag,
                          BoundaryTag right_tag)
{
  Require(n >= 1, ErrorKind::InvalidArgument, "interval mesh needs n >= 1 elements");
  Require(a < b, ErrorKind::InvalidArgument, "interval mesh needs a < b");
  std::vector<std::array<double, 2>> nodes(n + 1);
  const double h = (b - a) / n;
  for (int i = 0; i <= n; i++)
  {
    nodes[i] = {i == n ? b : a + i * h, 0.0};
  }
  std::vector<std::array<int, 3>> elements(n);
  for (int e = 0; e < n; e++)
  {
    elements[e] = {e, e + 1, -1};
  }
  std::vector<BoundaryFacet> facets = {{{0, -1}, 0, left_tag}, {{n, -1}, n - 1, right_tag}};
  return std::make_shared<const Mesh>(1, std::move(nodes), std::move(elements),
                                      std::move(facets));
}

MeshPtr BuildRectMesh(double width, double height, int nx, int ny, const RectTags &tags)
{
  Require(width > 0.0 && height > 0.0, ErrorKind::InvalidArgument,
          "rectangle mesh needs positive width and height");
  Require(nx >= 1 && ny >= 1, ErrorKind::InvalidArgument,
          "rectangle mesh needs nx, ny >= 1");

  // Lexicographic in (x, y): node (i, j) has index i*(ny+1) + j.
  auto id = [ny](int i, int j) { return i * (ny + 1) + j; };
  std::vector<std::array<double, 2>> nodes((nx + 1) * (ny + 1));
  for (int i = 0; i <= nx; i++)
  {
    const double x = (i == nx) ? width : width * i / nx;
    for (int j = 0; j <= ny; j++)
    {
      const double y = (j == ny) ? height : height * j / ny;
      nodes[id(i, j)] = {x, y};
    }
  }

  // Element index of the lower/upper triangle adjacent to each cell side is recorded so
  // every boundary facet knows its owner.
  std::vector<std::array<int, 3>> elements;
  elements.reserve(2 * nx * ny);
  std::vector<int> bottom_owner(nx), top_owner(nx), left_owner(ny), right_owner(ny);
  for (int i = 0; i < nx; i++)
  {
    for (int j = 0; j < ny; j++)
    {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      const int e0 = static_cast<int>(elements.size());
      if ((i + j) % 2 == 0)
      {
        // Diagonal a-c: triangle (a,b,c) touches bottom and right; (a,c,d) top and left.
        elements.push_back({a, b, c});
        elements.push_back({a, c, d});
        if (j == 0) bottom_owner[i] = e0;
        if (i == nx - 1) right_owner[j] = e0;
        if (j == ny - 1) top_owner[i] = e0 + 1;
        if (i == 0) left_owner[j] = e0 + 1;
      }
      else
      {
        // Diagonal b-d: triangle (a,b,d) touches bottom and left; (b,c,d) right and top.
        elements.push_back({a, b, d});
        elements.push_back({b, c, d});
        if (j == 0) bottom_owner[i] = e0;
        if (i == 0) left_owner[j] = e0;
        if (i == nx - 1) right_owner[j] = e0 + 1;
        if (j == ny - 1) top_owner[i] = e0 + 1;
      }
    }
  }

  std::vector<BoundaryFacet> facets;
  facets.reserve(2 * (nx + ny));
  for (int i = 0; i < nx; i++)
  {
    facets.push_back({{id(i, 0), id(i + 1, 0)}, bottom_owner[i], tags.bottom});
  }
  for (int j = 0; j < ny; j++)
  {
    facets.push_back({{id(nx, j), id(nx, j + 1)}, right_owner[j], tags.right});
  }
  for (int i = 0; i < nx; i++)
  {
    facets.push_back({{id(i, ny), id(i + 1, ny)}, top_owner[i], tags.top});
  }
  for (int j = 0; j < ny; j++)
  {
    facets.push_back({{id(0, j), id(0, j + 1)}, left_owner[j], tags.left});
  }
  return std::make_shared<const Mesh>(2, std::move(nodes), std::move(elements),
                                      std::move(facets));
}

}  // namespace helmpc
