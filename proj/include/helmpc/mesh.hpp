// Copyright The helmpc Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef HELMPC_MESH_HPP
#define HELMPC_MESH_HPP

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace helmpc
{

enum class BoundaryTag
{
  Dirichlet,
  Impedance,
  Neumann
};

const char *ToString(BoundaryTag tag);
BoundaryTag BoundaryTagFromString(const std::string &name);

// A boundary facet: a single node in 1D, an edge in 2D (second index unused in 1D).
struct BoundaryFacet
{
  std::array<int, 2> nodes{-1, -1};
  int element = -1;
  BoundaryTag tag = BoundaryTag::Neumann;
};

//
// Simplicial mesh of an interval (dimension 1) or rectangle (dimension 2). Coordinates
// are stored as (x, y) pairs; y is zero in 1D. Element connectivity always has three
// slots; in 1D the third slot is -1.
//
class Mesh
{
public:
  Mesh(int dimension, std::vector<std::array<double, 2>> nodes,
       std::vector<std::array<int, 3>> elements, std::vector<BoundaryFacet> facets);

  int dimension() const { return dim_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_elements() const { return elements_.size(); }

  const std::vector<std::array<double, 2>> &nodes() const { return nodes_; }
  const std::vector<std::array<int, 3>> &elements() const { return elements_; }
  const std::vector<BoundaryFacet> &facets() const { return facets_; }

  // Number of vertices per element (2 or 3).
  int vertices_per_element() const { return dim_ + 1; }

  // Length (1D) or area (2D).
  double measure(std::size_t e) const;
  double diameter(std::size_t e) const;
  std::array<double, 2> centroid(std::size_t e) const;
  double facet_measure(std::size_t f) const;

  // Maximum element diameter.
  double h() const { return h_; }

  // Structural equality of coordinates, connectivity and tags.
  bool same_geometry(const Mesh &other) const;

private:
  int dim_;
  std::vector<std::array<double, 2>> nodes_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<BoundaryFacet> facets_;
  double h_ = 0.0;
};

using MeshPtr = std::shared_ptr<const Mesh>;

MeshPtr BuildIntervalMesh(double a, double b, int n, BoundaryTag left_tag,
                          BoundaryTag right_tag);

struct RectTags
{
  BoundaryTag left = BoundaryTag::Impedance;
  BoundaryTag right = BoundaryTag::Impedance;
  BoundaryTag bottom = BoundaryTag::Impedance;
  BoundaryTag top = BoundaryTag::Impedance;

  static RectTags All(BoundaryTag t) { return {t, t, t, t}; }
};

// Rectangle [0,width]x[0,height] split into nx*ny cells, each cut into two right
// triangles. The cut diagonal alternates with the cell parity (criss-cross pattern).
MeshPtr BuildRectMesh(double width, double height, int nx, int ny, const RectTags &tags);

}  // namespace helmpc

#endif  // HELMPC_MESH_HPP
