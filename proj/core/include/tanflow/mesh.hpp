// Copyright the tanflow contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tanflow/geometry.hpp"

namespace tanflow {

// Planar triangulation of the parameter box. Uniform meshes are the symmetric
// criss-cross pattern: every grid cell is split into four triangles through
// its center, (n+1)^2 + n^2 vertices and 4 n^2 facets for an n x n grid.
struct ParamMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW
  Box2 box;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  double triangle_area(int t) const;
};

// Radial refinement: cells intersecting the disc are halved `levels` times;
// a 2:1-balanced quadtree with fanned transition triangles keeps the mesh
// conforming.
struct GradingSpec {
  Vec2 center{0.0, 0.0};
  double radius = 0.0;
  int levels = 1;
};

ParamMesh triangulate(const Box2& box, double h,
                      const std::optional<GradingSpec>& grading = std::nullopt);

struct EdgeTable {
  std::vector<std::array<int, 2>> edges;      // vertex pairs, lo < hi
  std::vector<std::array<int, 3>> tri_edges;  // edge ids: (v0v1, v1v2, v2v0)
};

EdgeTable build_edges(const ParamMesh& pm);

// Parameter mesh lifted onto the chart. Nodes are the vertices plus, for
// order 2, the edge midpoints; all node positions are exact chart points.
struct SurfaceMesh {
  ParamMesh param;
  SurfaceChart chart;
  int order = 1;
  bool exact_geometry = false;

  EdgeTable edge_table;            // populated for order 2
  int n_nodes = 0;                 // vertices (+ edges for order 2)
  std::vector<Vec3> lifted;        // node positions on the surface
  std::vector<Vec3> node_m;        // unnormalized normal direction (-grad f, 1) at nodes
  std::vector<Vec3> node_normal;   // unit improved normal at nodes
  std::vector<Vec3> facet_normal;  // discrete normal at facet barycenter
  std::vector<double> facet_diameter;
  double h_max = 0.0;              // max facet diameter

  // point-location bins
  int bins_x = 0, bins_y = 0;
  std::vector<std::vector<int>> bins;

  Vec2 node_param(int node) const;
  int nodes_per_facet() const { return order == 1 ? 3 : 6; }
  void facet_nodes(int t, int* out) const;  // 3 or 6 global node ids
};

SurfaceMesh lift(ParamMesh pm, const SurfaceChart& chart, int order, bool exact_geometry);

struct Location {
  int facet = -1;
  std::array<double, 3> bary{0.0, 0.0, 0.0};  // clamped, sums to 1
};

// Finds a facet containing the parameter point (lowest facet id on ties).
Location locate(const SurfaceMesh& sm, const Vec2& x);

// Discrete Weingarten map of a facet: gradient of the nodal interpolant of
// m = t1 x t2, projected tangentially and scaled by |m_h|^-1. Evaluated at
// the facet barycenter.
Mat3 discrete_weingarten(const SurfaceMesh& sm, int facet);

}  // namespace tanflow
