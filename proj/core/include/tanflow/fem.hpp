// Copyright the tanflow contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "tanflow/linalg.hpp"
#include "tanflow/mesh.hpp"

namespace tanflow {

// Positive-weight triangle rule, exact on cubics (degree 4); weights are
// normalized to sum to one so element integrals scale by the facet area.
struct QuadratureRule {
  int n = 0;
  std::array<Vec2, 6> points;  // reference coordinates (x, y) = (lambda1, lambda2)
  std::array<double, 6> weights;
};
const QuadratureRule& triangle_quadrature_order3();

// Lagrange basis on the reference triangle: 3 (order 1) or 6 (order 2)
// functions; node order v0 v1 v2, then midpoints of (v0v1), (v1v2), (v2v0).
void reference_basis(int order, const Vec2& ref, double* values, Vec2* gradients);

class FESpace {
 public:
  FESpace(const SurfaceMesh& sm, int components);
  const SurfaceMesh& mesh() const { return *mesh_; }
  int components() const { return components_; }
  int n_nodes() const { return mesh_->n_nodes; }
  int n_dofs() const { return n_nodes() * components_; }
  int nodes_per_element() const { return mesh_->nodes_per_facet(); }
  int dof(int node, int comp) const { return node * components_ + comp; }
  std::shared_ptr<const SparsityPattern> pattern() const;

 private:
  const SurfaceMesh* mesh_;
  int components_;
  mutable std::shared_ptr<const SparsityPattern> pattern_;
};

// Per-quadrature-point data on a lifted facet. With exact geometry the chart
// supplies normals, curvature and the area element; otherwise everything
// comes from the interpolated surface (flat facets for order 1) and the
// nodally interpolated normal-direction field m = t1 x t2.
struct QuadPointData {
  Vec2 xhat;
  double weight = 0.0;  // integrates dS
  Vec3 normal{0, 0, 1};
  Vec3 normal_sharp{0, 0, 1};  // improved (vertex-exact) normal
  Mat3 projection = Mat3::Identity();
  Mat3 weingarten = Mat3::Zero();
  double basis[6] = {};
  Vec3 surf_grad[6];   // tangential gradients of the scalar basis
  Vec2 param_grad[6];  // gradients w.r.t. the parameter coordinates
  GeometryEval geo;    // filled in exact mode
};

void element_quad_data(const FESpace& space, int facet, const QuadratureRule& rule,
                       QuadPointData* out);

using MassWeight = std::function<void(const QuadPointData&, Eigen::Ref<Eigen::MatrixXd>)>;

// (u, v) with an optional symmetric per-point component weight.
SparseMatrix assemble_mass(const FESpace& space, const MassWeight& weight = {});
// (P u, P v): componentwise projected mass, singular on normal parts.
SparseMatrix assemble_projected_mass(const FESpace& space, int rank);
// (grad_S u, grad_S v) for scalar fields.
SparseMatrix assemble_stiffness_scalar(const FESpace& space);
// (grad_S u + G(u), grad_S v + G(v)) for tensor rank 1 or 2, where G couples
// the normal component through the Weingarten map.
SparseMatrix assemble_tensor_operator(const FESpace& space, int rank);
// (Q# u, Q# v): mass of the non-tangential part w.r.t. the improved normal.
SparseMatrix assemble_penalty(const FESpace& space, int rank);

Eigen::VectorXd evaluate_field(const FESpace& space, const Eigen::VectorXd& u, const Vec2& xhat);

double surface_area(const SurfaceMesh& sm);

}  // namespace tanflow
