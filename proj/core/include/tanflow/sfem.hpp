// Copyright the tanflow contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tanflow/fem.hpp"

namespace tanflow {

enum class Method { sfem, isfem };

// Assembled spatial problem: the method's inner-product operator and the
// total spatial operator (stiffness plus scaled tangency penalty where the
// method uses one).
struct DiscreteSystem {
  FESpace space;
  SparseMatrix mass;
  SparseMatrix stiffness;
  Method method = Method::sfem;
  int rank = 0;
  double penalty_factor = 0.0;  // beta / h^2 for the penalized ranks
};

namespace sfem {

// Scalar heat problem in the embedding: plain mass and surface stiffness.
DiscreteSystem build_scalar_system(const SurfaceMesh& sm);

// Tensor-valued problem (rank 1 or 2) with componentwise projection, the
// Weingarten coupling in the stiffness and the improved-normal penalty
// scaled by beta / h_max^2.
DiscreteSystem build_tensor_system(const SurfaceMesh& sm, int rank, double beta);

// L2 fraction of u violating tangency w.r.t. the improved normal:
// sqrt( int |Q# u|^2 dS / int |u|^2 dS ).
double normal_residual(const FESpace& space, const Eigen::VectorXd& u, int rank);

}  // namespace sfem
}  // namespace tanflow
