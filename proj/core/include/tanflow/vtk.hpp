// Copyright the tanflow contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <string>

#include "tanflow/mesh.hpp"

namespace tanflow {

// Legacy ASCII VTK export of the lifted mesh. The field variant writes one
// point field with 3^rank components per vertex (SCALARS / VECTORS / TENSORS).
void write_vtk(const std::string& path, const SurfaceMesh& sm);
void write_vtk(const std::string& path, const SurfaceMesh& sm, int rank,
               const Eigen::VectorXd& vertex_values, const std::string& field_name);

}  // namespace tanflow
