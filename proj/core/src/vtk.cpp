// Copyright the tanflow contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tanflow/vtk.hpp"

#include <cstdio>
#include <stdexcept>

namespace tanflow {

namespace {

struct File {
  std::FILE* f = nullptr;
  explicit File(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
    if (!f) throw std::runtime_error("write_vtk: cannot open " + path);
  }
  ~File() {
    if (f) std::fclose(f);
  }
};

void write_header(std::FILE* f, const SurfaceMesh& sm) {
  const int nv = sm.param.n_vertices();
  const int nt = sm.param.n_triangles();
  std::fprintf(f, "# vtk DataFile Version 3.0\n");
  std::fprintf(f, "tanflow surface mesh\n");
  std::fprintf(f, "ASCII\n");
  std::fprintf(f, "DATASET UNSTRUCTURED_GRID\n");
  std::fprintf(f, "POINTS %d double\n", nv);
  for (int i = 0; i < nv; ++i) {
    const Vec3& p = sm.lifted[i];
    std::fprintf(f, "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
  }
  std::fprintf(f, "CELLS %d %d\n", nt, 4 * nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = sm.param.triangles[t];
    std::fprintf(f, "3 %d %d %d\n", tri[0], tri[1], tri[2]);
  }
  std::fprintf(f, "CELL_TYPES %d\n", nt);
  for (int t = 0; t < nt; ++t) std::fprintf(f, "5\n");
}

}  // namespace

void write_vtk(const std::string& path, const SurfaceMesh& sm) {
  File file(path);
  write_header(file.f, sm);
}

void write_vtk(const std::string& path, const SurfaceMesh& sm, int rank,
               const Eigen::VectorXd& vertex_values, const std::string& field_name) {
  if (rank < 0 || rank > 2) throw std::invalid_argument("write_vtk: rank must be 0, 1 or 2");
  const int nv = sm.param.n_vertices();
  int comps = 1;
  for (int i = 0; i < rank; ++i) comps *= 3;
  if (vertex_values.size() < static_cast<long>(nv) * comps)
    throw std::invalid_argument("write_vtk: field shorter than vertex count");

  File file(path);
  std::FILE* f = file.f;
  write_header(f, sm);
  std::fprintf(f, "POINT_DATA %d\n", nv);
  if (rank == 0) {
    std::fprintf(f, "SCALARS %s double 1\n", field_name.c_str());
    std::fprintf(f, "LOOKUP_TABLE default\n");
    for (int i = 0; i < nv; ++i) std::fprintf(f, "%.17g\n", vertex_values[i]);
  } else if (rank == 1) {
    std::fprintf(f, "VECTORS %s double\n", field_name.c_str());
    for (int i = 0; i < nv; ++i)
      std::fprintf(f, "%.17g %.17g %.17g\n", vertex_values[3 * i], vertex_values[3 * i + 1],
                   vertex_values[3 * i + 2]);
  } else {
    std::fprintf(f, "TENSORS %s double\n", field_name.c_str());
    for (int i = 0; i < nv; ++i) {
      for (int r = 0; r < 3; ++r)
        std::fprintf(f, "%.17g %.17g %.17g\n", vertex_values[9 * i + 3 * r],
                     vertex_values[9 * i + 3 * r + 1], vertex_values[9 * i + 3 * r + 2]);
      std::fprintf(f, "\n");
    }
  }
}

}  // namespace tanflow
