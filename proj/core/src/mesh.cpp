// Copyright the tanflow contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tanflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace tanflow {

double ParamMesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const Vec2 e1 = vertices[tri[1]] - vertices[tri[0]];
  const Vec2 e2 = vertices[tri[2]] - vertices[tri[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

namespace {

ParamMesh triangulate_uniform(const Box2& box, int nx, int ny) {
  ParamMesh pm;
  pm.box = box;
  const double dx = box.width() / nx;
  const double dy = box.height() / ny;
  pm.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1) + static_cast<size_t>(nx) * ny);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      pm.vertices.emplace_back(box.lo.x() + i * dx, box.lo.y() + j * dy);
  const int centers0 = (nx + 1) * (ny + 1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      pm.vertices.emplace_back(box.lo.x() + (i + 0.5) * dx, box.lo.y() + (j + 0.5) * dy);
  pm.triangles.reserve(static_cast<size_t>(4) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = j * (nx + 1) + i;
      const int b = a + 1;
      const int c = b + (nx + 1);
      const int d = a + (nx + 1);
      const int m = centers0 + j * nx + i;
      pm.triangles.push_back({a, b, m});
      pm.triangles.push_back({b, c, m});
      pm.triangles.push_back({c, d, m});
      pm.triangles.push_back({d, a, m});
    }
  }
  return pm;
}

struct QtCell {
  int level;
  long ix, iy;
  int child = -1;  // first of four children, -1 for leaves
};

struct Quadtree {
  int nx = 0, ny = 0, max_level = 0;
  std::vector<QtCell> cells;

  long fine_nx() const { return static_cast<long>(nx) << max_level; }
  long fine_ny() const { return static_cast<long>(ny) << max_level; }

  int leaf_at(long fx, long fy) const {
    int c = static_cast<int>((fy >> max_level) * nx + (fx >> max_level));
    while (cells[c].child >= 0) {
      const int shift = max_level - cells[c].level - 1;
      const int dx = static_cast<int>((fx >> shift) & 1);
      const int dy = static_cast<int>((fy >> shift) & 1);
      c = cells[c].child + dy * 2 + dx;
    }
    return c;
  }

  void split(int c) {
    const int lvl = cells[c].level;
    const long ix = cells[c].ix, iy = cells[c].iy;
    cells[c].child = static_cast<int>(cells.size());
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx)
        cells.push_back({lvl + 1, 2 * ix + dx, 2 * iy + dy, -1});
  }
};

ParamMesh triangulate_graded(const Box2& box, int nx, int ny, const GradingSpec& grading) {
  Quadtree qt;
  qt.nx = nx;
  qt.ny = ny;
  qt.max_level = grading.levels;
  const double dx = box.width() / nx;
  const double dy = box.height() / ny;

  qt.cells.reserve(static_cast<size_t>(nx) * ny * 2);
  for (long j = 0; j < ny; ++j)
    for (long i = 0; i < nx; ++i) qt.cells.push_back({0, i, j, -1});

  auto intersects_disc = [&](const QtCell& c) {
    const double sx = dx / (1 << c.level);
    const double sy = dy / (1 << c.level);
    const double x0 = box.lo.x() + c.ix * sx, x1 = x0 + sx;
    const double y0 = box.lo.y() + c.iy * sy, y1 = y0 + sy;
    const double px = std::clamp(grading.center.x(), x0, x1);
    const double py = std::clamp(grading.center.y(), y0, y1);
    return (Vec2(px, py) - grading.center).norm() <= grading.radius;
  };

  // refine inside the disc
  for (int c = 0; c < static_cast<int>(qt.cells.size()); ++c) {
    if (qt.cells[c].level < qt.max_level && intersects_disc(qt.cells[c])) qt.split(c);
  }

  // 2:1 balance
  bool changed = true;
  while (changed) {
    changed = false;
    for (int c = 0; c < static_cast<int>(qt.cells.size()); ++c) {
      if (qt.cells[c].child >= 0) continue;
      const int l = qt.cells[c].level;
      const long size = 1L << (qt.max_level - l);
      const long X0 = qt.cells[c].ix * size, Y0 = qt.cells[c].iy * size;
      bool split_me = false;
      for (long k = 0; k < size && !split_me; ++k) {
        const long probes[4][2] = {{X0 + k, Y0 - 1},
                                   {X0 + k, Y0 + size},
                                   {X0 - 1, Y0 + k},
                                   {X0 + size, Y0 + k}};
        for (const auto& p : probes) {
          if (p[0] < 0 || p[0] >= qt.fine_nx() || p[1] < 0 || p[1] >= qt.fine_ny()) continue;
          if (qt.cells[qt.leaf_at(p[0], p[1])].level > l + 1) {
            split_me = true;
            break;
          }
        }
      }
      if (split_me) {
        qt.split(c);
        changed = true;
      }
    }
  }

  // deterministic leaf order: depth-first from the row-major roots
  std::vector<int> leaves;
  std::vector<int> stack;
  for (int r = nx * ny - 1; r >= 0; --r) stack.push_back(r);
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    if (qt.cells[c].child < 0) {
      leaves.push_back(c);
    } else {
      for (int k = 3; k >= 0; --k) stack.push_back(qt.cells[c].child + k);
    }
  }

  ParamMesh pm;
  pm.box = box;
  const double half_x = box.width() / (qt.fine_nx() * 2);
  const double half_y = box.height() / (qt.fine_ny() * 2);
  std::unordered_map<long long, int> vid;
  auto vertex = [&](long hx, long hy) {
    const long long key = (static_cast<long long>(hx) << 32) | static_cast<long long>(hy);
    auto it = vid.find(key);
    if (it != vid.end()) return it->second;
    const int id = pm.n_vertices();
    pm.vertices.emplace_back(box.lo.x() + hx * half_x, box.lo.y() + hy * half_y);
    vid.emplace(key, id);
    return id;
  };

  for (const int c : leaves) {
    const QtCell& cell = qt.cells[c];
    const int l = cell.level;
    const long size = 1L << (qt.max_level - l);
    const long X0 = cell.ix * size, Y0 = cell.iy * size;
    const long X1 = X0 + size, Y1 = Y0 + size;
    const int va = vertex(2 * X0, 2 * Y0);
    const int vb = vertex(2 * X1, 2 * Y0);
    const int vc = vertex(2 * X1, 2 * Y1);
    const int vd = vertex(2 * X0, 2 * Y1);
    const int vm = vertex(X0 + X1, Y0 + Y1);

    // per edge: probe just across the midpoint; a finer neighbour leaves a
    // hanging midpoint there, which the fan absorbs
    auto finer_across = [&](long fx, long fy) {
      if (l == qt.max_level) return false;
      if (fx < 0 || fx >= qt.fine_nx() || fy < 0 || fy >= qt.fine_ny()) return false;
      return qt.cells[qt.leaf_at(fx, fy)].level > l;
    };
    const long h = size / 2;
    struct EdgeSpec {
      int u, v;
      long mx, my;  // midpoint half-coords
      bool fan;
    };
    const EdgeSpec edges[4] = {
        {va, vb, X0 + X1, 2 * Y0, finer_across(X0 + h, Y0 - 1)},
        {vb, vc, 2 * X1, Y0 + Y1, finer_across(X1, Y0 + h)},
        {vc, vd, X0 + X1, 2 * Y1, finer_across(X0 + h, Y1)},
        {vd, va, 2 * X0, Y0 + Y1, finer_across(X0 - 1, Y0 + h)},
    };
    for (const auto& e : edges) {
      if (e.fan) {
        const int vmid = vertex(e.mx, e.my);
        pm.triangles.push_back({e.u, vmid, vm});
        pm.triangles.push_back({vmid, e.v, vm});
      } else {
        pm.triangles.push_back({e.u, e.v, vm});
      }
    }
  }
  return pm;
}

}  // namespace

ParamMesh triangulate(const Box2& box, double h, const std::optional<GradingSpec>& grading) {
  if (!(h > 0.0)) throw std::invalid_argument("triangulate: h must be positive");
  if (!(box.width() > 0.0) || !(box.height() > 0.0))
    throw std::invalid_argument("triangulate: empty box");
  const int nx = std::max(1, static_cast<int>(std::ceil(box.width() / h - 1e-12)));
  const int ny = std::max(1, static_cast<int>(std::ceil(box.height() / h - 1e-12)));
  if (grading && grading->levels > 0 && grading->radius > 0.0) {
    if (grading->levels > 12) throw std::invalid_argument("triangulate: grading levels too deep");
    return triangulate_graded(box, nx, ny, *grading);
  }
  return triangulate_uniform(box, nx, ny);
}

EdgeTable build_edges(const ParamMesh& pm) {
  EdgeTable et;
  et.tri_edges.resize(pm.n_triangles());
  std::map<std::pair<int, int>, int> ids;
  for (int t = 0; t < pm.n_triangles(); ++t) {
    const auto& tri = pm.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = ids.find(key);
      if (it == ids.end()) {
        it = ids.emplace(key, static_cast<int>(et.edges.size())).first;
        et.edges.push_back({key.first, key.second});
      }
      et.tri_edges[t][e] = it->second;
    }
  }
  return et;
}

namespace {

// reference P1/P2 Lagrange basis on the unit triangle (duplicated from the FE
// kernels on purpose: keeps the mesh layer below them)
void ref_basis(int order, double x, double y, double* val, Vec2* grad) {
  const double l0 = 1.0 - x - y, l1 = x, l2 = y;
  if (order == 1) {
    val[0] = l0;
    val[1] = l1;
    val[2] = l2;
    grad[0] = Vec2(-1.0, -1.0);
    grad[1] = Vec2(1.0, 0.0);
    grad[2] = Vec2(0.0, 1.0);
    return;
  }
  const Vec2 g0(-1.0, -1.0), g1(1.0, 0.0), g2(0.0, 1.0);
  val[0] = l0 * (2.0 * l0 - 1.0);
  val[1] = l1 * (2.0 * l1 - 1.0);
  val[2] = l2 * (2.0 * l2 - 1.0);
  val[3] = 4.0 * l0 * l1;
  val[4] = 4.0 * l1 * l2;
  val[5] = 4.0 * l2 * l0;
  grad[0] = (4.0 * l0 - 1.0) * g0;
  grad[1] = (4.0 * l1 - 1.0) * g1;
  grad[2] = (4.0 * l2 - 1.0) * g2;
  grad[3] = 4.0 * (l1 * g0 + l0 * g1);
  grad[4] = 4.0 * (l2 * g1 + l1 * g2);
  grad[5] = 4.0 * (l0 * g2 + l2 * g0);
}

void build_bins(SurfaceMesh& sm) {
  const ParamMesh& pm = sm.param;
  const int nb = std::clamp(static_cast<int>(std::sqrt(pm.n_triangles() / 2.0)), 1, 2048);
  sm.bins_x = nb;
  sm.bins_y = nb;
  sm.bins.assign(static_cast<size_t>(nb) * nb, {});
  const double eps = 1e-12 * std::max(pm.box.width(), pm.box.height());
  auto bin_of = [&](double v, double lo, double extent, int n) {
    int b = static_cast<int>((v - lo) / extent * n);
    return std::clamp(b, 0, n - 1);
  };
  for (int t = 0; t < pm.n_triangles(); ++t) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const int v : pm.triangles[t]) {
      x0 = std::min(x0, pm.vertices[v].x());
      x1 = std::max(x1, pm.vertices[v].x());
      y0 = std::min(y0, pm.vertices[v].y());
      y1 = std::max(y1, pm.vertices[v].y());
    }
    const int bx0 = bin_of(x0 - eps, pm.box.lo.x(), pm.box.width(), nb);
    const int bx1 = bin_of(x1 + eps, pm.box.lo.x(), pm.box.width(), nb);
    const int by0 = bin_of(y0 - eps, pm.box.lo.y(), pm.box.height(), nb);
    const int by1 = bin_of(y1 + eps, pm.box.lo.y(), pm.box.height(), nb);
    for (int by = by0; by <= by1; ++by)
      for (int bx = bx0; bx <= bx1; ++bx)
        sm.bins[static_cast<size_t>(by) * nb + bx].push_back(t);
  }
}

}  // namespace

Vec2 SurfaceMesh::node_param(int node) const {
  const int nv = param.n_vertices();
  if (node < nv) return param.vertices[node];
  const auto& e = edge_table.edges[node - nv];
  return 0.5 * (param.vertices[e[0]] + param.vertices[e[1]]);
}

void SurfaceMesh::facet_nodes(int t, int* out) const {
  const auto& tri = param.triangles[t];
  out[0] = tri[0];
  out[1] = tri[1];
  out[2] = tri[2];
  if (order == 2) {
    const int nv = param.n_vertices();
    for (int e = 0; e < 3; ++e) out[3 + e] = nv + edge_table.tri_edges[t][e];
  }
}

SurfaceMesh lift(ParamMesh pm, const SurfaceChart& chart, int order, bool exact_geometry) {
  if (order != 1 && order != 2) throw std::invalid_argument("lift: order must be 1 or 2");
  SurfaceMesh sm{std::move(pm), chart, order, exact_geometry};
  if (order == 2) sm.edge_table = build_edges(sm.param);
  const int nv = sm.param.n_vertices();
  sm.n_nodes = nv + (order == 2 ? static_cast<int>(sm.edge_table.edges.size()) : 0);

  sm.lifted.resize(sm.n_nodes);
  sm.node_m.resize(sm.n_nodes);
  sm.node_normal.resize(sm.n_nodes);
  for (int i = 0; i < sm.n_nodes; ++i) {
    const Vec2 x = sm.node_param(i);
    sm.lifted[i] = chart.position(x);
    const Vec2 fg = chart.height_gradient(x);
    sm.node_m[i] = Vec3(-fg.x(), -fg.y(), 1.0);
    sm.node_normal[i] = sm.node_m[i].normalized();
  }

  const int T = sm.param.n_triangles();
  sm.facet_normal.resize(T);
  sm.facet_diameter.resize(T);
  sm.h_max = 0.0;
  const int nn = sm.nodes_per_facet();
  double val[6];
  Vec2 gref[6];
  ref_basis(order, 1.0 / 3.0, 1.0 / 3.0, val, gref);
  int nodes[6];
  for (int t = 0; t < T; ++t) {
    sm.facet_nodes(t, nodes);
    const Vec2 a = sm.param.vertices[sm.param.triangles[t][0]];
    const Vec2 b = sm.param.vertices[sm.param.triangles[t][1]];
    const Vec2 c = sm.param.vertices[sm.param.triangles[t][2]];
    Mat2 B;
    B.col(0) = b - a;
    B.col(1) = c - a;
    const Mat2 Binv_t = B.inverse().transpose();
    Mat32 Jh = Mat32::Zero();
    for (int k = 0; k < nn; ++k) Jh += sm.lifted[nodes[k]] * (Binv_t * gref[k]).transpose();
    sm.facet_normal[t] = Jh.col(0).cross(Jh.col(1)).normalized();
    double diam = 0.0;
    for (int i = 0; i < nn; ++i)
      for (int j = i + 1; j < nn; ++j)
        diam = std::max(diam, (sm.lifted[nodes[i]] - sm.lifted[nodes[j]]).norm());
    sm.facet_diameter[t] = diam;
    sm.h_max = std::max(sm.h_max, diam);
  }

  build_bins(sm);
  return sm;
}

Location locate(const SurfaceMesh& sm, const Vec2& x) {
  const ParamMesh& pm = sm.param;
  if (!pm.box.contains(x)) throw std::invalid_argument("locate: point outside the domain box");
  auto bin_of = [&](double v, double lo, double extent, int n) {
    return std::clamp(static_cast<int>((v - lo) / extent * n), 0, n - 1);
  };
  const int bx = bin_of(x.x(), pm.box.lo.x(), pm.box.width(), sm.bins_x);
  const int by = bin_of(x.y(), pm.box.lo.y(), pm.box.height(), sm.bins_y);

  auto try_tol = [&](double tol) -> Location {
    for (const int t : sm.bins[static_cast<size_t>(by) * sm.bins_x + bx]) {
      const auto& tri = pm.triangles[t];
      const Vec2 a = pm.vertices[tri[0]];
      Mat2 B;
      B.col(0) = pm.vertices[tri[1]] - a;
      B.col(1) = pm.vertices[tri[2]] - a;
      const Vec2 l = B.inverse() * (x - a);
      const double l0 = 1.0 - l.x() - l.y();
      if (l0 >= -tol && l.x() >= -tol && l.y() >= -tol) {
        Location loc;
        loc.facet = t;
        double w[3] = {std::max(l0, 0.0), std::max(l.x(), 0.0), std::max(l.y(), 0.0)};
        const double s = w[0] + w[1] + w[2];
        loc.bary = {w[0] / s, w[1] / s, w[2] / s};
        return loc;
      }
    }
    return {};
  };
  Location loc = try_tol(1e-12);
  if (loc.facet < 0) loc = try_tol(1e-9);
  if (loc.facet < 0) throw std::runtime_error("locate: no containing facet found");
  return loc;
}

Mat3 discrete_weingarten(const SurfaceMesh& sm, int facet) {
  if (facet < 0 || facet >= sm.param.n_triangles())
    throw std::out_of_range("discrete_weingarten: facet id out of range");
  const int nn = sm.nodes_per_facet();
  double val[6];
  Vec2 gref[6];
  ref_basis(sm.order, 1.0 / 3.0, 1.0 / 3.0, val, gref);
  int nodes[6];
  sm.facet_nodes(facet, nodes);
  const auto& tri = sm.param.triangles[facet];
  const Vec2 a = sm.param.vertices[tri[0]];
  Mat2 B;
  B.col(0) = sm.param.vertices[tri[1]] - a;
  B.col(1) = sm.param.vertices[tri[2]] - a;
  const Mat2 Binv_t = B.inverse().transpose();

  Mat32 Jh = Mat32::Zero();
  Vec3 mh = Vec3::Zero();
  for (int k = 0; k < nn; ++k) {
    Jh += sm.lifted[nodes[k]] * (Binv_t * gref[k]).transpose();
    mh += val[k] * sm.node_m[nodes[k]];
  }
  const Mat2 gh = Jh.transpose() * Jh;
  const Mat2 gh_inv = gh.inverse();
  const Vec3 nh = Jh.col(0).cross(Jh.col(1)).normalized();
  const Mat3 P = Mat3::Identity() - nh * nh.transpose();

  Mat3 grad_m = Mat3::Zero();
  for (int k = 0; k < nn; ++k) {
    const Vec3 sg = Jh * (gh_inv * (Binv_t * gref[k]));
    grad_m += sm.node_m[nodes[k]] * sg.transpose();
  }
  return (P * grad_m * P) / mh.norm();
}

}  // namespace tanflow
