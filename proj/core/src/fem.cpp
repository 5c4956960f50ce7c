// Copyright the tanflow contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tanflow/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace tanflow {

const QuadratureRule& triangle_quadrature_order3() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.n = 6;
    const double a1 = 0.445948490915965;
    const double b1 = 1.0 - 2.0 * a1;
    const double w1 = 0.223381589678011;
    const double a2 = 0.091576213509771;
    const double b2 = 1.0 - 2.0 * a2;
    const double w2 = 0.109951743655322;
    // points as (lambda1, lambda2) for barycentric permutations of (b, a, a)
    r.points = {Vec2(a1, a1), Vec2(b1, a1), Vec2(a1, b1),
                Vec2(a2, a2), Vec2(b2, a2), Vec2(a2, b2)};
    r.weights = {w1, w1, w1, w2, w2, w2};
    double s = 0.0;
    for (int q = 0; q < r.n; ++q) s += r.weights[q];
    for (int q = 0; q < r.n; ++q) r.weights[q] /= s;
    return r;
  }();
  return rule;
}

void reference_basis(int order, const Vec2& ref, double* val, Vec2* grad) {
  const double x = ref.x(), y = ref.y();
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
  if (order != 2) throw std::invalid_argument("reference_basis: order must be 1 or 2");
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

FESpace::FESpace(const SurfaceMesh& sm, int components) : mesh_(&sm), components_(components) {
  if (components < 1) throw std::invalid_argument("FESpace: components must be positive");
}

std::shared_ptr<const SparsityPattern> FESpace::pattern() const {
  if (!pattern_) {
    PatternBuilder builder(n_nodes(), components_);
    const int nn = nodes_per_element();
    int nodes[6];
    for (int t = 0; t < mesh_->param.n_triangles(); ++t) {
      mesh_->facet_nodes(t, nodes);
      builder.add_clique(nodes, nn);
    }
    pattern_ = builder.finalize();
  }
  return pattern_;
}

void element_quad_data(const FESpace& space, int facet, const QuadratureRule& rule,
                       QuadPointData* out) {
  const SurfaceMesh& sm = space.mesh();
  const int order = sm.order;
  const int nn = space.nodes_per_element();
  int nodes[6];
  sm.facet_nodes(facet, nodes);

  const auto& tri = sm.param.triangles[facet];
  const Vec2 a = sm.param.vertices[tri[0]];
  Mat2 B;
  B.col(0) = sm.param.vertices[tri[1]] - a;
  B.col(1) = sm.param.vertices[tri[2]] - a;
  const double area2 = B(0, 0) * B(1, 1) - B(0, 1) * B(1, 0);
  if (!(area2 > 0.0)) throw std::domain_error("element_quad_data: degenerate facet");
  const double param_area = 0.5 * area2;
  const Mat2 Binv_t = B.inverse().transpose();

  Vec2 gref[6];
  for (int q = 0; q < rule.n; ++q) {
    QuadPointData& d = out[q];
    d.xhat = a + B * rule.points[q];
    reference_basis(order, rule.points[q], d.basis, gref);
    for (int k = 0; k < nn; ++k) d.param_grad[k] = Binv_t * gref[k];

    if (sm.exact_geometry) {
      d.geo = sm.chart.eval(d.xhat);
      d.weight = rule.weights[q] * std::sqrt(d.geo.det_metric) * param_area;
      d.normal = d.geo.normal;
      d.normal_sharp = d.geo.normal;
      d.projection = d.geo.projection;
      d.weingarten = d.geo.weingarten;
      for (int k = 0; k < nn; ++k)
        d.surf_grad[k] = d.geo.jacobian * (d.geo.metric_inv * d.param_grad[k]);
    } else {
      Mat32 Jh = Mat32::Zero();
      for (int k = 0; k < nn; ++k) Jh += sm.lifted[nodes[k]] * d.param_grad[k].transpose();
      const Mat2 gh = Jh.transpose() * Jh;
      const double det = gh.determinant();
      if (!(det > 0.0)) throw std::domain_error("element_quad_data: degenerate lifted facet");
      const Mat2 gh_inv = gh.inverse();
      d.weight = rule.weights[q] * std::sqrt(det) * param_area;
      d.normal = Jh.col(0).cross(Jh.col(1)).normalized();
      d.projection = Mat3::Identity() - d.normal * d.normal.transpose();
      for (int k = 0; k < nn; ++k) d.surf_grad[k] = Jh * (gh_inv * d.param_grad[k]);

      Vec3 mh = Vec3::Zero();
      Vec3 ns = Vec3::Zero();
      Mat3 grad_m = Mat3::Zero();
      for (int k = 0; k < nn; ++k) {
        mh += d.basis[k] * sm.node_m[nodes[k]];
        ns += d.basis[k] * sm.node_normal[nodes[k]];
        grad_m += sm.node_m[nodes[k]] * d.surf_grad[k].transpose();
      }
      d.normal_sharp = ns.normalized();
      d.weingarten = (d.projection * grad_m * d.projection) / mh.norm();
    }
  }
}

namespace {

int pow3(int rank) { return rank == 0 ? 1 : (rank == 1 ? 3 : 9); }

template <typename LocalWeight>
SparseMatrix assemble_blockwise(const FESpace& space, const LocalWeight& weight_at) {
  const int N = space.components();
  const int nn = space.nodes_per_element();
  SparseMatrix M(space.pattern());
  const QuadratureRule& rule = triangle_quadrature_order3();
  std::vector<QuadPointData> qpd(rule.n);
  Eigen::MatrixXd W(N, N);
  Eigen::MatrixXd local(nn * N, nn * N);
  int nodes[6];

  for (int t = 0; t < space.mesh().param.n_triangles(); ++t) {
    space.mesh().facet_nodes(t, nodes);
    element_quad_data(space, t, rule, qpd.data());
    local.setZero();
    for (int q = 0; q < rule.n; ++q) {
      weight_at(qpd[q], W);
      for (int a = 0; a < nn; ++a) {
        for (int b = 0; b < nn; ++b) {
          const double s = qpd[q].weight * qpd[q].basis[a] * qpd[q].basis[b];
          for (int c = 0; c < N; ++c)
            for (int e = 0; e < N; ++e) local(a * N + c, b * N + e) += s * W(c, e);
        }
      }
    }
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nn; ++b)
        for (int c = 0; c < N; ++c)
          for (int e = 0; e < N; ++e)
            M.add(space.dof(nodes[a], c), space.dof(nodes[b], e), local(a * N + c, b * N + e));
  }
  return M;
}

}  // namespace

SparseMatrix assemble_mass(const FESpace& space, const MassWeight& weight) {
  if (weight) {
    return assemble_blockwise(space, [&](const QuadPointData& d, Eigen::Ref<Eigen::MatrixXd> W) {
      weight(d, W);
    });
  }
  return assemble_blockwise(space, [](const QuadPointData&, Eigen::Ref<Eigen::MatrixXd> W) {
    W.setIdentity();
  });
}

SparseMatrix assemble_projected_mass(const FESpace& space, int rank) {
  if (rank == 0) return assemble_mass(space);
  if (rank == 1) {
    if (space.components() != 3) throw std::invalid_argument("projected mass: need 3 components");
    return assemble_blockwise(space, [](const QuadPointData& d, Eigen::Ref<Eigen::MatrixXd> W) {
      W = d.projection;
    });
  }
  if (rank != 2) throw std::invalid_argument("projected mass: rank must be 0, 1 or 2");
  if (space.components() != 9) throw std::invalid_argument("projected mass: need 9 components");
  return assemble_blockwise(space, [](const QuadPointData& d, Eigen::Ref<Eigen::MatrixXd> W) {
    for (int c1 = 0; c1 < 3; ++c1)
      for (int c2 = 0; c2 < 3; ++c2)
        for (int d1 = 0; d1 < 3; ++d1)
          for (int d2 = 0; d2 < 3; ++d2)
            W(3 * c1 + c2, 3 * d1 + d2) = d.projection(c1, d1) * d.projection(c2, d2);
  });
}

SparseMatrix assemble_penalty(const FESpace& space, int rank) {
  if (rank == 1) {
    if (space.components() != 3) throw std::invalid_argument("penalty: need 3 components");
    return assemble_blockwise(space, [](const QuadPointData& d, Eigen::Ref<Eigen::MatrixXd> W) {
      W = d.normal_sharp * d.normal_sharp.transpose();
    });
  }
  if (rank != 2) throw std::invalid_argument("penalty: rank must be 1 or 2");
  if (space.components() != 9) throw std::invalid_argument("penalty: need 9 components");
  return assemble_blockwise(space, [](const QuadPointData& d, Eigen::Ref<Eigen::MatrixXd> W) {
    const Mat3 Ps = Mat3::Identity() - d.normal_sharp * d.normal_sharp.transpose();
    for (int c1 = 0; c1 < 3; ++c1)
      for (int c2 = 0; c2 < 3; ++c2)
        for (int d1 = 0; d1 < 3; ++d1)
          for (int d2 = 0; d2 < 3; ++d2)
            W(3 * c1 + c2, 3 * d1 + d2) =
                ((c1 == d1 && c2 == d2) ? 1.0 : 0.0) - Ps(c1, d1) * Ps(c2, d2);
  });
}

SparseMatrix assemble_stiffness_scalar(const FESpace& space) {
  if (space.components() != 1)
    throw std::invalid_argument("scalar stiffness: need a single-component space");
  const int nn = space.nodes_per_element();
  SparseMatrix A(space.pattern());
  const QuadratureRule& rule = triangle_quadrature_order3();
  std::vector<QuadPointData> qpd(rule.n);
  Eigen::MatrixXd local(nn, nn);
  int nodes[6];
  for (int t = 0; t < space.mesh().param.n_triangles(); ++t) {
    space.mesh().facet_nodes(t, nodes);
    element_quad_data(space, t, rule, qpd.data());
    local.setZero();
    for (int q = 0; q < rule.n; ++q)
      for (int a = 0; a < nn; ++a)
        for (int b = 0; b < nn; ++b)
          local(a, b) += qpd[q].weight * qpd[q].surf_grad[a].dot(qpd[q].surf_grad[b]);
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nn; ++b) A.add(nodes[a], nodes[b], local(a, b));
  }
  return A;
}

SparseMatrix assemble_tensor_operator(const FESpace& space, int rank) {
  if (rank != 1 && rank != 2) throw std::invalid_argument("tensor operator: rank must be 1 or 2");
  const int N = pow3(rank);
  if (space.components() != N) throw std::invalid_argument("tensor operator: component mismatch");
  const int nn = space.nodes_per_element();
  const int ndof = nn * N;
  const int blen = rank == 1 ? 9 : 27;  // flattened test-function gradient

  SparseMatrix A(space.pattern());
  const QuadratureRule& rule = triangle_quadrature_order3();
  std::vector<QuadPointData> qpd(rule.n);
  Eigen::MatrixXd local(ndof, ndof);
  std::vector<double> Bq(static_cast<size_t>(ndof) * blen);
  int nodes[6];

  for (int t = 0; t < space.mesh().param.n_triangles(); ++t) {
    space.mesh().facet_nodes(t, nodes);
    element_quad_data(space, t, rule, qpd.data());
    local.setZero();
    for (int q = 0; q < rule.n; ++q) {
      const QuadPointData& d = qpd[q];
      // B(phi) = grad_S phi + G(phi) for every local basis tensor phi
      for (int a = 0; a < nn; ++a) {
        const Vec3& g = d.surf_grad[a];
        const double v = d.basis[a];
        if (rank == 1) {
          for (int c = 0; c < 3; ++c) {
            double* B = Bq.data() + static_cast<size_t>(a * 3 + c) * blen;
            const double nc = d.normal[c];
            for (int a1 = 0; a1 < 3; ++a1)
              for (int a3 = 0; a3 < 3; ++a3)
                B[3 * a1 + a3] = d.projection(a1, c) * g[a3] - v * nc * d.weingarten(a1, a3);
          }
        } else {
          for (int c1 = 0; c1 < 3; ++c1) {
            for (int c2 = 0; c2 < 3; ++c2) {
              double* B = Bq.data() + static_cast<size_t>(a * 9 + c1 * 3 + c2) * blen;
              const double n1 = d.normal[c1], n2 = d.normal[c2];
              for (int a1 = 0; a1 < 3; ++a1)
                for (int a2 = 0; a2 < 3; ++a2)
                  for (int a3 = 0; a3 < 3; ++a3)
                    B[9 * a1 + 3 * a2 + a3] =
                        d.projection(a1, c1) * d.projection(a2, c2) * g[a3] -
                        v * (n1 * d.weingarten(a1, a3) * d.projection(a2, c2) +
                             n2 * d.weingarten(a2, a3) * d.projection(a1, c1));
            }
          }
        }
      }
      for (int i = 0; i < ndof; ++i) {
        const double* Bi = Bq.data() + static_cast<size_t>(i) * blen;
        for (int j = i; j < ndof; ++j) {
          const double* Bj = Bq.data() + static_cast<size_t>(j) * blen;
          double s = 0.0;
          for (int k = 0; k < blen; ++k) s += Bi[k] * Bj[k];
          local(i, j) += d.weight * s;
        }
      }
    }
    for (int i = 0; i < ndof; ++i)
      for (int j = 0; j < i; ++j) local(i, j) = local(j, i);
    for (int a = 0; a < nn; ++a)
      for (int b = 0; b < nn; ++b)
        for (int c = 0; c < N; ++c)
          for (int e = 0; e < N; ++e)
            A.add(space.dof(nodes[a], c), space.dof(nodes[b], e), local(a * N + c, b * N + e));
  }
  return A;
}

Eigen::VectorXd evaluate_field(const FESpace& space, const Eigen::VectorXd& u, const Vec2& xhat) {
  if (u.size() != space.n_dofs()) throw std::invalid_argument("evaluate_field: size mismatch");
  const Location loc = locate(space.mesh(), xhat);
  const Vec2 ref(loc.bary[1], loc.bary[2]);
  double val[6];
  Vec2 grad[6];
  reference_basis(space.mesh().order, ref, val, grad);
  int nodes[6];
  space.mesh().facet_nodes(loc.facet, nodes);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.components());
  for (int a = 0; a < space.nodes_per_element(); ++a)
    for (int c = 0; c < space.components(); ++c) out[c] += val[a] * u[space.dof(nodes[a], c)];
  return out;
}

double surface_area(const SurfaceMesh& sm) {
  FESpace space(sm, 1);
  const QuadratureRule& rule = triangle_quadrature_order3();
  std::vector<QuadPointData> qpd(rule.n);
  double area = 0.0;
  for (int t = 0; t < sm.param.n_triangles(); ++t) {
    element_quad_data(space, t, rule, qpd.data());
    for (int q = 0; q < rule.n; ++q) area += qpd[q].weight;
  }
  return area;
}

}  // namespace tanflow
