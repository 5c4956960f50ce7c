// Copyright the tanflow contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <array>
#include <memory>

namespace tanflow {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;

struct Box2 {
  Vec2 lo{-2.0, -2.0};
  Vec2 hi{2.0, 2.0};
  double width() const { return hi.x() - lo.x(); }
  double height() const { return hi.y() - lo.y(); }
  bool contains(const Vec2& x) const {
    return x.x() >= lo.x() && x.x() <= hi.x() && x.y() >= lo.y() && x.y() <= hi.y();
  }
};

// Compressed-Gaussian bump profile, cut off smoothly-to-machine-noise at
// d = 1 - delta_cut:  eta(d) = exp(-1/(1-d^2)) for d < 1 - delta_cut, else 0.
double bump_eta(double d, double delta_cut = 0.025);
double bump_eta_d1(double d, double delta_cut = 0.025);
double bump_eta_d2(double d, double delta_cut = 0.025);
// Smooth radial helpers: A(d) = eta'(d)/d and B(d) = A'(d)/d. Both extend
// smoothly through d = 0 and make the height derivatives singularity-free.
double bump_eta_A(double d, double delta_cut = 0.025);
double bump_eta_B(double d, double delta_cut = 0.025);

// Height field of a graph surface; implementations supply exact derivatives.
class HeightFunction {
 public:
  virtual ~HeightFunction() = default;
  virtual double value(const Vec2& x) const = 0;
  virtual Vec2 gradient(const Vec2& x) const = 0;
  virtual Mat2 hessian(const Vec2& x) const = 0;
};

// f(x) = alpha * eta(|x - center| / radius)
class BumpHeight final : public HeightFunction {
 public:
  BumpHeight(double alpha, const Vec2& center, double radius, double delta_cut = 0.025);
  double value(const Vec2& x) const override;
  Vec2 gradient(const Vec2& x) const override;
  Mat2 hessian(const Vec2& x) const override;

  double alpha() const { return alpha_; }
  const Vec2& center() const { return center_; }
  double radius() const { return radius_; }
  double delta_cut() const { return delta_cut_; }

 private:
  double alpha_;
  Vec2 center_;
  double radius_;
  double delta_cut_;
};

// coeff[m][l][k]: coefficient of frame vector m in the covariant derivative of
// frame field k along frame direction l.
using Christoffel = std::array<std::array<std::array<double, 2>, 2>, 2>;

// Pointwise geometric data of the graph surface in its orthogonal frame.
struct GeometryEval {
  Vec3 position;
  Mat32 jacobian;        // columns t1 = (1,0,f_x), t2 = (0,1,f_y)
  Mat2 metric;           // g = J^T J
  Mat2 metric_inv;
  double det_metric = 1.0;
  Vec3 normal;           // unit, positive z-component
  Mat3 projection;       // P = I - n n^T
  Mat3 weingarten;       // H, symmetric, H n = 0
  Mat32 frame;           // orthogonal frame: tt1 = t1, tt2 = t2 - c t1
  double h1 = 1.0;       // |tt1|
  double h2 = 1.0;       // |tt2|
  Mat2 W;                // frame-coordinate change: d(psi)/ds = W grad_xhat(psi)
  Christoffel christoffel;  // Lame-style coefficients of the orthogonal frame
  Christoffel connection;   // exact frame connection (bracket-corrected)
  double gauss_curvature = 0.0;
};

// Graph-surface chart mu(x) = (x1, x2, f(x)) over a planar box.
class SurfaceChart {
 public:
  // Standard bump chart.
  SurfaceChart(double alpha, const Vec2& bump_center, double bump_radius, Box2 domain,
               double delta_cut = 0.025);
  // Graph chart over a caller-supplied height field (used by tests).
  SurfaceChart(std::shared_ptr<const HeightFunction> height, Box2 domain);

  const Box2& domain() const { return domain_; }
  const HeightFunction& height_function() const { return *height_; }
  double alpha() const { return alpha_; }
  const Vec2& bump_center() const { return bump_center_; }
  double bump_radius() const { return bump_radius_; }
  double delta_cut() const { return delta_cut_; }

  double height(const Vec2& x) const { return height_->value(x); }
  Vec2 height_gradient(const Vec2& x) const { return height_->gradient(x); }
  Mat2 height_hessian(const Vec2& x) const { return height_->hessian(x); }

  Vec3 position(const Vec2& x) const;
  Mat32 jacobian(const Vec2& x) const;
  Mat2 metric(const Vec2& x) const;
  Vec3 normal(const Vec2& x) const;
  GeometryEval eval(const Vec2& x) const;

 private:
  std::shared_ptr<const HeightFunction> height_;
  Box2 domain_;
  double alpha_ = 0.0;
  Vec2 bump_center_{0.0, 0.0};
  double bump_radius_ = 1.0;
  double delta_cut_ = 0.025;
};

GeometryEval eval_geometry(const SurfaceChart& chart, const Vec2& x);
// Lame-style orthogonal-frame coefficients built from the s-derivatives of the
// frame lengths h1, h2; symmetric in the two lower indices by construction.
Christoffel christoffel_orth(const SurfaceChart& chart, const Vec2& x);
// Exact connection coefficients of the (anholonomic) orthogonal frame; they
// differ from christoffel_orth in exactly two entries by the Lie-bracket term
// and are what a covariant derivative consistent with the embedding needs.
Christoffel frame_connection(const SurfaceChart& chart, const Vec2& x);
Mat2 coordinate_change_W(const SurfaceChart& chart, const Vec2& x);
double gaussian_curvature(const SurfaceChart& chart, const Vec2& x);

}  // namespace tanflow
