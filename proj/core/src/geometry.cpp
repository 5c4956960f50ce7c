// Copyright the tanflow contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tanflow/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace tanflow {

double bump_eta(double d, double delta_cut) {
  if (d >= 1.0 - delta_cut) return 0.0;
  const double s = 1.0 - d * d;
  return std::exp(-1.0 / s);
}

double bump_eta_d1(double d, double delta_cut) {
  if (d >= 1.0 - delta_cut) return 0.0;
  const double s = 1.0 - d * d;
  return -2.0 * d / (s * s) * std::exp(-1.0 / s);
}

double bump_eta_d2(double d, double delta_cut) {
  if (d >= 1.0 - delta_cut) return 0.0;
  const double s = 1.0 - d * d;
  const double s2 = s * s;
  return std::exp(-1.0 / s) * (4.0 * d * d / (s2 * s2) - 2.0 / s2 - 8.0 * d * d / (s2 * s));
}

double bump_eta_A(double d, double delta_cut) {
  if (d >= 1.0 - delta_cut) return 0.0;
  const double s = 1.0 - d * d;
  return -2.0 / (s * s) * std::exp(-1.0 / s);
}

double bump_eta_B(double d, double delta_cut) {
  if (d >= 1.0 - delta_cut) return 0.0;
  const double s = 1.0 - d * d;
  const double s2 = s * s;
  return -2.0 * std::exp(-1.0 / s) * (4.0 / (s2 * s) - 2.0 / s2);
}

BumpHeight::BumpHeight(double alpha, const Vec2& center, double radius, double delta_cut)
    : alpha_(alpha), center_(center), radius_(radius), delta_cut_(delta_cut) {
  if (!(radius > 0.0)) throw std::invalid_argument("BumpHeight: radius must be positive");
}

double BumpHeight::value(const Vec2& x) const {
  const double d = (x - center_).norm() / radius_;
  return alpha_ * bump_eta(d, delta_cut_);
}

Vec2 BumpHeight::gradient(const Vec2& x) const {
  const Vec2 y = x - center_;
  const double d = y.norm() / radius_;
  return (alpha_ / (radius_ * radius_)) * bump_eta_A(d, delta_cut_) * y;
}

Mat2 BumpHeight::hessian(const Vec2& x) const {
  const Vec2 y = x - center_;
  const double r2 = radius_ * radius_;
  const double d = y.norm() / radius_;
  const double A = bump_eta_A(d, delta_cut_);
  const double B = bump_eta_B(d, delta_cut_);
  return (alpha_ / r2) * (A * Mat2::Identity() + (B / r2) * (y * y.transpose()));
}

SurfaceChart::SurfaceChart(double alpha, const Vec2& bump_center, double bump_radius, Box2 domain,
                           double delta_cut)
    : height_(std::make_shared<BumpHeight>(alpha, bump_center, bump_radius, delta_cut)),
      domain_(domain),
      alpha_(alpha),
      bump_center_(bump_center),
      bump_radius_(bump_radius),
      delta_cut_(delta_cut) {}

SurfaceChart::SurfaceChart(std::shared_ptr<const HeightFunction> height, Box2 domain)
    : height_(std::move(height)), domain_(domain) {
  if (!height_) throw std::invalid_argument("SurfaceChart: null height function");
}

Vec3 SurfaceChart::position(const Vec2& x) const {
  return Vec3(x.x(), x.y(), height_->value(x));
}

Mat32 SurfaceChart::jacobian(const Vec2& x) const {
  const Vec2 fg = height_->gradient(x);
  Mat32 J;
  J << 1.0, 0.0, 0.0, 1.0, fg.x(), fg.y();
  return J;
}

Mat2 SurfaceChart::metric(const Vec2& x) const {
  const Vec2 fg = height_->gradient(x);
  Mat2 g;
  g << 1.0 + fg.x() * fg.x(), fg.x() * fg.y(), fg.x() * fg.y(), 1.0 + fg.y() * fg.y();
  return g;
}

Vec3 SurfaceChart::normal(const Vec2& x) const {
  const Vec2 fg = height_->gradient(x);
  return Vec3(-fg.x(), -fg.y(), 1.0).normalized();
}

GeometryEval SurfaceChart::eval(const Vec2& x) const {
  GeometryEval ge;
  const double f = height_->value(x);
  const Vec2 fg = height_->gradient(x);
  const Mat2 fh = height_->hessian(x);
  const double f1 = fg.x(), f2 = fg.y();

  ge.position = Vec3(x.x(), x.y(), f);
  ge.jacobian << 1.0, 0.0, 0.0, 1.0, f1, f2;

  const double p = 1.0 + f1 * f1;
  const double q = 1.0 + f1 * f1 + f2 * f2;  // = det g
  ge.metric << p, f1 * f2, f1 * f2, 1.0 + f2 * f2;
  ge.det_metric = q;
  if (!(q > 1e-14)) throw std::domain_error("SurfaceChart::eval: degenerate metric");
  ge.metric_inv << (1.0 + f2 * f2) / q, -f1 * f2 / q, -f1 * f2 / q, p / q;

  const double w = std::sqrt(q);
  const Vec3 m(-f1, -f2, 1.0);
  ge.normal = m / w;
  ge.projection = Mat3::Identity() - ge.normal * ge.normal.transpose();

  // dn columns: derivative of the unit normal along x1, x2
  Mat32 dn;
  for (int j = 0; j < 2; ++j) {
    const Vec3 dm(-fh(0, j), -fh(1, j), 0.0);
    const double dw = (f1 * fh(0, j) + f2 * fh(1, j)) / w;
    dn.col(j) = dm / w - m * (dw / (w * w));
  }
  Mat3 H = -dn * ge.metric_inv * ge.jacobian.transpose();
  ge.weingarten = 0.5 * (H + H.transpose());

  ge.gauss_curvature = fh.determinant() / (q * q);

  // Gram-Schmidt frame, never reversed: tt1 = t1, tt2 = t2 - c t1.
  const double c = f1 * f2 / p;
  ge.frame.col(0) = ge.jacobian.col(0);
  ge.frame.col(1) = ge.jacobian.col(1) - c * ge.jacobian.col(0);
  ge.h1 = std::sqrt(p);
  ge.h2 = std::sqrt(q / p);

  ge.W = ge.frame.transpose() * ge.jacobian * ge.metric_inv;

  // x-gradients of the frame lengths, pushed to s-derivatives via W.
  const Vec2 grad_p = 2.0 * f1 * fh.row(0).transpose();
  const Vec2 grad_q = 2.0 * (f1 * fh.row(0).transpose() + f2 * fh.row(1).transpose());
  const Vec2 grad_h1 = grad_p / (2.0 * ge.h1);
  const Vec2 grad_h2 = (p * grad_q - q * grad_p) / (2.0 * ge.h2 * p * p);
  const Vec2 dh1 = ge.W * grad_h1;
  const Vec2 dh2 = ge.W * grad_h2;

  Christoffel& G = ge.christoffel;
  G[0][0][0] = dh1(0) / ge.h1;
  G[0][0][1] = G[0][1][0] = dh1(1) / ge.h1;
  G[0][1][1] = -(ge.h2 / (ge.h1 * ge.h1)) * dh2(0);
  G[1][1][1] = dh2(1) / ge.h2;
  G[1][0][1] = G[1][1][0] = dh2(0) / ge.h2;
  G[1][0][0] = -(ge.h1 / (ge.h2 * ge.h2)) * dh1(1);

  // The frame has [tt1, tt2] = -(dc/dx1) tt1; the Lame-style coefficients
  // assume a holonomic frame and miss that bracket. Correcting the two
  // affected entries reproduces the embedding covariant derivative exactly.
  const double f11 = fh(0, 0), f12 = fh(0, 1);
  const double c1 = ((f11 * f2 + f1 * f12) * p - f1 * f2 * 2.0 * f1 * f11) / (p * p);
  ge.connection = G;
  ge.connection[1][0][0] += c1 * (ge.h1 * ge.h1) / (ge.h2 * ge.h2);
  ge.connection[0][0][1] -= c1;

  return ge;
}

GeometryEval eval_geometry(const SurfaceChart& chart, const Vec2& x) { return chart.eval(x); }

Christoffel christoffel_orth(const SurfaceChart& chart, const Vec2& x) {
  return chart.eval(x).christoffel;
}

Christoffel frame_connection(const SurfaceChart& chart, const Vec2& x) {
  return chart.eval(x).connection;
}

Mat2 coordinate_change_W(const SurfaceChart& chart, const Vec2& x) { return chart.eval(x).W; }

double gaussian_curvature(const SurfaceChart& chart, const Vec2& x) {
  const Mat2 fh = chart.height_hessian(x);
  const Vec2 fg = chart.height_gradient(x);
  const double q = 1.0 + fg.squaredNorm();
  return fh.determinant() / (q * q);
}

}  // namespace tanflow
