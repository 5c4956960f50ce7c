// Copyright the tanflow contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "tanflow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tanflow {

long SparsityPattern::find(int i, int j) const {
  if (i < 0 || i >= n || j < 0 || j >= n) return -1;
  const int* begin = col.data() + row_ptr[i];
  const int* end = col.data() + row_ptr[i + 1];
  const int* it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return -1;
  return row_ptr[i] + (it - begin);
}

PatternBuilder::PatternBuilder(int n_nodes, int block_size)
    : n_nodes_(n_nodes), block_(block_size), adj_(n_nodes) {
  if (n_nodes < 0 || block_size < 1) throw std::invalid_argument("PatternBuilder: bad sizes");
}

void PatternBuilder::add_clique(const int* nodes, int count) {
  for (int a = 0; a < count; ++a) {
    const int i = nodes[a];
    if (i < 0 || i >= n_nodes_) throw std::out_of_range("PatternBuilder: node out of range");
    for (int b = 0; b < count; ++b) adj_[i].push_back(nodes[b]);
  }
}

std::shared_ptr<const SparsityPattern> PatternBuilder::finalize() const {
  auto p = std::make_shared<SparsityPattern>();
  p->n = n_nodes_ * block_;
  p->row_ptr.assign(static_cast<size_t>(p->n) + 1, 0);

  std::vector<std::vector<int>> sorted(adj_.size());
  long nnz = 0;
  for (int i = 0; i < n_nodes_; ++i) {
    sorted[i] = adj_[i];
    std::sort(sorted[i].begin(), sorted[i].end());
    sorted[i].erase(std::unique(sorted[i].begin(), sorted[i].end()), sorted[i].end());
    nnz += static_cast<long>(sorted[i].size()) * block_ * block_;
  }
  p->col.reserve(nnz);
  for (int i = 0; i < n_nodes_; ++i) {
    for (int a = 0; a < block_; ++a) {
      for (const int j : sorted[i])
        for (int b = 0; b < block_; ++b) p->col.push_back(j * block_ + b);
      p->row_ptr[static_cast<size_t>(i) * block_ + a + 1] = static_cast<long>(p->col.size());
    }
  }
  return p;
}

SparseMatrix::SparseMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : pattern_(std::move(pattern)), val_(pattern_ ? pattern_->nnz() : 0, 0.0) {}

void SparseMatrix::add(int i, int j, double v) {
  const long k = pattern_->find(i, j);
  if (k < 0) throw std::out_of_range("SparseMatrix::add: entry outside the pattern");
  val_[k] += v;
}

double SparseMatrix::coeff(int i, int j) const {
  const long k = pattern_->find(i, j);
  return k < 0 ? 0.0 : val_[k];
}

void SparseMatrix::set_zero() { std::fill(val_.begin(), val_.end(), 0.0); }

void SparseMatrix::axpy(double a, const SparseMatrix& other) {
  if (pattern_.get() != other.pattern_.get())
    throw std::invalid_argument("SparseMatrix::axpy: patterns differ");
  for (size_t k = 0; k < val_.size(); ++k) val_[k] += a * other.val_[k];
}

void SparseMatrix::scale(double a) {
  for (double& v : val_) v *= a;
}

void SparseMatrix::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const int n = rows();
  if (x.size() != n) throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
  y.resize(n);
  const long* rp = pattern_->row_ptr.data();
  const int* cols = pattern_->col.data();
  const double* v = val_.data();
  const double* xp = x.data();
  double* yp = y.data();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (long k = rp[i]; k < rp[i + 1]; ++k) s += v[k] * xp[cols[k]];
    yp[i] = s;
  }
}

Eigen::VectorXd SparseMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  multiply(x, y);
  return y;
}

Eigen::VectorXd SparseMatrix::diagonal() const {
  Eigen::VectorXd d(rows());
  for (int i = 0; i < rows(); ++i) d[i] = coeff(i, i);
  return d;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(rows(), rows());
  for (int i = 0; i < rows(); ++i)
    for (long k = pattern_->row_ptr[i]; k < pattern_->row_ptr[i + 1]; ++k)
      D(i, pattern_->col[k]) = val_[k];
  return D;
}

SparseMatrix linear_combination(double a, const SparseMatrix& A, double b, const SparseMatrix& B) {
  SparseMatrix C(A.pattern_ptr());
  C.axpy(a, A);
  C.axpy(b, B);
  return C;
}

SolverReport cg_solve(const SparseMatrix& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                      const CgOptions& opts) {
  Eigen::VectorXd d = A.diagonal();
  for (int i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) throw std::runtime_error("cg_solve: nonpositive diagonal entry");
    d[i] = 1.0 / d[i];
  }
  return cg_solve(A, b, x, d, opts);
}

SolverReport cg_solve(const SparseMatrix& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                      const Eigen::VectorXd& inv_diag, const CgOptions& opts) {
  const int n = A.rows();
  SolverReport rep;
  const double bnorm = b.norm();
  if (x.size() != n) x = Eigen::VectorXd::Zero(n);
  if (bnorm == 0.0) {
    x.setZero();
    rep.converged = true;
    return rep;
  }

  Eigen::VectorXd r(n), z(n), p(n), Ap(n);
  A.multiply(x, Ap);
  r = b - Ap;
  z = inv_diag.cwiseProduct(r);
  p = z;
  double rz = r.dot(z);
  double rnorm = r.norm();
  const double target = opts.tol * bnorm;

  int it = 0;
  while (rnorm > target && it < opts.max_iterations) {
    A.multiply(p, Ap);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) throw std::runtime_error("cg_solve: operator not positive definite");
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
    rnorm = r.norm();
    ++it;
  }
  rep.iterations = it;
  rep.rel_residual = rnorm / bnorm;
  rep.converged = rnorm <= target;
  return rep;
}

}  // namespace tanflow
