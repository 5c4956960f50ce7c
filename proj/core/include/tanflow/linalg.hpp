// Copyright the tanflow contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace tanflow {

// CSR sparsity pattern for node-block operators: the node adjacency graph
// expanded by a fixed block size (dof = node * block + component).
struct SparsityPattern {
  int n = 0;                  // rows = cols
  std::vector<long> row_ptr;  // n + 1
  std::vector<int> col;       // sorted within each row
  long nnz() const { return static_cast<long>(col.size()); }
  long find(int i, int j) const;  // value index or -1
};

class PatternBuilder {
 public:
  explicit PatternBuilder(int n_nodes, int block_size = 1);
  void add_clique(const int* nodes, int count);
  std::shared_ptr<const SparsityPattern> finalize() const;

 private:
  int n_nodes_;
  int block_;
  std::vector<std::vector<int>> adj_;
};

// Symmetric operator in CSR form; several operators built over one shared
// pattern combine by plain axpy on the value arrays.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(std::shared_ptr<const SparsityPattern> pattern);

  int rows() const { return pattern_ ? pattern_->n : 0; }
  long nnz() const { return pattern_ ? pattern_->nnz() : 0; }
  const SparsityPattern& pattern() const { return *pattern_; }
  std::shared_ptr<const SparsityPattern> pattern_ptr() const { return pattern_; }

  void add(int i, int j, double v);      // entry must exist in the pattern
  double coeff(int i, int j) const;      // 0 for entries outside the pattern
  void set_zero();
  void axpy(double a, const SparseMatrix& other);  // this += a * other (same pattern)
  void scale(double a);

  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  Eigen::VectorXd diagonal() const;
  Eigen::MatrixXd to_dense() const;

  std::vector<double>& values() { return val_; }
  const std::vector<double>& values() const { return val_; }

 private:
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<double> val_;
};

SparseMatrix linear_combination(double a, const SparseMatrix& A, double b, const SparseMatrix& B);

struct CgOptions {
  double tol = 1e-10;  // relative to |b|
  int max_iterations = 50000;
};

struct SolverReport {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// Jacobi-preconditioned conjugate gradients; x is the warm start on entry and
// the solution on exit. Non-convergence is reported, not thrown.
SolverReport cg_solve(const SparseMatrix& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                      const CgOptions& opts = {});
SolverReport cg_solve(const SparseMatrix& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                      const Eigen::VectorXd& inv_diag, const CgOptions& opts);

}  // namespace tanflow
