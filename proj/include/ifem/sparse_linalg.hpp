#pragma once

#include <string>
#include <vector>

#include "ifem/core.hpp"

namespace ifem {

/// Compressed sparse row matrix; column indices strictly increasing per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr, std::vector<int> col_idx,
               std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Stored entry or 0.
  double at(std::size_t i, std::size_t j) const;
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> operator*(const std::vector<double>& x) const;
  bool is_symmetric(double tol = 0.0) const;
  std::vector<double> diagonal() const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Collects (i, j, v) contributions; duplicates are summed in insertion
/// order so the result is bit-reproducible.
class TripletBuilder {
 public:
  TripletBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  void add(int i, int j, double v) { entries_.push_back({i, j, v}); }
  void reserve(std::size_t n) { entries_.reserve(n); }
  SparseMatrix build() const;

 private:
  struct Entry {
    int i, j;
    double v;
  };
  std::size_t rows_, cols_;
  std::vector<Entry> entries_;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. Throws SolverError when the
/// cap of 10 * dim iterations is reached.
std::vector<double> solve_spd(const SparseMatrix& A, const std::vector<double>& b, double tol = 1e-12,
                              SolveStats* stats = nullptr);

/// Sparse LU with iterative refinement for symmetric indefinite systems.
/// Throws SolverError on singular systems or when the residual contract
/// fails.
std::vector<double> solve_saddle(const SparseMatrix& K, const std::vector<double>& b, double tol = 1e-10,
                                 SolveStats* stats = nullptr);

/// Saddle system [A B^T 0; B 0 a; 0 a^T 0] with A symmetric positive
/// definite of size n_primal and a single trailing multiplier. Cholesky on A,
/// conjugate gradients on the Schur complement restricted to the complement
/// of its constant kernel. The relative residual of the full system is
/// checked against tol.
std::vector<double> solve_saddle_schur(const SparseMatrix& K, std::size_t n_primal, const std::vector<double>& b,
                                       double tol = 1e-10, SolveStats* stats = nullptr);

/// MatrixMarket coordinate real general format.
std::string to_matrix_market(const SparseMatrix& A);

double norm2(const std::vector<double>& v);

}  // namespace ifem
