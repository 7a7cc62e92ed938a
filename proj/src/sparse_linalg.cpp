#include "ifem/sparse_linalg.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace ifem {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                           std::vector<int> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || col_idx_.size() != values_.size() || row_ptr_.back() != values_.size())
    throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] < 0 || static_cast<std::size_t>(col_idx_[p]) >= cols_)
        throw std::invalid_argument("SparseMatrix: column index out of range");
      if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1])
        throw std::invalid_argument("SparseMatrix: column indices must increase within a row");
    }
  }
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<int>(j));
  if (it == last || *it != static_cast<int>(j)) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void SparseMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x[static_cast<std::size_t>(col_idx_[p])];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::operator*(const std::vector<double>& x) const {
  std::vector<double> y;
  multiply(x, y);
  return y;
}

bool SparseMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (std::abs(values_[p] - at(static_cast<std::size_t>(col_idx_[p]), i)) > tol) return false;
    }
  }
  return true;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

SparseMatrix TripletBuilder::build() const {
  std::vector<std::size_t> order(entries_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    const auto& ea = entries_[a];
    const auto& eb = entries_[b];
    return ea.i != eb.i ? ea.i < eb.i : ea.j < eb.j;
  });
  std::vector<std::size_t> row_ptr(rows_ + 1, 0);
  std::vector<int> cols;
  std::vector<double> vals;
  cols.reserve(entries_.size());
  vals.reserve(entries_.size());
  int last_i = -1, last_j = -1;
  for (std::size_t idx : order) {
    const auto& e = entries_[idx];
    if (e.i < 0 || static_cast<std::size_t>(e.i) >= rows_ || e.j < 0 || static_cast<std::size_t>(e.j) >= cols_)
      throw std::out_of_range("TripletBuilder: entry out of range");
    if (e.i == last_i && e.j == last_j) {
      vals.back() += e.v;
      continue;
    }
    cols.push_back(e.j);
    vals.push_back(e.v);
    ++row_ptr[static_cast<std::size_t>(e.i) + 1];
    last_i = e.i;
    last_j = e.j;
  }
  for (std::size_t i = 0; i < rows_; ++i) row_ptr[i + 1] += row_ptr[i];
  return SparseMatrix(rows_, cols_, std::move(row_ptr), std::move(cols), std::move(vals));
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> solve_spd(const SparseMatrix& A, const std::vector<double>& b, double tol, SolveStats* stats) {
  const std::size_t n = A.rows();
  if (A.cols() != n || b.size() != n) throw std::invalid_argument("solve_spd: dimension mismatch");
  std::vector<double> x(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  std::vector<double> inv_diag = A.diagonal();
  for (double& d : inv_diag) {
    if (!(d > 0.0)) throw SolverError("solve_spd: non-positive diagonal entry, matrix is not SPD");
    d = 1.0 / d;
  }
  std::vector<double> r = b, z(n), p(n), Ap(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
  const int cap = static_cast<int>(10 * std::max<std::size_t>(n, 1));
  std::vector<double> history;
  for (int it = 1; it <= cap; ++it) {
    A.multiply(p, Ap);
    const double pAp = std::inner_product(p.begin(), p.end(), Ap.begin(), 0.0);
    if (!(pAp > 0.0)) throw SolverError("solve_spd: breakdown, matrix is not positive definite");
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    const double rel = norm2(r) / bnorm;
    if (it % 50 == 0) history.push_back(rel);
    if (rel <= tol) {
      // confirm with the true residual
      std::vector<double> Ax;
      A.multiply(x, Ax);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ax[i];
      const double true_rel = norm2(r) / bnorm;
      if (true_rel <= tol) {
        if (stats) *stats = {it, true_rel};
        return x;
      }
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::string msg = "solve_spd: no convergence in " + std::to_string(cap) + " iterations; residual history:";
  char buf[32];
  for (std::size_t i = history.size() > 10 ? history.size() - 10 : 0; i < history.size(); ++i) {
    std::snprintf(buf, sizeof buf, " %.3e", history[i]);
    msg += buf;
  }
  throw SolverError(msg);
}

std::vector<double> solve_saddle(const SparseMatrix& K, const std::vector<double>& b, double tol, SolveStats* stats) {
  const std::size_t n = K.rows();
  if (K.cols() != n || b.size() != n) throw std::invalid_argument("solve_saddle: dimension mismatch");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(K.nonzeros());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = K.row_ptr()[i]; p < K.row_ptr()[i + 1]; ++p)
      trip.emplace_back(static_cast<int>(i), K.col_idx()[p], K.values()[p]);
  }
  Eigen::SparseMatrix<double> M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(M);
  lu.factorize(M);
  if (lu.info() != Eigen::Success) throw SolverError("solve_saddle: factorization failed (singular system?): " + lu.lastErrorMessage());

  const double bnorm = norm2(b);
  std::vector<double> x(n, 0.0);
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd xv = lu.solve(bv);
  double rel = 0.0;
  int steps = 0;
  for (; steps < 4; ++steps) {
    const Eigen::VectorXd res = bv - M * xv;
    rel = res.norm() / bnorm;
    if (!std::isfinite(rel)) break;
    if (rel <= 1e-2 * tol) break;
    xv += lu.solve(res);
  }
  if (!(rel <= tol)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "solve_saddle: relative residual %.3e exceeds %.1e (singular or ill-posed system)", rel, tol);
    throw SolverError(buf);
  }
  std::copy(xv.data(), xv.data() + n, x.begin());
  if (stats) *stats = {steps + 1, rel};
  return x;
}

std::vector<double> solve_saddle_schur(const SparseMatrix& K, std::size_t n_primal, const std::vector<double>& b,
                                       double tol, SolveStats* stats) {
  const std::size_t n = K.rows();
  if (K.cols() != n || b.size() != n) throw std::invalid_argument("solve_saddle_schur: dimension mismatch");
  if (n_primal + 2 > n) throw std::invalid_argument("solve_saddle_schur: need at least one constraint row and a multiplier");
  const std::size_t m = n - n_primal - 1;
  const std::size_t mult = n - 1;

  using SpMat = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> ta, tb;
  std::vector<double> a(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = K.row_ptr()[i]; p < K.row_ptr()[i + 1]; ++p) {
      const auto j = static_cast<std::size_t>(K.col_idx()[p]);
      const double v = K.values()[p];
      if (i < n_primal && j < n_primal) {
        ta.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
      } else if (i >= n_primal && i < mult && j < n_primal) {
        tb.emplace_back(static_cast<int>(i - n_primal), static_cast<int>(j), v);
      } else if (i >= n_primal && i < mult && j == mult) {
        a[i - n_primal] = v;
      } else if (i < n_primal && j >= n_primal) {
        continue;  // transpose of the constraint block, checked below
      } else if (i == mult && j >= n_primal && j < mult) {
        continue;
      } else if (v != 0.0) {
        throw std::invalid_argument("solve_saddle_schur: matrix does not have the expected block structure");
      }
    }
  }
  SpMat A(static_cast<Eigen::Index>(n_primal), static_cast<Eigen::Index>(n_primal));
  A.setFromTriplets(ta.begin(), ta.end());
  SpMat B(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n_primal));
  B.setFromTriplets(tb.begin(), tb.end());
  const SpMat Bt = B.transpose();
  Eigen::SimplicialLLT<SpMat> chol(A);
  if (chol.info() != Eigen::Success) throw SolverError("solve_saddle_schur: velocity block is not positive definite");

  double a_sum = 0.0;
  for (double v : a) a_sum += v;
  if (!(std::abs(a_sum) > 0.0)) throw SolverError("solve_saddle_schur: multiplier column sums to zero");
  Eigen::VectorXd inv_a(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) inv_a[static_cast<Eigen::Index>(i)] = a[i] > 0.0 ? 1.0 / a[i] : 1.0;

  const Eigen::Map<const Eigen::VectorXd> av(a.data(), static_cast<Eigen::Index>(m));
  auto project = [&](Eigen::VectorXd& v) { v.array() -= v.mean(); };
  int total_iterations = 0;

  // one exact-arithmetic solve of the block system for a given right-hand side
  auto inner = [&](const Eigen::VectorXd& rhs) {
    const Eigen::VectorXd f = rhs.head(static_cast<Eigen::Index>(n_primal));
    const Eigen::VectorXd g = rhs.segment(static_cast<Eigen::Index>(n_primal), static_cast<Eigen::Index>(m));
    const double h = rhs[static_cast<Eigen::Index>(mult)];
    const Eigen::VectorXd y = chol.solve(f);
    Eigen::VectorXd r = B * y - g;
    const double lambda = -r.sum() / a_sum;
    r += lambda * av;
    project(r);

    // preconditioned CG on the Schur complement in the complement of constants
    Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    Eigen::VectorXd res = r;
    Eigen::VectorXd z = inv_a.cwiseProduct(res);
    project(z);
    Eigen::VectorXd d = z;
    double rz = res.dot(z);
    const double rnorm = r.norm();
    const int cap = static_cast<int>(std::max<std::size_t>(m, 10));
    int it = 0;
    while (rnorm > 0.0 && res.norm() > 1e-14 * rnorm && it < cap) {
      Eigen::VectorXd Sd = B * chol.solve(Bt * d);
      project(Sd);
      const double dSd = d.dot(Sd);
      if (!(dSd > 0.0)) throw SolverError("solve_saddle_schur: breakdown, Schur complement is not positive definite");
      const double alpha = rz / dSd;
      p += alpha * d;
      res -= alpha * Sd;
      z = inv_a.cwiseProduct(res);
      project(z);
      const double rz_new = res.dot(z);
      d = z + (rz_new / rz) * d;
      rz = rz_new;
      ++it;
    }
    total_iterations += it;
    p.array() += (h - av.dot(p)) / a_sum;
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    x.head(static_cast<Eigen::Index>(n_primal)) = chol.solve(f - Bt * p);
    x.segment(static_cast<Eigen::Index>(n_primal), static_cast<Eigen::Index>(m)) = p;
    x[static_cast<Eigen::Index>(mult)] = lambda;
    return x;
  };

  const double bnorm = norm2(b);
  std::vector<double> x(n, 0.0);
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  std::vector<double> res = b, Kx;
  double rel = 1.0;
  for (int step = 0; step < 4; ++step) {
    const Eigen::VectorXd dx = inner(Eigen::Map<const Eigen::VectorXd>(res.data(), static_cast<Eigen::Index>(n)));
    for (std::size_t i = 0; i < n; ++i) x[i] += dx[static_cast<Eigen::Index>(i)];
    K.multiply(x, Kx);
    for (std::size_t i = 0; i < n; ++i) res[i] = b[i] - Kx[i];
    rel = norm2(res) / bnorm;
    if (!std::isfinite(rel) || rel <= 1e-2 * tol) break;
  }
  if (!(rel <= tol)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "solve_saddle_schur: relative residual %.3e exceeds %.1e after %d Schur iterations", rel, tol,
                  total_iterations);
    throw SolverError(buf);
  }
  if (stats) *stats = {total_iterations, rel};
  return x;
}

std::string to_matrix_market(const SparseMatrix& A) {
  std::string out = "%%MatrixMarket matrix coordinate real general\n";
  out += std::to_string(A.rows()) + " " + std::to_string(A.cols()) + " " + std::to_string(A.nonzeros()) + "\n";
  char buf[96];
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t p = A.row_ptr()[i]; p < A.row_ptr()[i + 1]; ++p) {
      std::snprintf(buf, sizeof buf, "%zu %d %.17g\n", i + 1, A.col_idx()[p] + 1, A.values()[p]);
      out += buf;
    }
  }
  return out;
}

}  // namespace ifem
