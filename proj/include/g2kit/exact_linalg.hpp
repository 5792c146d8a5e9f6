#pragma once

// Minimal dense matrix over an arbitrary scalar field. The float paths of
// the library use Eigen; this type exists so that rank, determinant and
// kernel computations can also be certified in exact rational arithmetic,
// where "pivot is nonzero" is a statement and not a tolerance.

#include <stdexcept>
#include <utility>
#include <vector>

#include "g2kit/scalar.hpp"

namespace g2kit {

template <class S>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols,
                                     scalar_traits<S>::zero()) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = scalar_traits<S>::one();
    return m;
  }

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  S& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const S& operator()(int i, int j) const {
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("Mat: shape mismatch");
    Mat z(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int k = 0; k < x.cols_; ++k) {
        const S& xik = x(i, k);
        if (is_zero_scalar(xik, 0.0) && scalar_traits<S>::exact) continue;
        for (int j = 0; j < y.cols_; ++j) z(i, j) += xik * y(k, j);
      }
    return z;
  }
  friend Mat operator+(const Mat& x, const Mat& y) {
    Mat z(x.rows_, x.cols_);
    for (size_t t = 0; t < x.a_.size(); ++t) z.a_[t] = x.a_[t] + y.a_[t];
    return z;
  }
  friend Mat operator-(const Mat& x, const Mat& y) {
    Mat z(x.rows_, x.cols_);
    for (size_t t = 0; t < x.a_.size(); ++t) z.a_[t] = x.a_[t] - y.a_[t];
    return z;
  }

  std::vector<S> apply(const std::vector<S>& v) const {
    std::vector<S> out(rows_, scalar_traits<S>::zero());
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<S> a_;
};

// Row echelon elimination. Returns rank; optionally accumulates det (square
// input) and the reduced matrix for kernel extraction.
template <class S>
struct EchelonResult {
  int rank = 0;
  S det = scalar_traits<S>::zero();  // valid only for square input
  Mat<S> rref;                       // fully reduced echelon form
  std::vector<int> pivot_cols;
};

template <class S>
EchelonResult<S> echelon(Mat<S> m) {
  static_assert(scalar_traits<S>::exact,
                "echelon() is the exact path; use Eigen for floats");
  EchelonResult<S> res;
  const int nr = m.rows(), nc = m.cols();
  S det = scalar_traits<S>::one();
  bool det_valid = (nr == nc);
  int row = 0;
  for (int col = 0; col < nc && row < nr; ++col) {
    int piv = -1;
    for (int r = row; r < nr; ++r)
      if (!is_zero_scalar(m(r, col), 0.0)) {
        piv = r;
        break;
      }
    if (piv < 0) {
      det_valid = false;
      continue;
    }
    if (piv != row) {
      for (int j = 0; j < nc; ++j) std::swap(m(piv, j), m(row, j));
      det = -det;
    }
    const S p = m(row, col);
    det = det * p;
    for (int j = col; j < nc; ++j) m(row, j) = m(row, j) / p;
    for (int r = 0; r < nr; ++r) {
      if (r == row) continue;
      const S f = m(r, col);
      if (is_zero_scalar(f, 0.0)) continue;
      for (int j = col; j < nc; ++j) m(r, j) = m(r, j) - f * m(row, j);
    }
    res.pivot_cols.push_back(col);
    ++row;
  }
  res.rank = row;
  res.det = det_valid && res.rank == nr ? det : scalar_traits<S>::zero();
  res.rref = std::move(m);
  return res;
}

template <class S>
int exact_rank(const Mat<S>& m) {
  return echelon(m).rank;
}

template <class S>
S exact_det(const Mat<S>& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("exact_det: matrix not square");
  return echelon(m).det;
}

// Basis of the right kernel, one column vector per free column.
template <class S>
std::vector<std::vector<S>> exact_kernel(const Mat<S>& m) {
  auto e = echelon(m);
  const int nc = m.cols();
  std::vector<bool> is_pivot(nc, false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<S>> basis;
  for (int free = 0; free < nc; ++free) {
    if (is_pivot[free]) continue;
    std::vector<S> v(nc, scalar_traits<S>::zero());
    v[free] = scalar_traits<S>::one();
    for (size_t pi = 0; pi < e.pivot_cols.size(); ++pi)
      v[e.pivot_cols[pi]] = -e.rref(static_cast<int>(pi), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace g2kit
