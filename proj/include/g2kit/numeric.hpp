#pragma once

// Rank, kernel and conversion helpers that dispatch between the exact
// (rational elimination) and float (SVD) backends behind one interface.

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "g2kit/exact_linalg.hpp"
#include "g2kit/scalar.hpp"

namespace g2kit::num {

[[nodiscard]] inline Eigen::MatrixXd to_eigen(const Mat<double>& m) {
  Eigen::MatrixXd r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

[[nodiscard]] inline Eigen::MatrixXcd to_eigen(const Mat<Complex>& m) {
  Eigen::MatrixXcd r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

// Double matrix for reports: real scalars convert entrywise, complex scalars
// realify as [[Re, -Im], [Im, Re]].
template <class S>
[[nodiscard]] Eigen::MatrixXd realify(const Mat<S>& m) {
  if constexpr (scalar_traits<S>::complex_field) {
    Eigen::MatrixXd r(2 * m.rows(), 2 * m.cols());
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) {
        const Complex z = to_complex(m(i, j));
        r(i, j) = z.real();
        r(i, m.cols() + j) = -z.imag();
        r(m.rows() + i, j) = z.imag();
        r(m.rows() + i, m.cols() + j) = z.real();
      }
    return r;
  } else {
    Eigen::MatrixXd r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) r(i, j) = to_double(m(i, j));
    return r;
  }
}

struct RankInfo {
  int rank = 0;
  // ratio between the smallest kept and the largest dropped singular value;
  // infinity when nothing is dropped or the backend is exact
  double gap = std::numeric_limits<double>::infinity();
  bool exact = false;
};

template <class S>
[[nodiscard]] RankInfo rank_with_gap(const Mat<S>& m, double rel_tol = 1e-9) {
  RankInfo info;
  if constexpr (scalar_traits<S>::exact) {
    info.rank = exact_rank(m);
    info.exact = true;
    return info;
  } else {
    const auto em = to_eigen(m);
    if (em.rows() == 0 || em.cols() == 0) return info;
    Eigen::JacobiSVD<std::decay_t<decltype(em)>> svd(em);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0) return info;
    const double cut = rel_tol * sv(0);
    int r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    info.rank = r;
    if (r > 0 && r < sv.size() && sv(r) > 0) info.gap = sv(r - 1) / sv(r);
    return info;
  }
}

// Columns spanning the kernel (empty matrix when trivial).
template <class S>
[[nodiscard]] Mat<S> kernel_cols(const Mat<S>& m, double rel_tol = 1e-9) {
  if constexpr (scalar_traits<S>::exact) {
    const auto vecs = exact_kernel(m);
    Mat<S> k(m.cols(), static_cast<int>(vecs.size()));
    for (int j = 0; j < static_cast<int>(vecs.size()); ++j)
      for (int i = 0; i < m.cols(); ++i) k(i, j) = vecs[j][i];
    return k;
  } else {
    const auto em = to_eigen(m);
    Eigen::JacobiSVD<std::decay_t<decltype(em)>> svd(em, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int r = 0;
    if (sv.size() > 0 && sv(0) > 0) {
      const double cut = rel_tol * sv(0);
      while (r < sv.size() && sv(r) > cut) ++r;
    }
    const int null_dim = m.cols() - r;
    Mat<S> k(m.cols(), null_dim);
    for (int j = 0; j < null_dim; ++j)
      for (int i = 0; i < m.cols(); ++i) k(i, j) = svd.matrixV()(i, r + j);
    return k;
  }
}

// One solution of M x = rhs; throws when the system is inconsistent.
template <class S>
[[nodiscard]] std::vector<S> solve_particular(const Mat<S>& M,
                                              const std::vector<S>& rhs,
                                              double tol = 1e-9) {
  if (static_cast<int>(rhs.size()) != M.rows())
    throw std::invalid_argument("solve_particular: rhs size mismatch");
  if constexpr (scalar_traits<S>::exact) {
    Mat<S> aug(M.rows(), M.cols() + 1);
    for (int i = 0; i < M.rows(); ++i) {
      for (int j = 0; j < M.cols(); ++j) aug(i, j) = M(i, j);
      aug(i, M.cols()) = rhs[i];
    }
    const auto ech = echelon(aug);
    std::vector<S> x(M.cols(), scalar_traits<S>::zero());
    for (std::size_t r = 0; r < ech.pivot_cols.size(); ++r) {
      const int pc = ech.pivot_cols[r];
      if (pc == M.cols())
        throw std::invalid_argument("solve_particular: inconsistent system");
      x[pc] = ech.rref(static_cast<int>(r), M.cols());
    }
    return x;
  } else {
    const auto em = to_eigen(M);
    using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
    Vec b(M.rows());
    for (int i = 0; i < M.rows(); ++i) b(i) = rhs[i];
    Eigen::JacobiSVD<std::decay_t<decltype(em)>> svd(
        em, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vec x = svd.solve(b);
    const double resid = (em * x - b).cwiseAbs().maxCoeff();
    double scale = 1.0;
    for (const auto& v : rhs) scale = std::max(scale, abs_approx(v));
    if (resid > tol * scale)
      throw std::invalid_argument("solve_particular: inconsistent system");
    std::vector<S> out(M.cols());
    for (int i = 0; i < M.cols(); ++i) out[i] = x(i);
    return out;
  }
}

template <class S>
[[nodiscard]] Mat<S> hcat(const Mat<S>& a, const Mat<S>& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("hcat: row counts differ");
  Mat<S> r(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (int j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
  }
  return r;
}

template <class S>
[[nodiscard]] std::vector<S> col_of(const Mat<S>& m, int j) {
  std::vector<S> v(m.rows());
  for (int i = 0; i < m.rows(); ++i) v[i] = m(i, j);
  return v;
}

template <class S>
[[nodiscard]] Mat<S> mat_from_cols(const std::vector<std::vector<S>>& cols,
                                   int rows) {
  Mat<S> m(rows, static_cast<int>(cols.size()));
  for (int j = 0; j < static_cast<int>(cols.size()); ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  return m;
}

}  // namespace g2kit::num
