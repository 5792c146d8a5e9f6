#pragma once

// Grassmannians of distinguished 3-planes: symplectic classification,
// bilinear-form orthonormalization, membership predicates for associative,
// isotropic-associative and B-real associative planes, and the linearized
// tangent-space systems at such planes.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "g2kit/numeric.hpp"
#include "g2kit/octonion.hpp"
#include "g2kit/scalar.hpp"

namespace g2kit::grass {

// ---- scalar square roots ----------------------------------------------------

inline bool scalar_sqrt(double x, double* out) {
  if (x < 0) return false;
  *out = std::sqrt(x);
  return true;
}
inline bool scalar_sqrt(const Complex& x, Complex* out) {
  *out = std::sqrt(x);  // principal branch
  return true;
}
inline bool rational_sqrt(const Rational& x, Rational* out) {
  if (x < 0) return false;
  mpz_class num = x.get_num(), den = x.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t()))
    return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  *out = Rational(rn) / Rational(rd);
  return true;
}
inline bool scalar_sqrt(const Rational& x, Rational* out) {
  return rational_sqrt(x, out);
}
inline bool scalar_sqrt(const GaussRat& x, GaussRat* out) {
  if (x.im == 0) {
    Rational r;
    if (x.re >= 0 && rational_sqrt(x.re, &r)) {
      *out = GaussRat(r);
      return true;
    }
    if (x.re < 0 && rational_sqrt(Rational(-x.re), &r)) {
      *out = GaussRat(Rational(0), r);
      return true;
    }
    return false;
  }
  // (c + d i)^2 = x needs |x| = c^2 + d^2 rational-square, c^2 = (re+|x|)/2
  Rational norm2 = x.re * x.re + x.im * x.im, norm;
  if (!rational_sqrt(norm2, &norm)) return false;
  Rational c2 = (x.re + norm) / 2, c;
  if (!rational_sqrt(c2, &c) || c == 0) return false;
  *out = GaussRat(c, Rational(x.im / (2 * c)));
  return true;
}

// ---- B-orthonormal frames ---------------------------------------------------

// Gram-Schmidt for a (possibly complex) symmetric bilinear form, with pivoting
// on |B(v,v)|. Throws when the restriction of B to the span degenerates.  If
// require_unit is false, steps whose normalizing square root is not
// representable in the scalar field keep the unnormalized (still orthogonal)
// vector; with require_unit the same situation throws.
template <class S>
[[nodiscard]] Mat<S> b_orthonormalize(const Mat<S>& basis, const Mat<S>& B,
                                      double tol = 1e-10,
                                      bool require_unit = true) {
  const int n = basis.rows(), k = basis.cols();
  if (B.rows() != n || B.cols() != n)
    throw std::invalid_argument("b_orthonormalize: form and basis sizes differ");
  auto pair = [&](const std::vector<S>& u, const std::vector<S>& v) {
    S acc = scalar_traits<S>::zero();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += u[i] * B(i, j) * v[j];
    return acc;
  };
  std::vector<std::vector<S>> pending;
  for (int j = 0; j < k; ++j) pending.push_back(num::col_of(basis, j));
  double scale = 1e-30;
  for (const auto& v : pending) scale = std::max(scale, abs_approx(pair(v, v)));
  std::vector<std::vector<S>> frame;
  std::vector<S> frame_bvv;  // B(u,u) for unnormalized frame vectors
  for (int step = 0; step < k; ++step) {
    int best = -1;
    double best_abs = scalar_traits<S>::exact ? 0.0 : tol * scale;
    for (int r = 0; r < static_cast<int>(pending.size()); ++r) {
      const double a = abs_approx(pair(pending[r], pending[r]));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (best < 0)
      throw std::invalid_argument(
          "b_orthonormalize: the form degenerates on the span at step " +
          std::to_string(step + 1) +
          " (an isotropic or dependent direction remains)");
    std::vector<S> v = pending[best];
    pending.erase(pending.begin() + best);
    S bvv = pair(v, v);
    S root;
    if (scalar_sqrt(bvv, &root) && !is_zero_scalar(root, 0.0)) {
      for (auto& x : v) x = x / root;
      bvv = pair(v, v);  // +-1 up to rounding
    } else if (require_unit) {
      throw std::domain_error(
          "b_orthonormalize: normalizing square root is not representable in "
          "the exact backend; use the float backend for this input");
    }
    // orthogonalize the rest against v
    for (auto& w : pending) {
      S coeff = pair(v, w) / bvv;
      for (int i = 0; i < n; ++i) w[i] -= coeff * v[i];
    }
    frame.push_back(std::move(v));
    frame_bvv.push_back(std::move(bvv));
  }
  return num::mat_from_cols(frame, n);
}

// ---- symplectic linear algebra ----------------------------------------------

// The standard symplectic matrix with omega(e_i, f_j) = +delta_ij on
// R^{2n} = span(e_1..e_n, f_1..f_n).
template <class S>
[[nodiscard]] Mat<S> omega_standard_matrix(int n) {
  Mat<S> w(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j < 2 * n; ++j) w(i, j) = scalar_traits<S>::zero();
  for (int i = 0; i < n; ++i) {
    w(i, n + i) = scalar_traits<S>::one();
    w(n + i, i) = -scalar_traits<S>::one();
  }
  return w;
}

template <class S>
[[nodiscard]] S form_value(const Mat<S>& W, const std::vector<S>& u,
                           const std::vector<S>& v) {
  S acc = scalar_traits<S>::zero();
  for (int i = 0; i < W.rows(); ++i)
    for (int j = 0; j < W.cols(); ++j) acc += u[i] * W(i, j) * v[j];
  return acc;
}

// Basis of L^omega = {v : omega(u, v) = 0 for all u in L}.
template <class S>
[[nodiscard]] Mat<S> omega_complement(const Mat<S>& basis, const Mat<S>& W) {
  if (basis.rows() != W.rows())
    throw std::invalid_argument("omega_complement: ambient dimensions differ");
  return num::kernel_cols(basis.transpose() * W);
}

enum class SymplecticClass {
  symplectic,
  isotropic,
  coisotropic,
  lagrangian,
  generic
};

[[nodiscard]] inline std::string to_string(SymplecticClass c) {
  switch (c) {
    case SymplecticClass::symplectic: return "symplectic";
    case SymplecticClass::isotropic: return "isotropic";
    case SymplecticClass::coisotropic: return "coisotropic";
    case SymplecticClass::lagrangian: return "lagrangian";
    case SymplecticClass::generic: return "generic";
  }
  return "?";
}

struct ClassifyResult {
  SymplecticClass verdict = SymplecticClass::generic;
  int plane_dim = 0;
  int complement_dim = 0;
  int intersection_dim = 0;
};

template <class S>
[[nodiscard]] ClassifyResult classify_symplectic(const Mat<S>& basis,
                                                 const Mat<S>& W,
                                                 double tol = 1e-9) {
  const int m = W.rows();
  if (W.cols() != m || m % 2 != 0)
    throw std::invalid_argument("classify_symplectic: form must be 2n x 2n");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (!is_zero_scalar(S(W(i, j) + W(j, i)), tol))
        throw std::invalid_argument("classify_symplectic: form is not skew");
  if (basis.rows() != m)
    throw std::invalid_argument(
        "classify_symplectic: plane does not live in the form's space");
  const int k = basis.cols();
  if (num::rank_with_gap(basis, tol).rank != k)
    throw std::invalid_argument(
        "classify_symplectic: basis columns are linearly dependent");

  ClassifyResult res;
  res.plane_dim = k;
  const Mat<S> comp = omega_complement(basis, W);
  res.complement_dim = comp.cols();
  const int joint = num::rank_with_gap(num::hcat(basis, comp), tol).rank;
  res.intersection_dim = k + res.complement_dim - joint;

  const bool isotropic = res.intersection_dim == k;          // L inside L^w
  const bool coisotropic = res.intersection_dim == res.complement_dim;
  if (isotropic && coisotropic)
    res.verdict = SymplecticClass::lagrangian;
  else if (isotropic)
    res.verdict = SymplecticClass::isotropic;
  else if (coisotropic)
    res.verdict = SymplecticClass::coisotropic;
  else if (res.intersection_dim == 0)
    res.verdict = SymplecticClass::symplectic;
  else
    res.verdict = SymplecticClass::generic;
  return res;
}

template <class S>
[[nodiscard]] bool span_equal(const Mat<S>& a, const Mat<S>& b,
                              double tol = 1e-9) {
  if (a.rows() != b.rows()) return false;
  const int ra = num::rank_with_gap(a, tol).rank;
  const int rb = num::rank_with_gap(b, tol).rank;
  return ra == rb && num::rank_with_gap(num::hcat(a, b), tol).rank == ra;
}

// ---- unitary frames ---------------------------------------------------------

struct FrameCheck {
  bool unitary = false;
  double residual = 0.0;
};

// Columns of X + iY are h-unitary iff X^T X + Y^T Y = I and X^T Y symmetric.
template <class SR>
[[nodiscard]] FrameCheck unitary_frame_check(const Mat<SR>& X, const Mat<SR>& Y,
                                             double tol = 1e-9) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw std::invalid_argument("unitary_frame_check: mismatched X, Y");
  const int k = X.cols();
  FrameCheck fc;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      SR gram = scalar_traits<SR>::zero();
      SR skew = scalar_traits<SR>::zero();
      for (int r = 0; r < X.rows(); ++r) {
        gram += X(r, i) * X(r, j) + Y(r, i) * Y(r, j);
        skew += X(r, i) * Y(r, j) - Y(r, i) * X(r, j);
      }
      if (i == j) gram -= scalar_traits<SR>::one();
      fc.residual = std::max(fc.residual,
                             std::max(abs_approx(gram), abs_approx(skew)));
    }
  fc.unitary = fc.residual <= tol;
  return fc;
}

// Realified input: rows 1..7 hold the e-part, rows 8..14 the f-part.
template <class SR>
[[nodiscard]] FrameCheck unitary_frame_check(const Mat<SR>& basis14,
                                             double tol = 1e-9) {
  if (basis14.rows() != 14)
    throw std::invalid_argument("unitary_frame_check: need 14 rows");
  Mat<SR> X(7, basis14.cols()), Y(7, basis14.cols());
  for (int j = 0; j < basis14.cols(); ++j)
    for (int i = 0; i < 7; ++i) {
      X(i, j) = basis14(i, j);
      Y(i, j) = basis14(7 + i, j);
    }
  return unitary_frame_check(X, Y, tol);
}

// ---- membership predicates --------------------------------------------------

template <class SR>
using CScalar = typename complex_of<SR>::type;

template <class SR>
[[nodiscard]] oct::Octonion<CScalar<SR>> c7_column(const Mat<SR>& basis14,
                                                   int j) {
  std::vector<CScalar<SR>> v(7);
  for (int i = 0; i < 7; ++i)
    v[i] = CScalar<SR>(basis14(i, j), basis14(7 + i, j));
  return oct::Octonion<CScalar<SR>>::imaginary(v);
}

template <class SR>
[[nodiscard]] std::vector<SR> realify_imaginary(
    const oct::Octonion<CScalar<SR>>& o) {
  std::vector<SR> v(14);
  for (int i = 0; i < 7; ++i) {
    if constexpr (scalar_traits<SR>::exact) {
      v[i] = o.c[1 + i].re;
      v[7 + i] = o.c[1 + i].im;
    } else {
      v[i] = o.c[1 + i].real();
      v[7 + i] = o.c[1 + i].imag();
    }
  }
  return v;
}

// A 3-plane in the imaginary octonions (real or complex coefficients) is
// associative iff the associator vanishes on one - hence any - basis triple.
template <class SA>
[[nodiscard]] bool is_associative(const Mat<SA>& basis, double tol = 1e-10) {
  if (basis.rows() != 7 || basis.cols() != 3)
    throw std::invalid_argument("is_associative: need a 7 x 3 basis");
  std::array<oct::Octonion<SA>, 3> o;
  for (int j = 0; j < 3; ++j)
    o[j] = oct::Octonion<SA>::imaginary(num::col_of(basis, j));
  return oct::associator(o[0], o[1], o[2]).max_abs() <= tol;
}

template <class SR>
[[nodiscard]] bool is_isotropic_plane(const Mat<SR>& basis14,
                                      double tol = 1e-10) {
  if (basis14.rows() != 14)
    throw std::invalid_argument("is_isotropic_plane: need 14 rows");
  const Mat<SR> W = omega_standard_matrix<SR>(7);
  for (int i = 0; i < basis14.cols(); ++i)
    for (int j = i + 1; j < basis14.cols(); ++j)
      if (!is_zero_scalar(form_value(W, num::col_of(basis14, i),
                                     num::col_of(basis14, j)),
                          tol))
        return false;
  return true;
}

template <class SR>
[[nodiscard]] bool is_isotropic_associative(const Mat<SR>& basis14,
                                            double tol = 1e-10) {
  if (basis14.rows() != 14 || basis14.cols() != 3)
    throw std::invalid_argument("is_isotropic_associative: need 14 x 3");
  if (!is_isotropic_plane(basis14, tol)) return false;
  return oct::associator(c7_column(basis14, 0), c7_column(basis14, 1),
                         c7_column(basis14, 2))
             .max_abs() <= tol;
}

template <class S>
[[nodiscard]] S core_det(const Mat<S>& m) {
  if constexpr (scalar_traits<S>::exact) {
    return exact_det(m);
  } else {
    if (m.rows() == 1) return m(0, 0);
    if (m.rows() == 2) return S(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    return S(m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)));
  }
}

// B-real: the complex bilinear pairing restricted to the plane is real and
// positive definite, and the complex span is associative.
template <class SR>
[[nodiscard]] bool is_b_real_associative(const Mat<SR>& basis14,
                                         double tol = 1e-10) {
  if (basis14.rows() != 14 || basis14.cols() != 3)
    throw std::invalid_argument("is_b_real_associative: need 14 x 3");
  using C = CScalar<SR>;
  std::array<oct::Octonion<C>, 3> o;
  for (int j = 0; j < 3; ++j) o[j] = c7_column(basis14, j);
  Mat<SR> re(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const C bij = oct::bilinear_B(o[i], o[j]);
      if constexpr (scalar_traits<SR>::exact) {
        if (!is_zero_scalar(Rational(bij.im), tol)) return false;
        re(i, j) = bij.re;
      } else {
        if (std::abs(bij.imag()) > tol) return false;
        re(i, j) = bij.real();
      }
    }
  // Sylvester: positive leading minors
  Mat<SR> m1(1, 1), m2(2, 2);
  m1(0, 0) = re(0, 0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m2(i, j) = re(i, j);
  auto pos = [&](const SR& d) {
    if constexpr (scalar_traits<SR>::exact) return d > 0;
    else return d > tol;
  };
  if (!pos(core_det(m1)) || !pos(core_det(m2)) || !pos(core_det(re)))
    return false;
  return oct::associator(o[0], o[1], o[2]).max_abs() <= tol;
}

// ---- tangent spaces ---------------------------------------------------------

enum class TangentKind {
  associative,
  isotropic,  // includes Lagrangian (k = 7)
  isotropic_associative,
  b_real_associative
};

[[nodiscard]] inline std::string to_string(TangentKind k) {
  switch (k) {
    case TangentKind::associative: return "associative";
    case TangentKind::isotropic: return "isotropic";
    case TangentKind::isotropic_associative: return "isotropic-associative";
    case TangentKind::b_real_associative: return "b-real-associative";
  }
  return "?";
}

struct TangentReport {
  TangentKind kind = TangentKind::associative;
  int plane_dim = 0;
  int unknowns = 0;  // over the assembly scalar field
  int rank = 0;
  int nullity = 0;
  double sv_gap = 0.0;  // infinity for the exact backend
  bool exact_backend = false;
  bool complex_scalars = false;
  // isotropic-associative only: nullity when the isotropy rows keep just the
  // JL-components of the deformation
  std::optional<int> nullity_f_only;
  Eigen::MatrixXd constraint;  // realified, for reporting
  Eigen::MatrixXd kernel;      // realified kernel columns
  double kernel_residual = 0.0;
};

namespace detail {

template <class S>
void finalize_report(const Mat<S>& sys, TangentReport* rep, double tol) {
  const auto info = num::rank_with_gap(sys, tol);
  rep->unknowns = sys.cols();
  rep->rank = info.rank;
  rep->nullity = sys.cols() - info.rank;
  rep->sv_gap = info.gap;
  rep->exact_backend = info.exact;
  rep->complex_scalars = scalar_traits<S>::complex_field;
  rep->constraint = num::realify(sys);
  rep->kernel = num::realify(num::kernel_cols(sys, tol));
  rep->kernel_residual = 0.0;
  if (rep->kernel.cols() > 0) {
    const Eigen::MatrixXd prod = rep->constraint * rep->kernel;
    rep->kernel_residual = prod.cwiseAbs().maxCoeff();
  }
}

}  // namespace detail

// Deformations of an associative plane inside Im O: in a B-orthonormal
// associative frame (e1, e2, e3 = e1 x e2), a motion t -> span(e_j + t v_j)
// with v_j in the B-complement stays associative to first order iff
// sum_j e_j x v_j = 0.
template <class SA>
[[nodiscard]] TangentReport tangent_associative(const Mat<SA>& basis,
                                                double tol = 1e-9) {
  if (!is_associative(basis, std::max(tol, 1e-9) * 10))
    throw std::invalid_argument(
        "tangent_associative: the plane is not associative");
  TangentReport rep;
  rep.kind = TangentKind::associative;
  rep.plane_dim = 3;
  Mat<SA> frame =
      b_orthonormalize(basis, Mat<SA>::identity(7), tol, /*require_unit=*/false);
  std::array<oct::Octonion<SA>, 3> e;
  for (int j = 0; j < 3; ++j)
    e[j] = oct::Octonion<SA>::imaginary(num::col_of(frame, j));
  e[2] = oct::cross(e[0], e[1]);  // exact associative frame, fixes orientation

  // B-complement of the plane
  Mat<SA> rows(3, 7);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 7; ++i) rows(j, i) = e[j].c[1 + i];
  const Mat<SA> comp = num::kernel_cols(rows);
  if (comp.cols() != 4)
    throw std::invalid_argument(
        "tangent_associative: the bilinear form degenerates on the plane");
  std::array<oct::Octonion<SA>, 4> w;
  for (int m = 0; m < 4; ++m)
    w[m] = oct::Octonion<SA>::imaginary(num::col_of(comp, m));

  Mat<SA> sys(7, 12);
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 12; ++c) sys(r, c) = scalar_traits<SA>::zero();
  for (int j = 0; j < 3; ++j)
    for (int m = 0; m < 4; ++m) {
      const auto x = oct::cross(e[j], w[m]);
      for (int r = 0; r < 7; ++r) sys(r, 4 * j + m) = x.c[1 + r];
    }
  detail::finalize_report(sys, &rep, tol);
  return rep;
}

// Deformations of a g-isotropic k-plane in R^14: v_j in the g-complement with
// omega(e_i, v_j) symmetric in (i, j).
template <class SR>
[[nodiscard]] TangentReport tangent_isotropic(const Mat<SR>& basis14,
                                              double tol = 1e-9) {
  static_assert(!scalar_traits<SR>::complex_field,
                "isotropic tangent systems take realified input");
  if (basis14.rows() != 14)
    throw std::invalid_argument("tangent_isotropic: need 14 rows");
  if (!is_isotropic_plane(basis14, std::max(tol, 1e-9) * 10))
    throw std::invalid_argument("tangent_isotropic: the plane is not isotropic");
  const int k = basis14.cols();
  TangentReport rep;
  rep.kind = TangentKind::isotropic;
  rep.plane_dim = k;
  Mat<SR> frame = b_orthonormalize(basis14, Mat<SR>::identity(14), tol,
                                   /*require_unit=*/false);
  const Mat<SR> comp = num::kernel_cols(frame.transpose());
  const int c = comp.cols();  // 14 - k
  const Mat<SR> W = omega_standard_matrix<SR>(7);
  const Mat<SR> pair = frame.transpose() * W * comp;  // pair(i, m) = w(e_i, w_m)

  Mat<SR> sys(k * (k - 1) / 2, k * c);
  for (int r = 0; r < sys.rows(); ++r)
    for (int cc = 0; cc < sys.cols(); ++cc)
      sys(r, cc) = scalar_traits<SR>::zero();
  int row = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j, ++row)
      for (int m = 0; m < c; ++m) {
        sys(row, j * c + m) += pair(i, m);
        sys(row, i * c + m) -= pair(j, m);
      }
  detail::finalize_report(sys, &rep, tol);
  return rep;
}

// Shared assembly for the isotropic-associative and B-real associative kinds:
// deformations split as f_i (in JL) + v_i (in the B-complement V); the
// associativity rows constrain only the V-part, the defining scalar rows
// constrain the JL-part.
template <class SR>
[[nodiscard]] TangentReport tangent_ia_or_breal(const Mat<SR>& basis14,
                                                bool b_real_kind,
                                                double tol = 1e-9) {
  static_assert(!scalar_traits<SR>::complex_field,
                "these tangent systems take realified input");
  using C = CScalar<SR>;
  if (basis14.rows() != 14 || basis14.cols() != 3)
    throw std::invalid_argument("tangent space: need a 14 x 3 basis");
  const double mtol = std::max(tol, 1e-9) * 10;
  if (b_real_kind ? !is_b_real_associative(basis14, mtol)
                  : !is_isotropic_associative(basis14, mtol))
    throw std::invalid_argument(
        std::string("tangent space: the plane is not ") +
        (b_real_kind ? "B-real associative" : "isotropic-associative"));

  TangentReport rep;
  rep.kind = b_real_kind ? TangentKind::b_real_associative
                         : TangentKind::isotropic_associative;
  rep.plane_dim = 3;

  Mat<SR> frame = b_orthonormalize(basis14, Mat<SR>::identity(14), tol,
                                   /*require_unit=*/false);
  std::array<oct::Octonion<C>, 3> e;
  for (int j = 0; j < 3; ++j) e[j] = c7_column(frame, j);
  // replace the third frame vector by the cross of the first two; for the
  // planes these kinds describe it stays inside the plane
  {
    const auto cr = realify_imaginary<SR>(oct::cross(e[0], e[1]));
    Mat<SR> crm = num::mat_from_cols<SR>({cr}, 14);
    if (num::rank_with_gap(num::hcat(frame, crm), tol).rank != 3)
      throw std::invalid_argument(
          "tangent space: the plane is not closed under the cross product, "
          "so the frame model does not apply");
    for (int i = 0; i < 14; ++i) frame(i, 2) = cr[i];
    e[2] = c7_column(frame, 2);
  }

  // V = B-complement: real kernel of Re B(e_i, .) = 0, Im B(e_i, .) = 0,
  // using B(e_i, x + i y) = sum_m e_i[m] (x[m] + i y[m])
  Mat<SR> brows(6, 14);
  for (int i = 0; i < 3; ++i)
    for (int m = 0; m < 7; ++m) {
      const C em = e[i].c[1 + m];
      SR re, im;
      if constexpr (scalar_traits<SR>::exact) {
        re = em.re;
        im = em.im;
      } else {
        re = em.real();
        im = em.imag();
      }
      // real direction m contributes em to B; imaginary direction 7+m
      // contributes i*em
      brows(i, m) = re;
      brows(3 + i, m) = im;
      brows(i, 7 + m) = -im;
      brows(3 + i, 7 + m) = re;
    }
  const Mat<SR> V = num::kernel_cols(brows);
  if (V.cols() != 8)
    throw std::invalid_argument(
        "tangent space: the bilinear form degenerates on the plane");

  // JL basis: J e_i, realified multiplication by i
  Mat<SR> JL(14, 3);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 7; ++i) {
      JL(i, j) = -frame(7 + i, j);
      JL(7 + i, j) = frame(i, j);
    }

  const int nf = 9, nv = 24;
  const int nrows = 14 + (b_real_kind ? 6 : 3);
  Mat<SR> sys(nrows, nf + nv);
  for (int r = 0; r < nrows; ++r)
    for (int c = 0; c < nf + nv; ++c) sys(r, c) = scalar_traits<SR>::zero();

  // associativity rows: sum_i e_i x v_i = 0 (14 real components)
  for (int i = 0; i < 3; ++i)
    for (int m = 0; m < 8; ++m) {
      oct::Octonion<C> wm;
      {
        std::vector<C> v(7);
        for (int t = 0; t < 7; ++t) v[t] = C(V(t, m), V(7 + t, m));
        wm = oct::Octonion<C>::imaginary(v);
      }
      const auto x = realify_imaginary<SR>(oct::cross(e[i], wm));
      for (int r = 0; r < 14; ++r) sys(r, nf + 8 * i + m) = x[r];
    }

  const Mat<SR> W = omega_standard_matrix<SR>(7);
  if (!b_real_kind) {
    // isotropy rows on the full deformation f_i + v_i
    Mat<SR> pf = frame.transpose() * W * JL;  // pf(i, l) = w(e_i, J e_l)
    Mat<SR> pv = frame.transpose() * W * V;   // pv(i, m) = w(e_i, w_m)
    int row = 14;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j, ++row) {
        for (int l = 0; l < 3; ++l) {
          sys(row, 3 * j + l) += pf(i, l);
          sys(row, 3 * i + l) -= pf(j, l);
        }
        for (int m = 0; m < 8; ++m) {
          sys(row, nf + 8 * j + m) += pv(i, m);
          sys(row, nf + 8 * i + m) -= pv(j, m);
        }
      }
  } else {
    // B-reality rows: the JL coefficient matrix must be skew
    int row = 14;
    for (int i = 0; i < 3; ++i, ++row) sys(row, 3 * i + i) = SR(1);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j, ++row) {
        sys(row, 3 * i + j) = SR(1);
        sys(row, 3 * j + i) += SR(1);
      }
  }

  detail::finalize_report(sys, &rep, tol);

  if (!b_real_kind) {
    // variant: isotropy rows acting on the JL-part only
    Mat<SR> sys2 = sys;
    for (int row = 14; row < 17; ++row)
      for (int c = nf; c < nf + nv; ++c) sys2(row, c) = scalar_traits<SR>::zero();
    rep.nullity_f_only =
        sys2.cols() - num::rank_with_gap(sys2, tol).rank;
  }
  return rep;
}

template <class S>
[[nodiscard]] TangentReport tangent_dimension(const Mat<S>& basis,
                                              TangentKind kind,
                                              double tol = 1e-9) {
  if (kind == TangentKind::associative) {
    if (basis.rows() != 7)
      throw std::invalid_argument(
          "tangent_dimension: associative planes need 7 rows");
    return tangent_associative(basis, tol);
  }
  if constexpr (scalar_traits<S>::complex_field) {
    throw std::invalid_argument(
        "tangent_dimension: this kind takes realified (14-row, real scalar) "
        "input");
  } else {
    switch (kind) {
      case TangentKind::isotropic:
        return tangent_isotropic(basis, tol);
      case TangentKind::isotropic_associative:
        return tangent_ia_or_breal(basis, false, tol);
      case TangentKind::b_real_associative:
        return tangent_ia_or_breal(basis, true, tol);
      default:
        throw std::invalid_argument("tangent_dimension: unknown kind");
    }
  }
}

}  // namespace g2kit::grass
