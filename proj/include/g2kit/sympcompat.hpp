#pragma once

// Compatibility between the standard symplectic structure on R^{2n} = C^n and
// complex-geometric data: the chart of compatible complex structures J,
// retraction paths inside it, realified metric pencils of a complex symmetric
// form, complex bilinear forms recovered from skew-compatible metrics, and the
// (1,0)-projection identity.

#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "g2kit/grassmann.hpp"
#include "g2kit/numeric.hpp"
#include "g2kit/scalar.hpp"

namespace g2kit::symp {

// J0 = [[0, -I], [I, 0]]: multiplication by i on R^{2n} = C^n.
[[nodiscard]] inline Eigen::MatrixXd std_j(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  return j;
}

// W = [[0, I], [-I, 0]]: omega(e_i, f_j) = +delta_ij.
[[nodiscard]] inline Eigen::MatrixXd std_omega(int n) {
  return -std_j(n);
}

// Realification of a complex n x n matrix acting on C^n = R^{2n}.
[[nodiscard]] inline Eigen::MatrixXd iota_embed(const Eigen::MatrixXcd& A) {
  const int n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("iota_embed: square only");
  Eigen::MatrixXd M(2 * n, 2 * n);
  M.topLeftCorner(n, n) = A.real();
  M.topRightCorner(n, n) = -A.imag();
  M.bottomLeftCorner(n, n) = A.imag();
  M.bottomRightCorner(n, n) = A.real();
  return M;
}

// A real 2n x 2n matrix is complex linear iff it commutes with J0.
[[nodiscard]] inline bool is_complex_linear(const Eigen::MatrixXd& M,
                                            double tol = 1e-10) {
  const int m = M.rows();
  if (M.cols() != m || m % 2 != 0)
    throw std::invalid_argument("is_complex_linear: need a 2n x 2n matrix");
  const Eigen::MatrixXd j = std_j(m / 2);
  return (M * j - j * M).cwiseAbs().maxCoeff() <= tol;
}

// Inverse of iota_embed; throws when M is not complex linear.
[[nodiscard]] inline Eigen::MatrixXcd complex_part(const Eigen::MatrixXd& M,
                                                   double tol = 1e-10) {
  if (!is_complex_linear(M, tol))
    throw std::invalid_argument("complex_part: matrix is not complex linear");
  const int n = M.rows() / 2;
  Eigen::MatrixXcd A(n, n);
  A.real() = M.topLeftCorner(n, n);
  A.imag() = M.bottomLeftCorner(n, n);
  return A;
}

// ---- signatures and the realified metric pencil ------------------------------

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

[[nodiscard]] inline Signature signature_of(const Eigen::MatrixXd& sym,
                                            double tol = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Signature s;
  const double scale = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v > tol * scale)
      ++s.positive;
    else if (v < -tol * scale)
      ++s.negative;
    else
      ++s.zero;
  }
  return s;
}

// Realified quadratic form of Re(e^{-it} b) for a complex symmetric b:
//   G_t = cos t [[Re b, -Im b], [-Im b, -Re b]]
//       + sin t [[Im b,  Re b], [ Re b, -Im b]].
[[nodiscard]] inline Eigen::MatrixXd metric_family(const Eigen::MatrixXcd& b,
                                                   double t) {
  const int n = b.rows();
  if (b.cols() != n) throw std::invalid_argument("metric_family: square only");
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("metric_family: form must be symmetric");
  const Eigen::MatrixXd re = b.real(), im = b.imag();
  Eigen::MatrixXd g0(2 * n, 2 * n), g1(2 * n, 2 * n);
  g0.topLeftCorner(n, n) = re;
  g0.topRightCorner(n, n) = -im;
  g0.bottomLeftCorner(n, n) = -im;
  g0.bottomRightCorner(n, n) = -re;
  g1.topLeftCorner(n, n) = im;
  g1.topRightCorner(n, n) = re;
  g1.bottomLeftCorner(n, n) = re;
  g1.bottomRightCorner(n, n) = -im;
  return std::cos(t) * g0 + std::sin(t) * g1;
}

// ---- the chart of compatible complex structures -------------------------------

// Membership in the normalized chart: J^2 = -I, J symplectic, and
// P = W J = [[I, B], [B^T, I + B^2]] symmetric positive definite with
// identity top-left block (B symmetric follows).
struct CalJVerdict {
  bool in_class = false;
  bool square_is_minus_identity = false;
  bool symplectic = false;
  bool metric_symmetric_positive = false;
  bool chart_normalized = false;  // top-left block of W J is the identity
  double residual = 0.0;          // largest violation among the equalities
};

[[nodiscard]] inline CalJVerdict is_in_cal_J(const Eigen::MatrixXd& J,
                                             double tol = 1e-9) {
  const int m = J.rows();
  if (J.cols() != m || m % 2 != 0)
    throw std::invalid_argument("is_in_cal_J: need a 2n x 2n matrix");
  const int n = m / 2;
  const Eigen::MatrixXd W = std_omega(n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
  CalJVerdict v;

  const double r_sq = (J * J + I).cwiseAbs().maxCoeff();
  v.square_is_minus_identity = r_sq <= tol;

  const double r_sp = (J.transpose() * W * J - W).cwiseAbs().maxCoeff();
  v.symplectic = r_sp <= tol;

  const Eigen::MatrixXd P = W * J;
  const double r_sym = (P - P.transpose()).cwiseAbs().maxCoeff();
  bool positive = r_sym <= tol;
  if (positive) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (P + P.transpose()));
    positive = es.eigenvalues().minCoeff() > tol;
  }
  v.metric_symmetric_positive = positive;

  const double r_chart =
      (P.topLeftCorner(n, n) - Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  v.chart_normalized = r_chart <= tol;

  v.residual = std::max(std::max(r_sq, r_sp), std::max(r_sym, r_chart));
  v.in_class = v.square_is_minus_identity && v.symplectic &&
               v.metric_symmetric_positive && v.chart_normalized;
  return v;
}

// Chart point from a symmetric parameter matrix:
// P = [[I, B], [B^T, I + B B^T]], J = J0 P.
[[nodiscard]] inline Eigen::MatrixXd cal_j_from_parameter(
    const Eigen::MatrixXd& B) {
  const int n = B.rows();
  if (B.cols() != n || (B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument(
        "cal_j_from_parameter: parameter must be symmetric");
  Eigen::MatrixXd P(2 * n, 2 * n);
  P.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  P.topRightCorner(n, n) = B;
  P.bottomLeftCorner(n, n) = B.transpose();
  P.bottomRightCorner(n, n) =
      Eigen::MatrixXd::Identity(n, n) + B * B.transpose();
  return std_j(n) * P;
}

[[nodiscard]] inline Eigen::MatrixXd random_cal_j(int n,
                                                  std::mt19937_64& rng,
                                                  double amplitude = 1.0) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  Eigen::MatrixXd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) B(i, j) = B(j, i) = u(rng);
  return cal_j_from_parameter(B);
}

// Straight-line retraction in the chart parameter: extracts B from J1 and
// returns the chart point of t B. Endpoints: t = 0 gives J0, t = 1 gives J1.
[[nodiscard]] inline Eigen::MatrixXd j_retract(const Eigen::MatrixXd& J1,
                                               double t, double tol = 1e-8) {
  const auto verdict = is_in_cal_J(J1, tol);
  if (!verdict.in_class)
    throw std::invalid_argument(
        "j_retract: endpoint is not in the normalized chart (residual " +
        std::to_string(verdict.residual) + ")");
  const int n = J1.rows() / 2;
  const Eigen::MatrixXd P = std_omega(n) * J1;
  Eigen::MatrixXd B = P.topRightCorner(n, n);
  B = 0.5 * (B + B.transpose());  // symmetrize away float noise
  return cal_j_from_parameter(t * B);
}

// ---- Darboux frames adapted to a Lagrangian -----------------------------------

// Builds a symplectic frame F = [e | f] with span(e) = span(basis):
// e is an orthogonalized basis of the Lagrangian, f solves
// omega(e_i, f_j) = delta_ij and is corrected by e-directions so that
// omega(f_i, f_j) = 0. Verifies F^T W F = W at the end.
template <class SR>
[[nodiscard]] Mat<SR> omega_standard_frame(const Mat<SR>& basis,
                                           double tol = 1e-9) {
  static_assert(!scalar_traits<SR>::complex_field,
                "omega_standard_frame: realified input expected");
  const int m = basis.rows();
  if (m % 2 != 0 || basis.cols() != m / 2)
    throw std::invalid_argument(
        "omega_standard_frame: need n columns in 2n rows");
  const int n = m / 2;
  const Mat<SR> W = grass::omega_standard_matrix<SR>(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (!is_zero_scalar(grass::form_value(W, num::col_of(basis, i),
                                            num::col_of(basis, j)),
                          tol))
        throw std::invalid_argument(
            "omega_standard_frame: the plane is not Lagrangian");

  Mat<SR> e = grass::b_orthonormalize(basis, Mat<SR>::identity(m), tol,
                                      /*require_unit=*/false);
  // particular solutions of omega(e_i, f_j) = delta_ij
  const Mat<SR> M = e.transpose() * W;  // n x 2n
  std::vector<std::vector<SR>> f(n);
  for (int j = 0; j < n; ++j) {
    std::vector<SR> rhs(n, scalar_traits<SR>::zero());
    rhs[j] = scalar_traits<SR>::one();
    f[j] = num::solve_particular(M, rhs, tol);
  }
  // correct f_j by e-combinations to kill omega(f_i, f_j)
  Mat<SR> A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = grass::form_value(W, f[i], f[j]);
  const SR half = scalar_traits<SR>::one() / SR(2);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const SR c = half * A(i, j);
      for (int r = 0; r < m; ++r) f[j][r] += c * e(r, i);
    }
  Mat<SR> F(m, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < m; ++r) {
      F(r, j) = e(r, j);
      F(r, n + j) = f[j][r];
    }
  // final frame check
  const Mat<SR> G = F.transpose() * W * F;
  double resid = 0.0;
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j < 2 * n; ++j)
      resid = std::max(resid, abs_approx(SR(G(i, j) - W(i, j))));
  if (resid > tol)
    throw std::invalid_argument(
        "omega_standard_frame: frame verification failed (residual " +
        std::to_string(resid) + ")");
  return F;
}

// ---- skew-compatible metrics and the (1,0) projection --------------------------

// For g with g(Ju, Jv) = -g(u, v), the complex bilinear form
// B(u, v) = g(u, v) - i g(Ju, v) in the complex basis e_1..e_n.
[[nodiscard]] inline Eigen::MatrixXcd bilinear_from_skew(
    const Eigen::MatrixXd& g, const Eigen::MatrixXd& J, double tol = 1e-9) {
  const int m = g.rows();
  if (g.cols() != m || J.rows() != m || J.cols() != m || m % 2 != 0)
    throw std::invalid_argument("bilinear_from_skew: dimension mismatch");
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("bilinear_from_skew: metric must be symmetric");
  if ((J.transpose() * g * J + g).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument(
        "bilinear_from_skew: metric is not skew-compatible with J "
        "(need g(Ju, Jv) = -g(u, v))");
  const int n = m / 2;
  // B_ij = g(e_i, e_j) - i g(J e_i, e_j), with (J e_i)_r = J(r, i).
  const Eigen::MatrixXd jg = J.transpose() * g;
  Eigen::MatrixXcd B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = Complex(g(i, j), -jg(i, j));
  return B;
}

// xi(u) = (u - i J u) / 2, a complex vector in the complexified ambient space.
template <class SR>
[[nodiscard]] std::vector<typename complex_of<SR>::type> xi_project(
    const std::vector<SR>& u, const Mat<SR>& J) {
  using C = typename complex_of<SR>::type;
  const int m = J.rows();
  if (J.cols() != m || static_cast<int>(u.size()) != m)
    throw std::invalid_argument("xi_project: dimension mismatch");
  std::vector<SR> ju(m, scalar_traits<SR>::zero());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) ju[i] += J(i, j) * u[j];
  std::vector<C> out(m);
  const C half = scalar_traits<C>::one() / C(2);
  for (int i = 0; i < m; ++i) out[i] = half * C(u[i], SR(-ju[i]));
  return out;
}

// g_C: complex-bilinear extension of a real symmetric g to the
// complexification.
template <class SR>
[[nodiscard]] typename complex_of<SR>::type complex_bilinear_value(
    const Mat<SR>& g, const std::vector<typename complex_of<SR>::type>& a,
    const std::vector<typename complex_of<SR>::type>& b) {
  using C = typename complex_of<SR>::type;
  C acc = scalar_traits<C>::zero();
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) acc += a[i] * C(g(i, j)) * b[j];
  return acc;
}

// B(u, v) = g(u, v) - i g(Ju, v) as a scalar, for the identity
// g_C(xi(u), xi(v)) = B(u, v) / 2.
template <class SR>
[[nodiscard]] typename complex_of<SR>::type skew_pairing(
    const Mat<SR>& g, const Mat<SR>& J, const std::vector<SR>& u,
    const std::vector<SR>& v) {
  using C = typename complex_of<SR>::type;
  const int m = g.rows();
  std::vector<SR> ju(m, scalar_traits<SR>::zero());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) ju[i] += J(i, j) * u[j];
  SR re = scalar_traits<SR>::zero(), im = scalar_traits<SR>::zero();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      re += u[i] * g(i, j) * v[j];
      im += ju[i] * g(i, j) * v[j];
    }
  return C(re, SR(-im));
}

// ---- the flat cotangent model --------------------------------------------------

// On T*R^n with omega(X + a, Y + b) = a(Y) - b(X) (matrix J0), the metric g
// induces the complex structure [[0, -g^{-1}], [g, 0]].
[[nodiscard]] inline Eigen::MatrixXd flat_cotangent_J(
    const Eigen::MatrixXd& g) {
  const int n = g.rows();
  if (g.cols() != n)
    throw std::invalid_argument("flat_cotangent_J: square metric expected");
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("flat_cotangent_J: metric must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(
        "flat_cotangent_J: metric must be positive definite");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) =
      -llt.solve(Eigen::MatrixXd::Identity(n, n));  // -g^{-1}
  J.bottomLeftCorner(n, n) = g;
  return J;
}

}  // namespace g2kit::symp
