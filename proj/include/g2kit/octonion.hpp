#pragma once

// Complex octonion arithmetic. The basis is 1 = e0 and the seven imaginary
// units e1..e7; multiplication comes from seven oriented Fano-plane triples
// chosen so that the induced 3-form
//     phi0 = e^123 - e^145 - e^167 - e^246 + e^257 - e^347 - e^356
// satisfies phi0(u,v,w) = B(u x v, w). The table is checked against all 35
// basis triples once per process before first use; a mismatch throws rather
// than being silently patched.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "g2kit/scalar.hpp"

namespace g2kit::oct {

// Signed coefficient of e^{ijk} in phi0 (i<j<k), zero off the seven triples.
struct SignedTriple {
  int i, j, k, sign;
};
inline constexpr std::array<SignedTriple, 7> kPhi0Triples{{{1, 2, 3, +1},
                                                           {1, 4, 5, -1},
                                                           {1, 6, 7, -1},
                                                           {2, 4, 6, -1},
                                                           {2, 5, 7, +1},
                                                           {3, 4, 7, -1},
                                                           {3, 5, 6, -1}}};

[[nodiscard]] inline int phi0_coeff(int i, int j, int k) {
  for (const auto& t : kPhi0Triples)
    if (t.i == i && t.j == j && t.k == k) return t.sign;
  return 0;
}

// prod[i][j] = s*(k+1) encodes e_i e_j = s * e_k (index 0 is the real unit).
struct StructureTable {
  std::array<std::array<std::int8_t, 8>, 8> prod{};
  [[nodiscard]] int sign(int i, int j) const { return prod[i][j] < 0 ? -1 : 1; }
  [[nodiscard]] int index(int i, int j) const {
    return (prod[i][j] < 0 ? -prod[i][j] : prod[i][j]) - 1;
  }
};

// Validated table; throws std::logic_error on any basis-triple discrepancy.
[[nodiscard]] const StructureTable& structure_table();

template <class S>
struct Octonion {
  std::array<S, 8> c{};  // c[0] real part, c[1..7] imaginary parts

  Octonion() { c.fill(scalar_traits<S>::zero()); }

  static Octonion unit(int i) {
    if (i < 0 || i > 7)
      throw std::invalid_argument("Octonion::unit: index out of range 0..7");
    Octonion o;
    o.c[i] = scalar_traits<S>::one();
    return o;
  }
  // Imaginary octonion from a 7-vector over e1..e7.
  static Octonion imaginary(const std::vector<S>& v) {
    if (v.size() != 7)
      throw std::invalid_argument("Octonion::imaginary: need 7 components");
    Octonion o;
    for (int i = 0; i < 7; ++i) o.c[i + 1] = v[i];
    return o;
  }

  [[nodiscard]] bool is_imaginary(double tol = 0.0) const {
    return is_zero_scalar(c[0], tol);
  }
  [[nodiscard]] double max_abs() const {
    double m = 0;
    for (const auto& x : c) m = std::max(m, abs_approx(x));
    return m;
  }

  Octonion operator-() const {
    Octonion r;
    for (int i = 0; i < 8; ++i) r.c[i] = -c[i];
    return r;
  }
  friend Octonion operator+(const Octonion& a, const Octonion& b) {
    Octonion r;
    for (int i = 0; i < 8; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend Octonion operator-(const Octonion& a, const Octonion& b) {
    Octonion r;
    for (int i = 0; i < 8; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend Octonion operator*(const S& s, const Octonion& a) {
    Octonion r;
    for (int i = 0; i < 8; ++i) r.c[i] = s * a.c[i];
    return r;
  }
};

template <class S>
[[nodiscard]] Octonion<S> multiply(const Octonion<S>& u, const Octonion<S>& v) {
  const StructureTable& t = structure_table();
  Octonion<S> r;
  for (int i = 0; i < 8; ++i) {
    if (is_zero_scalar(u.c[i], 0.0)) continue;
    for (int j = 0; j < 8; ++j) {
      if (is_zero_scalar(v.c[j], 0.0)) continue;
      S term = u.c[i] * v.c[j];
      if (t.sign(i, j) < 0) term = -term;
      r.c[t.index(i, j)] += term;
    }
  }
  return r;
}

template <class S>
[[nodiscard]] Octonion<S> conjugate(const Octonion<S>& u) {
  Octonion<S> r;
  r.c[0] = u.c[0];
  for (int i = 1; i < 8; ++i) r.c[i] = -u.c[i];
  return r;
}

template <class S>
[[nodiscard]] Octonion<S> imaginary_part(const Octonion<S>& u) {
  Octonion<S> r = u;
  r.c[0] = scalar_traits<S>::zero();
  return r;
}

// B(u,v) = Re(conj(u) v); complex bilinear, B(e_i,e_j) = delta_ij.
template <class S>
[[nodiscard]] S bilinear_B(const Octonion<S>& u, const Octonion<S>& v) {
  S s = u.c[0] * v.c[0];
  for (int i = 1; i < 8; ++i) s += u.c[i] * v.c[i];
  return s;
}

template <class S>
[[nodiscard]] S quadratic_Q(const Octonion<S>& u) {
  return bilinear_B(u, u);
}

// u x v = Im(conj(v) u); for orthogonal imaginary units this is e_i e_j.
template <class S>
[[nodiscard]] Octonion<S> cross(const Octonion<S>& u, const Octonion<S>& v) {
  return imaginary_part(multiply(conjugate(v), u));
}

// Triple cross product (1/2)((u conj(v)) w - (w conj(v)) u), normalized so
// that its imaginary part equals the associator bracket on imaginary inputs.
template <class S>
[[nodiscard]] Octonion<S> triple_cross(const Octonion<S>& u,
                                       const Octonion<S>& v,
                                       const Octonion<S>& w) {
  const Octonion<S> a = multiply(multiply(u, conjugate(v)), w);
  const Octonion<S> b = multiply(multiply(w, conjugate(v)), u);
  const S half = scalar_traits<S>::one() / S(2);
  return half * (a - b);
}

// Associator bracket [u,v,w] = (1/2)(u(vw) - (uv)w).
template <class S>
[[nodiscard]] Octonion<S> associator(const Octonion<S>& u, const Octonion<S>& v,
                                     const Octonion<S>& w) {
  const Octonion<S> a = multiply(u, multiply(v, w));
  const Octonion<S> b = multiply(multiply(u, v), w);
  const S half = scalar_traits<S>::one() / S(2);
  return half * (a - b);
}

// ---- realification C^7 = R^14 -------------------------------------------
// Index map: e_i -> i-1 (0..6), f_i = sqrt(-1) e_i -> 7+(i-1) (7..13).

[[nodiscard]] inline Eigen::VectorXcd r14_to_c7(const Eigen::VectorXd& x) {
  if (x.size() != 14)
    throw std::invalid_argument("r14_to_c7: need a 14-vector");
  Eigen::VectorXcd z(7);
  for (int i = 0; i < 7; ++i) z(i) = Complex(x(i), x(7 + i));
  return z;
}
[[nodiscard]] inline Eigen::VectorXd c7_to_r14(const Eigen::VectorXcd& z) {
  if (z.size() != 7)
    throw std::invalid_argument("c7_to_r14: need a 7-vector");
  Eigen::VectorXd x(14);
  for (int i = 0; i < 7; ++i) {
    x(i) = z(i).real();
    x(7 + i) = z(i).imag();
  }
  return x;
}

// Matrix of (e_i x .) on C^7 viewed as a real map of R^14 (i in 1..7).
[[nodiscard]] Eigen::MatrixXd cross_matrix_r14(int i);

// Matrix of (e_i x .) on C^7 as a complex 7x7 matrix.
[[nodiscard]] Eigen::MatrixXcd cross_matrix_c7(int i);

// ---- derivation algebra --------------------------------------------------
// Linear maps D of Im O with D(xy) = D(x)y + x D(y). The 392 x 49 system has
// real structure constants, so real nullity equals complex nullity.

[[nodiscard]] Eigen::MatrixXd derivation_system();
[[nodiscard]] int derivation_system_exact_nullity();
// Kernel basis as 7x7 matrices; svd_gap receives the ratio between the
// smallest kept and largest dropped singular value.
[[nodiscard]] std::vector<Eigen::Matrix<double, 7, 7>> derivation_basis(
    double* svd_gap = nullptr);

// Max residual of phi0(Au,Av,Aw) = phi0(u,v,w) over all 35 basis triples,
// for a real or complex 7x7 matrix acting on Im O.
[[nodiscard]] double phi0_pullback_residual(const Eigen::MatrixXcd& A);

}  // namespace g2kit::oct
