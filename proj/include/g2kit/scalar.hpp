#pragma once

// Scalar backends. Two families are supported everywhere the algebra is
// field-agnostic:
//   * floating point: double, std::complex<double>
//   * exact: Rational (arbitrary-precision rational) and GaussRat (a + b*i
//     with rational a, b), used to certify identities with no roundoff.

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace g2kit {

using Rational = mpq_class;
using Complex = std::complex<double>;

// Gaussian rational: exact element of Q(i).
struct GaussRat {
  Rational re{0};
  Rational im{0};

  GaussRat() = default;
  GaussRat(long r) : re(r) {}  // NOLINT: implicit by design, mirrors complex
  GaussRat(Rational r) : re(std::move(r)) {}
  GaussRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  [[nodiscard]] bool is_zero() const { return re == 0 && im == 0; }

  GaussRat operator-() const { return {-re, -im}; }
  GaussRat& operator+=(const GaussRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRat& operator-=(const GaussRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRat& operator*=(const GaussRat& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw std::domain_error("GaussRat: division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) {
    return !(a == b);
  }
};

// ---- uniform scalar interface -------------------------------------------

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr bool complex_field = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double conj(double x) { return x; }
  static double abs_approx(double x) { return std::abs(x); }
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static std::string str(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }
};

template <>
struct scalar_traits<Complex> {
  static constexpr bool exact = false;
  static constexpr bool complex_field = true;
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex conj(const Complex& x) { return std::conj(x); }
  static double abs_approx(const Complex& x) { return std::abs(x); }
  static bool is_zero(const Complex& x, double tol) {
    return std::abs(x) <= tol;
  }
  static std::string str(const Complex& x) {
    std::ostringstream os;
    os.precision(17);
    os << x.real() << (x.imag() < 0 ? "" : "+") << x.imag() << "i";
    return os.str();
  }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr bool complex_field = false;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational conj(const Rational& x) { return x; }
  static double abs_approx(const Rational& x) { return std::abs(x.get_d()); }
  static bool is_zero(const Rational& x, double) { return x == 0; }
  static std::string str(const Rational& x) { return x.get_str(); }
};

template <>
struct scalar_traits<GaussRat> {
  static constexpr bool exact = true;
  static constexpr bool complex_field = true;
  static GaussRat zero() { return {}; }
  static GaussRat one() { return {Rational(1)}; }
  static GaussRat conj(const GaussRat& x) { return {x.re, -x.im}; }
  static double abs_approx(const GaussRat& x) {
    return std::hypot(x.re.get_d(), x.im.get_d());
  }
  static bool is_zero(const GaussRat& x, double) { return x.is_zero(); }
  static std::string str(const GaussRat& x) {
    return x.re.get_str() + (x.im >= 0 ? "+" : "") + x.im.get_str() + "i";
  }
};

template <class S>
[[nodiscard]] S conj_of(const S& x) {
  return scalar_traits<S>::conj(x);
}
template <class S>
[[nodiscard]] bool is_zero_scalar(const S& x, double tol = 1e-12) {
  return scalar_traits<S>::is_zero(x, tol);
}
template <class S>
[[nodiscard]] double abs_approx(const S& x) {
  return scalar_traits<S>::abs_approx(x);
}

// Conversion to double-based scalars for reporting and float cross-checks.
// Complexification of the real scalar types.
template <class SReal>
struct complex_of;
template <>
struct complex_of<double> {
  using type = Complex;
};
template <>
struct complex_of<Rational> {
  using type = GaussRat;
};

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }
inline Complex to_complex(double x) { return {x, 0.0}; }
inline Complex to_complex(const Complex& x) { return x; }
inline Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
inline Complex to_complex(const GaussRat& x) {
  return {x.re.get_d(), x.im.get_d()};
}

// Rational from a numerator/denominator pair. mpq_class does not normalize
// on construction, so every int-pair build must go through here.
[[nodiscard]] inline Rational make_rational(long num, long den) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Exact ninth root of a rational, when one exists. Needed by the volume
// normalization in the exact backend where lambda^9 = det(b) must be solved
// without leaving the field.
[[nodiscard]] inline bool exact_ninth_root(const Rational& x, Rational* out) {
  if (x == 0) {
    *out = 0;
    return true;
  }
  Rational a = x;
  a.canonicalize();
  const bool neg = a < 0;
  mpz_class num = neg ? mpz_class(-a.get_num()) : a.get_num();
  mpz_class den = a.get_den();
  mpz_class rn, rd;
  const bool exact_n = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), 9) != 0;
  const bool exact_d = mpz_root(rd.get_mpz_t(), den.get_mpz_t(), 9) != 0;
  if (!exact_n || !exact_d) return false;
  Rational r(rn, rd);
  if (neg) r = -r;  // odd root of a negative rational stays rational
  *out = r;
  return true;
}

}  // namespace g2kit
