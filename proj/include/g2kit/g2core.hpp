#pragma once

// The 3-form core: the model form phi0, the bilinear form it induces through
//   iota(u)phi ^ iota(v)phi ^ phi = 6 B(u,v) Omega,
// volume normalization N(Omega) = 1, complexification, and the hermitian
// extension of a positive metric to C^7 = R^14.

#include <complex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "g2kit/exact_linalg.hpp"
#include "g2kit/multivector.hpp"
#include "g2kit/octonion.hpp"

namespace g2kit::core {

template <class S>
[[nodiscard]] ext::Multivector<S> phi0() {
  ext::Multivector<S> m(7);
  for (const auto& t : oct::kPhi0Triples) {
    S c = scalar_traits<S>::one();
    if (t.sign < 0) c = -c;
    m = m + ext::Multivector<S>::basis_form(7, {t.i, t.j, t.k}, c);
  }
  return m;
}

template <class S>
[[nodiscard]] ext::Multivector<S> std_volume7(S coeff = scalar_traits<S>::one()) {
  return ext::Multivector<S>::basis_form(7, {1, 2, 3, 4, 5, 6, 7},
                                         std::move(coeff));
}

// Value of a k-form on k vectors, by iterated contraction.
template <class S>
[[nodiscard]] S eval_form(const ext::Multivector<S>& form,
                          const std::vector<std::vector<S>>& vectors) {
  ext::Multivector<S> m = form;
  for (const auto& v : vectors) m = ext::contract(v, m);
  return m.coeff(0);
}

template <class S>
[[nodiscard]] S laplace_det(const Mat<S>& m) {
  const int n = m.rows();
  if (n == 1) return m(0, 0);
  S acc = scalar_traits<S>::zero();
  for (int r = 0; r < n; ++r) {
    if (is_zero_scalar(m(r, 0), 0.0)) continue;
    Mat<S> sub(n - 1, n - 1);
    for (int i = 0, ii = 0; i < n; ++i) {
      if (i == r) continue;
      for (int j = 1; j < n; ++j) sub(ii, j - 1) = m(i, j);
      ++ii;
    }
    S term = m(r, 0) * laplace_det(sub);
    acc += (r % 2 == 0) ? term : -term;
  }
  return acc;
}

// Pullback of a homogeneous k-form along the linear map with matrix Lm
// (columns are the images of the basis): (L*a)(u_1..u_k) = a(Lu_1,..,Lu_k).
template <class S>
[[nodiscard]] ext::Multivector<S> pullback(const ext::Multivector<S>& a,
                                           const Mat<S>& Lm) {
  const int n = a.dim();
  if (Lm.rows() != n || Lm.cols() != n)
    throw std::invalid_argument("pullback: matrix does not match dimension");
  ext::Multivector<S> out(n);
  for (const auto& [mask, c] : a.terms()) {
    std::vector<int> rows;  // the covector indices of this term (0-based)
    for (int b = 0; b < n; ++b)
      if (mask & (1u << b)) rows.push_back(b);
    const int k = static_cast<int>(rows.size());
    // iterate over all ascending k-subsets of columns
    std::vector<int> cols(k);
    for (int i = 0; i < k; ++i) cols[i] = i;
    while (true) {
      Mat<S> minor(k, k);
      for (int r = 0; r < k; ++r)
        for (int cc = 0; cc < k; ++cc) minor(r, cc) = Lm(rows[r], cols[cc]);
      // Laplace expansion: k <= 7 and exactness matters more than speed here
      S d = laplace_det(minor);
      if (!is_zero_scalar(d, 0.0)) {
        std::uint32_t m2 = 0;
        for (int cc : cols) m2 |= 1u << cc;
        out.add_term(m2, c * d);
      }
      int i = k - 1;
      while (i >= 0 && cols[i] == n - k + i) --i;
      if (i < 0) break;
      ++cols[i];
      for (int j = i + 1; j < k; ++j) cols[j] = cols[j - 1] + 1;
    }
  }
  return out;
}

// b_ij = top(iota(e_i)phi ^ iota(e_j)phi ^ phi) / (6 * top(vol)).
template <class S>
[[nodiscard]] Mat<S> metric_from_form(const ext::Multivector<S>& phi,
                                      const ext::Multivector<S>& vol) {
  if (phi.dim() != 7 || vol.dim() != 7)
    throw std::invalid_argument("metric_from_form: expected dimension 7");
  const S volc = ext::top_coefficient(vol);
  if (is_zero_scalar(volc, 0.0))
    throw std::invalid_argument(
        "metric_from_form: volume form has no top-degree component");
  const S denom = S(6) * volc;
  Mat<S> b(7, 7);
  std::vector<ext::Multivector<S>> iphi;
  for (int i = 0; i < 7; ++i) {
    std::vector<S> e(7, scalar_traits<S>::zero());
    e[i] = scalar_traits<S>::one();
    iphi.push_back(ext::contract(e, phi));
  }
  for (int i = 0; i < 7; ++i)
    for (int j = i; j < 7; ++j) {
      const S t = ext::top_coefficient(ext::wedge(ext::wedge(iphi[i], iphi[j]), phi));
      b(i, j) = t / denom;
      b(j, i) = b(i, j);
    }
  return b;
}

template <class S>
[[nodiscard]] S det_of(const Mat<S>& m) {
  if constexpr (scalar_traits<S>::exact) {
    return exact_det(m);
  } else {
    return laplace_det(m);  // 7x7 at most in this module
  }
}

// Nondegeneracy is sampled (random independent pairs must admit a w with
// phi(u,v,w) != 0) and additionally requires det(b) != 0, which catches
// forms like e^123 whose annihilator pairs have measure zero.
template <class S>
struct NondegeneracyVerdict {
  bool nondegenerate = false;
  bool det_nonzero = false;
  S det = scalar_traits<S>::zero();
  int trials = 0;
  double min_covector_norm = 0.0;
  std::string note;
};

template <class S, class Rng>
[[nodiscard]] std::vector<S> random_scalar_vector(int n, Rng& rng) {
  std::vector<S> v(n);
  for (auto& x : v) {
    if constexpr (scalar_traits<S>::exact) {
      std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
      if constexpr (scalar_traits<S>::complex_field) {
        x = S(make_rational(num(rng), den(rng)),
              make_rational(num(rng), den(rng)));
      } else {
        x = make_rational(num(rng), den(rng));
      }
    } else {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      if constexpr (scalar_traits<S>::complex_field) {
        x = S(u(rng), u(rng));
      } else {
        x = u(rng);
      }
    }
  }
  return v;
}

template <class S>
[[nodiscard]] NondegeneracyVerdict<S> is_nondegenerate(
    const ext::Multivector<S>& phi, const ext::Multivector<S>& vol,
    int trials = 64, std::uint64_t seed = 0, double tol = 1e-12) {
  NondegeneracyVerdict<S> v;
  v.trials = trials;
  const Mat<S> b = metric_from_form(phi, vol);
  v.det = det_of(b);
  v.det_nonzero = !is_zero_scalar(v.det, tol);
  v.min_covector_norm = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  bool witness = false;
  for (int t = 0; t < trials; ++t) {
    auto u = random_scalar_vector<S>(7, rng);
    auto w = random_scalar_vector<S>(7, rng);
    const auto cov = ext::contract(w, ext::contract(u, phi));
    v.min_covector_norm = std::min(v.min_covector_norm, cov.max_abs());
    if (cov.max_abs() <= tol) witness = true;  // independence generic
  }
  v.nondegenerate = v.det_nonzero && !witness;
  if (!v.det_nonzero) v.note = "determinant of the induced metric vanishes";
  if (witness) v.note += (v.note.empty() ? "" : "; ") +
                         std::string("sampled pair annihilates the form");
  return v;
}

// ---- volume normalization -------------------------------------------------

template <class S>
struct NormalizedSpace {
  ext::Multivector<S> phi{7};
  ext::Multivector<S> vol{7};
  Mat<S> metric;
  S lambda = scalar_traits<S>::one();
  bool principal_complex_root = false;  // root left the positive reals
};

// N(Omega) for Omega = c e^{1..7} and b the induced metric: c^2 / det(b).
template <class S>
[[nodiscard]] S volume_norm(const ext::Multivector<S>& phi,
                            const ext::Multivector<S>& vol) {
  const Mat<S> b = metric_from_form(phi, vol);
  const S d = det_of(b);
  if (is_zero_scalar(d, 0.0))
    throw std::invalid_argument("volume_norm: induced metric is degenerate");
  const S c = ext::top_coefficient(vol);
  return c * c / d;
}

inline double ninth_root(double x, bool* complex_flag) {
  if (x > 0) {
    *complex_flag = false;
    return std::pow(x, 1.0 / 9.0);
  }
  *complex_flag = false;  // odd root keeps negative reals real
  return -std::pow(-x, 1.0 / 9.0);
}
inline Complex ninth_root(const Complex& x, bool* complex_flag) {
  if (x.imag() == 0.0 && x.real() > 0.0) {
    *complex_flag = false;
    return {std::pow(x.real(), 1.0 / 9.0), 0.0};
  }
  *complex_flag = true;
  return std::exp(std::log(x) / 9.0);  // principal branch
}
inline Rational ninth_root(const Rational& x, bool* complex_flag) {
  *complex_flag = false;
  Rational r;
  if (!exact_ninth_root(x, &r))
    throw std::domain_error(
        "normalize_volume: lambda^9 = " + x.get_str() +
        " has no rational solution in the exact backend; use the float "
        "backend for this input");
  return r;
}
inline GaussRat ninth_root(const GaussRat& x, bool* complex_flag) {
  if (x.im != 0)
    throw std::domain_error(
        "normalize_volume: ninth root of a non-real value is not "
        "representable in the exact backend; use the float backend");
  return GaussRat(ninth_root(x.re, complex_flag));
}

// Rescales vol so that N(vol) = 1; lambda solves lambda^9 = 1/N(vol).
template <class S>
[[nodiscard]] NormalizedSpace<S> normalize_volume(
    const ext::Multivector<S>& phi, const ext::Multivector<S>& vol) {
  NormalizedSpace<S> out;
  const S N = volume_norm(phi, vol);
  bool complex_root = false;
  out.lambda = ninth_root(scalar_traits<S>::one() / N, &complex_root);
  out.principal_complex_root = complex_root;
  out.phi = phi;
  out.vol = out.lambda * vol;
  out.metric = metric_from_form(phi, out.vol);
  return out;
}

// ---- complexification ------------------------------------------------------

template <class S>
struct G2Space {
  ext::Multivector<S> phi{7};
  ext::Multivector<S> vol{7};
  Mat<S> metric;
};

template <class SReal>
[[nodiscard]] G2Space<SReal> make_space(const ext::Multivector<SReal>& phi,
                                        const ext::Multivector<SReal>& vol) {
  return {phi, vol, metric_from_form(phi, vol)};
}

// Positivity check of a real symmetric matrix; on failure reports a witness
// (eigenvalue in the float backend, failing leading minor when exact).
template <class SReal>
void require_positive_definite(const Mat<SReal>& g, const std::string& who) {
  const int n = g.rows();
  if constexpr (scalar_traits<SReal>::exact) {
    for (int k = 1; k <= n; ++k) {
      Mat<SReal> lead(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) lead(i, j) = g(i, j);
      if (!(exact_det(lead) > 0))
        throw std::invalid_argument(
            who + ": metric is not positive definite (leading minor " +
            std::to_string(k) + " is not positive)");
    }
  } else {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    for (int i = 0; i < n; ++i)
      if (es.eigenvalues()(i) <= 0)
        throw std::invalid_argument(
            who + ": metric is not positive definite (eigenvalue " +
            std::to_string(es.eigenvalues()(i)) + ")");
  }
}

// Same coefficients over the complexified scalar field; requires the input
// metric to be positive definite.
template <class SReal>
[[nodiscard]] G2Space<typename complex_of<SReal>::type> complexify(
    const G2Space<SReal>& real_space) {
  using C = typename complex_of<SReal>::type;
  require_positive_definite(real_space.metric, "complexify");
  auto lift_mv = [](const ext::Multivector<SReal>& m) {
    ext::Multivector<C> out(m.dim());
    for (const auto& [k, v] : m.terms()) out.add_term(k, C(v));
    return out;
  };
  G2Space<C> out;
  out.phi = lift_mv(real_space.phi);
  out.vol = lift_mv(real_space.vol);
  out.metric = Mat<C>(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) out.metric(i, j) = C(real_space.metric(i, j));
  return out;
}

// ---- hermitian extension ---------------------------------------------------
//
// h(x+iy, z+iw) = g(x,z) + g(y,w) + i (g(y,z) - g(x,w)) on R^14 = C^7.
// Re h = diag(g, g) is positive definite; Im h is the symplectic 2-form with
// omega(e_i, f_j) = -g_ij in the basis e_1..e_7, f_1..f_7.

template <class SReal>
struct HermitianExtension {
  Mat<SReal> h_re;                  // 14x14, positive definite
  ext::Multivector<SReal> h_im{14};  // grade-2 multivector on R^14
};

template <class SReal>
[[nodiscard]] HermitianExtension<SReal> hermitian_extension(
    const Mat<SReal>& g) {
  if (g.rows() != 7 || g.cols() != 7)
    throw std::invalid_argument("hermitian_extension: need a 7x7 metric");
  require_positive_definite(g, "hermitian_extension");
  HermitianExtension<SReal> out;
  out.h_re = Mat<SReal>(14, 14);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      out.h_re(i, j) = g(i, j);
      out.h_re(7 + i, 7 + j) = g(i, j);
    }
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      // term  -g_ij e^i ^ f^j; e-index i (bit i-1... here 0-based bit i),
      // f-index bit 7+j; ascending since i < 7+j always.
      out.h_im.add_term((1u << i) | (1u << (7 + j)), -g(i, j));
    }
  return out;
}

// ---- the 7-form of a unit vector -------------------------------------------

// Omega_u = (1/6) iota(u)phi ^ iota(u)phi ^ phi, defined for Q_b(u) = 1.
template <class S>
[[nodiscard]] ext::Multivector<S> omega_u(const ext::Multivector<S>& phi,
                                          const ext::Multivector<S>& vol,
                                          const std::vector<S>& u,
                                          double tol = 1e-10) {
  const Mat<S> b = metric_from_form(phi, vol);
  S q = scalar_traits<S>::zero();
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) q += u[i] * b(i, j) * u[j];
  if (!is_zero_scalar(S(q - scalar_traits<S>::one()), tol))
    throw std::invalid_argument(
        "omega_u: vector is not unit for the induced metric (Q(u) != 1)");
  const auto iu = ext::contract(u, phi);
  ext::Multivector<S> w = ext::wedge(ext::wedge(iu, iu), phi);
  const S sixth = scalar_traits<S>::one() / S(6);
  return sixth * w;
}

}  // namespace g2kit::core
