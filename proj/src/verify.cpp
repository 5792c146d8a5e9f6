#include "g2kit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "g2kit/flatdeform.hpp"
#include "g2kit/g2core.hpp"
#include "g2kit/grassmann.hpp"
#include "g2kit/multivector.hpp"
#include "g2kit/numeric.hpp"
#include "g2kit/octonion.hpp"
#include "g2kit/sympcompat.hpp"

namespace g2kit::verify {

namespace {

// ---- plumbing ---------------------------------------------------------------

struct Outcome {
  double max_residual = 0.0;
  double default_tol = 1e-9;
  int samples = 0;
  std::string backend = "float";
  std::string note;

  void bump(double r) { max_residual = std::max(max_residual, r); }
  // Structural facts (dimension counts, verdict flags) count as residual 1.
  void expect(bool ok, const std::string& detail) {
    if (ok) return;
    max_residual = std::max(max_residual, 1.0);
    if (!note.empty()) note += "; ";
    note += detail;
  }
};

using CheckFn = std::function<Outcome(const RunOptions&, std::mt19937_64&)>;

struct Check {
  std::string name;
  CheckFn fn;
};

struct Suite {
  std::string name;
  std::vector<Check> checks;
};

[[nodiscard]] std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

[[nodiscard]] int cap(int samples, int at) {
  return std::max(1, std::min(samples, at));
}

[[nodiscard]] bool exact_run(const RunOptions& opt) {
  return opt.backend == Backend::exact;
}

template <class S>
[[nodiscard]] double mat_diff(const Mat<S>& a, const Mat<S>& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      m = std::max(m, abs_approx(S(a(i, j) - b(i, j))));
  return m;
}

[[nodiscard]] Mat<double> mat_from_eigen(const Eigen::MatrixXd& e) {
  Mat<double> m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

// ---- random builders ---------------------------------------------------------

template <class S, class Rng>
[[nodiscard]] ext::Multivector<S> random_one_form(Rng& rng) {
  ext::Multivector<S> m(7);
  const auto v = core::random_scalar_vector<S>(7, rng);
  for (int i = 0; i < 7; ++i) m.add_term(1u << i, v[i]);
  return m;
}

template <class S, class Rng>
[[nodiscard]] ext::Multivector<S> random_mixed_form(Rng& rng, int nterms) {
  ext::Multivector<S> m(7);
  std::uniform_int_distribution<int> mask(1, 127);
  const auto v = core::random_scalar_vector<S>(nterms, rng);
  for (int t = 0; t < nterms; ++t)
    m.add_term(static_cast<std::uint32_t>(mask(rng)), v[t]);
  return m;
}

template <class S, class Rng>
[[nodiscard]] ext::Multivector<S> random_homogeneous_form(Rng& rng, int grade,
                                                          int nterms) {
  ext::Multivector<S> m(7);
  const auto coeff = core::random_scalar_vector<S>(nterms, rng);
  std::array<int, 7> idx{0, 1, 2, 3, 4, 5, 6};
  for (int t = 0; t < nterms; ++t) {
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uint32_t mask = 0;
    for (int g = 0; g < grade; ++g) mask |= 1u << idx[g];
    m.add_term(mask, coeff[t]);
  }
  return m;
}

template <class S, class Rng>
[[nodiscard]] oct::Octonion<S> random_octonion(Rng& rng) {
  oct::Octonion<S> o;
  const auto v = core::random_scalar_vector<S>(8, rng);
  for (int i = 0; i < 8; ++i) o.c[i] = v[i];
  return o;
}

template <class S, class Rng>
[[nodiscard]] oct::Octonion<S> random_imaginary(Rng& rng) {
  return oct::Octonion<S>::imaginary(core::random_scalar_vector<S>(7, rng));
}

// Exact unit vector for the standard bilinear form: start from a basis
// vector and compose rational-rotation pairs (c, s) with c^2 + s^2 = 1.
template <class Rng>
[[nodiscard]] std::vector<GaussRat> exact_unit_vector(Rng& rng) {
  std::uniform_int_distribution<int> pick(0, 6), num(-3, 3), den(1, 4);
  std::vector<GaussRat> u(7, GaussRat(Rational(0)));
  u[pick(rng)] = GaussRat(Rational(1));
  for (int step = 0; step < 5; ++step) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    const Rational t = make_rational(num(rng), den(rng));
    GaussRat c, s;
    if (step % 2 == 0) {
      // real rotation: ((1 - t^2), 2 t) / (1 + t^2)
      const Rational d = 1 + t * t;
      c = GaussRat(Rational((1 - t * t) / d));
      s = GaussRat(Rational(2 * t / d));
    } else {
      // complex rotation: c = (1 + t^2)/(1 - t^2), s = i 2t/(1 - t^2)
      const Rational d = 1 - t * t;
      if (d == 0) continue;
      c = GaussRat(Rational((1 + t * t) / d));
      s = GaussRat(Rational(0), Rational(2 * t / d));
    }
    const GaussRat ui = u[i], uj = u[j];
    u[i] = c * ui - s * uj;
    u[j] = s * ui + c * uj;
  }
  return u;
}

// 14 x k basis whose columns are e_j + sum_i S_ij f_i for a symmetric S:
// always omega-isotropic.
template <class S, class Rng>
[[nodiscard]] Mat<S> random_graph_isotropic(int k, Rng& rng) {
  Mat<S> sym(7, 7);
  for (int i = 0; i < 7; ++i)
    for (int j = i; j < 7; ++j) {
      const auto v = core::random_scalar_vector<S>(1, rng);
      sym(i, j) = sym(j, i) = v[0];
    }
  Mat<S> b(14, k);
  for (int j = 0; j < k; ++j) {
    b(j, j) = scalar_traits<S>::one();
    for (int i = 0; i < 7; ++i) b(7 + i, j) = sym(i, j);
  }
  return b;
}

// span(u, v, u x v) is closed under the cross product, hence associative.
template <class S, class Rng>
[[nodiscard]] Mat<S> random_associative_plane(Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto u = random_imaginary<S>(rng);
    const auto v = random_imaginary<S>(rng);
    const auto w = oct::cross(u, v);
    Mat<S> basis(7, 3);
    for (int r = 0; r < 7; ++r) {
      basis(r, 0) = u.c[1 + r];
      basis(r, 1) = v.c[1 + r];
      basis(r, 2) = w.c[1 + r];
    }
    if (num::rank_with_gap(basis, 1e-6).rank == 3) return basis;
  }
  throw std::runtime_error("random_associative_plane: no independent sample");
}

template <class S>
[[nodiscard]] Mat<S> unit_columns14(const std::vector<int>& rows) {
  Mat<S> m(14, static_cast<int>(rows.size()));
  for (int j = 0; j < static_cast<int>(rows.size()); ++j)
    m(rows[j], j) = scalar_traits<S>::one();
  return m;
}

// Real-valued random section with the given fiber support, as a half-lattice
// of coefficients mirrored by conjugation.
[[nodiscard]] flat::SectionField random_real_section(
    const std::vector<int>& support, int fiber, int band,
    std::mt19937_64& rng) {
  flat::SectionField s(fiber, band);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int kx = -band; kx <= band; ++kx)
    for (int ky = -band; ky <= band; ++ky)
      for (int kz = -band; kz <= band; ++kz) {
        const bool zero = kx == 0 && ky == 0 && kz == 0;
        const bool positive =
            kx > 0 || (kx == 0 && (ky > 0 || (ky == 0 && kz > 0)));
        if (!zero && !positive) continue;
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(fiber);
        for (const int idx : support)
          c(idx) = Complex(u(rng), zero ? 0.0 : u(rng));
        if (zero)
          s.add_mode({0, 0, 0}, c);
        else
          s.add_real_mode({kx, ky, kz}, 0.5 * c);
      }
  return s;
}

[[nodiscard]] flat::SectionField random_scalar_field(int field_band,
                                                     int mode_band,
                                                     std::mt19937_64& rng,
                                                     double amp) {
  flat::SectionField s(1, field_band);
  std::uniform_real_distribution<double> u(-amp, amp);
  for (int kx = -mode_band; kx <= mode_band; ++kx)
    for (int ky = -mode_band; ky <= mode_band; ++ky)
      for (int kz = -mode_band; kz <= mode_band; ++kz) {
        const bool zero = kx == 0 && ky == 0 && kz == 0;
        const bool positive =
            kx > 0 || (kx == 0 && (ky > 0 || (ky == 0 && kz > 0)));
        if (!zero && !positive) continue;
        Eigen::VectorXcd c(1);
        c(0) = Complex(u(rng), zero ? 0.0 : u(rng));
        if (zero)
          s.add_mode({0, 0, 0}, c);
        else
          s.add_real_mode({kx, ky, kz}, 0.5 * c);
      }
  return s;
}

[[nodiscard]] flat::DeformationChart random_chart(int band,
                                                  std::mt19937_64& rng) {
  flat::DeformationChart ch(band);
  for (int m = 4; m <= 14; ++m)
    ch.sigma[m] = random_scalar_field(band, band, rng, 0.6);
  return ch;
}

// L2 pairing of band-limited real sections: sum_k a(k) . b(-k).
[[nodiscard]] Complex l2_pairing(const flat::SectionField& a,
                                 const flat::SectionField& b) {
  Complex acc(0.0, 0.0);
  for (const auto& [k, c] : a.modes())
    acc += c.cwiseProduct(b.mode({-k[0], -k[1], -k[2]})).sum();
  return acc;
}

// ---- exterior-algebra checks ---------------------------------------------------

template <class S>
Outcome exterior_anticommute(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto a = random_one_form<S>(rng);
    const auto b = random_one_form<S>(rng);
    o.bump((ext::wedge(a, b) + ext::wedge(b, a)).max_abs());
  }
  return o;
}

template <class S>
Outcome exterior_associative(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto a = random_mixed_form<S>(rng, 6);
    const auto b = random_mixed_form<S>(rng, 6);
    const auto c = random_mixed_form<S>(rng, 6);
    o.bump((ext::wedge(ext::wedge(a, b), c) - ext::wedge(a, ext::wedge(b, c)))
               .max_abs());
  }
  return o;
}

template <class S>
Outcome exterior_antiderivation(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  std::uniform_int_distribution<int> grade(1, 3);
  for (int t = 0; t < n; ++t) {
    const int g = grade(rng);
    const auto a = random_homogeneous_form<S>(rng, g, 4);
    const auto b = random_mixed_form<S>(rng, 5);
    const auto v = core::random_scalar_vector<S>(7, rng);
    const auto lhs = ext::contract(v, ext::wedge(a, b));
    const auto first = ext::wedge(ext::contract(v, a), b);
    const auto second = ext::wedge(a, ext::contract(v, b));
    const auto rhs = g % 2 == 0 ? first + second : first - second;
    o.bump((lhs - rhs).max_abs());
  }
  return o;
}

template <class S>
Outcome exterior_double_contraction(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto a = random_mixed_form<S>(rng, 8);
    const auto v = core::random_scalar_vector<S>(7, rng);
    o.bump(ext::contract(v, ext::contract(v, a)).max_abs());
  }
  return o;
}

// ---- octonion checks -------------------------------------------------------------

template <class S>
Outcome octonion_composition(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto u = random_octonion<S>(rng);
    const auto v = random_octonion<S>(rng);
    const S lhs = oct::quadratic_Q(oct::multiply(u, v));
    const S rhs = oct::quadratic_Q(u) * oct::quadratic_Q(v);
    const double scale = std::max(1.0, abs_approx(rhs));
    o.bump(abs_approx(S(lhs - rhs)) / scale);
  }
  return o;
}

template <class S>
Outcome octonion_orthogonality(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto u = random_octonion<S>(rng);
    const auto v = random_octonion<S>(rng);
    const auto w = random_octonion<S>(rng);
    const S left = oct::bilinear_B(oct::multiply(u, v), oct::multiply(u, w)) -
                   oct::quadratic_Q(u) * oct::bilinear_B(v, w);
    const S right = oct::bilinear_B(oct::multiply(u, w), oct::multiply(v, w)) -
                    oct::bilinear_B(u, v) * oct::quadratic_Q(w);
    o.bump(std::max(abs_approx(left), abs_approx(right)) /
           std::max(1.0, u.max_abs() * v.max_abs() * w.max_abs()));
  }
  return o;
}

template <class S>
Outcome octonion_conjugation(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto u = random_octonion<S>(rng);
    const auto v = random_octonion<S>(rng);
    const auto diff = oct::conjugate(oct::multiply(u, v)) -
                      oct::multiply(oct::conjugate(v), oct::conjugate(u));
    o.bump(diff.max_abs());
  }
  return o;
}

template <class S>
Outcome octonion_alternating(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto u = random_imaginary<S>(rng);
    const auto v = random_imaginary<S>(rng);
    const auto w = random_imaginary<S>(rng);
    const auto b = oct::associator(u, v, w);
    o.bump((b + oct::associator(v, u, w)).max_abs());
    o.bump((b + oct::associator(u, w, v)).max_abs());
  }
  return o;
}

template <class S>
Outcome octonion_bracket(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto u = random_imaginary<S>(rng);
    const auto v = random_imaginary<S>(rng);
    const auto w = random_imaginary<S>(rng);
    const auto rhs = oct::cross(u, oct::cross(v, w)) +
                     oct::bilinear_B(u, v) * w +
                     (-oct::bilinear_B(u, w)) * v;
    o.bump((oct::associator(u, v, w) - rhs).max_abs());
  }
  return o;
}

template <class S>
Outcome octonion_triples(std::mt19937_64&) {
  Outcome o;
  o.samples = 35;
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      for (int k = j + 1; k <= 7; ++k) {
        const auto x = oct::cross(oct::Octonion<S>::unit(i),
                                  oct::Octonion<S>::unit(j));
        const S got = oct::bilinear_B(x, oct::Octonion<S>::unit(k));
        const S want = S(oct::phi0_coeff(i, j, k));
        o.bump(abs_approx(S(got - want)));
      }
  return o;
}

// ---- 3-form core checks ------------------------------------------------------------

template <class S>
Outcome core_identity_metric(std::mt19937_64&) {
  Outcome o;
  o.samples = 1;
  const auto b =
      core::metric_from_form(core::phi0<S>(), core::std_volume7<S>());
  o.bump(mat_diff(b, Mat<S>::identity(7)));
  return o;
}

Outcome core_covariance_float(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  using S = Complex;
  const auto phi = core::phi0<S>();
  const auto vol = core::std_volume7<S>();
  const Mat<S> b = core::metric_from_form(phi, vol);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < n; ++t) {
    Mat<S> L(7, 7);
    double dabs = 0.0;
    S det;
    do {
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) L(i, j) = Complex(u(rng), u(rng));
      det = core::laplace_det(L);
      dabs = std::abs(det);
    } while (dabs < 1e-3);
    const Complex scale = std::pow(det, -1.0 / 7.0);  // unit determinant
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) L(i, j) *= scale;
    const auto bprime =
        core::metric_from_form(core::pullback(phi, L), core::pullback(vol, L));
    o.bump(mat_diff(bprime, L.transpose() * b * L));
  }
  o.default_tol = 1e-8;
  return o;
}

Outcome core_covariance_exact(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  o.backend = "exact";
  using S = GaussRat;
  const auto phi = core::phi0<S>();
  const auto vol = core::std_volume7<S>();
  const Mat<S> b = core::metric_from_form(phi, vol);
  std::uniform_int_distribution<int> pick(0, 6), num(-2, 2), den(1, 3);
  for (int t = 0; t < n; ++t) {
    Mat<S> L = Mat<S>::identity(7);  // product of shears: determinant one
    for (int s = 0; s < 6; ++s) {
      int p = pick(rng), q = pick(rng);
      if (p == q) continue;
      const GaussRat lam(make_rational(num(rng), den(rng)),
                         make_rational(num(rng), den(rng)));
      for (int j = 0; j < 7; ++j) L(p, j) += lam * L(q, j);
    }
    const auto bprime =
        core::metric_from_form(core::pullback(phi, L), core::pullback(vol, L));
    o.bump(mat_diff(bprime, L.transpose() * b * L));
  }
  return o;
}

template <class S, class Draw>
Outcome core_volume_scaling(int n, std::mt19937_64& rng, Draw draw_scalar) {
  Outcome o;
  o.samples = n;
  const auto phi = core::phi0<S>();
  const auto vol = core::std_volume7<S>();
  const Mat<S> b = core::metric_from_form(phi, vol);
  for (int t = 0; t < n; ++t) {
    const S lam = draw_scalar(rng);
    const auto scaled = core::metric_from_form(phi, lam * vol);
    Mat<S> want(7, 7);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) want(i, j) = b(i, j) / lam;
    o.bump(mat_diff(scaled, want));
  }
  return o;
}

template <class S, class Draw>
Outcome core_normalization(int n, std::mt19937_64& rng, Draw draw_scalar) {
  Outcome o;
  o.samples = n;
  const auto phi = core::phi0<S>();
  for (int t = 0; t < n; ++t) {
    const S c = draw_scalar(rng);
    const auto normalized =
        core::normalize_volume(phi, core::std_volume7<S>(c));
    const S norm = core::volume_norm(normalized.phi, normalized.vol);
    o.bump(abs_approx(S(norm - scalar_traits<S>::one())));
  }
  return o;
}

template <class S, class DrawMetric>
Outcome core_hermitian(int n, std::mt19937_64& rng, DrawMetric draw_metric) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const Mat<S> g = draw_metric(rng);
    const auto h = core::hermitian_extension(g);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        o.bump(abs_approx(S(h.h_re(i, j) - g(i, j))));
        o.bump(abs_approx(S(h.h_re(7 + i, 7 + j) - g(i, j))));
        o.bump(abs_approx(S(h.h_re(i, 7 + j))));
        const S coeff = h.h_im.coeff((1u << i) | (1u << (7 + j)));
        o.bump(abs_approx(S(coeff + g(i, j))));
      }
    core::require_positive_definite(h.h_re, "hermitian check");
  }
  return o;
}

Outcome core_omega_u_float(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  o.default_tol = 1e-10;
  using S = Complex;
  const auto phi = core::phi0<S>();
  const auto vol = core::std_volume7<S>();
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int t = 0; t < n; ++t) {
    std::vector<S> u(7);
    Complex q;
    do {
      for (auto& x : u) x = Complex(d(rng), d(rng));
      q = Complex(0.0, 0.0);
      for (const auto& x : u) q += x * x;
    } while (std::abs(q) < 0.3);
    const Complex root = std::sqrt(q);
    for (auto& x : u) x /= root;
    o.bump((core::omega_u(phi, vol, u) - vol).max_abs());
  }
  return o;
}

Outcome core_omega_u_exact(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  o.backend = "exact";
  using S = GaussRat;
  const auto phi = core::phi0<S>();
  const auto vol = core::std_volume7<S>();
  for (int t = 0; t < n; ++t) {
    const auto u = exact_unit_vector(rng);
    o.bump((core::omega_u(phi, vol, u) - vol).max_abs());
  }
  return o;
}

// ---- Grassmannian checks ------------------------------------------------------------

template <class S>
Outcome grassmann_classify(std::mt19937_64&) {
  Outcome o;
  o.samples = 4;
  const Mat<S> W = grass::omega_standard_matrix<S>(7);
  const auto verdict = [&](const std::vector<int>& rows) {
    return grass::classify_symplectic(unit_columns14<S>(rows), W).verdict;
  };
  o.expect(verdict({0, 1, 2, 3, 4, 5, 6}) == grass::SymplecticClass::lagrangian,
           "full coordinate plane should be lagrangian");
  o.expect(verdict({0, 1, 2}) == grass::SymplecticClass::isotropic,
           "3-dimensional coordinate plane should be isotropic");
  o.expect(verdict({0, 7}) == grass::SymplecticClass::symplectic,
           "a conjugate pair should span a symplectic plane");
  o.expect(verdict({0, 1, 7}) == grass::SymplecticClass::generic,
           "mixed 3-plane should be generic");
  return o;
}

template <class S>
Outcome grassmann_associative(int n, std::mt19937_64& rng, double gap_floor) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto rep =
        grass::tangent_associative(random_associative_plane<S>(rng));
    o.expect(rep.nullity == 8, "expected tangent dimension 8, got " +
                                   std::to_string(rep.nullity));
    if (!scalar_traits<S>::exact)
      o.expect(rep.sv_gap > gap_floor, "singular-value gap too small");
    o.bump(rep.kernel_residual);
  }
  return o;
}

template <class S>
Outcome grassmann_isotropic(int n, int k, int expected, std::mt19937_64& rng,
                            double gap_floor) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto rep =
        grass::tangent_isotropic(random_graph_isotropic<S>(k, rng));
    o.expect(rep.nullity == expected,
             "expected tangent dimension " + std::to_string(expected) +
                 ", got " + std::to_string(rep.nullity));
    if (!scalar_traits<S>::exact)
      o.expect(rep.sv_gap > gap_floor, "singular-value gap too small");
    o.bump(rep.kernel_residual);
  }
  return o;
}

template <class S>
Outcome grassmann_mixed(std::mt19937_64&) {
  Outcome o;
  o.samples = 2;
  const Mat<S> basis = unit_columns14<S>({0, 1, 2});
  const auto ia = grass::tangent_dimension(
      basis, grass::TangentKind::isotropic_associative);
  o.expect(ia.nullity == 22, "isotropic-associative tangent dimension " +
                                 std::to_string(ia.nullity) + " != 22");
  const auto br =
      grass::tangent_dimension(basis, grass::TangentKind::b_real_associative);
  o.expect(br.nullity == 19, "B-real associative tangent dimension " +
                                 std::to_string(br.nullity) + " != 19");
  o.bump(std::max(ia.kernel_residual, br.kernel_residual));
  if (ia.nullity_f_only)
    o.note += (o.note.empty() ? "" : "; ");
  if (ia.nullity_f_only)
    o.note += "isotropy-on-JL-only variant has dimension " +
              std::to_string(*ia.nullity_f_only);
  return o;
}

// ---- symplectic-compatibility checks ----------------------------------------------

Outcome symp_signature(int nb, std::mt19937_64& rng) {
  Outcome o;
  o.samples = nb * 64;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < nb; ++t) {
    Eigen::MatrixXcd b(7, 7);
    for (int tries = 0;; ++tries) {
      for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j)
          b(i, j) = b(j, i) = Complex(u(rng), u(rng));
      const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
      if (svd.singularValues()(6) >
              1e-2 * svd.singularValues()(0) ||
          tries > 50)
        break;
    }
    for (int s = 0; s < 64; ++s) {
      const double tval = 2.0 * M_PI * s / 64.0;
      const auto sig = symp::signature_of(symp::metric_family(b, tval));
      o.expect(sig.positive == 7 && sig.negative == 7 && sig.zero == 0,
               "signature (" + std::to_string(sig.positive) + "," +
                   std::to_string(sig.negative) + ") at one pencil point");
    }
  }
  return o;
}

Outcome symp_membership(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto J = symp::random_cal_j(7, rng);
    const auto v = symp::is_in_cal_J(J);
    o.expect(v.in_class, "a chart point failed a membership certificate");
    o.bump(v.residual);
  }
  return o;
}

Outcome symp_retraction(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  const Eigen::MatrixXd J0 = symp::std_j(7);
  for (int t = 0; t < n; ++t) {
    const auto J1 = symp::random_cal_j(7, rng);
    o.bump((symp::j_retract(J1, 0.0) - J0).cwiseAbs().maxCoeff());
    o.bump((symp::j_retract(J1, 1.0) - J1).cwiseAbs().maxCoeff());
    for (int s = 0; s <= 10; ++s) {
      const auto v = symp::is_in_cal_J(symp::j_retract(J1, s / 10.0));
      o.expect(v.in_class, "a retraction path point left the chart");
      o.bump(v.residual);
    }
  }
  return o;
}

Outcome symp_projection_float(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  o.default_tol = 1e-10;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < n; ++t) {
    const Eigen::MatrixXd J = symp::random_cal_j(7, rng);
    Eigen::MatrixXd S(14, 14);
    for (int i = 0; i < 14; ++i)
      for (int j = i; j < 14; ++j) S(i, j) = S(j, i) = u(rng);
    const Eigen::MatrixXd g = 0.5 * (S - J.transpose() * S * J);
    const Mat<double> gm = mat_from_eigen(g), jm = mat_from_eigen(J);
    std::vector<double> x(14), y(14);
    for (auto& e : x) e = u(rng);
    for (auto& e : y) e = u(rng);
    const Complex lhs = symp::complex_bilinear_value(
        gm, symp::xi_project(x, jm), symp::xi_project(y, jm));
    const Complex rhs = 0.5 * symp::skew_pairing(gm, jm, x, y);
    o.bump(std::abs(lhs - rhs));
  }
  return o;
}

Outcome symp_projection_exact(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  o.backend = "exact";
  using SR = Rational;
  const int m = 6;  // C^3 = R^6 keeps the exact arithmetic small
  // J0 and a skew-compatible metric [[P, Q], [Q, -P]] with P, Q symmetric.
  Mat<SR> J(m, m);
  for (int i = 0; i < 3; ++i) {
    J(i, 3 + i) = SR(-1);
    J(3 + i, i) = SR(1);
  }
  std::uniform_int_distribution<int> num(-4, 4), den(1, 4), comp(-5, 5);
  const GaussRat half(make_rational(1, 2));
  for (int t = 0; t < n; ++t) {
    Mat<SR> P(3, 3), Q(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        P(i, j) = P(j, i) = make_rational(num(rng), den(rng));
        Q(i, j) = Q(j, i) = make_rational(num(rng), den(rng));
      }
    Mat<SR> g(m, m);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        g(i, j) = P(i, j);
        g(i, 3 + j) = Q(i, j);
        g(3 + i, j) = Q(i, j);
        g(3 + i, 3 + j) = -P(i, j);
      }
    std::vector<SR> x(m), y(m);
    for (auto& e : x) e = SR(comp(rng));
    for (auto& e : y) e = SR(comp(rng));
    const GaussRat lhs = symp::complex_bilinear_value(
        g, symp::xi_project(x, J), symp::xi_project(y, J));
    const GaussRat rhs = half * symp::skew_pairing(g, J, x, y);
    o.bump(abs_approx(GaussRat(lhs - rhs)));
  }
  return o;
}

Outcome symp_automorphisms(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  o.default_tol = 1e-8;
  const auto basis = oct::derivation_basis();
  const Eigen::MatrixXd W = symp::std_omega(7);
  const Eigen::MatrixXd I14 = Eigen::MatrixXd::Identity(14, 14);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int t = 0; t < n; ++t) {
    Eigen::Matrix<double, 7, 7> D = Eigen::Matrix<double, 7, 7>::Zero();
    for (const auto& b : basis) D += u(rng) * b;
    const Eigen::MatrixXd A = D.exp();
    o.bump(oct::phi0_pullback_residual(A.cast<Complex>()));
    o.bump((A.transpose() * A - Eigen::MatrixXd::Identity(7, 7))
               .cwiseAbs()
               .maxCoeff());
    const Eigen::MatrixXd M = symp::iota_embed(A.cast<Complex>());
    o.bump((M.transpose() * W * M - W).cwiseAbs().maxCoeff());
    o.bump((M.transpose() * M - I14).cwiseAbs().maxCoeff());
  }
  return o;
}

// ---- flat deformation checks -----------------------------------------------------

Outcome flat_mode_spectra(std::mt19937_64&) {
  Outcome o;
  o.samples = 125;
  for (int kx = -2; kx <= 2; ++kx)
    for (int ky = -2; ky <= 2; ++ky)
      for (int kz = -2; kz <= 2; ++kz) {
        const double nrm = std::sqrt(double(kx * kx + ky * ky + kz * kz));
        const auto ms = flat::dirac_mode_spectrum({kx, ky, kz});
        for (int i = 0; i < 8; ++i)
          o.bump(std::abs(ms.v_block[i] - (i < 4 ? -nrm : nrm)));
        const std::array<double, 3> jty{-nrm, 0.0, nrm};
        for (int i = 0; i < 3; ++i)
          o.bump(std::abs(ms.jty_block[i] - jty[i]));
      }
  return o;
}

Outcome flat_self_adjoint(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  o.default_tol = 1e-10;
  const auto frame = flat::standard_frame();
  std::vector<int> all(flat::kFiberDim);
  for (int i = 0; i < flat::kFiberDim; ++i) all[i] = i;
  for (int t = 0; t < n; ++t) {
    const auto v = random_real_section(all, flat::kFiberDim, 2, rng);
    const auto w = random_real_section(all, flat::kFiberDim, 2, rng);
    o.bump(std::abs(l2_pairing(flat::dirac_apply(v, frame), w) -
                    l2_pairing(v, flat::dirac_apply(w, frame))));
  }
  return o;
}

Outcome flat_square_laplacian(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  const auto frame = flat::standard_frame();
  const std::vector<int> support(flat::kVIdx.begin(), flat::kVIdx.end());
  for (int t = 0; t < n; ++t) {
    const auto v = random_real_section(support, flat::kFiberDim, 2, rng);
    const auto ddv = flat::dirac_apply(flat::dirac_apply(v, frame), frame);
    flat::SectionField lap(flat::kFiberDim, 2);
    for (int axis = 0; axis < 3; ++axis)
      lap = lap + v.derivative(axis).derivative(axis);
    o.bump((ddv + lap).max_coefficient_norm());
  }
  return o;
}

Outcome flat_residual_pullback(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto ch = random_chart(2, rng);
    const auto formula = flat::isotropy_residual(ch);
    const auto pull = flat::pullback_omega(ch);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        o.bump((formula.at(i, j) - pull.at(i, j)).max_coefficient_norm());
  }
  return o;
}

Outcome flat_reassembly(int n, std::mt19937_64& rng) {
  Outcome o;
  o.samples = n;
  for (int t = 0; t < n; ++t) {
    const auto ch = random_chart(2, rng);
    const auto res = flat::isotropy_residual(ch);
    const auto d = flat::da_decomposition(ch);
    for (int i = 0; i < 3; ++i) {
      o.bump((d.a[i] - ch.sigma[i + 8]).max_coefficient_norm());
      for (int j = i + 1; j < 3; ++j)
        o.bump((d.linear.at(i, j) + d.q_term.at(i, j) - res.at(i, j))
                   .max_coefficient_norm());
    }
  }
  return o;
}

Outcome flat_killing(std::mt19937_64&) {
  Outcome o;
  o.samples = 2;
  // translations: constant vector fields are flat Killing fields
  std::array<flat::SectionField, 3> f{flat::SectionField(1, 0),
                                      flat::SectionField(1, 0),
                                      flat::SectionField(1, 0)};
  for (int i = 0; i < 3; ++i)
    f[i].set_mode({0, 0, 0},
                  Eigen::VectorXcd::Constant(1, Complex(1.0 + i, 0.0)));
  o.bump(flat::killing_residual(f).max_residual);
  // a shear witness must be detected: f = (sin x2, 0, 0)
  std::array<flat::SectionField, 3> shear{flat::SectionField(1, 1),
                                          flat::SectionField(1, 1),
                                          flat::SectionField(1, 1)};
  shear[0].add_real_mode({0, 1, 0},
                         Eigen::VectorXcd::Constant(1, Complex(0.0, -0.5)));
  o.expect(flat::killing_residual(shear).max_residual > 0.5,
           "shear field was not flagged as non-Killing");
  return o;
}

// ---- registry ---------------------------------------------------------------------

template <class FExact, class FFloat>
CheckFn pick_backend(FExact fe, FFloat ff) {
  return [fe, ff](const RunOptions& opt, std::mt19937_64& rng) {
    if (exact_run(opt)) {
      Outcome o = fe(opt, rng);
      o.backend = "exact";
      return o;
    }
    return ff(opt, rng);
  };
}

// Checks that only have a floating-point path run it under either backend.
template <class F>
CheckFn float_only(F f) {
  return [f](const RunOptions& opt, std::mt19937_64& rng) {
    Outcome o = f(opt, rng);
    o.backend = "float";
    if (exact_run(opt)) {
      if (!o.note.empty()) o.note += "; ";
      o.note += "float-only check";
    }
    return o;
  };
}

const std::vector<Suite>& registry() {
  static const std::vector<Suite> suites = [] {
    std::vector<Suite> reg;

    reg.push_back(
        {"exterior",
         {
             {"wedge products of one-forms anticommute",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return exterior_anticommute<GaussRat>(
                        cap(opt.samples, 400), rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return exterior_anticommute<Complex>(opt.samples, rng);
                  })},
             {"wedge product is associative",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return exterior_associative<GaussRat>(cap(opt.samples, 200),
                                                          rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return exterior_associative<Complex>(opt.samples, rng);
                  })},
             {"interior product is an antiderivation",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return exterior_antiderivation<GaussRat>(
                        cap(opt.samples, 200), rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return exterior_antiderivation<Complex>(opt.samples, rng);
                  })},
             {"repeated interior product vanishes",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return exterior_double_contraction<GaussRat>(
                        cap(opt.samples, 400), rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return exterior_double_contraction<Complex>(opt.samples,
                                                                rng);
                  })},
         }});

    reg.push_back(
        {"octonion",
         {
             {"Q(uv)=Q(u)Q(v)",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return octonion_composition<GaussRat>(
                        cap(opt.samples, 500), rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return octonion_composition<Complex>(opt.samples, rng);
                  })},
             {"products are orthogonal against the bilinear form",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return octonion_orthogonality<GaussRat>(
                        cap(opt.samples, 300), rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return octonion_orthogonality<Complex>(opt.samples, rng);
                  })},
             {"conjugation reverses products",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return octonion_conjugation<GaussRat>(
                        cap(opt.samples, 400), rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return octonion_conjugation<Complex>(opt.samples, rng);
                  })},
             {"associator bracket is alternating",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return octonion_alternating<GaussRat>(cap(opt.samples, 200),
                                                          rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return octonion_alternating<Complex>(opt.samples, rng);
                  })},
             {"bracket equals double cross plus bilinear correction",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return octonion_bracket<GaussRat>(cap(opt.samples, 200),
                                                      rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return octonion_bracket<Complex>(opt.samples, rng);
                  })},
             {"structure triples reproduce the calibration 3-form",
              pick_backend(
                  [](const RunOptions&, std::mt19937_64& rng) {
                    return octonion_triples<Rational>(rng);
                  },
                  [](const RunOptions&, std::mt19937_64& rng) {
                    return octonion_triples<double>(rng);
                  })},
         }});

    reg.push_back(
        {"g2core",
         {
             {"model 3-form induces the identity metric",
              pick_backend(
                  [](const RunOptions&, std::mt19937_64& rng) {
                    return core_identity_metric<GaussRat>(rng);
                  },
                  [](const RunOptions&, std::mt19937_64& rng) {
                    return core_identity_metric<Complex>(rng);
                  })},
             {"metric is covariant under unit-determinant maps",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return core_covariance_exact(cap(opt.samples, 25), rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return core_covariance_float(cap(opt.samples, 100), rng);
                  })},
             {"metric scales inversely with the volume form",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return core_volume_scaling<GaussRat>(
                        cap(opt.samples, 100), rng, [](std::mt19937_64& r) {
                          std::uniform_int_distribution<int> num(1, 9),
                              den(1, 9), sign(0, 1);
                          const Rational q =
                              make_rational(num(r) * (sign(r) ? 1 : -1),
                                            den(r));
                          return GaussRat(q);
                        });
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return core_volume_scaling<Complex>(
                        opt.samples, rng, [](std::mt19937_64& r) {
                          std::uniform_real_distribution<double> u(0.4, 2.0);
                          std::uniform_real_distribution<double> a(0.0,
                                                                   2 * M_PI);
                          const double ang = a(r);
                          return Complex(u(r) * std::cos(ang),
                                         u(r) * std::sin(ang));
                        });
                  })},
             {"volume normalization reaches norm one",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return core_normalization<GaussRat>(
                        cap(opt.samples, 50), rng, [](std::mt19937_64& r) {
                          std::uniform_int_distribution<int> num(1, 9),
                              den(1, 9);
                          return GaussRat(make_rational(num(r), den(r)));
                        });
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return core_normalization<Complex>(
                        opt.samples, rng, [](std::mt19937_64& r) {
                          std::uniform_real_distribution<double> u(0.4, 2.0);
                          std::uniform_real_distribution<double> a(0.0,
                                                                   2 * M_PI);
                          const double ang = a(r);
                          return Complex(u(r) * std::cos(ang),
                                         u(r) * std::sin(ang));
                        });
                  })},
             {"hermitian extension has the expected blocks and pairing",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return core_hermitian<Rational>(
                        cap(opt.samples, 40), rng, [](std::mt19937_64& r) {
                          std::uniform_int_distribution<int> num(-3, 3),
                              den(1, 3);
                          Mat<Rational> g(7, 7);
                          for (int i = 0; i < 7; ++i)
                            for (int j = i; j < 7; ++j)
                              g(i, j) = g(j, i) =
                                  make_rational(num(r), den(r));
                          for (int i = 0; i < 7; ++i)
                            g(i, i) = g(i, i) + Rational(10);
                          return g;
                        });
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return core_hermitian<double>(
                        cap(opt.samples, 100), rng, [](std::mt19937_64& r) {
                          std::uniform_real_distribution<double> u(-1.0, 1.0);
                          Eigen::MatrixXd A(7, 7);
                          for (int i = 0; i < 7; ++i)
                            for (int j = 0; j < 7; ++j) A(i, j) = u(r);
                          const Eigen::MatrixXd g =
                              A.transpose() * A +
                              0.5 * Eigen::MatrixXd::Identity(7, 7);
                          return mat_from_eigen(g);
                        });
                  })},
             {"unit-vector 7-form equals the standard volume",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return core_omega_u_exact(cap(opt.samples, 60), rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return core_omega_u_float(opt.samples, rng);
                  })},
         }});

    reg.push_back(
        {"grassmann",
         {
             {"coordinate planes classify as expected",
              pick_backend(
                  [](const RunOptions&, std::mt19937_64& rng) {
                    return grassmann_classify<Rational>(rng);
                  },
                  [](const RunOptions&, std::mt19937_64& rng) {
                    return grassmann_classify<double>(rng);
                  })},
             {"associative tangent spaces have dimension 8",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return grassmann_associative<Rational>(
                        cap(opt.samples, 25), rng, 1e6);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return grassmann_associative<double>(cap(opt.samples, 80),
                                                         rng, 1e6);
                  })},
             {"isotropic 3-plane tangent spaces have dimension 30",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return grassmann_isotropic<Rational>(cap(opt.samples, 15),
                                                         3, 30, rng, 1e6);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return grassmann_isotropic<double>(cap(opt.samples, 80), 3,
                                                       30, rng, 1e6);
                  })},
             {"lagrangian tangent spaces have dimension 28",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return grassmann_isotropic<Rational>(cap(opt.samples, 10),
                                                         7, 28, rng, 1e6);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return grassmann_isotropic<double>(cap(opt.samples, 60), 7,
                                                       28, rng, 1e6);
                  })},
             {"mixed-kind tangent dimensions are 22 and 19",
              pick_backend(
                  [](const RunOptions&, std::mt19937_64& rng) {
                    return grassmann_mixed<Rational>(rng);
                  },
                  [](const RunOptions&, std::mt19937_64& rng) {
                    return grassmann_mixed<double>(rng);
                  })},
         }});

    reg.push_back(
        {"sympcompat",
         {
             {"pencil metrics split with signature (7,7)",
              float_only([](const RunOptions& opt, std::mt19937_64& rng) {
                return symp_signature(cap(opt.samples / 16, 12), rng);
              })},
             {"random chart points pass all membership certificates",
              float_only([](const RunOptions& opt, std::mt19937_64& rng) {
                return symp_membership(opt.samples, rng);
              })},
             {"retraction stays in the chart with exact endpoints",
              float_only([](const RunOptions& opt, std::mt19937_64& rng) {
                return symp_retraction(cap(opt.samples, 120), rng);
              })},
             {"complex projection halves the bilinear pairing",
              pick_backend(
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return symp_projection_exact(cap(opt.samples, 300), rng);
                  },
                  [](const RunOptions& opt, std::mt19937_64& rng) {
                    return symp_projection_float(opt.samples, rng);
                  })},
             {"derivation exponentials preserve all three structures",
              float_only([](const RunOptions& opt, std::mt19937_64& rng) {
                return symp_automorphisms(cap(opt.samples, 150), rng);
              })},
         }});

    reg.push_back(
        {"flatdeform",
         {
             {"mode spectra are plus-minus the frequency norm",
              float_only([](const RunOptions&, std::mt19937_64& rng) {
                return flat_mode_spectra(rng);
              })},
             {"operator is formally self-adjoint",
              float_only([](const RunOptions& opt, std::mt19937_64& rng) {
                return flat_self_adjoint(cap(opt.samples, 40), rng);
              })},
             {"operator squares to the flat laplacian on the complement",
              float_only([](const RunOptions& opt, std::mt19937_64& rng) {
                return flat_square_laplacian(cap(opt.samples, 40), rng);
              })},
             {"isotropy residual equals the symplectic pullback",
              float_only([](const RunOptions& opt, std::mt19937_64& rng) {
                return flat_residual_pullback(cap(opt.samples, 40), rng);
              })},
             {"residual reassembles from one-form and quadratic parts",
              float_only([](const RunOptions& opt, std::mt19937_64& rng) {
                return flat_reassembly(cap(opt.samples, 40), rng);
              })},
             {"translations are killing fields and shears are not",
              float_only([](const RunOptions&, std::mt19937_64& rng) {
                return flat_killing(rng);
              })},
         }});

    return reg;
  }();
  return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& s : registry()) names.push_back(s.name);
  return names;
}

bool is_suite_name(const std::string& name) {
  if (name == "all") return true;
  for (const auto& s : registry())
    if (s.name == name) return true;
  return false;
}

std::vector<CheckResult> run_suites(const std::string& which,
                                    const RunOptions& opt) {
  if (!is_suite_name(which))
    throw std::invalid_argument("unknown suite \"" + which +
                                "\" (use one of: all, exterior, octonion, "
                                "g2core, grassmann, sympcompat, flatdeform)");
  std::vector<std::future<CheckResult>> futures;
  for (const auto& suite : registry()) {
    if (which != "all" && which != suite.name) continue;
    for (const auto& check : suite.checks) {
      futures.push_back(std::async(
          std::launch::async,
          [&suite, &check, opt]() -> CheckResult {
            CheckResult res;
            res.suite = suite.name;
            res.name = check.name;
            res.seed = opt.seed;
            std::mt19937_64 rng(opt.seed * 0x9e3779b97f4a7c15ull ^
                                fnv1a(suite.name + "/" + check.name));
            try {
              const Outcome o = check.fn(opt, rng);
              res.max_residual = o.max_residual;
              res.tolerance = opt.tol.value_or(o.default_tol);
              res.samples = o.samples;
              res.backend = o.backend;
              res.note = o.note;
              res.pass = res.max_residual <= res.tolerance;
            } catch (const std::exception& e) {
              res.max_residual = std::numeric_limits<double>::infinity();
              res.tolerance = opt.tol.value_or(1e-9);
              res.backend = exact_run(opt) ? "exact" : "float";
              res.note = std::string("check threw: ") + e.what();
              res.pass = false;
            }
            return res;
          }));
    }
  }
  std::vector<CheckResult> out;
  out.reserve(futures.size());
  for (auto& f : futures) out.push_back(f.get());
  std::sort(out.begin(), out.end(),
            [](const CheckResult& a, const CheckResult& b) {
              return a.suite != b.suite ? a.suite < b.suite : a.name < b.name;
            });
  return out;
}

}  // namespace g2kit::verify
