#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "g2kit/octonion.hpp"
#include "g2kit/sympcompat.hpp"

using namespace g2kit;

namespace {

Eigen::MatrixXcd random_complex_symmetric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) b(i, j) = b(j, i) = Complex(u(rng), u(rng));
  return b;
}

Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  return a.transpose() * a + Eigen::MatrixXd::Identity(n, n);
}

std::vector<double> random_vec(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Random metric with g(Ju, Jv) = -g(u, v): the skew part of any symmetric
// seed, g = (S - J^T S J) / 2.
Eigen::MatrixXd random_skew_compatible_metric(const Eigen::MatrixXd& J,
                                              std::mt19937_64& rng) {
  const int m = J.rows();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd s(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) s(i, j) = s(j, i) = u(rng);
  return 0.5 * (s - J.transpose() * s * J);
}

Mat<Rational> rational_matrix(const std::vector<std::vector<long>>& rows) {
  Mat<Rational> m(static_cast<int>(rows.size()),
                  static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      m(i, j) = make_rational(rows[i][static_cast<size_t>(j)], 1);
  return m;
}

}  // namespace

TEST_CASE("standard structures: J0, W, and the realification embedding") {
  const int n = 4;
  const Eigen::MatrixXd j = symp::std_j(n);
  const Eigen::MatrixXd w = symp::std_omega(n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  CHECK((j * j + I).cwiseAbs().maxCoeff() == 0.0);
  CHECK((w + j).cwiseAbs().maxCoeff() == 0.0);
  CHECK((j.transpose() * w * j - w).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd A(n, n), B(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      A(i, k) = Complex(u(rng), u(rng));
      B(i, k) = Complex(u(rng), u(rng));
    }
  // iota is a homomorphism of algebras and intertwines i with J0
  CHECK((symp::iota_embed(A * B) - symp::iota_embed(A) * symp::iota_embed(B))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((symp::iota_embed(Complex(0, 1) * A) - j * symp::iota_embed(A))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK(symp::is_complex_linear(symp::iota_embed(A)));
  CHECK((symp::complex_part(symp::iota_embed(A)) - A).cwiseAbs().maxCoeff() <
        1e-12);
  // a generic real matrix is not complex linear
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  M(0, 1) = 1.0;
  CHECK(!symp::is_complex_linear(M));
  CHECK_THROWS_AS((void)symp::complex_part(M), std::invalid_argument);
}

TEST_CASE("realified pencil of a complex symmetric form has split signature") {
  std::mt19937_64 rng(2026);
  const int n = 7;
  // the identity form at t = 0: block diag(I, -I)
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const auto s0 = symp::signature_of(symp::metric_family(id, 0.0));
  CHECK(s0.positive == n);
  CHECK(s0.negative == n);
  CHECK(s0.zero == 0);

  for (int rep = 0; rep < 10; ++rep) {
    // keep the form away from degeneracy by adding a multiple of I
    Eigen::MatrixXcd b = random_complex_symmetric(n, rng);
    b += 3.0 * Eigen::MatrixXcd::Identity(n, n);
    for (int step = 0; step < 64; ++step) {
      const double t = 2.0 * M_PI * step / 64.0;
      const Eigen::MatrixXd G = symp::metric_family(b, t);
      CHECK((G - G.transpose()).cwiseAbs().maxCoeff() < 1e-12);
      const auto s = symp::signature_of(G);
      CHECK(s.positive == n);
      CHECK(s.negative == n);
      CHECK(s.zero == 0);
    }
  }
  CHECK_THROWS_AS(
      (void)symp::metric_family(Eigen::MatrixXcd::Random(3, 3), 0.0),
      std::invalid_argument);
}

TEST_CASE("compatible complex structures: chart membership") {
  std::mt19937_64 rng(7);
  const int n = 5;
  const Eigen::MatrixXd J0 = symp::std_j(n);
  CHECK(symp::is_in_cal_J(J0).in_class);

  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd J = symp::random_cal_j(n, rng);
    const auto v = symp::is_in_cal_J(J);
    CHECK(v.in_class);
    CHECK(v.square_is_minus_identity);
    CHECK(v.symplectic);
    CHECK(v.metric_symmetric_positive);
    CHECK(v.chart_normalized);
    CHECK(v.residual < 1e-10);
    // the induced symmetric form W J is positive definite
    const Eigen::MatrixXd P = symp::std_omega(n) * J;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }

  // each condition can fail separately
  CHECK(!symp::is_in_cal_J(2.0 * J0).square_is_minus_identity);
  CHECK(!symp::is_in_cal_J(2.0 * J0).in_class);
  // -J0 squares to -I and is symplectic, but W(-J0) is negative definite
  const auto vneg = symp::is_in_cal_J(-J0);
  CHECK(vneg.square_is_minus_identity);
  CHECK(vneg.symplectic);
  CHECK(!vneg.metric_symmetric_positive);
  CHECK(!vneg.in_class);
  // a symplectic (non complex linear) scaling leaves the chart: conjugating
  // J0 by S = diag(2, 1, ..., 1/2, 1, ...) keeps compatibility but the
  // induced metric W J is no longer normalized on the first block
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  S(0, 0) = 2.0;
  S(n, n) = 0.5;
  const Eigen::MatrixXd Jc = S * J0 * S.inverse();
  const auto vc = symp::is_in_cal_J(Jc);
  CHECK(vc.square_is_minus_identity);
  CHECK(vc.symplectic);
  CHECK(!vc.chart_normalized);
  CHECK(!vc.in_class);

  CHECK_THROWS_AS((void)symp::is_in_cal_J(Eigen::MatrixXd::Zero(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("retraction: exact endpoints and membership along the path") {
  std::mt19937_64 rng(99);
  const int n = 7;
  const Eigen::MatrixXd J0 = symp::std_j(n);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::MatrixXd J1 = symp::random_cal_j(n, rng);
    CHECK((symp::j_retract(J1, 0.0) - J0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((symp::j_retract(J1, 1.0) - J1).cwiseAbs().maxCoeff() < 1e-12);
    for (int step = 0; step <= 16; ++step) {
      const double t = step / 16.0;
      const auto v = symp::is_in_cal_J(symp::j_retract(J1, t));
      CHECK(v.in_class);
      CHECK(v.residual < 1e-10);
    }
  }
  // refuses endpoints outside the chart
  CHECK_THROWS_WITH_AS((void)symp::j_retract(-J0, 0.5),
                       doctest::Contains("not in the normalized chart"),
                       std::invalid_argument);
}

TEST_CASE("skew-compatible metric induces a symmetric complex bilinear form") {
  std::mt19937_64 rng(13);
  const int n = 6;
  for (int rep = 0; rep < 15; ++rep) {
    const Eigen::MatrixXd J =
        rep % 2 == 0 ? symp::std_j(n) : symp::random_cal_j(n, rng);
    const Eigen::MatrixXd g = random_skew_compatible_metric(J, rng);
    const Eigen::MatrixXcd B = symp::bilinear_from_skew(g, J);
    // symmetric as a complex bilinear form
    CHECK((B - B.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    // complex bilinearity on realified vectors: B(Ju, v) = i B(u, v), where
    // B(u, v) = g(u, v) - i g(Ju, v)
    for (int k = 0; k < 5; ++k) {
      const auto u = random_vec(2 * n, rng);
      const auto v = random_vec(2 * n, rng);
      Mat<double> gm(2 * n, 2 * n), jm(2 * n, 2 * n);
      for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j) {
          gm(i, j) = g(i, j);
          jm(i, j) = J(i, j);
        }
      std::vector<double> ju(2 * n, 0.0);
      for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j) ju[i] += J(i, j) * v[j];
      // here ju = J v, test linearity in the second slot as well
      const Complex buv = symp::skew_pairing(gm, jm, u, v);
      std::vector<double> jv = ju;
      std::vector<double> jU(2 * n, 0.0);
      for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j) jU[i] += J(i, j) * u[j];
      CHECK(std::abs(symp::skew_pairing(gm, jm, jU, v) -
                     Complex(0, 1) * buv) < 1e-10);
      CHECK(std::abs(symp::skew_pairing(gm, jm, u, jv) -
                     Complex(0, 1) * buv) < 1e-10);
    }
    // matrix entries agree with the pairing on basis vectors
    Mat<double> gm(2 * n, 2 * n), jm(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
      for (int j = 0; j < 2 * n; ++j) {
        gm(i, j) = g(i, j);
        jm(i, j) = J(i, j);
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::vector<double> ei(2 * n, 0.0), ej(2 * n, 0.0);
        ei[i] = 1.0;
        ej[j] = 1.0;
        CHECK(std::abs(symp::skew_pairing(gm, jm, ei, ej) - B(i, j)) < 1e-12);
      }
  }
  // precondition: plain SPD metrics are not skew-compatible
  const Eigen::MatrixXd J = symp::std_j(3);
  CHECK_THROWS_WITH_AS(
      (void)symp::bilinear_from_skew(Eigen::MatrixXd::Identity(6, 6), J),
      doctest::Contains("not skew-compatible"), std::invalid_argument);
}

TEST_CASE("projection identity: g_C(xi u, xi v) = B(u, v) / 2, exact field") {
  // g = [[P, Q], [Q, -P]] with P, Q symmetric is the general form satisfying
  // g(J0 u, J0 v) = -g(u, v); check the identity over the Gaussian rationals.
  const Mat<Rational> P = rational_matrix({{2, 1, 0},
                                           {1, -3, 2},
                                           {0, 2, 5}});
  const Mat<Rational> Q = rational_matrix({{1, 4, -2},
                                           {4, 0, 3},
                                           {-2, 3, 7}});
  const int n = 3, m = 2 * n;
  Mat<Rational> g(m, m), J(m, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g(i, j) = P(i, j);
      g(i, n + j) = Q(i, j);
      g(n + i, j) = Q(i, j);
      g(n + i, n + j) = Rational(-P(i, j));
    }
  for (int i = 0; i < n; ++i) {
    J(i, n + i) = make_rational(-1, 1);
    J(n + i, i) = make_rational(1, 1);
  }

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-9, 9);
  const GaussRat half(make_rational(1, 2));
  for (int rep = 0; rep < 25; ++rep) {
    std::vector<Rational> u(m), v(m);
    for (int i = 0; i < m; ++i) {
      u[i] = make_rational(d(rng), 1);
      v[i] = make_rational(d(rng), 1);
    }
    const auto xu = symp::xi_project(u, J);
    const auto xv = symp::xi_project(v, J);
    const GaussRat lhs = symp::complex_bilinear_value(g, xu, xv);
    const GaussRat rhs = half * symp::skew_pairing(g, J, u, v);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("projection identity holds at every chart point, float backend") {
  std::mt19937_64 rng(31);
  const int n = 7, m = 2 * n;
  for (int rep = 0; rep < 12; ++rep) {
    const Eigen::MatrixXd J = symp::random_cal_j(n, rng);
    const Eigen::MatrixXd g = random_skew_compatible_metric(J, rng);
    Mat<double> gm(m, m), jm(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        gm(i, j) = g(i, j);
        jm(i, j) = J(i, j);
      }
    for (int k = 0; k < 10; ++k) {
      const auto u = random_vec(m, rng);
      const auto v = random_vec(m, rng);
      const auto xu = symp::xi_project(u, jm);
      const auto xv = symp::xi_project(v, jm);
      const Complex lhs = symp::complex_bilinear_value(gm, xu, xv);
      const Complex rhs = 0.5 * symp::skew_pairing(gm, jm, u, v);
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("Darboux frame adapted to a Lagrangian plane") {
  const int n = 4, m = 2 * n;
  // exact: the coordinate Lagrangian span(e_1..e_n), mixed with a shear
  Mat<Rational> L(m, n);
  for (int j = 0; j < n; ++j) L(j, j) = make_rational(1, 1);
  L(0, 1) = make_rational(2, 3);  // still spans a coordinate Lagrangian
  const Mat<Rational> F = symp::omega_standard_frame(L);
  const Mat<Rational> W = grass::omega_standard_matrix<Rational>(n);
  const Mat<Rational> G = F.transpose() * W * F;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) CHECK(G(i, j) == W(i, j));
  // frame spans: first block spans L
  Mat<Rational> first(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) first(i, j) = F(i, j);
  CHECK(grass::span_equal(first, L));

  // float: random graph Lagrangians {(x, S x)} for symmetric S
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 12; ++rep) {
    Eigen::MatrixXd S(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) S(i, j) = S(j, i) = u(rng);
    Mat<double> basis(m, n);
    for (int j = 0; j < n; ++j) {
      basis(j, j) = 1.0;
      for (int i = 0; i < n; ++i) basis(n + i, j) = S(i, j);
    }
    const Mat<double> Fd = symp::omega_standard_frame(basis, 1e-9);
    const Mat<double> Wd = grass::omega_standard_matrix<double>(n);
    const Mat<double> Gd = Fd.transpose() * Wd * Fd;
    double resid = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        resid = std::max(resid, std::abs(Gd(i, j) - Wd(i, j)));
    CHECK(resid < 1e-9);
  }

  // non-Lagrangian input is rejected
  Mat<Rational> bad(m, n);
  for (int j = 0; j < n; ++j) bad(j, j) = make_rational(1, 1);
  bad(n + 1, 0) = make_rational(1, 1);  // omega(b_0, b_1) = 1
  CHECK_THROWS_WITH_AS((void)symp::omega_standard_frame(bad),
                       doctest::Contains("not Lagrangian"),
                       std::invalid_argument);
}

TEST_CASE("flat cotangent model: the metric-induced structure is compatible") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 3 + static_cast<int>(rep % 4);
    const Eigen::MatrixXd g = random_spd(n, rng);
    const Eigen::MatrixXd J = symp::flat_cotangent_J(g);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    const Eigen::MatrixXd W = symp::std_j(n);  // model omega-matrix
    CHECK((J * J + I).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((J.transpose() * W * J - W).cwiseAbs().maxCoeff() < 1e-10);
    // omega(J u, v) is symmetric positive definite
    const Eigen::MatrixXd P = J.transpose() * W;
    CHECK((P - P.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 *
                                                      (P + P.transpose()));
    CHECK(es.eigenvalues().minCoeff() > 1e-12);
    // the euclidean metric gives the standard structure
    CHECK((symp::flat_cotangent_J(Eigen::MatrixXd::Identity(n, n)) -
           symp::std_j(n))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
  Eigen::MatrixXd notspd = -Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS((void)symp::flat_cotangent_J(notspd), std::invalid_argument);
}

TEST_CASE("automorphism exponentials act unitarily on the realification") {
  double gap = 0.0;
  const auto basis = oct::derivation_basis(&gap);
  REQUIRE(basis.size() == 14);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::Matrix<double, 7, 7> D = Eigen::Matrix<double, 7, 7>::Zero();
    for (const auto& b : basis) D += u(rng) * b;
    const Eigen::MatrixXd A = D.exp();
    // preserves the model 3-form, hence the metric: A is orthogonal
    CHECK(oct::phi0_pullback_residual(A) < 1e-8);
    CHECK((A.transpose() * A - Eigen::MatrixXd::Identity(7, 7))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    // the complexified action embeds into the symplectic and complex linear
    // transformations of R^14
    const Eigen::MatrixXd M = symp::iota_embed(A);
    const Eigen::MatrixXd W = symp::std_omega(7);
    CHECK(symp::is_complex_linear(M));
    CHECK((M.transpose() * W * M - W).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((M.transpose() * M - Eigen::MatrixXd::Identity(14, 14))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }
}
