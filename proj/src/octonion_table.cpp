#include "g2kit/octonion.hpp"

#include <mutex>
#include <sstream>

#include <Eigen/SVD>

#include "g2kit/exact_linalg.hpp"

namespace g2kit::oct {
namespace {

StructureTable build_table() {
  StructureTable t;
  for (int i = 0; i < 8; ++i) {
    t.prod[0][i] = static_cast<std::int8_t>(i + 1);
    t.prod[i][0] = static_cast<std::int8_t>(i + 1);
  }
  for (int i = 1; i < 8; ++i) t.prod[i][i] = -1;  // e_i e_i = -1
  // e_a e_b = e_c cyclically on each oriented triple; the orientations are
  // exactly the ones that reproduce the signs of phi0.
  for (const auto& tr : kPhi0Triples) {
    const int a = tr.i, b = tr.j, c = tr.k;
    int x = a, y = b, z = c;
    if (tr.sign < 0) std::swap(y, z);  // e_a e_b = -e_c means (a, c, b) cycles
    const int cyc[3][3] = {{x, y, z}, {y, z, x}, {z, x, y}};
    for (const auto& p : cyc) {
      t.prod[p[0]][p[1]] = static_cast<std::int8_t>(p[2] + 1);
      t.prod[p[1]][p[0]] = static_cast<std::int8_t>(-(p[2] + 1));
    }
  }
  return t;
}

// Cross-checks the finished table against the 3-form and the composition
// rule before anyone is allowed to multiply. Runs once per process.
void validate_table(const StructureTable& t) {
  using O = Octonion<Rational>;

  // Local multiply that bypasses structure_table() (not yet published).
  auto mul = [&t](const O& u, const O& v) {
    O r;
    for (int i = 0; i < 8; ++i) {
      if (u.c[i] == 0) continue;
      for (int j = 0; j < 8; ++j) {
        if (v.c[j] == 0) continue;
        Rational term = u.c[i] * v.c[j];
        r.c[t.index(i, j)] += t.sign(i, j) < 0 ? Rational(-term) : term;
      }
    }
    return r;
  };
  auto conj = [](O u) {
    for (int i = 1; i < 8; ++i) u.c[i] = -u.c[i];
    return u;
  };
  auto B = [&](const O& u, const O& v) {
    Rational s = 0;
    for (int i = 0; i < 8; ++i) s += u.c[i] * v.c[i];
    return s;
  };

  // phi0(e_i,e_j,e_k) = B(e_i x e_j, e_k) on all 35 unordered basis triples.
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      for (int k = j + 1; k <= 7; ++k) {
        O cr = mul(conj(O::unit(j)), O::unit(i));  // Im part: i != j
        cr.c[0] = 0;
        const Rational got = B(cr, O::unit(k));
        const Rational want = phi0_coeff(i, j, k);
        if (got != want) {
          std::ostringstream os;
          os << "octonion structure table disagrees with the 3-form on "
             << "triple (" << i << "," << j << "," << k << "): B(e" << i
             << " x e" << j << ", e" << k << ") = " << got.get_str()
             << ", expected " << want.get_str();
          throw std::logic_error(os.str());
        }
      }

  // Composition Q(uv) = Q(u)Q(v) on all basis pairs (and a mixed sample).
  auto Q = [&](const O& u) { return B(u, u); };
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const O p = mul(O::unit(i), O::unit(j));
      if (Q(p) != Q(O::unit(i)) * Q(O::unit(j)))
        throw std::logic_error("octonion table fails composition on units");
    }
  O u, v;
  for (int i = 0; i < 8; ++i) {
    u.c[i] = make_rational(2 * i - 7, i + 1);
    v.c[i] = make_rational(3 - i, 2 * i + 1);
  }
  if (Q(mul(u, v)) != Q(u) * Q(v))
    throw std::logic_error("octonion table fails composition on a sample");
}

}  // namespace

const StructureTable& structure_table() {
  static const StructureTable table = [] {
    StructureTable t = build_table();
    validate_table(t);
    return t;
  }();
  return table;
}

Eigen::MatrixXcd cross_matrix_c7(int i) {
  if (i < 1 || i > 7)
    throw std::invalid_argument("cross_matrix_c7: index out of range 1..7");
  using O = Octonion<Complex>;
  Eigen::MatrixXcd m(7, 7);
  const O ei = O::unit(i);
  for (int col = 1; col <= 7; ++col) {
    const O r = cross(ei, O::unit(col));
    for (int row = 1; row <= 7; ++row) m(row - 1, col - 1) = r.c[row];
  }
  return m;
}

Eigen::MatrixXd cross_matrix_r14(int i) {
  const Eigen::MatrixXcd c = cross_matrix_c7(i);
  Eigen::MatrixXd m(14, 14);
  // z -> Cz realified: [Re -Im; Im Re]
  m.topLeftCorner(7, 7) = c.real();
  m.topRightCorner(7, 7) = -c.imag();
  m.bottomLeftCorner(7, 7) = c.imag();
  m.bottomRightCorner(7, 7) = c.real();
  return m;
}

Eigen::MatrixXd derivation_system() {
  const StructureTable& t = structure_table();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(49 * 8, 49);
  // Unknown D is 7x7, column-major flattening: D(e_j) = sum_m D(m,j) e_m;
  // D extends to O by D(1) = 0. Row block per ordered pair (i,j):
  //   D(e_i e_j) - D(e_i) e_j - e_i D(e_j) = 0, eight components each.
  auto unknown = [](int m, int j) { return m + 7 * j; };  // m,j in 0..6
  int row0 = 0;
  for (int i = 1; i <= 7; ++i)
    for (int j = 1; j <= 7; ++j, row0 += 8) {
      const int s = t.sign(i, j), k = t.index(i, j);
      if (k >= 1)  // D(e_k) term; k == 0 contributes D(1) = 0
        for (int m = 1; m <= 7; ++m)
          A(row0 + m, unknown(m - 1, k - 1)) += s;
      for (int m = 1; m <= 7; ++m) {  // -D(e_i) e_j = -sum_m D(m,i) e_m e_j
        A(row0 + t.index(m, j), unknown(m - 1, i - 1)) -= t.sign(m, j);
        A(row0 + t.index(i, m), unknown(m - 1, j - 1)) -= t.sign(i, m);
      }
    }
  return A;
}

int derivation_system_exact_nullity() {
  const Eigen::MatrixXd A = derivation_system();
  Mat<Rational> m(static_cast<int>(A.rows()), static_cast<int>(A.cols()));
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j)
      m(i, j) = Rational(static_cast<long>(std::lround(A(i, j))));
  return m.cols() - exact_rank(m);
}

std::vector<Eigen::Matrix<double, 7, 7>> derivation_basis(double* svd_gap) {
  const Eigen::MatrixXd A = derivation_system();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-9 * sv(0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  if (svd_gap) {
    const double kept = rank > 0 ? sv(rank - 1) : 0.0;
    const double dropped = rank < sv.size() ? sv(rank) : 0.0;
    *svd_gap = dropped > 0 ? kept / dropped
                           : std::numeric_limits<double>::infinity();
  }
  std::vector<Eigen::Matrix<double, 7, 7>> basis;
  for (int c = rank; c < sv.size(); ++c) {
    Eigen::Matrix<double, 7, 7> D;
    for (int j = 0; j < 7; ++j)
      for (int m = 0; m < 7; ++m) D(m, j) = svd.matrixV()(m + 7 * j, c);
    basis.push_back(D);
  }
  return basis;
}

double phi0_pullback_residual(const Eigen::MatrixXcd& A) {
  if (A.rows() != 7 || A.cols() != 7)
    throw std::invalid_argument("phi0_pullback_residual: need a 7x7 matrix");
  using O = Octonion<Complex>;
  auto col_oct = [&A](int j) {
    std::vector<Complex> v(7);
    for (int r = 0; r < 7; ++r) v[r] = A(r, j - 1);
    return O::imaginary(v);
  };
  std::array<O, 8> img{};
  for (int j = 1; j <= 7; ++j) img[j] = col_oct(j);
  double worst = 0.0;
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j)
      for (int k = j + 1; k <= 7; ++k) {
        const Complex got = bilinear_B(cross(img[i], img[j]), img[k]);
        worst = std::max(worst,
                         std::abs(got - Complex(phi0_coeff(i, j, k), 0.0)));
      }
  return worst;
}

}  // namespace g2kit::oct
