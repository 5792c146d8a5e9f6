#pragma once

// Truncated Fourier model of first-order deformations over a flat 3-torus
// sitting inside the flat complexified 7-torus model. Provides:
//   - sparse trig-polynomial section fields on the 3-torus and frame fields
//     on the 7-torus,
//   - the Dirac-type operator sum_i e_i x d_i with octonion cross products
//     as Clifford multiplication, its frame-induced perturbation a(v),
//     and per-mode spectra,
//   - the isotropy residual of a deformation chart, its independent pullback
//     computation, and the linear + quadratic decomposition,
//   - the flat Killing residual of a vector field on the 3-torus.
//
// Derivatives are exact (i k multipliers per mode); pointwise products are
// exact sparse convolutions of the coefficient maps, so the main path has no
// discretization error. Grids appear only in pointwise validation and
// max-norm estimates.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "g2kit/octonion.hpp"
#include "g2kit/scalar.hpp"

namespace g2kit::flat {

using Freq3 = std::array<int, 3>;
using Freq7 = std::array<int, 7>;

// Realified fiber along the base 3-torus: components 0..6 are the imaginary
// octonion directions e1..e7, components 7..13 their images under the fiber
// complex structure. The base tangent occupies {0,1,2}; the normal bundle
// splits into the J-tangent part {7,8,9} and the 8-dimensional complement.
inline constexpr int kFiberDim = 14;
inline constexpr std::array<int, 3> kTangentIdx{0, 1, 2};
inline constexpr std::array<int, 3> kJTangentIdx{7, 8, 9};
inline constexpr std::array<int, 8> kVIdx{3, 4, 5, 6, 10, 11, 12, 13};

// ---- section fields on the 3-torus ---------------------------------------

class SectionField {
 public:
  explicit SectionField(int fiber_dim = kFiberDim, int max_freq = 3)
      : fiber_(fiber_dim), band_(max_freq) {
    if (fiber_dim < 1)
      throw std::invalid_argument(
          "SectionField: fiber dimension must be positive");
    if (max_freq < 0)
      throw std::invalid_argument("SectionField: band limit must be >= 0");
  }

  [[nodiscard]] int fiber_dim() const { return fiber_; }
  [[nodiscard]] int max_freq() const { return band_; }
  [[nodiscard]] const std::map<Freq3, Eigen::VectorXcd>& modes() const {
    return modes_;
  }
  [[nodiscard]] Eigen::VectorXcd mode(const Freq3& k) const {
    const auto it = modes_.find(k);
    if (it == modes_.end()) return Eigen::VectorXcd::Zero(fiber_);
    return it->second;
  }

  void set_mode(const Freq3& k, const Eigen::VectorXcd& c) {
    check_mode(k, c);
    modes_[k] = c;
  }
  void add_mode(const Freq3& k, const Eigen::VectorXcd& c) {
    check_mode(k, c);
    const auto it = modes_.find(k);
    if (it == modes_.end())
      modes_[k] = c;
    else
      it->second += c;
  }
  // Adds the real-valued contribution c e^{ikx} + conj(c) e^{-ikx}. Note
  // that at k = 0 the two terms coincide and the sum is 2 Re(c).
  void add_real_mode(const Freq3& k, const Eigen::VectorXcd& c) {
    add_mode(k, c);
    add_mode({-k[0], -k[1], -k[2]}, c.conjugate());
  }

  [[nodiscard]] bool satisfies_reality(double tol = 1e-12) const {
    for (const auto& [k, c] : modes_) {
      const Eigen::VectorXcd other = mode({-k[0], -k[1], -k[2]});
      if ((other.conjugate() - c).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
  }

  [[nodiscard]] Eigen::VectorXcd evaluate(const std::array<double, 3>& x) const {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(fiber_);
    for (const auto& [k, c] : modes_) {
      const double phase = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
      acc += std::exp(Complex(0.0, phase)) * c;
    }
    return acc;
  }

  [[nodiscard]] SectionField derivative(int axis) const {
    if (axis < 0 || axis > 2)
      throw std::invalid_argument("SectionField::derivative: axis out of range");
    SectionField out(fiber_, band_);
    for (const auto& [k, c] : modes_)
      out.modes_[k] = Complex(0.0, static_cast<double>(k[axis])) * c;
    return out;
  }

  [[nodiscard]] SectionField component(int idx) const {
    if (idx < 0 || idx >= fiber_)
      throw std::invalid_argument("SectionField::component: index out of range");
    SectionField out(1, band_);
    for (const auto& [k, c] : modes_)
      out.modes_[k] = Eigen::VectorXcd::Constant(1, c(idx));
    return out;
  }

  // Places a scalar field into one fiber component of a wider field.
  [[nodiscard]] static SectionField embed_scalar(const SectionField& s,
                                                 int idx, int fiber_dim) {
    if (s.fiber_dim() != 1)
      throw std::invalid_argument("embed_scalar: scalar field expected");
    if (idx < 0 || idx >= fiber_dim)
      throw std::invalid_argument("embed_scalar: index out of range");
    SectionField out(fiber_dim, s.max_freq());
    for (const auto& [k, c] : s.modes_) {
      Eigen::VectorXcd full = Eigen::VectorXcd::Zero(fiber_dim);
      full(idx) = c(0);
      out.modes_[k] = full;
    }
    return out;
  }

  [[nodiscard]] double max_coefficient_norm() const {
    double m = 0.0;
    for (const auto& [k, c] : modes_)
      m = std::max(m, c.cwiseAbs().maxCoeff());
    return m;
  }

  friend SectionField operator+(const SectionField& a, const SectionField& b) {
    if (a.fiber_ != b.fiber_)
      throw std::invalid_argument("SectionField: fiber dimensions differ");
    SectionField out(a.fiber_, std::max(a.band_, b.band_));
    out.modes_ = a.modes_;
    for (const auto& [k, c] : b.modes_) out.add_mode(k, c);
    return out;
  }
  friend SectionField operator-(const SectionField& a, const SectionField& b) {
    return a + (-1.0) * b;
  }
  friend SectionField operator*(double s, const SectionField& a) {
    SectionField out(a.fiber_, a.band_);
    for (const auto& [k, c] : a.modes_) out.modes_[k] = s * c;
    return out;
  }

 private:
  void check_mode(const Freq3& k, const Eigen::VectorXcd& c) const {
    if (c.size() != fiber_)
      throw std::invalid_argument("SectionField: coefficient size mismatch");
    for (int i = 0; i < 3; ++i)
      if (std::abs(k[i]) > band_)
        throw std::invalid_argument(
            "SectionField: mode outside the declared band");
  }

  int fiber_;
  int band_;
  std::map<Freq3, Eigen::VectorXcd> modes_;
};

// Pointwise product with a scalar (1-dimensional fiber) field, computed as
// an exact convolution of the coefficient maps.
[[nodiscard]] inline SectionField scalar_times(const SectionField& s,
                                               const SectionField& v) {
  if (s.fiber_dim() != 1)
    throw std::invalid_argument("scalar_times: first factor must be scalar");
  SectionField out(v.fiber_dim(), s.max_freq() + v.max_freq());
  for (const auto& [k1, c1] : s.modes())
    for (const auto& [k2, c2] : v.modes())
      out.add_mode({k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]}, c1(0) * c2);
  return out;
}

// ---- octonion cross product on fibers -------------------------------------

// Matrices of left cross product with the imaginary units: column m of
// cross_matrices()[i] holds e_{i+1} x e_{m+1}.
[[nodiscard]] inline const std::array<Eigen::Matrix<double, 7, 7>, 7>&
cross_matrices() {
  static const std::array<Eigen::Matrix<double, 7, 7>, 7> tables = [] {
    std::array<Eigen::Matrix<double, 7, 7>, 7> t;
    for (int i = 0; i < 7; ++i) {
      t[i].setZero();
      const auto u = oct::Octonion<double>::unit(i + 1);
      for (int m = 0; m < 7; ++m) {
        const auto w = oct::cross(u, oct::Octonion<double>::unit(m + 1));
        for (int r = 0; r < 7; ++r) t[i](r, m) = w.c[r + 1];
      }
    }
    return t;
  }();
  return tables;
}

[[nodiscard]] inline Eigen::VectorXcd cross7(const Eigen::VectorXcd& a,
                                             const Eigen::VectorXcd& b) {
  if (a.size() != 7 || b.size() != 7)
    throw std::invalid_argument("cross7: need 7-component vectors");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(7);
  for (int i = 0; i < 7; ++i) {
    if (a(i) == Complex(0.0, 0.0)) continue;
    out += a(i) * (cross_matrices()[i].cast<Complex>() * b);
  }
  return out;
}

// A real octonion value acts on the realified fiber block-diagonally.
[[nodiscard]] inline Eigen::VectorXcd cross14(const Eigen::VectorXcd& e,
                                              const Eigen::VectorXcd& v) {
  if (e.size() != 7 || v.size() != kFiberDim)
    throw std::invalid_argument("cross14: size mismatch");
  Eigen::VectorXcd out(kFiberDim);
  out.head(7) = cross7(e, v.head(7));
  out.tail(7) = cross7(e, v.tail(7));
  return out;
}

[[nodiscard]] inline SectionField cross_product7(const SectionField& a,
                                                 const SectionField& b) {
  if (a.fiber_dim() != 7 || b.fiber_dim() != 7)
    throw std::invalid_argument("cross_product7: need 7-dimensional fibers");
  SectionField out(7, a.max_freq() + b.max_freq());
  for (const auto& [k1, c1] : a.modes())
    for (const auto& [k2, c2] : b.modes())
      out.add_mode({k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]},
                   cross7(c1, c2));
  return out;
}

[[nodiscard]] inline SectionField cross_product14(const SectionField& e,
                                                  const SectionField& v) {
  if (e.fiber_dim() != 7 || v.fiber_dim() != kFiberDim)
    throw std::invalid_argument("cross_product14: fiber mismatch");
  SectionField out(kFiberDim, e.max_freq() + v.max_freq());
  for (const auto& [k1, c1] : e.modes())
    for (const auto& [k2, c2] : v.modes())
      out.add_mode({k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]},
                   cross14(c1, c2));
  return out;
}

// ---- frame fields on the 7-torus ------------------------------------------

class FrameField {
 public:
  explicit FrameField(int max_freq = 3) : band_(max_freq) {
    if (max_freq < 0)
      throw std::invalid_argument("FrameField: band limit must be >= 0");
  }

  [[nodiscard]] int max_freq() const { return band_; }
  [[nodiscard]] const std::map<Freq7, Eigen::VectorXcd>& modes() const {
    return modes_;
  }

  void set_mode(const Freq7& k, const Eigen::VectorXcd& c) {
    check_mode(k, c);
    modes_[k] = c;
  }
  void add_mode(const Freq7& k, const Eigen::VectorXcd& c) {
    check_mode(k, c);
    const auto it = modes_.find(k);
    if (it == modes_.end())
      modes_[k] = c;
    else
      it->second += c;
  }
  void add_real_mode(const Freq7& k, const Eigen::VectorXcd& c) {
    add_mode(k, c);
    Freq7 mk;
    for (int i = 0; i < 7; ++i) mk[i] = -k[i];
    add_mode(mk, c.conjugate());
  }

  [[nodiscard]] Eigen::VectorXcd evaluate(const std::array<double, 7>& x) const {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(7);
    for (const auto& [k, c] : modes_) {
      double phase = 0.0;
      for (int i = 0; i < 7; ++i) phase += k[i] * x[i];
      acc += std::exp(Complex(0.0, phase)) * c;
    }
    return acc;
  }

  [[nodiscard]] FrameField derivative(int axis) const {
    if (axis < 0 || axis > 6)
      throw std::invalid_argument("FrameField::derivative: axis out of range");
    FrameField out(band_);
    for (const auto& [k, c] : modes_)
      out.modes_[k] = Complex(0.0, static_cast<double>(k[axis])) * c;
    return out;
  }

  // Restriction to the base torus x4 = ... = x7 = 0: coefficients with the
  // same base frequencies collapse onto a 3-torus field.
  [[nodiscard]] SectionField restrict_to_base() const {
    SectionField out(7, band_);
    for (const auto& [k, c] : modes_)
      out.add_mode({k[0], k[1], k[2]}, c);
    return out;
  }

 private:
  void check_mode(const Freq7& k, const Eigen::VectorXcd& c) const {
    if (c.size() != 7)
      throw std::invalid_argument("FrameField: coefficient size must be 7");
    for (int i = 0; i < 7; ++i)
      if (std::abs(k[i]) > band_)
        throw std::invalid_argument(
            "FrameField: mode outside the declared band");
  }

  int band_;
  std::map<Freq7, Eigen::VectorXcd> modes_;
};

struct AssociativeFrame {
  std::array<FrameField, 3> e{FrameField(0), FrameField(0), FrameField(0)};
};

// The constant frame e1, e2, e3.
[[nodiscard]] inline AssociativeFrame standard_frame() {
  AssociativeFrame f;
  const Freq7 zero{0, 0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(7);
    c(i) = Complex(1.0, 0.0);
    f.e[i].set_mode(zero, c);
  }
  return f;
}

// Pointwise validation on a base-torus grid: values must be real,
// orthonormal, and span an associative plane (vanishing associator).
// Throws with the offending grid location.
inline void validate_frame(const AssociativeFrame& frame, int grid = 0,
                           double tol = 1e-8) {
  int band = 0;
  for (const auto& f : frame.e) band = std::max(band, f.max_freq());
  if (grid <= 0) grid = 2 * band + 3;
  const double step = 2.0 * M_PI / grid;
  for (int ix = 0; ix < grid; ++ix)
    for (int iy = 0; iy < grid; ++iy)
      for (int iz = 0; iz < grid; ++iz) {
        const std::array<double, 7> x{ix * step, iy * step, iz * step,
                                      0.0,       0.0,       0.0,      0.0};
        const std::string loc = " at grid point (" + std::to_string(ix) +
                                ", " + std::to_string(iy) + ", " +
                                std::to_string(iz) + ")";
        std::array<Eigen::VectorXd, 3> val;
        for (int i = 0; i < 3; ++i) {
          const Eigen::VectorXcd v = frame.e[i].evaluate(x);
          if (v.imag().cwiseAbs().maxCoeff() > tol)
            throw std::invalid_argument("frame value is not real" + loc);
          val[i] = v.real();
        }
        for (int i = 0; i < 3; ++i)
          for (int j = i; j < 3; ++j) {
            const double expect = i == j ? 1.0 : 0.0;
            if (std::abs(val[i].dot(val[j]) - expect) > tol)
              throw std::invalid_argument("frame is not orthonormal" + loc);
          }
        std::array<oct::Octonion<double>, 3> o;
        for (int i = 0; i < 3; ++i)
          o[i] = oct::Octonion<double>::imaginary(
              std::vector<double>(val[i].data(), val[i].data() + 7));
        if (oct::associator(o[0], o[1], o[2]).max_abs() > tol)
          throw std::invalid_argument("frame is not associative" + loc);
      }
}

// ---- the Dirac-type operator and its perturbation --------------------------

// D(v) = sum_i e_i x d_i v with exact spectral derivatives; the frame is
// validated pointwise before use.
[[nodiscard]] inline SectionField dirac_apply(const SectionField& v,
                                              const AssociativeFrame& frame,
                                              double tol = 1e-8) {
  if (v.fiber_dim() != kFiberDim)
    throw std::invalid_argument("dirac_apply: section fiber must be 14");
  validate_frame(frame, 0, tol);
  SectionField out(kFiberDim, 0);
  for (int i = 0; i < 3; ++i) {
    const SectionField ei = frame.e[i].restrict_to_base();
    out = out + cross_product14(ei, v.derivative(i));
  }
  return out;
}

// a(v) = -sum_i e_i x (nabla_v e_i). Only the components of v along the
// normal base directions differentiate the frame: the frame fields live on
// the base 7-torus, so fiber directions contribute nothing, and tangential
// components are excluded from normal sections.
[[nodiscard]] inline SectionField perturbation_term(
    const AssociativeFrame& frame, const SectionField& v, double tol = 1e-8) {
  if (v.fiber_dim() != kFiberDim)
    throw std::invalid_argument("perturbation_term: section fiber must be 14");
  validate_frame(frame, 0, tol);
  SectionField acc(7, 0);
  for (int i = 0; i < 3; ++i) {
    const SectionField ei = frame.e[i].restrict_to_base();
    SectionField w(7, 0);  // nabla_v e_i along the base torus
    bool any = false;
    for (int c = 3; c <= 6; ++c) {  // normal coordinates x4..x7
      const SectionField dc = frame.e[i].derivative(c).restrict_to_base();
      if (dc.max_coefficient_norm() == 0.0) continue;
      w = w + scalar_times(v.component(c), dc);
      any = true;
    }
    if (any) acc = acc + cross_product7(ei, w);
  }
  SectionField out(kFiberDim, acc.max_freq());
  for (const auto& [k, c] : acc.modes()) {
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(kFiberDim);
    full.head(7) = -c;
    out.add_mode(k, full);
  }
  return out;
}

// ---- per-mode symbols and spectra ------------------------------------------

// Symbol of D at frequency k for the constant frame: i sum_j k_j M_j with
// M_j the block-diagonal cross action; hermitian because the cross matrices
// are skew.
[[nodiscard]] inline Eigen::MatrixXcd dirac_symbol(const Freq3& k) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(kFiberDim, kFiberDim);
  for (int j = 0; j < 3; ++j) {
    const auto& C = cross_matrices()[j];
    m.topLeftCorner(7, 7) += k[j] * C;
    m.bottomRightCorner(7, 7) += k[j] * C;
  }
  return Complex(0.0, 1.0) * m.cast<Complex>();
}

struct ModeSpectrum {
  Freq3 k{};
  std::vector<double> v_block;    // 8 eigenvalues, ascending
  std::vector<double> jty_block;  // 3 eigenvalues, ascending
};

[[nodiscard]] inline ModeSpectrum dirac_mode_spectrum(const Freq3& k) {
  const Eigen::MatrixXcd S = dirac_symbol(k);
  const auto block_eigs = [&](const auto& idx) {
    const int n = static_cast<int>(idx.size());
    Eigen::MatrixXcd m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(a, b) = S(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    return std::vector<double>(es.eigenvalues().data(),
                               es.eigenvalues().data() + n);
  };
  ModeSpectrum ms;
  ms.k = k;
  ms.v_block = block_eigs(kVIdx);
  ms.jty_block = block_eigs(kJTangentIdx);
  return ms;
}

struct EigenvalueCount {
  double eigenvalue = 0.0;
  int multiplicity = 0;
};

// Aggregated spectrum of the band-truncated operator on normal sections:
// for every mode |k_i| <= N, the symbol eigenvalues on the 11-dimensional
// normal fiber, clustered to within cluster_tol.
[[nodiscard]] inline std::vector<EigenvalueCount> dirac_spectrum(
    int max_freq, double cluster_tol = 1e-9) {
  if (max_freq < 0)
    throw std::invalid_argument("dirac_spectrum: band limit must be >= 0");
  std::vector<double> eigs;
  for (int kx = -max_freq; kx <= max_freq; ++kx)
    for (int ky = -max_freq; ky <= max_freq; ++ky)
      for (int kz = -max_freq; kz <= max_freq; ++kz) {
        const ModeSpectrum ms = dirac_mode_spectrum({kx, ky, kz});
        eigs.insert(eigs.end(), ms.v_block.begin(), ms.v_block.end());
        eigs.insert(eigs.end(), ms.jty_block.begin(), ms.jty_block.end());
      }
  std::sort(eigs.begin(), eigs.end());
  std::vector<EigenvalueCount> out;
  for (double v : eigs) {
    if (!out.empty() && v - out.back().eigenvalue <= cluster_tol) {
      ++out.back().multiplicity;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

// ---- deformation charts and the isotropy residual ---------------------------

// Scalar fields sigma^4..sigma^14 of a deformation chart. The chart is
// normalized so that sigma^1..sigma^3 are the base coordinates themselves;
// they enter all formulas only through d sigma^m = dx^m.
struct DeformationChart {
  int max_freq = 3;
  std::array<SectionField, 15> sigma;  // 1-based labels; entries 4..14 used

  explicit DeformationChart(int band = 3) : max_freq(band) {
    for (auto& s : sigma) s = SectionField(1, band);
  }
};

// d sigma^m / dx^axis as a scalar field (m is the 1-based component label).
[[nodiscard]] inline SectionField chart_derivative(const DeformationChart& ch,
                                                   int m, int axis) {
  if (m < 1 || m > 14 || axis < 0 || axis > 2)
    throw std::invalid_argument("chart_derivative: index out of range");
  if (m <= 3) {
    SectionField c(1, 0);
    if (m - 1 == axis)
      c.set_mode({0, 0, 0}, Eigen::VectorXcd::Constant(1, Complex(1.0, 0.0)));
    return c;
  }
  return ch.sigma[m].derivative(axis);
}

// Antisymmetric scalar-field components over the index pairs
// (0,1), (0,2), (1,2).
struct TwoFormField {
  std::array<SectionField, 3> comp{SectionField(1, 0), SectionField(1, 0),
                                   SectionField(1, 0)};

  [[nodiscard]] static int slot(int i, int j) {
    if (i == 0 && j == 1) return 0;
    if (i == 0 && j == 2) return 1;
    if (i == 1 && j == 2) return 2;
    throw std::invalid_argument("TwoFormField: need 0 <= i < j <= 2");
  }
  [[nodiscard]] SectionField& at(int i, int j) { return comp[slot(i, j)]; }
  [[nodiscard]] const SectionField& at(int i, int j) const {
    return comp[slot(i, j)];
  }
};

// Quadratic part of the isotropy residual:
// sum_{k=4}^{7} [d_i s^k d_j s^{k+7} - d_j s^k d_i s^{k+7}].
[[nodiscard]] inline SectionField quadratic_part(const DeformationChart& ch,
                                                 int i, int j) {
  SectionField acc(1, 0);
  for (int k = 4; k <= 7; ++k) {
    acc = acc + scalar_times(chart_derivative(ch, k, i),
                             chart_derivative(ch, k + 7, j));
    acc = acc - scalar_times(chart_derivative(ch, k, j),
                             chart_derivative(ch, k + 7, i));
  }
  return acc;
}

// The (i,j) component is
//   d_j sigma^{i+8} - d_i sigma^{j+8} + quadratic part
// in 0-based axes (axis i corresponds to the chart component sigma^{i+8}).
[[nodiscard]] inline TwoFormField isotropy_residual(
    const DeformationChart& ch) {
  TwoFormField r;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const SectionField lin =
          ch.sigma[i + 8].derivative(j) - ch.sigma[j + 8].derivative(i);
      r.at(i, j) = lin + quadratic_part(ch, i, j);
    }
  return r;
}

// Independent route to the same 2-form: the full pullback of
// sum_m dq^m ^ dp^m through the chart, using only d sigma^m = dx^m for the
// base components.
[[nodiscard]] inline TwoFormField pullback_omega(const DeformationChart& ch) {
  TwoFormField r;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      SectionField acc(1, 0);
      for (int m = 1; m <= 7; ++m) {
        acc = acc + scalar_times(chart_derivative(ch, m, i),
                                 chart_derivative(ch, m + 7, j));
        acc = acc - scalar_times(chart_derivative(ch, m, j),
                                 chart_derivative(ch, m + 7, i));
      }
      r.at(i, j) = acc;
    }
  return r;
}

struct DaDecomposition {
  std::array<SectionField, 3> a{SectionField(1, 0), SectionField(1, 0),
                                SectionField(1, 0)};  // coefficients of dx^i
  TwoFormField linear;  // (i,j) entry: d_j a_i - d_i a_j
  TwoFormField q_term;  // the quadratic two-form
};

// Splits the isotropy residual into the derivative of the 1-form
// a = sigma^8 dx^1 + sigma^9 dx^2 + sigma^10 dx^3 (in the same index
// ordering as the residual) plus the quadratic term; the reassembly
// linear + q_term equals the residual identically.
[[nodiscard]] inline DaDecomposition da_decomposition(
    const DeformationChart& ch) {
  DaDecomposition d;
  for (int i = 0; i < 3; ++i) d.a[i] = ch.sigma[i + 8];
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      d.linear.at(i, j) = d.a[i].derivative(j) - d.a[j].derivative(i);
      d.q_term.at(i, j) = quadratic_part(ch, i, j);
    }
  return d;
}

// ---- flat Killing residual ---------------------------------------------------

struct KillingResidual {
  // Symmetrized derivatives d_i f_j + d_j f_i for 0 <= i <= j <= 2.
  std::array<SectionField, 6> sym{SectionField(1, 0), SectionField(1, 0),
                                  SectionField(1, 0), SectionField(1, 0),
                                  SectionField(1, 0), SectionField(1, 0)};
  double max_residual = 0.0;
  int grid_used = 0;

  [[nodiscard]] static int slot(int i, int j) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j > 2)
      throw std::invalid_argument("KillingResidual: index out of range");
    constexpr std::array<int, 3> base{0, 3, 5};
    return base[i] + (j - i);
  }
  [[nodiscard]] const SectionField& at(int i, int j) const {
    return sym[slot(i, j)];
  }
};

// Flat-metric Killing check of a vector field on the 3-torus: the field is
// Killing iff all symmetrized derivatives vanish. The reported maximum is
// taken over a sampling grid.
[[nodiscard]] inline KillingResidual killing_residual(
    const std::array<SectionField, 3>& f, int grid = 0) {
  for (const auto& c : f)
    if (c.fiber_dim() != 1)
      throw std::invalid_argument("killing_residual: scalar components expected");
  KillingResidual out;
  int band = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      out.sym[KillingResidual::slot(i, j)] =
          f[j].derivative(i) + f[i].derivative(j);
      band = std::max(band, out.sym[KillingResidual::slot(i, j)].max_freq());
    }
  if (grid <= 0) grid = std::max(8, 4 * band + 5);
  out.grid_used = grid;
  const double step = 2.0 * M_PI / grid;
  for (int ix = 0; ix < grid; ++ix)
    for (int iy = 0; iy < grid; ++iy)
      for (int iz = 0; iz < grid; ++iz) {
        const std::array<double, 3> x{ix * step, iy * step, iz * step};
        for (const auto& s : out.sym)
          out.max_residual =
              std::max(out.max_residual, std::abs(s.evaluate(x)(0)));
      }
  return out;
}

}  // namespace g2kit::flat
