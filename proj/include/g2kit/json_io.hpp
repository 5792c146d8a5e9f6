#pragma once

// JSON file formats used by the command-line tools:
//   * differential forms   {"dim":7,"field":"C","terms":[{"indices":[1,2,3],
//                           "re":1.0,"im":0.0},...]}
//   * octonions            {"re":[8 floats],"im":[8 floats]}
//   * complex matrices     {"matrix":[[[re,im],...],...]}  (rows of pairs)
//   * planes               {"ambient":"C7","basis":[[[re,im] x 7],...]} or
//                          {"ambient":"R14","basis":[[14 floats],...]}
//   * deformation charts   {"sigma8":[{"k":[0,1,0],"re":0.0,"im":0.5},...]}
//   * spectra and residual two-forms (write-only reports)
//
// Every loader throws std::invalid_argument on malformed input (missing or
// mistyped keys, wrong sizes, duplicate entries, reality violations); the
// command-line layer maps that to its input-error exit code.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "g2kit/flatdeform.hpp"
#include "g2kit/multivector.hpp"
#include "g2kit/octonion.hpp"
#include "g2kit/scalar.hpp"

namespace g2kit::io {

using Json = nlohmann::json;

// ---- generic helpers -------------------------------------------------------

[[nodiscard]] Json parse_text(const std::string& text);
[[nodiscard]] Json load_file(const std::string& path);
void save_file(const std::string& path, const Json& j);

// ---- forms -------------------------------------------------------------------

// Indices are 1-based and strictly ascending inside a term; repeating an
// index set across terms is rejected. "field" may be "C" or "R"; either way
// the coefficients load as complex numbers.
[[nodiscard]] ext::Multivector<Complex> form_from_json(const Json& j);
// Same format read into exact Gaussian-rational coefficients (the binary
// value of each JSON double is converted exactly).
[[nodiscard]] ext::Multivector<GaussRat> exact_form_from_json(const Json& j);
[[nodiscard]] Json form_to_json(const ext::Multivector<Complex>& m);

// ---- octonions -----------------------------------------------------------------

[[nodiscard]] oct::Octonion<Complex> octonion_from_json(const Json& j);
[[nodiscard]] Json octonion_to_json(const oct::Octonion<Complex>& o);

// ---- complex matrices -----------------------------------------------------------

[[nodiscard]] Json matrix_to_json(const Eigen::MatrixXcd& m);
[[nodiscard]] Eigen::MatrixXcd matrix_from_json(const Json& j);

// ---- planes --------------------------------------------------------------------

struct Plane {
  bool realified = false;    // false: ambient C7, true: ambient R14
  Eigen::MatrixXcd c_basis;  // 7 x k, columns are basis vectors (C7 ambient)
  Eigen::MatrixXd r_basis;   // 14 x k realified columns (R14 ambient)

  [[nodiscard]] int plane_dim() const {
    return realified ? static_cast<int>(r_basis.cols())
                     : static_cast<int>(c_basis.cols());
  }
};

[[nodiscard]] Plane plane_from_json(const Json& j);
[[nodiscard]] Json plane_to_json(const Plane& p);
// The 14 x k realified view of either ambient convention (rows 1..7 real
// parts, rows 8..14 imaginary parts).
[[nodiscard]] Eigen::MatrixXd realified_basis(const Plane& p);

// ---- deformation charts -----------------------------------------------------------

// Keys "sigma4".."sigma14" hold term lists; unknown keys are rejected. Each
// term gives one Fourier coefficient; a frequency listed twice inside one
// component is rejected. Missing conjugate frequencies are completed so the
// field is real-valued; when both k and -k are given they must already be
// conjugate. The band is sized from the largest listed frequency unless an
// explicit "band" key widens it.
[[nodiscard]] flat::DeformationChart chart_from_json(const Json& j);
[[nodiscard]] Json chart_to_json(const flat::DeformationChart& chart,
                                 double drop_tol = 1e-14);

// ---- reports -----------------------------------------------------------------------

[[nodiscard]] Json spectrum_to_json(const std::vector<flat::EigenvalueCount>& s,
                                    int max_freq);
[[nodiscard]] Json two_form_to_json(const flat::TwoFormField& f,
                                    double drop_tol = 1e-14);

}  // namespace g2kit::io
