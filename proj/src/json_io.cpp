#include "g2kit/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace g2kit::io {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

const Json& need(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) fail(std::string(what) + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end())
    fail(std::string(what) + ": missing key \"" + key + "\"");
  return *it;
}

double need_number(const Json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + ": expected a number");
  return j.get<double>();
}

double number_or_zero(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) fail(std::string(what) + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) return 0.0;
  return need_number(*it, what);
}

std::vector<double> need_number_array(const Json& j, int size,
                                      const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != size)
    fail(std::string(what) + ": expected an array of " + std::to_string(size) +
         " numbers");
  std::vector<double> out(size);
  for (int i = 0; i < size; ++i) out[i] = need_number(j[i], what);
  return out;
}

Complex need_pair(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    fail(std::string(what) + ": expected a [re, im] pair");
  return {need_number(j[0], what), need_number(j[1], what)};
}

// Shared structural walk for both scalar backends of the form format.
template <class S, class FromDouble>
ext::Multivector<S> form_from_json_impl(const Json& j, FromDouble lift) {
  constexpr const char* what = "form";
  const Json& jdim = need(j, "dim", what);
  if (!jdim.is_number_integer()) fail("form: \"dim\" must be an integer");
  const int dim = jdim.get<int>();
  if (dim < 1 || dim > ext::kMaxDim)
    fail("form: dimension " + std::to_string(dim) + " is out of range 1.." +
         std::to_string(ext::kMaxDim));
  const Json& jfield = need(j, "field", what);
  if (!jfield.is_string() ||
      (jfield.get<std::string>() != "C" && jfield.get<std::string>() != "R"))
    fail("form: \"field\" must be \"C\" or \"R\"");
  const Json& jterms = need(j, "terms", what);
  if (!jterms.is_array()) fail("form: \"terms\" must be an array");

  ext::Multivector<S> m(dim);
  std::set<std::uint32_t> seen;
  for (const Json& t : jterms) {
    const Json& jidx = need(t, "indices", "form term");
    if (!jidx.is_array() || jidx.empty())
      fail("form term: \"indices\" must be a nonempty array");
    std::uint32_t mask = 0;
    int prev = 0;
    for (const Json& ji : jidx) {
      if (!ji.is_number_integer())
        fail("form term: indices must be integers");
      const int idx = ji.get<int>();
      if (idx < 1 || idx > dim)
        fail("form term: index " + std::to_string(idx) +
             " is out of range 1.." + std::to_string(dim));
      if (idx <= prev)
        fail("form term: indices must be strictly ascending");
      prev = idx;
      mask |= 1u << (idx - 1);
    }
    if (!seen.insert(mask).second)
      fail("form term: duplicate index set");
    const double re = need_number(need(t, "re", "form term"), "form term");
    const double im = number_or_zero(t, "im", "form term");
    m.add_term(mask, lift(re, im));
  }
  return m;
}

Json term_list_k3(const flat::SectionField& s, double drop_tol) {
  Json terms = Json::array();
  for (const auto& [k, c] : s.modes()) {
    const Complex v = c(0);
    if (std::abs(v) <= drop_tol) continue;
    Json t;
    t["k"] = {k[0], k[1], k[2]};
    t["re"] = v.real();
    t["im"] = v.imag();
    terms.push_back(std::move(t));
  }
  return terms;
}

}  // namespace

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void save_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) fail("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

ext::Multivector<Complex> form_from_json(const Json& j) {
  return form_from_json_impl<Complex>(
      j, [](double re, double im) { return Complex(re, im); });
}

ext::Multivector<GaussRat> exact_form_from_json(const Json& j) {
  return form_from_json_impl<GaussRat>(j, [](double re, double im) {
    // mpq from double is exact: binary fractions stay binary fractions
    return GaussRat(Rational(re), Rational(im));
  });
}

Json form_to_json(const ext::Multivector<Complex>& m) {
  Json j;
  j["dim"] = m.dim();
  j["field"] = "C";
  Json terms = Json::array();
  for (const auto& [mask, c] : m.terms()) {
    Json t;
    std::vector<int> idx;
    for (int b = 0; b < m.dim(); ++b)
      if (mask & (1u << b)) idx.push_back(b + 1);
    t["indices"] = idx;
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

oct::Octonion<Complex> octonion_from_json(const Json& j) {
  const std::vector<double> re =
      need_number_array(need(j, "re", "octonion"), 8, "octonion \"re\"");
  std::vector<double> im(8, 0.0);
  if (j.is_object() && j.contains("im"))
    im = need_number_array(j["im"], 8, "octonion \"im\"");
  oct::Octonion<Complex> o;
  for (int i = 0; i < 8; ++i) o.c[i] = Complex(re[i], im[i]);
  return o;
}

Json octonion_to_json(const oct::Octonion<Complex>& o) {
  Json j;
  std::vector<double> re(8), im(8);
  for (int i = 0; i < 8; ++i) {
    re[i] = o.c[i].real();
    im[i] = o.c[i].imag();
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j)
      // adding +0.0 folds IEEE negative zeros into plain zeros
      row.push_back({m(i, j).real() + 0.0, m(i, j).imag() + 0.0});
    rows.push_back(std::move(row));
  }
  Json j;
  j["matrix"] = std::move(rows);
  return j;
}

Eigen::MatrixXcd matrix_from_json(const Json& j) {
  const Json& rows = need(j, "matrix", "matrix");
  if (!rows.is_array() || rows.empty())
    fail("matrix: \"matrix\" must be a nonempty array of rows");
  const int nr = static_cast<int>(rows.size());
  int nc = -1;
  Eigen::MatrixXcd m;
  for (int i = 0; i < nr; ++i) {
    const Json& row = rows[i];
    if (!row.is_array() || row.empty())
      fail("matrix: each row must be a nonempty array");
    if (nc < 0) {
      nc = static_cast<int>(row.size());
      m.resize(nr, nc);
    } else if (static_cast<int>(row.size()) != nc) {
      fail("matrix: ragged rows");
    }
    for (int c = 0; c < nc; ++c) m(i, c) = need_pair(row[c], "matrix entry");
  }
  return m;
}

Plane plane_from_json(const Json& j) {
  const Json& jamb = need(j, "ambient", "plane");
  if (!jamb.is_string()) fail("plane: \"ambient\" must be a string");
  const std::string ambient = jamb.get<std::string>();
  const Json& jbasis = need(j, "basis", "plane");
  if (!jbasis.is_array() || jbasis.empty())
    fail("plane: \"basis\" must be a nonempty array of vectors");
  const int k = static_cast<int>(jbasis.size());

  Plane p;
  if (ambient == "C7") {
    p.realified = false;
    p.c_basis.resize(7, k);
    for (int c = 0; c < k; ++c) {
      const Json& v = jbasis[c];
      if (!v.is_array() || v.size() != 7)
        fail("plane: each C7 basis vector needs 7 [re, im] pairs");
      for (int r = 0; r < 7; ++r)
        p.c_basis(r, c) = need_pair(v[r], "plane entry");
    }
  } else if (ambient == "R14") {
    p.realified = true;
    p.r_basis.resize(14, k);
    for (int c = 0; c < k; ++c) {
      const std::vector<double> v =
          need_number_array(jbasis[c], 14, "plane basis vector");
      for (int r = 0; r < 14; ++r) p.r_basis(r, c) = v[r];
    }
  } else {
    fail("plane: \"ambient\" must be \"C7\" or \"R14\"");
  }
  return p;
}

Json plane_to_json(const Plane& p) {
  Json j;
  Json basis = Json::array();
  if (p.realified) {
    j["ambient"] = "R14";
    for (int c = 0; c < p.r_basis.cols(); ++c) {
      std::vector<double> v(14);
      for (int r = 0; r < 14; ++r) v[r] = p.r_basis(r, c);
      basis.push_back(v);
    }
  } else {
    j["ambient"] = "C7";
    for (int c = 0; c < p.c_basis.cols(); ++c) {
      Json v = Json::array();
      for (int r = 0; r < 7; ++r)
        v.push_back({p.c_basis(r, c).real(), p.c_basis(r, c).imag()});
      basis.push_back(std::move(v));
    }
  }
  j["basis"] = std::move(basis);
  return j;
}

Eigen::MatrixXd realified_basis(const Plane& p) {
  if (p.realified) return p.r_basis;
  const int k = static_cast<int>(p.c_basis.cols());
  Eigen::MatrixXd b(14, k);
  b.topRows(7) = p.c_basis.real();
  b.bottomRows(7) = p.c_basis.imag();
  return b;
}

flat::DeformationChart chart_from_json(const Json& j) {
  if (!j.is_object()) fail("chart: expected a JSON object");

  struct RawTerm {
    flat::Freq3 k;
    Complex c;
  };
  std::array<std::vector<RawTerm>, 15> raw;  // 1-based component labels
  int band_seen = 0;
  int band_requested = -1;

  for (const auto& [key, value] : j.items()) {
    if (key == "band") {
      if (!value.is_number_integer() || value.get<int>() < 0)
        fail("chart: \"band\" must be a nonnegative integer");
      band_requested = value.get<int>();
      continue;
    }
    if (key.rfind("sigma", 0) != 0)
      fail("chart: unknown key \"" + key + "\"");
    int m = 0;
    try {
      m = std::stoi(key.substr(5));
    } catch (const std::exception&) {
      fail("chart: unknown key \"" + key + "\"");
    }
    if (m < 4 || m > 14)
      fail("chart: component \"" + key +
           "\" is out of range sigma4..sigma14 (sigma1..sigma3 are the base "
           "coordinates)");
    if (!value.is_array())
      fail("chart: component \"" + key + "\" must be a term array");
    std::set<flat::Freq3> seen;
    for (const Json& t : value) {
      const Json& jk = need(t, "k", "chart term");
      if (!jk.is_array() || jk.size() != 3)
        fail("chart term: \"k\" must be an array of 3 integers");
      flat::Freq3 k{};
      for (int i = 0; i < 3; ++i) {
        if (!jk[i].is_number_integer())
          fail("chart term: \"k\" must be an array of 3 integers");
        k[i] = jk[i].get<int>();
        band_seen = std::max(band_seen, std::abs(k[i]));
      }
      if (!seen.insert(k).second)
        fail("chart: duplicate frequency in component \"" + key + "\"");
      const double re = need_number(need(t, "re", "chart term"), "chart term");
      const double im = number_or_zero(t, "im", "chart term");
      raw[m].push_back({k, Complex(re, im)});
    }
  }

  if (band_requested >= 0 && band_requested < band_seen)
    fail("chart: declared band " + std::to_string(band_requested) +
         " is smaller than the largest listed frequency " +
         std::to_string(band_seen));
  const int band = band_requested >= 0 ? band_requested : band_seen;

  flat::DeformationChart chart(band);
  constexpr double kRealityTol = 1e-12;
  for (int m = 4; m <= 14; ++m) {
    std::map<flat::Freq3, Complex> expl;
    for (const auto& t : raw[m]) expl[t.k] = t.c;
    std::map<flat::Freq3, Complex> full;
    for (const auto& [k, c] : expl) {
      const flat::Freq3 mk{-k[0], -k[1], -k[2]};
      if (k == mk) {
        if (std::abs(c.imag()) > kRealityTol)
          fail("chart: zero-frequency coefficient of sigma" +
               std::to_string(m) + " must be real");
        full[k] = c;
        continue;
      }
      const auto other = expl.find(mk);
      if (other != expl.end()) {
        if (std::abs(std::conj(other->second) - c) > kRealityTol)
          fail("chart: coefficients of sigma" + std::to_string(m) +
               " at opposite frequencies are not conjugate (reality "
               "violation)");
        full[k] = c;
      } else {
        full[k] = c;
        full[mk] = std::conj(c);
      }
    }
    for (const auto& [k, c] : full)
      chart.sigma[m].set_mode(k, Eigen::VectorXcd::Constant(1, c));
  }
  return chart;
}

Json chart_to_json(const flat::DeformationChart& chart, double drop_tol) {
  Json j;
  j["band"] = chart.max_freq;
  for (int m = 4; m <= 14; ++m) {
    Json terms = term_list_k3(chart.sigma[m], drop_tol);
    if (!terms.empty()) j["sigma" + std::to_string(m)] = std::move(terms);
  }
  return j;
}

Json spectrum_to_json(const std::vector<flat::EigenvalueCount>& s,
                      int max_freq) {
  Json j;
  j["model"] = "truncated-fourier";
  j["max_freq"] = max_freq;
  Json eigs = Json::array();
  for (const auto& ec : s) {
    Json e;
    e["eigenvalue"] = ec.eigenvalue;
    e["multiplicity"] = ec.multiplicity;
    eigs.push_back(std::move(e));
  }
  j["eigenvalues"] = std::move(eigs);
  return j;
}

Json two_form_to_json(const flat::TwoFormField& f, double drop_tol) {
  Json comps = Json::array();
  double max_abs = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int jj = i + 1; jj < 3; ++jj) {
      const flat::SectionField& s = f.at(i, jj);
      max_abs = std::max(max_abs, s.max_coefficient_norm());
      Json c;
      c["i"] = i + 1;
      c["j"] = jj + 1;
      c["terms"] = term_list_k3(s, drop_tol);
      comps.push_back(std::move(c));
    }
  Json j;
  j["components"] = std::move(comps);
  j["max_abs"] = max_abs;
  return j;
}

}  // namespace g2kit::io
