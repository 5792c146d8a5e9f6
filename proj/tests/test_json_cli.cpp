#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "g2kit/flatdeform.hpp"
#include "g2kit/g2core.hpp"
#include "g2kit/json_io.hpp"
#include "g2kit/octonion.hpp"
#include "g2kit/verify.hpp"

using namespace g2kit;
using io::Json;

TEST_CASE("form JSON round-trip reproduces the calibration 3-form") {
  const auto phi = core::phi0<Complex>();
  const auto back = io::form_from_json(io::form_to_json(phi));
  CHECK((back - phi).max_abs() == 0.0);
}

TEST_CASE("form JSON enforces ordering, ranges, and uniqueness") {
  const auto parse = [](const std::string& text) {
    return io::form_from_json(io::parse_text(text));
  };
  // baseline accepts
  CHECK(parse(R"({"dim":7,"field":"C","terms":[{"indices":[1,2,3],"re":1}]})")
            .max_abs() == 1.0);
  // im defaults to zero, explicit im honored
  const auto f =
      parse(R"({"dim":7,"field":"C","terms":[{"indices":[2,5],"re":0,"im":-2}]})");
  CHECK(f.coeff((1u << 1) | (1u << 4)) == Complex(0.0, -2.0));
  // rejects: duplicate index sets
  CHECK_THROWS_AS(
      parse(R"({"dim":7,"field":"C","terms":[{"indices":[1,2,3],"re":1},
                {"indices":[1,2,3],"re":2}]})"),
      std::invalid_argument);
  // rejects: non-ascending indices
  CHECK_THROWS_AS(
      parse(R"({"dim":7,"field":"C","terms":[{"indices":[2,1],"re":1}]})"),
      std::invalid_argument);
  // rejects: repeated index inside a term
  CHECK_THROWS_AS(
      parse(R"({"dim":7,"field":"C","terms":[{"indices":[2,2],"re":1}]})"),
      std::invalid_argument);
  // rejects: index out of range for the declared dimension
  CHECK_THROWS_AS(
      parse(R"({"dim":7,"field":"C","terms":[{"indices":[8],"re":1}]})"),
      std::invalid_argument);
  // rejects: missing re
  CHECK_THROWS_AS(
      parse(R"({"dim":7,"field":"C","terms":[{"indices":[1]}]})"),
      std::invalid_argument);
}

TEST_CASE("malformed JSON text is rejected") {
  CHECK_THROWS_AS((void)io::parse_text("{ this is not json"), std::invalid_argument);
  CHECK_THROWS_AS((void)io::load_file("/nonexistent/file.json"),
                  std::invalid_argument);
}

TEST_CASE("exact form loader lifts coefficients to rationals exactly") {
  const Json j = io::parse_text(
      R"({"dim":7,"field":"C","terms":[{"indices":[1,2,3],"re":0.5,"im":-0.25}]})");
  const auto f = io::exact_form_from_json(j);
  const GaussRat c = f.coeff(0b111);
  CHECK(c.re == make_rational(1, 2));
  CHECK(c.im == make_rational(-1, 4));
}

TEST_CASE("octonion JSON round-trip") {
  oct::Octonion<Complex> o;
  for (int i = 0; i < 8; ++i) o.c[i] = Complex(i * 0.25, -i * 0.5);
  const auto back = io::octonion_from_json(io::octonion_to_json(o));
  CHECK((back - o).max_abs() == 0.0);
  CHECK_THROWS_AS((void)io::octonion_from_json(io::parse_text(R"({"re":[1,2]})")),
                  std::invalid_argument);
}

TEST_CASE("matrix JSON round-trip") {
  Eigen::MatrixXcd m(2, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = Complex(i + 0.5, j - 1.5);
  const auto back = io::matrix_from_json(io::matrix_to_json(m));
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("plane JSON round-trips in both ambient encodings") {
  io::Plane p;
  p.realified = false;
  p.c_basis = Eigen::MatrixXcd::Zero(7, 2);
  p.c_basis(0, 0) = Complex(1.0, 0.5);
  p.c_basis(3, 1) = Complex(-2.0, 0.0);
  const auto back = io::plane_from_json(io::plane_to_json(p));
  CHECK_FALSE(back.realified);
  CHECK((back.c_basis - p.c_basis).cwiseAbs().maxCoeff() == 0.0);
  // realified form keeps one real column per complex basis vector
  const Eigen::MatrixXd r = io::realified_basis(p);
  CHECK(r.rows() == 14);
  CHECK(r.cols() == 2);
  CHECK(r(0, 0) == 1.0);
  CHECK(r(7, 0) == 0.5);

  io::Plane q;
  q.realified = true;
  q.r_basis = Eigen::MatrixXd::Zero(14, 3);
  q.r_basis(0, 0) = 1.0;
  q.r_basis(7, 1) = 1.0;
  q.r_basis(13, 2) = -0.5;
  const auto qback = io::plane_from_json(io::plane_to_json(q));
  CHECK(qback.realified);
  CHECK((qback.r_basis - q.r_basis).cwiseAbs().maxCoeff() == 0.0);
  CHECK(io::realified_basis(q).cols() == 3);

  CHECK_THROWS_AS(
      (void)io::plane_from_json(io::parse_text(R"({"ambient":"R3","basis":[]})")),
      std::invalid_argument);
}

TEST_CASE("chart JSON parses with conjugate completion") {
  // only the +k coefficient is given; the loader completes the -k partner
  const auto ch = io::chart_from_json(io::parse_text(
      R"({"sigma9":[{"k":[1,0,0],"re":0.5,"im":-0.25},{"k":[0,0,0],"re":2}]})"));
  CHECK(ch.max_freq == 1);
  const Complex plus = ch.sigma[9].mode({1, 0, 0})(0);
  const Complex minus = ch.sigma[9].mode({-1, 0, 0})(0);
  CHECK(plus == Complex(0.5, -0.25));
  CHECK(minus == Complex(0.5, 0.25));
  CHECK(ch.sigma[9].mode({0, 0, 0})(0) == Complex(2.0, 0.0));
  // untouched components stay empty
  CHECK(ch.sigma[4].modes().empty());

  // round-trip through the writer
  const auto back = io::chart_from_json(io::chart_to_json(ch));
  for (int m = 4; m <= 14; ++m) {
    for (const auto& [k, c] : ch.sigma[m].modes())
      CHECK(std::abs(back.sigma[m].mode(k)(0) - c(0)) == 0.0);
  }
}

TEST_CASE("chart JSON rejects inconsistent input") {
  // conflicting conjugate pair
  CHECK_THROWS_AS((void)io::chart_from_json(io::parse_text(
                      R"({"sigma9":[{"k":[1,0,0],"re":1,"im":0},
                                    {"k":[-1,0,0],"re":2,"im":0}]})")),
                  std::invalid_argument);
  // non-real zero mode
  CHECK_THROWS_AS((void)io::chart_from_json(io::parse_text(
                      R"({"sigma9":[{"k":[0,0,0],"re":1,"im":1}]})")),
                  std::invalid_argument);
  // duplicate frequency within one component
  CHECK_THROWS_AS((void)io::chart_from_json(io::parse_text(
                      R"({"sigma9":[{"k":[1,0,0],"re":1},
                                    {"k":[1,0,0],"re":1}]})")),
                  std::invalid_argument);
  // declared band smaller than an observed frequency
  CHECK_THROWS_AS((void)io::chart_from_json(io::parse_text(
                      R"({"band":1,"sigma9":[{"k":[2,0,0],"re":1}]})")),
                  std::invalid_argument);
  // component index outside sigma4..sigma14
  CHECK_THROWS_AS((void)io::chart_from_json(io::parse_text(
                      R"({"sigma2":[{"k":[1,0,0],"re":1}]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)io::chart_from_json(io::parse_text(
                      R"({"sigma15":[{"k":[1,0,0],"re":1}]})")),
                  std::invalid_argument);
  // unknown key
  CHECK_THROWS_AS((void)io::chart_from_json(io::parse_text(
                      R"({"tau4":[{"k":[1,0,0],"re":1}]})")),
                  std::invalid_argument);
}

TEST_CASE("spectrum report records the truncated-spectral model") {
  const auto spectrum = flat::dirac_spectrum(1);
  const Json j = io::spectrum_to_json(spectrum, 1);
  CHECK(j.at("model").get<std::string>() == "truncated-fourier");
  CHECK(j.at("max_freq").get<int>() == 1);
  CHECK(j.at("eigenvalues").is_array());
  CHECK(!j.at("eigenvalues").empty());
  // entries carry eigenvalue + multiplicity and are sorted ascending
  double prev = -1e300;
  for (const auto& e : j.at("eigenvalues")) {
    const double ev = e.at("eigenvalue").get<double>();
    CHECK(e.at("multiplicity").get<int>() > 0);
    CHECK(ev >= prev);
    prev = ev;
  }
}

TEST_CASE("two-form report lists strictly upper components") {
  flat::DeformationChart ch(1);
  ch.sigma[9] = flat::SectionField(1, 1);
  ch.sigma[9].add_real_mode({1, 0, 0}, Eigen::VectorXcd::Constant(1, 0.5));
  const Json j = io::two_form_to_json(flat::isotropy_residual(ch));
  CHECK(j.at("components").size() == 3);
  for (const auto& comp : j.at("components"))
    CHECK(comp.at("i").get<int>() < comp.at("j").get<int>());
}

TEST_CASE("octonion verification suite passes and is order-stable") {
  verify::RunOptions opt;
  opt.seed = 7;
  opt.samples = 25;
  const auto results = verify::run_suites("octonion", opt);
  REQUIRE(!results.empty());
  bool saw_composition = false;
  for (const auto& r : results) {
    CHECK(r.pass);
    CHECK(r.suite == "octonion");
    CHECK(r.max_residual <= r.tolerance);
    if (r.name == "Q(uv)=Q(u)Q(v)") saw_composition = true;
  }
  CHECK(saw_composition);
  CHECK(std::is_sorted(results.begin(), results.end(),
                       [](const auto& a, const auto& b) {
                         return a.name < b.name;
                       }));
}

TEST_CASE("every suite is reachable from the aggregate run") {
  verify::RunOptions opt;
  opt.seed = 3;
  opt.samples = 8;
  const auto results = verify::run_suites("all", opt);
  std::vector<std::string> seen;
  for (const auto& r : results) {
    CHECK(r.pass);
    if (seen.empty() || seen.back() != r.suite) seen.push_back(r.suite);
  }
  const std::vector<std::string> expected{"exterior",  "flatdeform",
                                          "g2core",    "grassmann",
                                          "octonion",  "sympcompat"};
  CHECK(seen == expected);
  CHECK(verify::suite_names().size() == 6);
}

TEST_CASE("exact backend drives the rational arithmetic paths") {
  verify::RunOptions opt;
  opt.seed = 5;
  opt.samples = 6;
  opt.backend = verify::Backend::exact;
  const auto results = verify::run_suites("g2core", opt);
  bool saw_exact = false;
  for (const auto& r : results) {
    CHECK(r.pass);
    if (r.backend == "exact") {
      saw_exact = true;
      CHECK(r.max_residual == 0.0);
    }
  }
  CHECK(saw_exact);
}

TEST_CASE("unknown suite names are rejected") {
  verify::RunOptions opt;
  CHECK_THROWS_AS((void)verify::run_suites("nosuch", opt),
                  std::invalid_argument);
  CHECK(verify::is_suite_name("all"));
  CHECK(verify::is_suite_name("flatdeform"));
  CHECK_FALSE(verify::is_suite_name("nosuch"));
}
