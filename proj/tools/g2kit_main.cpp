// g2kit: batch front end for the verification suites, metric computation,
// plane classification, tangent dimensions, path sweeps, spectra, and
// isotropy residuals.
//
// Exit codes: 0 = success / all checks passed, 1 = a verification failed,
// 2 = input error (bad flags, unknown subcommand, malformed files).
//
// Machine-readable JSON lines go to standard output; human summaries and
// timing go to standard error, so stdout is byte-stable for a fixed seed
// and flag set.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "g2kit/flatdeform.hpp"
#include "g2kit/g2core.hpp"
#include "g2kit/grassmann.hpp"
#include "g2kit/json_io.hpp"
#include "g2kit/sympcompat.hpp"
#include "g2kit/verify.hpp"

namespace {

using g2kit::Complex;
using g2kit::GaussRat;
using g2kit::Mat;
using g2kit::Rational;
using g2kit::io::Json;

struct GlobalFlags {
  std::uint64_t seed = 7;
  int samples = 100;
  std::optional<double> tol;
  std::string backend = "float";

  [[nodiscard]] bool exact() const { return backend == "exact"; }
  [[nodiscard]] g2kit::verify::RunOptions run_options() const {
    g2kit::verify::RunOptions opt;
    opt.seed = seed;
    opt.samples = samples;
    opt.tol = tol;
    opt.backend = exact() ? g2kit::verify::Backend::exact
                          : g2kit::verify::Backend::floating;
    return opt;
  }
};

[[nodiscard]] Mat<double> mat_from_eigen(const Eigen::MatrixXd& e) {
  Mat<double> m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

[[nodiscard]] Mat<Rational> rat_from_eigen(const Eigen::MatrixXd& e) {
  Mat<Rational> m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m(i, j) = Rational(e(i, j));
  return m;
}

[[nodiscard]] Mat<Complex> cplx_from_eigen(const Eigen::MatrixXcd& e) {
  Mat<Complex> m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

[[nodiscard]] Mat<GaussRat> gauss_from_eigen(const Eigen::MatrixXcd& e) {
  Mat<GaussRat> m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j)
      m(i, j) = GaussRat(Rational(e(i, j).real()), Rational(e(i, j).imag()));
  return m;
}

void emit(const Json& j) { std::cout << j.dump() << "\n"; }

// ---- verify ---------------------------------------------------------------

int cmd_verify(const GlobalFlags& g, const std::string& suite) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = g2kit::verify::run_suites(suite, g.run_options());
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  int failures = 0;
  std::map<std::string, std::pair<int, int>> per_suite;  // suite -> (pass, total)
  for (const auto& r : results) {
    Json line;
    line["backend"] = r.backend;
    line["max_residual"] = r.max_residual;
    line["name"] = r.name;
    if (!r.note.empty()) line["note"] = r.note;
    line["samples"] = r.samples;
    line["seed"] = r.seed;
    line["status"] = r.pass ? "pass" : "fail";
    line["suite"] = r.suite;
    line["tolerance"] = r.tolerance;
    emit(line);
    auto& [np, nt] = per_suite[r.suite];
    ++nt;
    if (r.pass)
      ++np;
    else
      ++failures;
  }
  for (const auto& [name, counts] : per_suite)
    std::cerr << "[" << name << "] " << counts.first << "/" << counts.second
              << " checks passed\n";
  std::cerr << (failures == 0 ? "OK" : "FAILED") << ": " << results.size()
            << " checks, " << failures << " failures, " << wall
            << "s (seed " << g.seed << ", samples " << g.samples
            << ", backend " << g.backend << ")\n";
  return failures == 0 ? 0 : 1;
}

// ---- metric ---------------------------------------------------------------

int cmd_metric(const GlobalFlags& g, const std::string& input,
               const std::string& vol_file, const std::string& out_file) {
  namespace core = g2kit::core;
  namespace io = g2kit::io;
  Eigen::MatrixXcd B(7, 7);
  if (g.exact()) {
    const auto phi = io::exact_form_from_json(io::load_file(input));
    const auto vol = vol_file.empty()
                         ? core::std_volume7<GaussRat>()
                         : io::exact_form_from_json(io::load_file(vol_file));
    const Mat<GaussRat> b = core::metric_from_form(phi, vol);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) B(i, j) = g2kit::to_complex(b(i, j));
  } else {
    const auto phi = io::form_from_json(io::load_file(input));
    const auto vol = vol_file.empty()
                         ? core::std_volume7<Complex>()
                         : io::form_from_json(io::load_file(vol_file));
    const Mat<Complex> b = core::metric_from_form(phi, vol);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) B(i, j) = b(i, j);
  }
  const Json out = io::matrix_to_json(B);
  emit(out);
  if (!out_file.empty()) io::save_file(out_file, out);
  std::cerr << "metric: 7x7 matrix written (backend " << g.backend << ")\n";
  return 0;
}

// ---- classify ---------------------------------------------------------------

int cmd_classify(const GlobalFlags& g, const std::string& input) {
  namespace grass = g2kit::grass;
  namespace io = g2kit::io;
  const io::Plane p = io::plane_from_json(io::load_file(input));
  const double tol = g.tol.value_or(1e-9);
  grass::ClassifyResult res;
  if (g.exact()) {
    const Mat<Rational> basis = rat_from_eigen(io::realified_basis(p));
    res = grass::classify_symplectic(basis,
                                     grass::omega_standard_matrix<Rational>(7),
                                     tol);
  } else {
    const Mat<double> basis = mat_from_eigen(io::realified_basis(p));
    res = grass::classify_symplectic(basis,
                                     grass::omega_standard_matrix<double>(7),
                                     tol);
  }
  Json out;
  out["complement_dim"] = res.complement_dim;
  out["intersection_dim"] = res.intersection_dim;
  out["plane_dim"] = res.plane_dim;
  out["verdict"] = grass::to_string(res.verdict);
  emit(out);
  std::cerr << "classify: " << res.plane_dim << "-plane is "
            << grass::to_string(res.verdict) << "\n";
  return 0;
}

// ---- tangent-dim ---------------------------------------------------------------

int cmd_tangent_dim(const GlobalFlags& g, const std::string& input,
                    const std::string& kind_name) {
  namespace grass = g2kit::grass;
  namespace io = g2kit::io;
  static const std::map<std::string, grass::TangentKind> kinds{
      {"associative", grass::TangentKind::associative},
      {"isotropic", grass::TangentKind::isotropic},
      {"isotropic-associative", grass::TangentKind::isotropic_associative},
      {"b-real", grass::TangentKind::b_real_associative},
      {"b-real-associative", grass::TangentKind::b_real_associative}};
  const grass::TangentKind kind = kinds.at(kind_name);
  const io::Plane p = io::plane_from_json(io::load_file(input));
  const double tol = g.tol.value_or(1e-9);

  grass::TangentReport rep;
  if (kind == grass::TangentKind::associative) {
    if (p.realified)
      throw std::invalid_argument(
          "tangent-dim: associative planes need a C7 basis (ambient \"C7\")");
    rep = g.exact() ? grass::tangent_dimension(gauss_from_eigen(p.c_basis),
                                               kind, tol)
                    : grass::tangent_dimension(cplx_from_eigen(p.c_basis),
                                               kind, tol);
  } else {
    const Eigen::MatrixXd rb = io::realified_basis(p);
    rep = g.exact() ? grass::tangent_dimension(rat_from_eigen(rb), kind, tol)
                    : grass::tangent_dimension(mat_from_eigen(rb), kind, tol);
  }

  Json out;
  out["exact_backend"] = rep.exact_backend;
  out["kernel_residual"] = rep.kernel_residual;
  out["kind"] = grass::to_string(rep.kind);
  out["plane_dim"] = rep.plane_dim;
  out["rank"] = rep.rank;
  out["sv_gap"] = rep.sv_gap;
  out["tangent_dimension"] = rep.nullity;
  if (rep.nullity_f_only) out["tangent_dimension_f_only"] = *rep.nullity_f_only;
  out["unknowns"] = rep.unknowns;
  emit(out);
  std::cerr << "tangent-dim: " << grass::to_string(rep.kind)
            << " tangent space has dimension " << rep.nullity << "\n";
  return 0;
}

// ---- jpath ---------------------------------------------------------------

int cmd_jpath(const GlobalFlags& g, int grid) {
  namespace symp = g2kit::symp;
  const double tol = g.tol.value_or(1e-8);
  const Eigen::MatrixXd J0 = symp::std_j(7);
  std::mt19937_64 rng(g.seed);
  int violations = 0;
  for (int s = 0; s < g.samples; ++s) {
    const Eigen::MatrixXd J1 = symp::random_cal_j(7, rng);
    const double end0 =
        (symp::j_retract(J1, 0.0) - J0).cwiseAbs().maxCoeff();
    const double end1 =
        (symp::j_retract(J1, 1.0) - J1).cwiseAbs().maxCoeff();
    double path_res = 0.0;
    bool in_class = true;
    for (int i = 0; i < grid; ++i) {
      const double t = grid == 1 ? 0.0 : double(i) / (grid - 1);
      const auto v = symp::is_in_cal_J(symp::j_retract(J1, t), tol);
      in_class = in_class && v.in_class;
      path_res = std::max(path_res, v.residual);
    }
    const bool ok = in_class && path_res <= tol && std::max(end0, end1) <= tol;
    if (!ok) ++violations;
    Json line;
    line["endpoint_residual"] = std::max(end0, end1);
    line["in_class"] = in_class;
    line["max_residual"] = path_res;
    line["sample"] = s;
    line["status"] = ok ? "pass" : "fail";
    emit(line);
  }
  std::cerr << "jpath: " << (g.samples - violations) << "/" << g.samples
            << " paths stayed in the chart (grid " << grid << ", tol " << tol
            << ")\n";
  return violations == 0 ? 0 : 1;
}

// ---- dirac ---------------------------------------------------------------

int cmd_dirac(int modes, const std::string& out_file) {
  namespace flat = g2kit::flat;
  namespace io = g2kit::io;
  const auto spectrum = flat::dirac_spectrum(modes);
  const Json out = io::spectrum_to_json(spectrum, modes);
  emit(out);
  if (!out_file.empty()) io::save_file(out_file, out);
  std::cerr << "dirac: " << spectrum.size()
            << " eigenvalue clusters for frequency band " << modes << "\n";
  return 0;
}

// ---- isotropy ---------------------------------------------------------------

int cmd_isotropy(const GlobalFlags& g, const std::string& chart_file,
                 const std::string& out_file) {
  namespace flat = g2kit::flat;
  namespace io = g2kit::io;
  const auto chart = io::chart_from_json(io::load_file(chart_file));
  const auto residual = flat::isotropy_residual(chart);
  const auto pull = flat::pullback_omega(chart);
  const auto dec = flat::da_decomposition(chart);

  double agreement = 0.0, reassembly = 0.0, one_form = 0.0, max_coeff = 0.0;
  for (int i = 0; i < 3; ++i) {
    one_form =
        std::max(one_form,
                 (dec.a[i] - chart.sigma[i + 8]).max_coefficient_norm());
    for (int j = i + 1; j < 3; ++j) {
      agreement = std::max(
          agreement,
          (residual.at(i, j) - pull.at(i, j)).max_coefficient_norm());
      reassembly = std::max(
          reassembly, (dec.linear.at(i, j) + dec.q_term.at(i, j) -
                       residual.at(i, j))
                          .max_coefficient_norm());
      max_coeff = std::max(max_coeff, residual.at(i, j).max_coefficient_norm());
    }
  }
  const double tol = g.tol.value_or(1e-8);
  Json out;
  out["agreement_residual"] = agreement;
  out["max_residual_coefficient"] = max_coeff;
  out["one_form_match"] = one_form;
  out["reassembly_residual"] = reassembly;
  out["status"] =
      (agreement <= tol && reassembly <= tol) ? "pass" : "fail";
  emit(out);
  if (!out_file.empty()) io::save_file(out_file, io::two_form_to_json(residual));
  std::cerr << "isotropy: agreement residual " << agreement
            << ", reassembly residual " << reassembly << " (tol " << tol
            << ")\n";
  return (agreement <= tol && reassembly <= tol) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "g2kit: verification and computation toolkit for octonion-induced "
      "geometry"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  GlobalFlags g;
  double tol_value = 0.0;
  app.add_option("--seed", g.seed, "random seed for sampled checks")
      ->capture_default_str();
  app.add_option("--samples", g.samples, "sample count for sampled checks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* tol_opt = app.add_option("--tol", tol_value,
                                 "tolerance override for every check")
                      ->envname("G2KIT_TOL")
                      ->check(CLI::PositiveNumber);
  app.add_option("--backend", g.backend, "arithmetic backend")
      ->check(CLI::IsMember({"exact", "float"}))
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::string suite = "all";
  verify->add_option("--suite", suite,
                     "suite name (all, exterior, octonion, g2core, grassmann, "
                     "sympcompat, flatdeform)")
      ->capture_default_str();
  verify->fallthrough();

  auto* metric = app.add_subcommand(
      "metric", "compute the metric induced by a 3-form and volume form");
  std::string metric_in, metric_vol, metric_out;
  metric->add_option("-i,--input", metric_in, "3-form JSON file")->required();
  metric->add_option("--vol", metric_vol,
                     "volume 7-form JSON file (default: standard volume)");
  metric->add_option("-o,--out", metric_out, "also write the matrix here");
  metric->fallthrough();

  auto* classify =
      app.add_subcommand("classify", "classify a plane against the standard "
                                     "symplectic structure");
  std::string classify_in;
  classify->add_option("-i,--input", classify_in, "plane JSON file")
      ->required();
  classify->fallthrough();

  auto* tangent = app.add_subcommand(
      "tangent-dim", "compute the tangent dimension of a distinguished plane");
  std::string tangent_in, tangent_kind;
  tangent->add_option("-i,--input", tangent_in, "plane JSON file")->required();
  tangent->add_option("--kind", tangent_kind, "plane family")
      ->required()
      ->check(CLI::IsMember({"associative", "isotropic",
                             "isotropic-associative", "b-real",
                             "b-real-associative"}));
  tangent->fallthrough();

  auto* jpath = app.add_subcommand(
      "jpath", "sweep retraction paths of random compatible structures");
  int grid = 11;
  jpath->add_option("--grid", grid, "number of path points")
      ->check(CLI::Range(1, 100001))
      ->capture_default_str();
  jpath->fallthrough();

  auto* dirac = app.add_subcommand(
      "dirac", "truncated spectrum of the flat deformation operator");
  int modes = 3;
  std::string dirac_out;
  dirac->add_option("--modes", modes, "frequency band |k| <= modes")
      ->check(CLI::Range(0, 16))
      ->capture_default_str();
  dirac->add_option("-o,--out", dirac_out, "also write the spectrum here");
  dirac->fallthrough();

  auto* isotropy = app.add_subcommand(
      "isotropy", "isotropy residual of a deformation chart");
  std::string chart_file, isotropy_out;
  isotropy->add_option("--chart", chart_file, "chart JSON file")->required();
  isotropy->add_option("-o,--out", isotropy_out,
                       "also write the residual two-form here");
  isotropy->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (tol_opt->count() > 0) g.tol = tol_value;

  try {
    if (*verify) return cmd_verify(g, suite);
    if (*metric) return cmd_metric(g, metric_in, metric_vol, metric_out);
    if (*classify) return cmd_classify(g, classify_in);
    if (*tangent) return cmd_tangent_dim(g, tangent_in, tangent_kind);
    if (*jpath) return cmd_jpath(g, grid);
    if (*dirac) return cmd_dirac(modes, dirac_out);
    if (*isotropy) return cmd_isotropy(g, chart_file, isotropy_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
