// Command-line driver for refinement studies.
//
//   solve --problem poisson --example p1 --k 2 --n 8,16,32,64,128
//
// Exit codes: 0 success, 1 usage or input error, 2 geometry error, 3 solver error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ifem/convergence.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ifem::ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unfitted finite element solver for interface problems: convergence tables"};
  app.set_version_flag("--version", "solve 1.0");

  std::string config_path, problem, example, format, out, mesh_kind, meta_out;
  std::vector<int> n_list;
  std::vector<std::string> mesh_files;
  int k = 0, sigma_p = 0;
  double amplitude = -1.0, tol = -1.0;
  bool corrected = false, no_corrections = false, timings = false;

  app.add_option("--config", config_path, "JSON configuration file; flags override its fields")->check(CLI::ExistingFile);
  app.add_option("--problem", problem, "poisson or stokes")->check(CLI::IsMember({"poisson", "stokes"}));
  app.add_option("--example", example, "p1, p2, pquad (Poisson) or s1, s2 (Stokes)");
  app.add_option("--k", k, "polynomial degree (Poisson)")->check(CLI::Range(1, 6));
  app.add_option("--n", n_list, "structured mesh sizes, strictly increasing")->delimiter(',');
  app.add_option("--mesh-file", mesh_files, "mesh file(s) used instead of --n")->check(CLI::ExistingFile);
  app.add_option("--mesh-kind", mesh_kind, "structured, distorted or perturbed")
      ->check(CLI::IsMember({"structured", "distorted", "perturbed"}));
  app.add_option("--mesh-amplitude", amplitude, "distortion or jitter amplitude");
  app.add_option("--format", format, "csv or markdown")->check(CLI::IsMember({"csv", "markdown"}));
  app.add_option("--out", out, "output path (default stdout)");
  app.add_option("--meta-out", meta_out, "write configuration and timings as JSON");
  app.add_flag("--corrected-errors", corrected, "Poisson: measure u - (u_h + w) instead of u_h - I_h u");
  app.add_flag("--no-corrections", no_corrections, "drop the correction terms from the right-hand side");
  app.add_option("--sigma-p", sigma_p, "sign of the pressure correction term (+1 or -1)")
      ->check(CLI::IsMember({1, -1}));
  app.add_option("--tol", tol, "relative residual tolerance of the linear solve");
  app.add_flag("--timings", timings, "print per-mesh timings to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  ifem::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = ifem::config_from_json(read_file(config_path));
    if (!problem.empty()) cfg.problem = problem == "stokes" ? ifem::ProblemKind::Stokes : ifem::ProblemKind::Poisson;
    if (!example.empty()) cfg.example = example;
    if (k > 0) cfg.k = k;
    if (!n_list.empty()) cfg.n = n_list;
    if (!mesh_files.empty()) cfg.mesh_files = mesh_files;
    if (!mesh_kind.empty()) cfg.mesh_kind = mesh_kind;
    if (amplitude >= 0.0) cfg.mesh_amplitude = amplitude;
    if (!format.empty()) cfg.format = format;
    if (!out.empty()) cfg.out = out;
    if (corrected) cfg.corrected_errors = true;
    if (no_corrections) cfg.corrections = false;
    if (sigma_p != 0) cfg.sigma_p = sigma_p;
    if (tol > 0.0) cfg.tol = tol;
    cfg.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solve: %s\n", e.what());
    return 1;
  }

  try {
    const ifem::ConvergenceReport report = ifem::run_convergence(cfg);
    const std::string text = ifem::emit_report(report, cfg.format);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(cfg.out);
      if (!f) throw ifem::ParseError("cannot write '" + cfg.out + "'");
      f << text;
    }
    if (!meta_out.empty()) {
      std::ofstream f(meta_out);
      if (!f) throw ifem::ParseError("cannot write '" + meta_out + "'");
      f << ifem::emit_metadata(report);
    }
    if (timings) {
      for (const auto& r : report.rows)
        std::fprintf(stderr, "%-12s unknowns %8zu  geometry %.3fs  assembly %.3fs  solve %.3fs  errors %.3fs\n",
                     r.mesh.c_str(), r.unknowns, r.seconds_geometry, r.seconds_assembly, r.seconds_solve,
                     r.seconds_errors);
      std::fprintf(stderr, "total %.3fs\n", report.total_seconds());
    }
  } catch (const ifem::GeometryError& e) {
    std::fprintf(stderr, "solve: geometry error: %s\n", e.what());
    return 2;
  } catch (const ifem::SolverError& e) {
    std::fprintf(stderr, "solve: solver error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solve: %s\n", e.what());
    return 1;
  }
  return 0;
}
