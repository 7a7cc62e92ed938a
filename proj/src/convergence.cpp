#include "ifem/convergence.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "ifem/mesh.hpp"
#include "ifem/poisson_fem.hpp"
#include "ifem/stokes_fem.hpp"

namespace ifem {

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// value as printed with 6 significant digits
double rounded(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

std::string format_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

template <class E>
[[noreturn]] void rethrow_for_mesh(const E& e, const std::string& mesh) {
  throw E(mesh + ": " + e.what());
}

struct MeshEntry {
  std::string label;
  Mesh mesh;
};

std::vector<MeshEntry> build_meshes(const RunConfig& c) {
  std::vector<MeshEntry> meshes;
  if (!c.mesh_files.empty()) {
    for (const auto& f : c.mesh_files) meshes.push_back({f, read_mesh_file(f)});
    return meshes;
  }
  for (int n : c.n) {
    Mesh m;
    if (c.mesh_kind == "structured") m = build_structured(n);
    else if (c.mesh_kind == "distorted") m = build_distorted(n, c.mesh_amplitude);
    else m = build_perturbed(n, c.mesh_amplitude, c.mesh_seed);
    meshes.push_back({"n=" + std::to_string(n), std::move(m)});
  }
  return meshes;
}

ConvergenceRow poisson_row(const RunConfig& c, const PoissonExample& ex, const Mesh& mesh) {
  PoissonProblem pr;
  pr.curve = &ex.curve();
  pr.f = [&ex](const Vec2& x, Side s) { return ex.f(x, s); };
  pr.beta = [&ex](const Vec2& x) { return ex.beta(x); };
  pr.jumps = ex.jump_data();
  pr.dirichlet = [&ex](const Vec2& x, Side s) { return ex.u(x, s); };
  pr.corrections = c.corrections;
  const PoissonSolution sol = solve_poisson(mesh, c.k, pr, c.tol > 0.0 ? c.tol : 1e-12);
  const auto t0 = std::chrono::steady_clock::now();
  const ErrorReport e = compute_errors(
      sol, [&ex](const Vec2& x, Side s) { return ex.u(x, s); }, [&ex](const Vec2& x, Side s) { return ex.grad_u(x, s); },
      &ex.curve(), c.corrected_errors ? ErrorMode::Corrected : ErrorMode::VsInterpolant);
  ConvergenceRow row;
  row.h = mesh.h();
  row.unknowns = sol.space->size();
  row.errors = {e.l2, e.linf, e.h1, e.w1inf};
  row.seconds_geometry = sol.seconds_geometry;
  row.seconds_assembly = sol.seconds_assembly;
  row.seconds_solve = sol.seconds_solve;
  row.seconds_errors = seconds_since(t0);
  return row;
}

ConvergenceRow stokes_row(const RunConfig& c, const StokesExample& ex, const Mesh& mesh) {
  StokesProblem pr;
  pr.curve = &ex.curve();
  pr.f = [&ex](const Vec2& x, Side s) { return ex.f(x, s); };
  pr.beta = [&ex](const Vec2& x) { return ex.beta(x); };
  pr.jumps = ex.jump_data();
  pr.dirichlet = [&ex](const Vec2& x, Side s) { return ex.u(x, s); };
  pr.corrections = c.corrections;
  pr.sigma_p = c.sigma_p;
  const StokesSolution sol = solve_stokes(mesh, pr, c.tol > 0.0 ? c.tol : 1e-10);
  const auto t0 = std::chrono::steady_clock::now();
  const StokesErrorReport e = stokes_errors(
      sol, [&ex](const Vec2& x, Side s) { return ex.u(x, s); }, [&ex](const Vec2& x, Side s) { return ex.p(x, s); });
  ConvergenceRow row;
  row.h = mesh.h();
  row.unknowns = sol.space->size();
  row.errors = {e.u_l2, e.u_linf, e.grad_l2, e.grad_linf, e.p_l2, e.p_linf};
  row.seconds_geometry = sol.seconds_geometry;
  row.seconds_assembly = sol.seconds_assembly;
  row.seconds_solve = sol.seconds_solve;
  row.seconds_errors = seconds_since(t0);
  return row;
}

const char* problem_name(ProblemKind p) { return p == ProblemKind::Poisson ? "poisson" : "stokes"; }

}  // namespace

void RunConfig::validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (problem == ProblemKind::Poisson && k > 6) throw std::invalid_argument("k must be <= 6");
  if (mesh_files.empty()) {
    if (n.empty()) throw std::invalid_argument("the n-list is empty");
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (n[i] < 1) throw std::invalid_argument("mesh sizes must be positive");
      if (i > 0 && n[i] <= n[i - 1]) throw std::invalid_argument("the n-list must be strictly increasing");
    }
  }
  if (mesh_kind != "structured" && mesh_kind != "distorted" && mesh_kind != "perturbed")
    throw std::invalid_argument("mesh_kind must be structured, distorted or perturbed");
  if (sigma_p != 1 && sigma_p != -1) throw std::invalid_argument("sigma_p must be +1 or -1");
  if (format != "csv" && format != "markdown") throw std::invalid_argument("format must be csv or markdown");
  if (problem == ProblemKind::Stokes && corrected_errors)
    throw std::invalid_argument("corrected errors are only available for the Poisson problem");
  if (example == "custom") {
    if (problem == ProblemKind::Poisson && !poisson_provider)
      throw std::invalid_argument("example 'custom' needs a Poisson provider");
    if (problem == ProblemKind::Stokes && !stokes_provider)
      throw std::invalid_argument("example 'custom' needs a Stokes provider");
  }
}

RunConfig config_from_json(const std::string& text, const RunConfig& base) {
  RunConfig c = base;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: top level must be an object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const json& v = it.value();
      if (key == "problem") {
        const auto s = v.get<std::string>();
        if (s == "poisson") c.problem = ProblemKind::Poisson;
        else if (s == "stokes") c.problem = ProblemKind::Stokes;
        else throw ParseError("config: problem must be poisson or stokes");
      } else if (key == "example") c.example = v.get<std::string>();
      else if (key == "k") c.k = v.get<int>();
      else if (key == "n") c.n = v.get<std::vector<int>>();
      else if (key == "mesh_kind") c.mesh_kind = v.get<std::string>();
      else if (key == "mesh_amplitude") c.mesh_amplitude = v.get<double>();
      else if (key == "mesh_seed") c.mesh_seed = v.get<unsigned>();
      else if (key == "mesh_files") c.mesh_files = v.get<std::vector<std::string>>();
      else if (key == "corrected_errors") c.corrected_errors = v.get<bool>();
      else if (key == "corrections") c.corrections = v.get<bool>();
      else if (key == "sigma_p") c.sigma_p = v.get<int>();
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "format") c.format = v.get<std::string>();
      else if (key == "out") c.out = v.get<std::string>();
      else throw ParseError("config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return c;
}

double observed_rate(double h0, double e0, double h1, double e1) { return std::log(e1 / e0) / std::log(h1 / h0); }

double ConvergenceReport::rate(std::size_t i, std::size_t j) const {
  if (i == 0 || i >= rows.size()) return std::numeric_limits<double>::quiet_NaN();
  return observed_rate(rows[i - 1].h, rows[i - 1].errors[j], rows[i].h, rows[i].errors[j]);
}

double ConvergenceReport::total_seconds() const {
  double s = 0.0;
  for (const auto& r : rows) s += r.seconds_geometry + r.seconds_assembly + r.seconds_solve + r.seconds_errors;
  return s;
}

ConvergenceReport run_convergence(const RunConfig& config) {
  config.validate();
  ConvergenceReport report;
  report.config = config;
  std::shared_ptr<const PoissonExample> pex;
  std::shared_ptr<const StokesExample> sex;
  if (config.problem == ProblemKind::Poisson) {
    pex = config.example == "custom" ? config.poisson_provider
                                      : std::shared_ptr<const PoissonExample>(make_poisson_example(config.example));
    report.norms = {"l2", "linf", "h1", "w1inf"};
  } else {
    sex = config.example == "custom" ? config.stokes_provider
                                      : std::shared_ptr<const StokesExample>(make_stokes_example(config.example));
    report.norms = {"u_l2", "u_linf", "grad_l2", "grad_linf", "p_l2", "p_linf"};
  }
  for (auto& entry : build_meshes(config)) {
    try {
      ConvergenceRow row = pex ? poisson_row(config, *pex, entry.mesh) : stokes_row(config, *sex, entry.mesh);
      row.mesh = entry.label;
      report.rows.push_back(std::move(row));
    } catch (const GeometryError& e) {
      rethrow_for_mesh(e, entry.label);
    } catch (const SolverError& e) {
      rethrow_for_mesh(e, entry.label);
    } catch (const DataError& e) {
      rethrow_for_mesh(e, entry.label);
    }
  }
  return report;
}

std::string emit_report(const ConvergenceReport& report, const std::string& format) {
  if (report.rows.empty()) throw std::invalid_argument("emit_report: empty report");
  const std::size_t m = report.norms.size();
  std::string out;
  if (format == "csv") {
    out = "h";
    for (const auto& name : report.norms) out += "," + name + ",rate_" + name;
    out += "\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const auto& row = report.rows[i];
      out += format_g6(row.h);
      for (std::size_t j = 0; j < m; ++j) {
        out += "," + format_g6(row.errors[j]) + ",";
        if (i > 0) {
          const auto& prev = report.rows[i - 1];
          char buf[40];
          std::snprintf(buf, sizeof buf, "%.17g",
                        observed_rate(rounded(prev.h), rounded(prev.errors[j]), rounded(row.h), rounded(row.errors[j])));
          out += buf;
        }
      }
      out += "\n";
    }
    return out;
  }
  if (format == "markdown") {
    out = "| h |";
    for (const auto& name : report.norms) out += " " + name + " | r |";
    out += "\n|---|";
    for (std::size_t j = 0; j < m; ++j) out += "---|---|";
    out += "\n";
    char buf[40];
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const auto& row = report.rows[i];
      std::snprintf(buf, sizeof buf, "| %.1e |", row.h);
      out += buf;
      for (std::size_t j = 0; j < m; ++j) {
        std::snprintf(buf, sizeof buf, " %.2e |", row.errors[j]);
        out += buf;
        if (i > 0) {
          std::snprintf(buf, sizeof buf, " %.2f |", report.rate(i, j));
          out += buf;
        } else {
          out += "  |";
        }
      }
      out += "\n";
    }
    return out;
  }
  throw std::invalid_argument("emit_report: unknown format '" + format + "'");
}

std::string emit_metadata(const ConvergenceReport& report) {
  const RunConfig& c = report.config;
  json j;
  j["problem"] = problem_name(c.problem);
  j["example"] = c.example;
  j["k"] = c.k;
  j["n"] = c.n;
  j["mesh_kind"] = c.mesh_kind;
  j["mesh_files"] = c.mesh_files;
  j["corrected_errors"] = c.corrected_errors;
  j["corrections"] = c.corrections;
  j["sigma_p"] = c.sigma_p;
  j["norms"] = report.norms;
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"mesh", r.mesh},
                    {"h", r.h},
                    {"unknowns", r.unknowns},
                    {"errors", r.errors},
                    {"seconds", {{"geometry", r.seconds_geometry},
                                 {"assembly", r.seconds_assembly},
                                 {"solve", r.seconds_solve},
                                 {"errors", r.seconds_errors}}}});
  }
  j["rows"] = rows;
  j["total_seconds"] = report.total_seconds();
  return j.dump(2) + "\n";
}

}  // namespace ifem
