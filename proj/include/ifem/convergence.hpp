#pragma once

// Refinement studies over the built-in examples.

#include <memory>
#include <string>
#include <vector>

#include "ifem/examples.hpp"

namespace ifem {

enum class ProblemKind { Poisson, Stokes };

struct RunConfig {
  ProblemKind problem = ProblemKind::Poisson;
  std::string example = "p1";  // built-in name, or "custom" with a provider below
  int k = 2;                   // Poisson degree; Stokes always uses P2-P0
  std::vector<int> n = {8, 16, 32, 64, 128};
  std::string mesh_kind = "structured";  // structured | distorted | perturbed
  double mesh_amplitude = 0.05;          // distortion or jitter amplitude
  unsigned mesh_seed = 1;
  std::vector<std::string> mesh_files;  // replaces the n-list when non-empty
  bool corrected_errors = false;        // Poisson: measure u - (u_h + w)
  bool corrections = true;
  int sigma_p = -1;
  double tol = -1.0;  // solver tolerance; default per problem
  std::string format = "csv";
  std::string out;  // empty: stdout

  std::shared_ptr<const PoissonExample> poisson_provider;
  std::shared_ptr<const StokesExample> stokes_provider;

  /// Throws std::invalid_argument describing the first violated rule.
  void validate() const;
};

/// Reads a JSON object with the RunConfig field names; absent fields keep
/// the values of `base`. Throws ParseError on malformed input or unknown keys.
RunConfig config_from_json(const std::string& text, const RunConfig& base = {});

struct ConvergenceRow {
  std::string mesh;  // "n=16" or the mesh file name
  double h = 0.0;
  std::size_t unknowns = 0;
  std::vector<double> errors;  // one per norm
  double seconds_geometry = 0.0, seconds_assembly = 0.0, seconds_solve = 0.0, seconds_errors = 0.0;
};

struct ConvergenceReport {
  RunConfig config;
  std::vector<std::string> norms;
  std::vector<ConvergenceRow> rows;

  /// rate of norm j between rows i-1 and i (i >= 1), from the stored values
  double rate(std::size_t i, std::size_t j) const;
  double total_seconds() const;
};

/// log(e1 / e0) / log(h1 / h0)
double observed_rate(double h0, double e0, double h1, double e1);

/// Runs one solve per mesh. Module errors propagate with the mesh named in
/// the message and abort the sequence.
ConvergenceReport run_convergence(const RunConfig& config);

/// CSV (`h,<norm>,rate_<norm>,...`; h and errors with 6 significant digits,
/// rates recomputed from the printed values) or a markdown table.
std::string emit_report(const ConvergenceReport& report, const std::string& format);

/// Per-row timings and the configuration as JSON.
std::string emit_metadata(const ConvergenceReport& report);

}  // namespace ifem
