#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ifem/convergence.hpp"

using namespace ifem;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

RunConfig small_poisson() {
  RunConfig c;
  c.example = "p1";
  c.k = 2;
  c.n = {4, 8, 16};
  return c;
}

}  // namespace

TEST(Rates, ObservedRateFormula) {
  EXPECT_NEAR(observed_rate(0.2, 4e-3, 0.1, 5e-4), 3.0, 1e-12);
  EXPECT_NEAR(observed_rate(1.0, 1.0, 0.5, 0.5), 1.0, 1e-15);
}

TEST(Config, Validation) {
  RunConfig c = small_poisson();
  EXPECT_NO_THROW(c.validate());
  c.n = {16, 8};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_poisson();
  c.n = {};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_poisson();
  c.k = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_poisson();
  c.sigma_p = 2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_poisson();
  c.problem = ProblemKind::Stokes;
  c.corrected_errors = true;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_poisson();
  c.example = "custom";
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_poisson();
  c.format = "xml";
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Config, JsonOverridesAndRejectsUnknownKeys) {
  const RunConfig c = config_from_json(R"({"problem":"stokes","example":"s2","n":[8,16],"sigma_p":1,"format":"markdown"})");
  EXPECT_EQ(c.problem, ProblemKind::Stokes);
  EXPECT_EQ(c.example, "s2");
  EXPECT_EQ(c.n, (std::vector<int>{8, 16}));
  EXPECT_EQ(c.sigma_p, 1);
  EXPECT_EQ(c.format, "markdown");
  EXPECT_EQ(c.k, 2);  // untouched
  EXPECT_THROW(config_from_json(R"({"kk":3})"), ParseError);
  EXPECT_THROW(config_from_json("[1,2]"), ParseError);
  EXPECT_THROW(config_from_json("{"), ParseError);
  EXPECT_THROW(config_from_json(R"({"k":"two"})"), ParseError);
  EXPECT_THROW(config_from_json(R"({"problem":"heat"})"), ParseError);
}

TEST(Report, CsvRoundTripAndRates) {
  const ConvergenceReport r = run_convergence(small_poisson());
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.norms, (std::vector<std::string>{"l2", "linf", "h1", "w1inf"}));
  const auto rows = parse_csv(emit_report(r, "csv"));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][0], "h");
  EXPECT_EQ(rows[0][1], "l2");
  EXPECT_EQ(rows[0][2], "rate_l2");
  ASSERT_EQ(rows[0].size(), 9u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 9u);
    const double h = std::stod(rows[i][0]);
    EXPECT_NEAR(h, r.rows[i - 1].h, 1e-5 * h);
    for (std::size_t j = 0; j < 4; ++j) {
      const double e = std::stod(rows[i][1 + 2 * j]);
      EXPECT_NEAR(e, r.rows[i - 1].errors[j], 1e-5 * e);
      if (i == 1) {
        EXPECT_TRUE(rows[i][2 + 2 * j].empty());
      } else {
        // printed rate equals the rate recomputed from printed values
        const double hp = std::stod(rows[i - 1][0]), ep = std::stod(rows[i - 1][1 + 2 * j]);
        EXPECT_NEAR(std::stod(rows[i][2 + 2 * j]), observed_rate(hp, ep, h, e), 1e-12);
      }
    }
  }
  EXPECT_NEAR(r.rate(2, 1), observed_rate(r.rows[1].h, r.rows[1].errors[1], r.rows[2].h, r.rows[2].errors[1]), 1e-15);
  EXPECT_TRUE(std::isnan(r.rate(0, 1)));
}

TEST(Report, MarkdownHasOneColumnPairPerNorm) {
  RunConfig c = small_poisson();
  c.n = {4, 8};
  const std::string md = emit_report(run_convergence(c), "markdown");
  std::istringstream in(md);
  std::string header, sep, row;
  std::getline(in, header);
  std::getline(in, sep);
  std::getline(in, row);
  auto pipes = [](const std::string& s) { return std::count(s.begin(), s.end(), '|'); };
  EXPECT_EQ(pipes(header), 1 + 1 + 2 * 4);
  EXPECT_EQ(pipes(sep), pipes(header));
  EXPECT_EQ(pipes(row), pipes(header));
  EXPECT_THROW(emit_report(ConvergenceReport{}, "csv"), std::invalid_argument);
}

TEST(Report, SingleMeshHasNoRates) {
  RunConfig c = small_poisson();
  c.n = {6};
  const auto rows = parse_csv(emit_report(run_convergence(c), "csv"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[1][2].empty());
}

TEST(Report, ReproducibleOutput) {
  RunConfig c = small_poisson();
  c.n = {4, 8};
  EXPECT_EQ(emit_report(run_convergence(c), "csv"), emit_report(run_convergence(c), "csv"));
}

TEST(Report, MetadataIsJson) {
  RunConfig c = small_poisson();
  c.n = {4};
  const std::string meta = emit_metadata(run_convergence(c));
  EXPECT_NE(meta.find("\"rows\""), std::string::npos);
  EXPECT_NE(meta.find("\"example\""), std::string::npos);
}

TEST(Runs, StokesNormsAndMeshFiles) {
  RunConfig c;
  c.problem = ProblemKind::Stokes;
  c.example = "s1";
  c.n = {4, 8};
  const ConvergenceReport r = run_convergence(c);
  EXPECT_EQ(r.norms.size(), 6u);
  EXPECT_EQ(r.rows[1].unknowns, 2u * 17u * 17u + 128u + 1u);

  const auto dir = std::filesystem::temp_directory_path() / "ifem_conv_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "m6.mesh").string();
  std::ofstream(path) << write_mesh(build_perturbed(6, 0.2, 1));
  RunConfig f = small_poisson();
  f.mesh_files = {path};
  const ConvergenceReport rf = run_convergence(f);
  ASSERT_EQ(rf.rows.size(), 1u);
  EXPECT_EQ(rf.rows[0].mesh, path);
  std::filesystem::remove_all(dir);
}

TEST(Runs, CustomProviderAndErrorsNameTheMesh) {
  RunConfig c = small_poisson();
  c.example = "custom";
  c.poisson_provider = make_poisson_example("pquad");
  const ConvergenceReport r = run_convergence(c);
  for (const auto& row : r.rows) EXPECT_LT(row.errors[1], 1e-9);

  RunConfig bad = small_poisson();
  bad.example = "nope";
  EXPECT_THROW(run_convergence(bad), DataError);
}
