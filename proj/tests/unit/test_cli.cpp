#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "../tools/src/commands.hpp"
#include "scarlab/errors.hpp"

using namespace scarlab;
namespace fs = std::filesystem;

namespace {

ConfigFile config(const std::string& text) {
  std::istringstream in(text);
  return ConfigFile::parse(in, "cli.cfg");
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "scarlab_test_cli" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::string& cmd, const ConfigFile& cfg, const fs::path& dir, bool allow_large = false) {
  std::ostringstream out, err;
  cli::Options opts;
  opts.out_dir = dir;
  opts.allow_large = allow_large;
  const int code = cli::run(cmd, cfg, opts, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, CutoffZeroGivesOneState) {
  const auto dir = fresh_dir("zero");
  const auto r = run("solve1d", config("[model]\nheavy_cutoff = 0\n"), dir);
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto csv = slurp(dir / "spectrum_1d.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_TRUE(fs::exists(dir / "manifest_solve1d.json"));
}

TEST(Cli, UnknownKeyIsAConfigError) {
  const auto r = run("solve1d", config("[model]\ngama = 1\n"), fresh_dir("unknown"));
  EXPECT_EQ(r.code, cli::kConfigError);
  EXPECT_NE(r.err.find("gama"), std::string::npos);
  EXPECT_NE(r.err.find("cli.cfg:2"), std::string::npos);
  EXPECT_EQ(run("solve1d", config("[bogus]\nx = 1\n"), fresh_dir("unknown2")).code, cli::kConfigError);
  EXPECT_EQ(run("nope", config(""), fresh_dir("unknown3")).code, cli::kConfigError);
}

TEST(Cli, LargeCutoffIsRefusedWithoutFlag) {
  const auto dir = fresh_dir("refuse");
  const auto r = run("solve3d", config("[model]\ncutoff_sq = 10\n"), dir);
  EXPECT_EQ(r.code, cli::kResourceRefusal);
  EXPECT_NE(r.err.find("--allow-large"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "spectrum_3d.csv"));
}

TEST(Cli, Solve3DSmallSectorAndOrdering) {
  const auto dir = fresh_dir("solve3d");
  const auto r = run("solve3d", config("[model]\ncutoff_sq = 1\n[solve3d]\ncount = 3\n"), dir);
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto manifest = slurp(dir / "manifest_solve3d.json");
  EXPECT_NE(manifest.find("\"ground_ordering\""), std::string::npos);
  EXPECT_NE(manifest.find("\"dimension\": 19"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "eigenvectors_3d_symmetric.bin"));
  EXPECT_TRUE(fs::exists(dir / "eigenvectors_3d_antisymmetric.bin"));
}

TEST(Cli, OutputsAreDeterministic) {
  const auto cfg = config("[model]\nheavy_cutoff = 4\n");
  const auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
  ASSERT_EQ(run("solve1d", cfg, a).code, cli::kOk);
  ASSERT_EQ(run("solve1d", cfg, b).code, cli::kOk);
  for (const char* f : {"spectrum_1d.csv", "bands_1d.csv", "comparison_report.json"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Cli, ManifestIsComplete) {
  const auto dir = fresh_dir("manifest");
  ASSERT_EQ(run("estimate", config(""), dir).code, cli::kOk);
  const auto m = slurp(dir / "manifest_estimate.json");
  for (const char* key : {"\"tool\"", "\"version\"", "\"command\"", "\"parameters\"", "\"artifacts\"",
                          "\"timings_s\"", "\"gamma\"", "\"box_length\"", "estimate.json"})
    EXPECT_NE(m.find(key), std::string::npos) << key;
}

TEST(Cli, OrbitAndAnalyzeRun) {
  const auto dir = fresh_dir("orbit");
  ASSERT_EQ(run("orbit", config("[orbit]\nsteps = 200\nreverse = true\n"), dir).code, cli::kOk);
  EXPECT_TRUE(fs::exists(dir / "trajectory_1d.csv"));
  const auto d3 = fresh_dir("orbit3d");
  const auto r3 = run("orbit", config("[orbit]\ndimension = 3\nsteps = 100\nensemble = 2\n"), d3);
  ASSERT_EQ(r3.code, cli::kOk) << r3.err;
  EXPECT_TRUE(fs::exists(d3 / "phase_portrait.csv"));

  const auto da = fresh_dir("analyze");
  ASSERT_EQ(run("solve1d", config("[model]\nheavy_cutoff = 3\n"), da).code, cli::kOk);
  const auto ra = run("analyze",
                      config("[model]\nheavy_cutoff = 3\n[analyze]\nstates = band-top:1\ngrid_r = 16\ngrid_eta = 16\n"),
                      da);
  ASSERT_EQ(ra.code, cli::kOk) << ra.err;
  EXPECT_TRUE(fs::exists(da / "overlaps_1d.csv"));
}

TEST(Cli, Overrides) {
  auto cfg = config("");
  cli::apply_overrides(cfg, {"model.gamma=1e-3", "solve1d.count=4"});
  EXPECT_DOUBLE_EQ(cfg.get_double("model", "gamma", 0), 1e-3);
  EXPECT_THROW(cli::apply_overrides(cfg, {"gamma"}), ConfigError);
}
