#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "orthoscherk/errors.hpp"
#include "orthoscherk/json_io.hpp"
#include "run_config.hpp"

using namespace orthoscherk::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("orthoscherk_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig config(const std::string& command, int genus, const fs::path& out) {
  RunConfig c;
  c.command = command;
  c.genus = genus;
  c.out = out.string();
  return c;
}

int run_quiet(const RunConfig& c) {
  std::ostringstream log;
  return run(c, log);
}

}  // namespace

TEST(Config, ParsesCommentsAndDashedKeys) {
  const auto c = parse_config_text(
      "# solve genus two\n"
      "genus = 2\n"
      "\n"
      "height-tol=1e-9   # tighter\n"
      "period_tol = 2e-7\n"
      "out = /tmp/x\n");
  EXPECT_EQ(c.genus, 2);
  EXPECT_DOUBLE_EQ(c.height_tol, 1e-9);
  EXPECT_DOUBLE_EQ(c.period_tol, 2e-7);
  EXPECT_EQ(c.out, "/tmp/x");
  EXPECT_EQ(c.resolution, 32);
}

TEST(Config, LaterSettingsOverride) {
  auto c = parse_config_text("genus = 2\nresolution = 16\n");
  apply_setting(c, "resolution", "24");
  EXPECT_EQ(c.resolution, 24);
  EXPECT_EQ(c.genus, 2);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config_text("gneus = 2\n"), orthoscherk::ValidationError);
  EXPECT_THROW(parse_config_text("genus = two\n"), orthoscherk::ValidationError);
  EXPECT_THROW(parse_config_text("genus 2\n"), orthoscherk::ValidationError);
  EXPECT_THROW(parse_config_text("resolution = 8.5\n"), orthoscherk::ValidationError);
}

TEST(Config, ValidationRules) {
  RunConfig c;
  c.command = "solve";
  EXPECT_THROW(validate(c), orthoscherk::ValidationError);  // genus missing
  c.genus = 0;
  EXPECT_THROW(validate(c), orthoscherk::ValidationError);  // phi missing
  c.phi = 1.0;
  EXPECT_NO_THROW(validate(c));
  c.genus = 2;
  EXPECT_THROW(validate(c), orthoscherk::ValidationError);  // phi with genus 2
  c.phi.reset();
  c.command = "verify";
  EXPECT_THROW(validate(c), orthoscherk::ValidationError);  // no checkpoint
  c.command = "sweep";
  c.stratum = "l9->0";
  EXPECT_THROW(validate(c), orthoscherk::ValidationError);
  c.stratum = "b->c";
  EXPECT_NO_THROW(validate(c));
}

TEST(Hash, Sha256KnownAnswer) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Hash, IgnoresPathsButNotSettings) {
  auto a = config("solve", 2, "/tmp/a");
  auto b = config("solve", 2, "/tmp/b");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(canonical_text(a), canonical_text(b));
  b.height_tol = 1e-9;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 64u);
}

TEST(Run, ValidationFailuresExitTwo) {
  const auto dir = scratch("invalid");
  EXPECT_EQ(run_quiet(config("solve", -1, dir)), kValidation);
  auto g = config("generate", 0, dir);
  g.phi = 1.0;  // no half-plane chart away from the orthogonal case
  EXPECT_EQ(run_quiet(g), kValidation);
  auto v = config("verify", 1, dir);
  v.checkpoint = (dir / "missing.json").string();
  EXPECT_EQ(run_quiet(v), kValidation);
}

TEST(Run, GenusZeroSolveWritesReport) {
  const auto dir = scratch("g0");
  auto c = config("solve", 0, dir);
  c.phi = 1.5707963267948966;
  ASSERT_EQ(run_quiet(c), kOk);
  const auto j = orthoscherk::Json::parse(slurp(dir / "genus0_report.json"));
  EXPECT_EQ(j.at("config_hash").get<std::string>(), config_hash(c));
}

TEST(Run, GenusOneSolveVerifyAndTamper) {
  const auto dir = scratch("g1");
  auto c = config("solve", 1, dir);
  ASSERT_EQ(run_quiet(c), kOk);
  const fs::path ckpt = dir / "checkpoint.json";
  auto j = orthoscherk::Json::parse(slurp(ckpt));
  EXPECT_NEAR(j.at("r_star").get<double>(), 0.55937026079922304, 1e-12);
  EXPECT_EQ(j.at("config_hash").get<std::string>(), config_hash(c));

  auto v = config("verify", 1, dir / "verify");
  v.checkpoint = ckpt.string();
  v.resolution = 8;
  EXPECT_EQ(run_quiet(v), kOk);

  j["b"] = j.at("b").get<double>() * 1.01;
  const fs::path bad = dir / "tampered.json";
  std::ofstream(bad) << orthoscherk::dump_json(j);
  v.checkpoint = bad.string();
  v.out = (dir / "verify_bad").string();
  EXPECT_EQ(run_quiet(v), kVerification);
  const auto report = orthoscherk::Json::parse(slurp(dir / "verify_bad" / "verification.json"));
  EXPECT_FALSE(report.at("failures").empty());
}

TEST(Run, SolveIsDeterministic) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  ASSERT_EQ(run_quiet(config("solve", 2, a)), kOk);
  ASSERT_EQ(run_quiet(config("solve", 2, b)), kOk);
  EXPECT_EQ(slurp(a / "checkpoint.json"), slurp(b / "checkpoint.json"));
}

TEST(Run, GenerateAndSweepWriteArtifacts) {
  const auto dir = scratch("gen");
  ASSERT_EQ(run_quiet(config("solve", 1, dir)), kOk);
  auto g = config("generate", 1, dir / "mesh");
  g.checkpoint = (dir / "checkpoint.json").string();
  g.resolution = 8;
  g.extent = 1;
  ASSERT_EQ(run_quiet(g), kOk);
  for (const char* f : {"surface.obj", "surface.ply", "patch.obj", "verification.json"})
    EXPECT_TRUE(fs::exists(dir / "mesh" / f)) << f;
  EXPECT_NE(slurp(dir / "mesh" / "surface.obj").find(config_hash(g)), std::string::npos);

  auto s = config("sweep", 1, dir / "sweep");
  s.checkpoint = g.checkpoint;
  s.stratum = "b->inf";
  s.points = 2;
  ASSERT_EQ(run_quiet(s), kOk);
  const std::string csv = slurp(dir / "sweep" / "sweep.csv");
  EXPECT_EQ(csv.rfind("# config_hash=" + config_hash(s), 0), 0u);
  EXPECT_NE(csv.find("stratum,parameter,"), std::string::npos);
  EXPECT_NE(csv.find("b->inf,"), std::string::npos);
}
