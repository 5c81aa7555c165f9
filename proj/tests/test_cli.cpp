#include "fqrigid/commands.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fqrigid;

namespace {

std::filesystem::path scratch(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / "fqrigid_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

ExperimentConfig parse(std::vector<std::string> args) { return parse_config(args); }

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST(ParseConfig, Basic) {
  const auto c = parse({"rigidity", "--p", "23", "--n", "2", "--d", "3", "--cosets", "0"});
  EXPECT_EQ(c.command, "rigidity");
  EXPECT_EQ(c.p, 23u);
  EXPECT_EQ(c.n, 2u);
  EXPECT_EQ(c.d, 3u);
  EXPECT_EQ(c.cosets, (std::vector<std::uint32_t>{0}));

  const auto l = parse({"exceptional", "--p", "5", "--n", "2", "--d-list", "6,4", "--r-max", "3"});
  EXPECT_EQ(l.d_list, (std::vector<std::uint32_t>{6, 4}));
  EXPECT_EQ(l.r_max, 3u);

  const auto cs = parse({"charsum", "audit", "--mode", "cor22", "--count", "7"});
  EXPECT_EQ(cs.command, "charsum");
  EXPECT_EQ(cs.action, "audit");
  EXPECT_EQ(cs.mode, "cor22");
  EXPECT_EQ(cs.count, 7u);
  EXPECT_EQ(parse({"charsum", "audit"}).mode, "weil");
  EXPECT_EQ(parse({"clique", "--p", "3", "--d", "4"}).mode, "verify");
  // the last repetition wins
  EXPECT_EQ(parse({"field-info", "--p", "3", "--p", "7"}).p, 7u);
}

TEST(ParseConfig, Errors) {
  EXPECT_THROW(parse({"bogus"}), UnknownCommand);
  EXPECT_THROW(parse({}), UnknownCommand);
  EXPECT_THROW(parse({"charsum"}), UnknownCommand);
  EXPECT_THROW(parse({"rigidity", "--cosets", "0,0", "--d", "3"}), InvalidValue);
  EXPECT_THROW(parse({"rigidity", "--cosets", "3", "--d", "3"}), InvalidValue);
  EXPECT_THROW(parse({"rigidity", "--p", "x"}), InvalidValue);
  EXPECT_THROW(parse({"rigidity", "--frobnicate", "1"}), InvalidValue);
  EXPECT_THROW(parse({"rigidity", "--n", "0"}), InvalidValue);
  EXPECT_THROW(parse({"rigidity", "--jobs", "0"}), InvalidValue);
  EXPECT_THROW(parse({"charsum", "audit", "--mode", "nope"}), InvalidValue);
  EXPECT_THROW(parse({"charsum", "audit", "--count", "0"}), InvalidValue);
  EXPECT_THROW(parse({"clique", "--mode", "weil"}), InvalidValue);
}

TEST(ParseConfig, ConfigFilePrecedence) {
  const auto path = scratch("run.toml");
  {
    std::ofstream out(path);
    out << "p = 37\nn = 2\nd = 2\ncosets = 0,1\njobs = 2\n";
  }
  const auto c = parse({"rigidity", "--config", path.string(), "--p", "41"});
  EXPECT_EQ(c.p, 41u);
  EXPECT_EQ(c.n, 2u);
  EXPECT_EQ(c.cosets, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(c.jobs, 2u);
  EXPECT_EQ(c.config_file, path.string());

  const auto bad = scratch("bad.toml");
  {
    std::ofstream out(bad);
    out << "p = 5\nwidth = 3\n";
  }
  EXPECT_THROW(parse({"rigidity", "--config", bad.string()}), InvalidValue);
  EXPECT_THROW(parse({"rigidity", "--config", scratch("missing.toml").string()}), InvalidValue);
}

TEST(ParseConfig, Help) {
  const auto c = parse({"--help"});
  ASSERT_TRUE(c.help.has_value());
  EXPECT_NE(c.help->find("rigidity"), std::string::npos);
}

TEST(Report, JsonRoundTrip) {
  auto cfg = parse({"rigidity", "--p", "7", "--n", "2", "--d", "4", "--cosets", "0,2"});
  Report r = run_command(cfg);
  const auto back = report_from_json(json::parse(to_json(r).dump()));
  EXPECT_EQ(back, r);
  EXPECT_EQ(to_json(r).at("violations"), "none");

  r.violations = {"a", "b"};
  EXPECT_EQ(report_from_json(to_json(r)), r);

  auto j = to_json(r);
  j["schema_version"] = kSchemaVersion + 1;
  EXPECT_THROW(report_from_json(j), InvalidValue);
  j = to_json(r);
  j["violations"] = json::array();
  EXPECT_THROW(report_from_json(j), InvalidValue);
  j["violations"] = "some";
  EXPECT_THROW(report_from_json(j), InvalidValue);
}

TEST(Report, EmitWritesFileAndExitCode) {
  Report r = run_command(parse({"field-info", "--p", "3", "--n", "2"}));
  const auto path = scratch("field.json");
  std::ostringstream os;
  EXPECT_EQ(emit_report(r, path.string(), os), 0);
  EXPECT_NE(os.str().find("violations: none"), std::string::npos);
  EXPECT_EQ(read_report(path.string()), r);

  r.violations.push_back("THEOREM VIOLATION: synthetic");
  std::ostringstream os2;
  EXPECT_EQ(emit_report(r, "", os2), 1);
  EXPECT_NE(os2.str().find("THEOREM VIOLATION: synthetic"), std::string::npos);

  EXPECT_THROW(emit_report(r, "/nonexistent-dir/x/report.json", os2), IoFailure);
  EXPECT_THROW(read_report("/nonexistent-dir/x/report.json"), IoFailure);
}

TEST(Commands, FieldInfo) {
  const auto r = run_command(parse({"field-info", "--p", "5", "--n", "2"}));
  EXPECT_EQ(r.payload.at("field").at("p"), 5);
  EXPECT_EQ(r.payload.at("field").at("n"), 2);
  EXPECT_TRUE(r.clean());
  EXPECT_THROW(run_command(parse({"field-info", "--p", "6"})), NonPrime);
}

TEST(Commands, Directions) {
  const auto r = run_command(parse({"directions", "--p", "5", "--n", "2", "--coeffs", "1,10"}));
  EXPECT_TRUE(r.clean());
  EXPECT_TRUE(r.payload.contains("directions"));
  EXPECT_THROW(run_command(parse({"directions", "--p", "5", "--n", "2", "--coeffs", "1"})), InvalidValue);
}

TEST(Commands, RigidityIsDeterministicAcrossJobs) {
  auto a = parse({"rigidity", "--p", "13", "--n", "2", "--d", "6", "--cosets", "0,1,3", "--jobs", "1"});
  auto b = a;
  b.jobs = 3;
  const auto ra = run_command(a), rb = run_command(b);
  EXPECT_EQ(ra.payload.dump(), rb.payload.dump());
  EXPECT_EQ(ra.violations, rb.violations);
}

TEST(Commands, DirectionsTheorem) {
  const auto r = run_command(parse({"directions-theorem", "--q", "4"}));
  EXPECT_TRUE(r.clean());
  EXPECT_THROW(run_command(parse({"directions-theorem", "--q", "16"})), SearchSpaceTooLarge);
}

TEST(Commands, CharsumWritesCsv) {
  const auto csv = scratch("weil.csv");
  auto c = parse({"charsum", "audit", "--mode", "weil", "--count", "12", "--seed", "4", "--p-max", "31"});
  c.csv = csv.string();
  const auto r = run_command(c);
  EXPECT_TRUE(r.clean());
  const auto text = slurp(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 13);

  const auto rou = run_command(parse({"charsum", "audit", "--mode", "rou", "--d-max", "5"}));
  EXPECT_TRUE(rou.clean());
  EXPECT_THROW(run_command(parse({"charsum", "audit", "--mode", "rou", "--d-max", "21"})),
               SearchSpaceTooLarge);
}

TEST(Commands, CliqueModesAndEdges) {
  const auto edges = scratch("edges.txt");
  auto c = parse({"clique", "--p", "3", "--n", "1", "--d", "4", "--cosets", "0"});
  c.edges = edges.string();
  EXPECT_TRUE(run_command(c).clean());
  EXPECT_FALSE(slurp(edges).empty());

  const auto cat = run_command(parse({"clique", "--p", "5", "--d", "6", "--cosets", "0,1,3", "--mode", "catalog"}));
  EXPECT_TRUE(cat.clean());
  EXPECT_THROW(run_command(parse({"clique", "--p", "5", "--d", "4"})), IndexNotDividingQPlus1);
}

TEST(Commands, Exceptional) {
  const auto r = run_command(parse({"exceptional", "--p", "5", "--n", "2", "--d-list", "6", "--r-max", "3"}));
  EXPECT_TRUE(r.clean());
  const auto under = run_command(parse({"exceptional", "--p", "23", "--n", "2", "--d-list", "3", "--r-max", "1"}));
  EXPECT_TRUE(under.clean());
}

TEST(Commands, ExampleF25) {
  const auto r = run_command(parse({"example-f25"}));
  EXPECT_TRUE(r.clean());
  EXPECT_FALSE(r.summary.empty());
}
