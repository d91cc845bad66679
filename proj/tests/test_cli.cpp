#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"

namespace lwr::cli {
namespace {

namespace fs = std::filesystem;

RawConfig flags(std::initializer_list<std::pair<const char*, const char*>> kv) {
  RawConfig out;
  for (const auto& [k, v] : kv) out[k] = RawEntry{v, std::string("--") + k};
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("lwr_cli_test_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

int cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "lwr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

TEST(ConfigText, CommentsBlanksAndWhitespace) {
  const RawConfig raw = parse_config_text("# header\n\n scenario = shock  # inline\nchi=0.5\n", "cfg");
  ASSERT_EQ(raw.size(), 2u);
  EXPECT_EQ(raw.at("scenario").value, "shock");
  EXPECT_EQ(raw.at("chi").value, "0.5");
  EXPECT_EQ(raw.at("chi").source, "cfg:4");
}

TEST(ConfigText, LineWithoutEqualsIsATypeError) {
  try {
    parse_config_text("scenario = shock\nchi 1\n", "study.cfg");
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_NE(std::string(e.what()).find("study.cfg:2"), std::string::npos);
  }
}

TEST(ResolveConfig, ShockDefaults) {
  const RunConfig c = resolve_config(Command::Run, {}, flags({{"scenario", "shock"}}));
  EXPECT_EQ(c.n_elements, 128);
  EXPECT_EQ(c.dt, 1e-4);
  EXPECT_EQ(c.delta_rule.coeff, 1.0);
  EXPECT_EQ(c.delta_rule.exponent, 0.5);
  EXPECT_EQ(c.degree, 1);
  EXPECT_EQ(c.snapshot_times, std::vector<double>{1.0});
}

TEST(ResolveConfig, FlagsOverrideFileOverrideDefaults) {
  const RawConfig file = parse_config_text("scenario = shock\nchi = 0\ndt = 2e-4\n", "f.cfg");
  const RunConfig c = resolve_config(Command::Run, file, flags({{"chi", "1"}}));
  EXPECT_EQ(c.params.chi, 1.0);
  EXPECT_EQ(c.dt, 2e-4);
  EXPECT_EQ(c.n_elements, 128);
}

TEST(ResolveConfig, UnknownKeyNamesTheKey) {
  const RawConfig file = parse_config_text("scenario = shock\ndleta_coeff = 1\n", "f.cfg");
  try {
    resolve_config(Command::Run, file, {});
    FAIL();
  } catch (const UnknownKey& e) {
    EXPECT_EQ(e.key(), "dleta_coeff");
    EXPECT_NE(std::string(e.what()).find("dleta_coeff"), std::string::npos);
  }
}

TEST(ResolveConfig, TypeErrorNamesKeyAndLine) {
  const RawConfig file = parse_config_text("scenario = shock\n\nchi = lots\n", "f.cfg");
  try {
    resolve_config(Command::Run, file, {});
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_EQ(e.key(), "chi");
    EXPECT_NE(std::string(e.what()).find("f.cfg:3"), std::string::npos);
  }
  EXPECT_THROW(resolve_config(Command::Run, {}, flags({{"scenario", "shock"}, {"n_elements", "1.5"}})),
               TypeError);
  EXPECT_THROW(resolve_config(Command::Run, {}, flags({{"scenario", "shock"}, {"degree", "3"}})), TypeError);
  EXPECT_THROW(resolve_config(Command::Run, {}, flags({{"scenario", "shock"}, {"chi", "-1"}})), ConfigError);
}

TEST(ResolveConfig, MissingAndUnknownScenario) {
  EXPECT_THROW(resolve_config(Command::Run, {}, {}), MissingScenario);
  EXPECT_THROW(resolve_config(Command::Run, {}, flags({{"scenario", "tsunami"}})), TypeError);
}

TEST(ResolveConfig, FractionsAndLists) {
  const RunConfig c = resolve_config(
      Command::ConvTime, {},
      flags({{"scenario", "manufactured"}, {"gamma", "2/3"}, {"time_ladder", "1/10, 1/20,1/40"}}));
  EXPECT_DOUBLE_EQ(c.params.gamma, 2.0 / 3.0);
  ASSERT_EQ(c.time_ladder.size(), 3u);
  EXPECT_DOUBLE_EQ(c.time_ladder[2], 1.0 / 40);
}

TEST(ResolveConfig, CommandDefaults) {
  const RunConfig space = resolve_config(Command::ConvSpace, {}, flags({{"scenario", "manufactured"}}));
  EXPECT_EQ(space.t_final, 0.02);
  EXPECT_EQ(space.dt, 5e-6);
  EXPECT_EQ(space.delta_rule.coeff, 0.1);
  EXPECT_EQ(space.space_ladder, (std::vector<int>{6, 12, 24, 48, 96, 192}));
  const RunConfig time = resolve_config(Command::ConvTime, {}, flags({{"scenario", "manufactured"}}));
  EXPECT_EQ(time.n_elements, 100);
  EXPECT_EQ(time.t_final, 1.0);
  EXPECT_EQ(time.time_ladder.size(), 5u);
}

TEST(ResolveConfig, HeaderEchoesEveryKey) {
  const RunConfig c = resolve_config(Command::Study, {}, flags({{"scenario", "rarefaction"}}));
  const std::string h = c.header(Command::Study);
  EXPECT_EQ(h.rfind("# lwr study", 0), 0u);
  for (const auto& key : config_keys()) EXPECT_NE(h.find(" " + key + "="), std::string::npos) << key;
}

TEST(Cli, ConfigErrorsExitWithTwo) {
  std::string err;
  EXPECT_EQ(cli({"run"}, nullptr, &err), 2);
  EXPECT_EQ(cli({"run", "--scenario", "shock", "--dleta_coeff", "1"}, nullptr, &err), 2);
  EXPECT_EQ(cli({"run", "--scenario", "shock", "--chi", "x"}, nullptr, &err), 2);
  EXPECT_NE(err.find("chi"), std::string::npos);
  EXPECT_EQ(cli({"nonsense"}), 2);
}

TEST(Cli, ZeroStepRunWritesTheProjectedInitialState) {
  TempDir dir("zero");
  ASSERT_EQ(cli({"run", "--scenario", "manufactured", "--t_final", "0", "--n_elements", "10",
                 "--output_dir", dir.path().string()}),
            0);
  const auto rows = csv_rows(dir.path() / "manufactured_run_profile_t0.csv");
  ASSERT_EQ(rows.size(), 513u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "rho_h", "rho_exact"}));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][1]), 0.0, 1e-14);
  const auto diag = csv_rows(dir.path() / "manufactured_run_diagnostics.csv");
  ASSERT_EQ(diag.size(), 2u);
  EXPECT_EQ(diag[0][0], "n");
  EXPECT_EQ(slurp(dir.path() / "manufactured_run_diagnostics.csv").rfind("# lwr run ", 0), 0u);
}

TEST(Cli, TimeLadderIsReproducibleAndParallelSafe) {
  TempDir a("repro");
  const std::vector<std::string> common{"conv-time", "--scenario", "manufactured", "--n_elements", "12",
                                        "--t_final", "0.2", "--time_ladder", "1/10,1/20,1/40,1/80",
                                        "--gamma", "2/3", "--output_dir", a.path().string()};
  auto with_jobs = [&](const char* jobs) {
    auto args = common;
    args.insert(args.end(), {"--jobs", jobs});
    EXPECT_EQ(cli(args), 0);
    return slurp(a.path() / "manufactured_conv_time.csv");
  };
  const std::string first = with_jobs("1");
  EXPECT_EQ(with_jobs("1"), first);
  // Only the echoed jobs value in the header may differ.
  const std::string parallel = with_jobs("3");
  EXPECT_EQ(parallel.substr(parallel.find('\n')), first.substr(first.find('\n')));

  const auto rows = csv_rows(a.path() / "manufactured_conv_time.csv");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"resolution", "h_or_dt", "error_linf_l2", "rate"}));
  EXPECT_EQ(rows[1][0], "1/10");
  EXPECT_EQ(rows[1][3], "");
  EXPECT_FALSE(rows[2][3].empty());
}

TEST(Cli, FailedRungIsMarkedAndOthersContinue) {
  TempDir dir("fail");
  std::string out;
  const int code = cli({"conv-time", "--scenario", "manufactured", "--n_elements", "8", "--t_final", "0.1",
                        "--time_ladder", "1/20,0.03,1/80", "--output_dir", dir.path().string()},
                       &out);
  EXPECT_EQ(code, 1);
  const auto rows = csv_rows(dir.path() / "manufactured_conv_time.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NE(rows[1][2], "nan");
  EXPECT_EQ(rows[2][2], "nan");
  EXPECT_NE(rows[3][2], "nan");
  EXPECT_NE(slurp(dir.path() / "manufactured_conv_time.csv").find("# rung 0.029999999999999999 failed"),
            std::string::npos);
}

TEST(Cli, ShockStudyDampsOscillations) {
  TempDir dir("study");
  ASSERT_EQ(cli({"study", "--scenario", "shock", "--chi_list", "0,1", "--n_elements", "64", "--dt", "5e-4",
                 "--output_dir", dir.path().string()}),
            0);
  EXPECT_TRUE(fs::exists(dir.path() / "shock_study_chi0_N0_P1_t1.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "shock_study_chi1_N0_P1_t1.csv"));
  const auto rows = csv_rows(dir.path() / "shock_study_summary.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_LT(std::stod(rows[2][5]), std::stod(rows[1][5]));
}

}  // namespace
}  // namespace lwr::cli
