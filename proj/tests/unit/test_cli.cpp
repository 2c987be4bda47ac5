#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "finiteband/error.hpp"
#include "finiteband/io.hpp"
#include "finiteband_cli/cli.hpp"

using namespace finiteband;
namespace fs = std::filesystem;

namespace {

const char* kBorg = R"({"schema": "finiteband/1", "bands": [-2], "m": 3, "x_grid": {"start": 0, "stop": 2, "points": 33}})";
const char* kLame = R"({"schema": "finiteband/1", "bands": [0, 1, 2], "m": 1, "spec": {"alphas": [0.3]}})";
const char* kLame2 = R"({"schema": "finiteband/1", "bands": [0, 1, 2], "m": 2, "seed": 4,
                         "spec": {"alphas": [0.3, 1.1], "U": "random:9"}, "x_grid": {"points": 65}})";

class CliRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("finiteband_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int run(const std::string& args) {
    const std::string cmd = std::string(FINITEBAND_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

}  // namespace

TEST(Config, MinimalBorg) {
  const auto cfg = cli::parse_config(kBorg);
  EXPECT_EQ(cfg.m, 3u);
  EXPECT_EQ(cfg.n(), 0);
  EXPECT_FALSE(cfg.spec.has_value());
  EXPECT_EQ(cfg.x_grid.points, 33);
  EXPECT_EQ(cfg.tolerances.at("ledger"), 1e-10);
}

TEST(Config, OneGapDefaults) {
  const auto cfg = cli::parse_config(kLame);
  ASSERT_TRUE(cfg.spec.has_value());
  EXPECT_EQ(cfg.u_source, "random:0");
  EXPECT_NEAR(cfg.x_grid.stop, 2.0 * 1.3110287771461, 1e-11);
}

TEST(Config, ErrorsNameTheField) {
  auto message = [](const std::string& text) {
    try {
      cli::parse_config(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ConfigError);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"schema": "finiteband/1", "bands": [0, 1, 2], "m": 1, "spec": {}})").find("spec.alphas"), std::string::npos);
  EXPECT_NE(message(R"({"schema": "finiteband/1", "bands": [0, 1, 2], "m": 1})").find("spec"), std::string::npos);
  EXPECT_NE(message(R"({"schema": "finiteband/1", "bands": [0], "m": 1, "colour": 2})").find("colour"), std::string::npos);
  EXPECT_NE(message(R"({"schema": "finiteband/2", "bands": [0], "m": 1})").find("schema"), std::string::npos);
  EXPECT_NE(message(R"({"schema": "finiteband/1", "bands": [0, 1, 2, 3, 4], "m": 1})").find("bands"), std::string::npos);
  EXPECT_NE(message(R"({"schema": "finiteband/1", "bands": [0, 1], "m": 1})").find("bands"), std::string::npos);
  EXPECT_NE(message(R"({"schema": "finiteband/1", "bands": [0, 1, 2], "m": 2, "spec": {"alphas": [0.1]}})").find("spec.alphas"),
            std::string::npos);
  EXPECT_NE(message(R"({"schema": "finiteband/1", "bands": [0], "m": 1, "x_grid": {"points": 2}})").find("x_grid.points"),
            std::string::npos);
}

TEST(Config, ToleranceAndSeedOverrides) {
  const auto cfg = cli::parse_config(kLame, {"riccati=1e-5", "flow=2e-7"}, 17);
  EXPECT_EQ(cfg.tolerances.at("riccati"), 1e-5);
  EXPECT_EQ(cfg.tolerances.at("flow"), 2e-7);
  EXPECT_EQ(cfg.seed, 17u);
  EXPECT_EQ(cfg.u_source, "random:17");
  EXPECT_THROW(cli::parse_config(kLame, {"nonsense=1"}), Error);
  EXPECT_THROW(cli::parse_config(kLame, {"riccati"}), Error);
}

TEST_F(CliRun, ConstructBorg) {
  const auto cfg = write_config("borg.json", kBorg);
  ASSERT_EQ(run("construct --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0);
  const auto p = profile_from_csv(read_text_file(dir_ / "out" / "potential.csv"));
  ASSERT_EQ(p.size(), 33u);
  for (const auto& q : p.Q) EXPECT_EQ(q, -2.0 * CMatrix::Identity(3, 3));
  const auto quad = quadruple_from_json(read_text_file(dir_ / "out" / "pencils.json"));
  EXPECT_EQ(quad.F.degree(), 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "metadata.json"));
}

TEST_F(CliRun, ConstructLameRecordsPeriod) {
  const auto cfg = write_config("lame.json", kLame);
  ASSERT_EQ(run("construct --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0);
  const auto meta = nlohmann::json::parse(read_text_file(dir_ / "out" / "metadata.json"));
  EXPECT_NEAR(meta["period"].get<double>(), 2.0 * 1.3110287771461, 1e-11);
  EXPECT_EQ(meta["U_source"], "random:0");
  const auto p = profile_from_csv(read_text_file(dir_ / "out" / "potential.csv"));
  EXPECT_NEAR(p.Q.front()(0, 0).real(), p.Q.back()(0, 0).real(), 1e-11);
}

TEST_F(CliRun, VerifyPassesForConstructedFamilies) {
  for (const auto& [name, text] : {std::pair{"borg.json", kBorg}, std::pair{"lame.json", kLame}, std::pair{"lame2.json", kLame2}}) {
    const auto cfg = write_config(name, text);
    const auto out = dir_ / (std::string("out_") + name);
    ASSERT_EQ(run("construct --config " + cfg.string() + " --out " + out.string()), 0) << name;
    EXPECT_EQ(run("verify --config " + cfg.string() + " --out " + out.string() + " --profile " + (out / "potential.csv").string()), 0)
        << name << "\n" << read_text_file(dir_ / "stdout.txt");
    const auto rep = nlohmann::json::parse(read_text_file(out / "report.json"));
    EXPECT_TRUE(rep["pass"].get<bool>());
    for (const auto& e : rep["entries"]) {
      EXPECT_TRUE(e.contains("name") && e.contains("identity") && e.contains("max_residual") && e.contains("tol"));
    }
  }
}

TEST_F(CliRun, VerifyFlagsPerturbedProfile) {
  const auto cfg = write_config("lame.json", kLame);
  const auto out = dir_ / "out";
  ASSERT_EQ(run("construct --config " + cfg.string() + " --out " + out.string()), 0);
  auto p = profile_from_csv(read_text_file(out / "potential.csv"));
  const double d = 1e-3;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p.xs[i];
    p.Q[i](0, 0) += d * std::cos(3 * x);
    p.Qp[i](0, 0) += -3 * d * std::sin(3 * x);
    p.Qpp[i](0, 0) += -9 * d * std::cos(3 * x);
    p.Qppp[i](0, 0) += 27 * d * std::sin(3 * x);
  }
  write_file_atomic(dir_ / "bad.csv", profile_to_csv(p));
  EXPECT_EQ(run("verify --config " + cfg.string() + " --out " + out.string() + " --profile " + (dir_ / "bad.csv").string()), 1);
  const auto rep = nlohmann::json::parse(read_text_file(out / "report.json"));
  for (const auto& e : rep["entries"]) {
    const std::string n = e["name"];
    if (n == "stationary kdv" || n.rfind("riccati", 0) == 0) EXPECT_FALSE(e["pass"].get<bool>()) << n;
  }
}

TEST_F(CliRun, SampleBorgDensityAndXi) {
  const auto cfg = write_config("borg.json", R"({"schema": "finiteband/1", "bands": [-2], "m": 1,
      "lambda_grid": {"start": -4, "stop": 6, "points": 41}})");
  const auto out = dir_ / "out";
  ASSERT_EQ(run("sample --config " + cfg.string() + " --out " + out.string()), 0);
  std::istringstream dens(read_text_file(out / "density.csv"));
  std::string line;
  std::getline(dens, line);
  EXPECT_EQ(line.rfind("lambda,rho_0_0_re", 0), 0u);
  int rows = 0;
  while (std::getline(dens, line)) {
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    const double lam = v[0];
    const double rho22 = v[1 + 2 * 3];  // entry (1,1) of the 2x2 density, real part
    const double expected = lam > -2 ? 1.0 / (2 * std::numbers::pi * std::sqrt(lam + 2)) : 0.0;
    EXPECT_NEAR(rho22, expected, 1e-7) << lam;
    ++rows;
  }
  EXPECT_GT(rows, 30);
  std::istringstream xi(read_text_file(out / "xi.csv"));
  std::getline(xi, line);
  while (std::getline(xi, line)) {
    const double lam = std::stod(line.substr(0, line.find(',')));
    const double v = std::stod(line.substr(line.find(',') + 1));
    EXPECT_NEAR(v, lam > -2 ? 0.5 : 0.0, 1e-6) << lam;
  }
  EXPECT_TRUE(fs::exists(out / "green.csv"));
  EXPECT_TRUE(fs::exists(out / "discriminant.csv"));
}

TEST_F(CliRun, OutputIsDeterministic) {
  const auto cfg = write_config("lame2.json", kLame2);
  const auto a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(run("construct --config " + cfg.string() + " --out " + a.string()), 0);
  ASSERT_EQ(run("construct --config " + cfg.string() + " --out " + b.string()), 0);
  ASSERT_EQ(run("sample --config " + cfg.string() + " --out " + a.string()), 0);
  ASSERT_EQ(run("sample --config " + cfg.string() + " --out " + b.string()), 0);
  for (const char* f : {"potential.csv", "pencils.json", "metadata.json", "green.csv", "density.csv", "xi.csv", "discriminant.csv"})
    EXPECT_EQ(read_text_file(a / f), read_text_file(b / f)) << f;
}

TEST_F(CliRun, ExitCodes) {
  const auto bad = write_config("bad.json", R"({"schema": "finiteband/1", "bands": [0, 1, 2], "m": 1, "spec": {}})");
  EXPECT_EQ(run("construct --config " + bad.string() + " --out " + (dir_ / "o").string()), 2);
  EXPECT_NE(read_text_file(dir_ / "stdout.txt").find("spec.alphas"), std::string::npos);
  EXPECT_EQ(run("construct --out " + (dir_ / "o").string()), 2);
  EXPECT_EQ(run("construct --config " + (dir_ / "missing.json").string() + " --out " + (dir_ / "o").string()), 2);
  const auto good = write_config("borg.json", kBorg);
  EXPECT_EQ(run("construct --config " + good.string() + " --out " + (dir_ / "o").string() + " --tol ledger=abc"), 2);
}
