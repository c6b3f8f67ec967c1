#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "triconv/numeric.hpp"

namespace triconv::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("triconv_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override {
    fs::remove_all(dir_);
    set_worker_count(0);
  }

  fs::path write_params(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  struct Result {
    int code;
    std::string out;
    std::string err;
  };

  Result invoke(Command cmd, const fs::path& params, std::vector<std::pair<std::string, std::string>> sets = {},
                std::optional<fs::path> out_path = std::nullopt) {
    RunSpec spec{cmd, params, out_path, std::move(sets)};
    std::ostringstream out, err;
    const int code = run(spec, out, err);
    return {code, out.str(), err.str()};
  }

  fs::path dir_;
};

TEST(CommandNames, RoundTrip) {
  for (auto name : kCommandNames) {
    const auto c = parse_command(name);
    ASSERT_TRUE(c);
    EXPECT_EQ(to_string(*c), name);
  }
  EXPECT_FALSE(parse_command("plot"));
}

TEST(SplitOverride, Forms) {
  EXPECT_EQ(split_override("grid.nx=5"), (std::pair<std::string, std::string>{"grid.nx", "5"}));
  EXPECT_EQ(split_override("sweep.deltas=0.2,0.1")->second, "0.2,0.1");
  EXPECT_FALSE(split_override("grid.nx"));
  EXPECT_FALSE(split_override("=5"));
}

TEST_F(CliTest, CheckRegime) {
  const auto p = write_params("p.cfg", "r = 0.05\nlambda = 1\na = 1\n");
  const auto r = invoke(Command::check_regime, p);
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("24a−3λ³ = 21\n"), std::string::npos);
  EXPECT_NE(r.out.find("regime = no_extremizers"), std::string::npos);
}

TEST_F(CliTest, DegenerateSurfaceIsOneRow) {
  const auto p = write_params("p.cfg", "r = 0.05\nlambda = 2\na = 3\n");
  const auto r = invoke(Command::surface, p, {{"grid.nx", "1"}, {"grid.ne", "1"}});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "xi,eps,tau,F\n0,0,0," + format_real(triconv::kTwoPi / triconv::kSqrt3 / 2.0) + "\n");
}

TEST_F(CliTest, SurfaceRowMajorOverXiThenEps) {
  const auto p = write_params("p.cfg", "r = 0.05\nlambda = 2\na = 3\n");
  const auto r = invoke(Command::surface, p, {{"grid.nx", "3"}, {"grid.ne", "2"}});
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[1].substr(0, lines[1].find(',')), lines[2].substr(0, lines[2].find(',')));
  EXPECT_EQ(lines[3].substr(0, 2), "0,");
}

TEST_F(CliTest, HessianAgrees) {
  const auto p = write_params("p.cfg", "r = 0.05\nlambda = 1\na = 1\n");
  const auto r = invoke(Command::hessian, p);
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("is_strict_max = true"), std::string::npos);
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("d2_", 0) != 0) continue;
    ++rows;
    EXPECT_LT(std::stod(line.substr(line.rfind(',') + 1)), 1e-3) << line;
  }
  EXPECT_EQ(rows, 2);
}

TEST_F(CliTest, OracleCompareCsv) {
  const auto p = write_params("p.cfg", "r = 0.05\nlambda = 2\na = 3\n");
  const auto r = invoke(Command::oracle_compare, p, {{"oracle.nx", "1"}, {"oracle.ne", "2"}});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.rfind("xi,eps,formula,oracle,rel_err\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
  EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, RatioSweepAndConstants) {
  const auto p = write_params("p.cfg", "r = 0.5\nlambda = 2\na = 3\n");
  const auto r = invoke(Command::ratio_sweep, p,
                        {{"sweep.deltas", "0.1"}, {"ext.nx", "384"}, {"ext.ne", "384"}, {"ext.quad", "96"}});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("delta,ratio,foschi,gap\n0.10000000000000001,", 0), 0u);

  const auto e = invoke(Command::ratio_sweep, p, {{"sweep.deltas", ""}});
  EXPECT_EQ(e.out, "delta,ratio,foschi,gap\n");

  const auto c = invoke(Command::constants, p, {{"grid.nx", "11"}, {"grid.ne", "11"}});
  EXPECT_EQ(c.code, kOk);
  EXPECT_NE(c.out.find("foschi = " + format_real(2.0377840736314963)), std::string::npos);
  EXPECT_NE(c.out.find("linf_triple = "), std::string::npos);
}

TEST_F(CliTest, IdentitiesAllPass) {
  const auto p = write_params("p.cfg", "r = 0.05\nlambda = 2\na = 3\n");
  const auto r = invoke(Command::identities, p);
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 10);

  const auto q = write_params("q.cfg", "r = 0.05\nlambda = 2\na = 3\nphi = [5]\n");
  const auto s = invoke(Command::identities, q);
  EXPECT_EQ(s.code, kOk);
  EXPECT_NE(s.out.find("rho_closed_form,0,1e-10,SKIP"), std::string::npos);
}

TEST_F(CliTest, OutputFile) {
  const auto p = write_params("p.cfg", "r = 0.05\nlambda = 1\na = 1\n");
  const auto out = dir_ / "regime.txt";
  const auto r = invoke(Command::check_regime, p, {}, out);
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_NE(ss.str().find("24a−3λ³ = 21"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  const auto good = write_params("good.cfg", "r = 0.05\nlambda = 2\na = 3\n");
  const auto bad = write_params("bad.cfg", "r = 0.05\nlambda = 2\nb = 3\n");
  const auto concave = write_params("concave.cfg", "r = 0.2\nlambda = 2\na = -3\n");

  auto r = invoke(Command::surface, bad);
  EXPECT_EQ(r.code, kBadInput);
  EXPECT_NE(r.err.find("'b'"), std::string::npos);
  EXPECT_TRUE(r.out.empty());

  r = invoke(Command::surface, good, {{"grid.nz", "3"}});
  EXPECT_EQ(r.code, kBadInput);
  EXPECT_NE(r.err.find("grid.nz"), std::string::npos);

  r = invoke(Command::surface, good, {{"grid.nx", "-3"}});
  EXPECT_EQ(r.code, kBadInput);
  EXPECT_NE(r.err.find("grid.nx"), std::string::npos);

  r = invoke(Command::surface, concave);
  EXPECT_EQ(r.code, kMonotonicity);
  EXPECT_NE(r.err.find("r=0.2"), std::string::npos);
  EXPECT_TRUE(r.out.empty());

  r = invoke(Command::ratio_sweep, good, {{"ext.nx", "4"}, {"ext.ne", "4"}, {"sweep.deltas", "0.01"}});
  EXPECT_EQ(r.code, kGridUnresolved);
  EXPECT_NE(r.err.find("ext.nx"), std::string::npos);
  EXPECT_TRUE(r.out.empty());

  r = invoke(Command::hessian, good, {{"fd.step", "0.1"}});
  EXPECT_EQ(r.code, kBadInput);
  EXPECT_NE(r.err.find("fd.step"), std::string::npos);

  r = invoke(Command::check_regime, dir_ / "missing.cfg");
  EXPECT_EQ(r.code, kIo);

  r = invoke(Command::check_regime, good, {}, dir_ / "no" / "such" / "dir.txt");
  EXPECT_EQ(r.code, kIo);

  const std::set<int> codes{kOk, kUsage, kBadInput, kMonotonicity, kNoConvergence, kGridUnresolved, kIo,
                            kCheckFailed};
  EXPECT_EQ(codes.size(), 8u);
}

TEST_F(CliTest, ByteIdenticalAcrossThreadCounts) {
  const auto p = write_params("p.cfg", "r = 0.05\nlambda = 2\na = 3\n");
  const auto one = invoke(Command::surface, p, {{"grid.nx", "9"}, {"grid.ne", "9"}, {"run.threads", "1"}});
  const auto four = invoke(Command::surface, p, {{"grid.nx", "9"}, {"grid.ne", "9"}, {"run.threads", "4"}});
  EXPECT_EQ(one.out, four.out);
  EXPECT_FALSE(one.out.empty());
}

TEST(OverrideKeys, Documented) {
  const auto& keys = override_keys();
  for (const char* k : {"quad.nodes", "grid.nx", "grid.ne", "grid.margin", "grid.eps_max", "fd.step", "oracle.width",
                        "oracle.grid_n", "oracle.extrapolate", "oracle.nx", "oracle.ne", "sweep.deltas", "ext.nx",
                        "ext.ne", "ext.quad", "ext.tol", "run.threads"}) {
    EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
  }
  EXPECT_EQ(keys.size(), 17u);
}

}  // namespace
}  // namespace triconv::cli
