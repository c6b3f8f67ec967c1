#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "triconv/config.hpp"
#include "triconv/errors.hpp"

namespace triconv {
namespace {

TEST(Config, ParsesAllKeys) {
  const auto p = parse_curve_params(
      "# quartic model\n"
      "r = 0.05\n"
      "lambda=2   # curvature\n"
      "  a = 3e0\n"
      "phi = [0.5, -1.25]\n");
  EXPECT_EQ(p.r, 0.05);
  EXPECT_EQ(p.lambda, 2.0);
  EXPECT_EQ(p.a, 3.0);
  EXPECT_EQ(p.phi, (std::vector<double>{0.5, -1.25}));
}

TEST(Config, DecimalParsingIsCorrectlyRounded) {
  const auto p = parse_curve_params("r = 0.1\nlambda = 0.3\na = 1e-310\n");
  EXPECT_EQ(p.r, 0.1);
  EXPECT_EQ(p.lambda, 0.3);
  EXPECT_EQ(p.a, 1e-310);
}

TEST(Config, PhiOptionalAndMayBeEmpty) {
  EXPECT_TRUE(parse_curve_params("r=1\nlambda=1\na=1").phi.empty());
  EXPECT_TRUE(parse_curve_params("r=1\nlambda=1\na=1\nphi=[]").phi.empty());
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_curve_params("r=1\nlambda=1\na=1\nmu=2\n"), ConfigError);
  EXPECT_THROW(parse_curve_params("r=1\nr=2\nlambda=1\na=1\n"), ConfigError);
  EXPECT_THROW(parse_curve_params("r=1\nlambda=1\n"), ConfigError);
  EXPECT_THROW(parse_curve_params("r=1\nlambda=1x\na=1\n"), ConfigError);
  EXPECT_THROW(parse_curve_params("r=1\nlambda=\na=1\n"), ConfigError);
  EXPECT_THROW(parse_curve_params("r=1\nlambda=1\na=1\nphi=1,2\n"), ConfigError);
  EXPECT_THROW(parse_curve_params("r=1\nlambda=1\na=1\nphi=[1,]\n"), ConfigError);
  EXPECT_THROW(parse_curve_params("r=1\nlambda 1\na=1\n"), ConfigError);
  EXPECT_THROW(parse_curve_params("r=-1\nlambda=1\na=1\n"), ConfigError);
  EXPECT_THROW(parse_curve_params("r=1\nlambda=0\na=1\n"), ConfigError);
}

TEST(Config, ErrorNamesOffendingKey) {
  try {
    parse_curve_params("r=1\nlambda=1\na=1\nlamda=2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("lamda"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(Config, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "triconv_config_test.cfg";
  {
    std::ofstream f(path);
    f << "r = 0.05\nlambda = 1\na = 1\n";
  }
  EXPECT_EQ(load_curve_params(path).lambda, 1.0);
  std::filesystem::remove(path);
  EXPECT_THROW(load_curve_params(path), ConfigError);
}

}  // namespace
}  // namespace triconv
