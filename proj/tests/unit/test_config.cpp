#include <gtest/gtest.h>

#include "expcli/config.hpp"

using namespace expcli;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, EmptyTextGivesLorenzDefaults) {
  const auto c = parse_config("");
  EXPECT_EQ(c.system, SystemKind::Lorenz);
  EXPECT_EQ(c.lorenz.sigma, 10.0);
  EXPECT_EQ(c.lorenz.b, 8.0 / 3.0);
  EXPECT_EQ(c.lorenz.r, 28.0);
  EXPECT_EQ(c.integrator.scheme, ddalab::Scheme::RK4);
  EXPECT_EQ(c.seed_count, 5);
  EXPECT_TRUE(c == default_config(SystemKind::Lorenz));
}

TEST(Config, NseDefaults) {
  const auto c = parse_config("[experiment]\nsystem = nse2d\n");
  EXPECT_EQ(c.system, SystemKind::Nse2d);
  EXPECT_EQ(c.integrator.scheme, ddalab::Scheme::IFRK4);
  EXPECT_EQ(c.nse.n, 64);
  EXPECT_EQ(c.nse.nu, 0.01);
  EXPECT_EQ(c.schedule.h, 0.5);
}

TEST(Config, ParsesEveryKind) {
  const auto c = parse_config(
      "[experiment]\nsystem = nse2d\nseed_count = 2\nworkers = 3\n"
      "[nse2d]\nn = 32\nlambda = 9\n"
      "[schedule]\nkind = explicit\ntimes = 0, 0.5, 2\n"
      "[eta]\nkind = random\nnorm = 0.25\n"
      "[sweep]\nh = 1, 2\nlambda = 4, 9, 16\n");
  EXPECT_EQ(c.seed_count, 2);
  EXPECT_EQ(c.workers, 3u);
  EXPECT_EQ(c.nse.n, 32);
  EXPECT_EQ(c.nse.lambda, 9.0);
  EXPECT_EQ(c.schedule.kind, ScheduleKind::Explicit);
  EXPECT_EQ(c.schedule.times, (std::vector<double>{0, 0.5, 2}));
  EXPECT_EQ(c.eta.kind, EtaKind::Random);
  EXPECT_EQ(c.sweep.lambda.size(), 3u);
}

TEST(Config, SerializationRoundTrips) {
  for (auto kind : {SystemKind::Lorenz, SystemKind::Nse2d}) {
    auto c = default_config(kind);
    c.schedule.h = 0.123456789;
    c.sweep.h = {0.1, 0.2};
    c.eta.kind = EtaKind::Random;
    c.seed_count = 7;
    const auto back = parse_config(serialize_config(c));
    EXPECT_TRUE(back == c) << serialize_config(c);
    EXPECT_EQ(serialize_config(back), serialize_config(c));
  }
}

TEST(Config, RejectsUnknownKeysAndSections) {
  EXPECT_EQ(error_of("[lorenz]\ncolour = blue\n"), "lorenz.colour: unknown key");
  EXPECT_NE(error_of("[plot]\nx = 1\n").find("plot.x"), std::string::npos);
  EXPECT_NE(error_of("[experiment]\nsystem = lorenz\n[nse2d]\nn = 32\n").find("does not apply"),
            std::string::npos);
  EXPECT_NE(error_of("[experiment]\nsystem = heat\n").find("experiment.system"), std::string::npos);
}

TEST(Config, RejectsMalformedValues) {
  EXPECT_NE(error_of("[schedule]\nh = fast\n").find("schedule.h: expected a number"),
            std::string::npos);
  EXPECT_NE(error_of("[experiment]\nseed_count = 2.5\n").find("expected an integer"),
            std::string::npos);
  EXPECT_NE(error_of("[integrator]\nscheme = euler\n").find("integrator.scheme"), std::string::npos);
}

TEST(Config, ValidationNamesTheField) {
  EXPECT_NE(error_of("[lorenz]\nb = 1\n").find("lorenz.b: must be > 1"), std::string::npos);
  EXPECT_NE(error_of("[lorenz]\nb = 0.5\n").find("4(b - 1)"), std::string::npos);
  EXPECT_EQ(error_of("[schedule]\nh = 0\n").rfind("schedule.h", 0), 0u);
  EXPECT_EQ(error_of("[threshold]\nh_lo = 0.5\nh_hi = 0.1\n").rfind("threshold.h_hi", 0), 0u);
  EXPECT_EQ(error_of("[experiment]\nsystem = nse2d\n[nse2d]\nn = 48\n").rfind("nse2d.n", 0), 0u);
  EXPECT_EQ(error_of("[lorenz]\nobserve = xw\n").rfind("lorenz.observe", 0), 0u);
  EXPECT_EQ(error_of("[integrator]\nscheme = IFRK4\n").rfind("integrator.scheme", 0), 0u);
  EXPECT_EQ(error_of("[schedule]\nkind = explicit\ntimes = 0, 2, 1\n").rfind("schedule.times", 0),
            0u);
  EXPECT_EQ(error_of("[verdict]\ntol_rel = 2\n").rfind("verdict.tol_rel", 0), 0u);
}

TEST(Config, MissingFileIsAnIoError) {
  EXPECT_THROW(load_config("/nonexistent/ddalab.ini"), IoError);
}
