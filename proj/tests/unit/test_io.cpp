#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "ddalab/dda.hpp"
#include "ddalab/nse2d.hpp"
#include "ddalab/snapshot.hpp"

namespace dda = ddalab::dda;
namespace nse = ddalab::nse;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ddalab_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

dda::ErrorSeries sample_series(bool h1) {
  dda::ErrorSeries s;
  s.has_h1 = h1;
  s.sup_u_norm = 12.5;
  s.verdict = dda::Verdict::Diverged;
  s.blowup_time = 3.25;
  s.set_meta("system", "nse2d");
  s.set_meta("verdict", "Diverged");
  s.set_meta("blowup_time", "3.25");
  const double vals[] = {1.0, 0.1, 1.0 / 3.0, 5e-300, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < 5; ++i) {
    dda::ErrorSample e;
    e.t = 0.1 * i;
    e.err_l2 = vals[i];
    if (h1 && i != 2) e.err_h1 = 2.0 * vals[i];
    e.event = i % 2 ? dda::SampleEvent::Step : dda::SampleEvent::Update;
    e.u_norm = 7.0 + i;
    s.samples.push_back(e);
  }
  return s;
}

void expect_same(const dda::ErrorSeries& a, const dda::ErrorSeries& b) {
  ASSERT_EQ(a.samples.size(), b.samples.size());
  EXPECT_EQ(a.has_h1, b.has_h1);
  EXPECT_EQ(a.sup_u_norm, b.sup_u_norm);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.blowup_time, b.blowup_time);
  EXPECT_EQ(a.meta("system"), b.meta("system"));
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].t, b.samples[i].t);
    EXPECT_EQ(a.samples[i].err_l2, b.samples[i].err_l2);
    EXPECT_EQ(a.samples[i].err_h1, b.samples[i].err_h1);
    EXPECT_EQ(a.samples[i].event, b.samples[i].event);
    EXPECT_EQ(a.samples[i].u_norm, b.samples[i].u_norm);
  }
}

}  // namespace

TEST(FormatDouble, RoundTripsExactly) {
  for (double x : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5,
                   std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::denorm_min()}) {
    EXPECT_EQ(dda::parse_double(dda::format_double(x)), x) << dda::format_double(x);
  }
  EXPECT_EQ(dda::format_double(0.1), "0.1");
}

TEST(ParseDouble, RejectsPartialInput) {
  EXPECT_THROW(dda::parse_double(""), std::invalid_argument);
  EXPECT_THROW(dda::parse_double("1.0x"), std::invalid_argument);
  EXPECT_THROW(dda::parse_double("abc"), std::invalid_argument);
  EXPECT_EQ(dda::parse_double("-inf"), -std::numeric_limits<double>::infinity());
}

TEST(ErrorSeriesCsv, RoundTripWithAndWithoutH1) {
  for (bool h1 : {false, true}) {
    const auto s = sample_series(h1);
    std::stringstream ss;
    dda::write_csv(ss, s);
    expect_same(s, dda::read_csv(ss));
  }
}

TEST(ErrorSeriesCsv, RoundTripThroughAFile) {
  const auto path = temp_file("series.csv");
  const auto s = sample_series(true);
  dda::write_csv(path, s);
  expect_same(s, dda::read_csv(path));
}

TEST(ErrorSeriesCsv, RejectsMalformedInput) {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return dda::read_csv(is);
  };
  EXPECT_THROW(parse(""), dda::CsvError);
  EXPECT_THROW(parse("t,err_l2,event,u_norm\n0,1,update,1\n"), dda::CsvError);  // no schema
  EXPECT_THROW(parse("# schema=other/9\nt,err_l2,event,u_norm\n"), dda::CsvError);
  const std::string head = "# schema=ddalab.error_series/1\nt,err_l2,event,u_norm\n";
  EXPECT_NO_THROW(parse(head + "0,1,update,1\n"));
  EXPECT_THROW(parse(head + "0,1,update\n"), dda::CsvError);
  EXPECT_THROW(parse(head + "0,one,update,1\n"), dda::CsvError);
  EXPECT_THROW(parse(head + "0,1,jump,1\n"), dda::CsvError);
  EXPECT_THROW(dda::read_csv(temp_file("does_not_exist.csv")), dda::CsvError);
}

TEST(Snapshot, RoundTripIsBitwise) {
  const nse::FourierGrid g(16, 2.0);
  const auto u = nse::random_field(g, 11, 3.0);
  const auto path = temp_file("field.snap");
  nse::write_snapshot(path, g, 0.05, 12.75, u);
  const auto s = nse::read_snapshot(path);
  EXPECT_EQ(s.n, 16);
  EXPECT_EQ(s.length, 2.0);
  EXPECT_EQ(s.nu, 0.05);
  EXPECT_EQ(s.t, 12.75);
  EXPECT_EQ(s.u, u);
  EXPECT_EQ(fs::file_size(path), 8u + 4u + 4u + 24u + 2u * 16u * 9u * 16u);
}

TEST(Snapshot, DetectsCorruption) {
  const nse::FourierGrid g(8, 1.0);
  const auto path = temp_file("corrupt.snap");
  nse::write_snapshot(path, g, 0.1, 0.0, nse::random_field(g, 1, 1.0));
  const auto size = fs::file_size(path);

  fs::resize_file(path, size - 8);
  EXPECT_THROW(nse::read_snapshot(path), nse::SnapshotError);

  nse::write_snapshot(path, g, 0.1, 0.0, nse::random_field(g, 1, 1.0));
  { std::ofstream(path, std::ios::app | std::ios::binary) << 'x'; }
  EXPECT_THROW(nse::read_snapshot(path), nse::SnapshotError);

  nse::write_snapshot(path, g, 0.1, 0.0, nse::random_field(g, 1, 1.0));
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.put('X');
  }
  EXPECT_THROW(nse::read_snapshot(path), nse::SnapshotError);

  EXPECT_THROW(nse::read_snapshot(temp_file("missing.snap")), nse::SnapshotError);
  EXPECT_THROW(nse::write_snapshot(path, g, 0.1, 0.0, nse::SpectralVelocity(nse::FourierGrid(16, 1.0))),
               nse::SnapshotError);
}
