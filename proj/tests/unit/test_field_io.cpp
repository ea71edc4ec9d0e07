#include <cmath>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "swlab/error.hpp"
#include "swlab/field_io.hpp"

namespace {

using namespace swlab;

void expect_same(const GridFunction& a, const GridFunction& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]) << k;
  ASSERT_EQ(a.dim(), b.dim());
  for (std::size_t k = 0; k < a.size(); k += 7) {
    const Vec3 x = grid_node(a.grid(), k);
    const Vec3 y = grid_node(b.grid(), k);
    for (int d = 0; d < a.dim(); ++d) EXPECT_EQ(x[d], y[d]);
  }
}

TEST(FieldIo, PolarRoundTripIsBitExact) {
  const auto g = build_polar_grid(3, 0.02, 7.0, 12, 8);
  const auto f = sample([](std::span<const double> x) { return std::sin(x[0]) * std::exp(-x[2] * x[2]) / 3.0; }, g);
  std::stringstream ss;
  write_field(ss, f);
  expect_same(f, read_field(ss));
}

TEST(FieldIo, CartesianRoundTripThroughFile) {
  const auto g = build_cartesian_grid(2, 5.0, 16);
  const auto f = sample([](std::span<const double> x) { return std::atan(x[0] - 0.3 * x[1]); }, g);
  const auto path = std::filesystem::temp_directory_path() / "swlab_field_io_test.txt";
  write_field(path, f);
  expect_same(f, read_field(path));
  std::filesystem::remove(path);
}

TEST(FieldIo, HeaderCarriesGridDescription) {
  const auto f = sample([](auto) { return 1.0; }, build_polar_grid(2, 0.5, 4.0, 10, 12));
  const auto h = field_header(f);
  EXPECT_EQ(h.at("dim"), 2);
  EXPECT_EQ(h.at("grid"), "polar");
  EXPECT_EQ(h.at("count"), 120);
  EXPECT_EQ(h.at("params").at("radial_count"), 10);
  std::stringstream ss;
  write_field(ss, f);
  std::string first;
  std::string second;
  std::getline(ss, first);
  std::getline(ss, second);
  EXPECT_EQ(first.front(), '#');
  EXPECT_EQ(second, "x,y,value");
}

TEST(FieldIo, MalformedInputIsIoError) {
  for (const char* text : {"", "not a header\n", "#{\"format\":\"swlab-field\"}\n",
                           "#{\"format\":\"swlab-field\",\"version\":1,\"dim\":2,\"count\":5,\"grid\":\"cartesian\","
                           "\"params\":{\"half_extent\":1.0,\"points_per_axis\":4}}\nx,y,value\n0,0,1\n"}) {
    std::stringstream ss(text);
    try {
      read_field(ss);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Io);
    }
  }
}

}  // namespace
