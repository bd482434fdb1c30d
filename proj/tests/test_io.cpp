#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

#include "dsep/error.hpp"
#include "dsep/io.hpp"

using namespace dsep;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("dsep_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Rg2, HeaderLayout) {
  Grid2 g(3);
  for (std::size_t i = 0; i < 9; ++i) g[i] = 0.5 * static_cast<double>(i) - 1.0;
  const auto b = encode_rg2(g);
  ASSERT_EQ(b.size(), 16u + 9 * 8);
  EXPECT_EQ(std::memcmp(b.data(), "RG2\0", 4), 0);
  EXPECT_EQ(b[4], 3);
  for (std::size_t k = 5; k < 16; ++k) EXPECT_EQ(b[k], 0) << k;
  double v;
  std::memcpy(&v, b.data() + 16 + 8, 8);
  EXPECT_EQ(v, g[1]);
}

TEST(Rg2, RoundTripIsBitExact) {
  Grid2 g(5);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::sin(static_cast<double>(i)) * 1e-300 + i;
  g[3] = -0.0;
  g[4] = std::numeric_limits<double>::denorm_min();
  const auto back = decode_rg2(encode_rg2(g));
  ASSERT_EQ(back.side(), 5u);
  EXPECT_EQ(std::memcmp(back.vector().data(), g.vector().data(), 25 * 8), 0);
  const auto dir = temp_dir("rt");
  write_rg2((dir / "g.rg2").string(), g);
  EXPECT_EQ(read_rg2((dir / "g.rg2").string()).vector(), g.vector());
  EXPECT_FALSE(fs::exists(dir / "g.rg2.tmp"));
}

TEST(Rg2, RejectsMalformed) {
  auto b = encode_rg2(Grid2(2, 1.0));
  auto bad = b;
  bad[0] = 'X';
  EXPECT_THROW(decode_rg2(bad), ArgumentError);
  bad = b;
  bad[12] = 1;
  EXPECT_THROW(decode_rg2(bad), ArgumentError);
  bad = b;
  bad.pop_back();
  EXPECT_THROW(decode_rg2(bad), ArgumentError);
  EXPECT_THROW(decode_rg2({}), ArgumentError);
  EXPECT_THROW(read_rg2("/nonexistent/dir/x.rg2"), ArgumentError);
}

TEST(Csv, ParseAndPrint) {
  const auto t = parse_csv("a,b\n1,2\n3,4\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][0], "3");
  EXPECT_EQ(parse_csv(t.str()).rows, t.rows);
  EXPECT_THROW(parse_csv("a,b\n1\n"), ArgumentError);
}

TEST(Csv, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  for (double x : {1.0 / 3.0, 1e-300, -2.5e17, 0.1 + 0.2}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(KeyValue, TypedGettersAndComments) {
  auto c = KeyValueConfig::parse("# comment\nsize = 64\nrate=0.5  # trailing\nname = shepp\nflag = true\nlist = 0, 3,4\n");
  EXPECT_EQ(c.get_size("size", 1), 64u);
  EXPECT_EQ(c.get_double("rate", 0.0), 0.5);
  EXPECT_EQ(c.get_string("name", ""), "shepp");
  EXPECT_TRUE(c.get_bool("flag", false));
  EXPECT_EQ(c.get_size_list("list", {}), (std::vector<std::size_t>{0, 3, 4}));
  EXPECT_EQ(c.get_int("missing", 7), 7);
  EXPECT_FALSE(c.get_optional("absent"));
  EXPECT_NO_THROW(c.check_consumed());
}

TEST(KeyValue, Errors) {
  auto c = KeyValueConfig::parse("a = 1\nb = 2\n");
  c.get_int("a", 0);
  EXPECT_THROW(c.check_consumed(), ArgumentError);
  EXPECT_THROW(KeyValueConfig::parse("novalue\n"), ArgumentError);
  EXPECT_THROW(KeyValueConfig::parse("a = 1\na = 2\n"), ArgumentError);
  auto d = KeyValueConfig::parse("n = abc\nm = -3\n");
  EXPECT_THROW(d.get_double("n", 0.0), ArgumentError);
  EXPECT_THROW(d.get_size("m", 0), ArgumentError);
}

TEST(Pgm, ScaleSidecarAndHeader) {
  const auto dir = temp_dir("pgm");
  Grid2 g(4, 1.0);
  g[5] = 3.0;
  const auto path = (dir / "g.pgm").string();
  const auto s = write_pgm(path, g);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 3.0);
  const auto bytes = read_file(path);
  EXPECT_EQ(bytes.rfind("P5\n", 0), 0u);
  EXPECT_NE(bytes.find("65535"), std::string::npos);
  EXPECT_TRUE(fs::exists(path + ".scale"));
}
