#include "cornerlab/errors.hpp"
#include "cornerlab/report.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace cornerlab;
namespace fs = std::filesystem;

TEST(Report, DoublesRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, std::numeric_limits<double>::denorm_min()}) {
    EXPECT_EQ(parse_double(fmt_double(v)), v);
  }
  EXPECT_THROW(parse_double("1.0x"), InputError);
  EXPECT_THROW(parse_double(""), InputError);
}

TEST(Report, CsvReader) {
  std::istringstream is("a,b\n1,2\n3,4\n");
  const CsvTable t = read_csv(is);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][0], "3");
  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(read_csv(ragged), InputError);
}

TEST(Report, ManifestIsJson) {
  RunManifest m;
  m.command = "solve";
  m.config_hash = "0123456789abcdef";
  m.tool_version = "1.0";
  m.step("assemble", "ok");
  m.files = {"solution.csv"};
  std::ostringstream os;
  write_manifest(os, m);
  const auto j = nlohmann::json::parse(os.str());
  EXPECT_EQ(j["command"], "solve");
  EXPECT_EQ(j["steps"][0]["status"], "ok");
  EXPECT_EQ(j["files"][0], "solution.csv");
}

TEST(Report, AtomicWriteRefusesOverwrite) {
  const fs::path dir = fs::temp_directory_path() / "cornerlab_report_test";
  fs::remove_all(dir);
  const fs::path p = dir / "sub" / "x.txt";
  write_file_atomic(p, "one", false);
  EXPECT_THROW(write_file_atomic(p, "two", false), ConfigError);
  write_file_atomic(p, "three", true);
  std::ifstream in(p);
  std::string s;
  in >> s;
  EXPECT_EQ(s, "three");
  EXPECT_FALSE(fs::exists(dir / "sub" / "x.txt.tmp"));
  fs::remove_all(dir);
}

TEST(Report, SvgHasSeries) {
  std::ostringstream os;
  write_loglog_svg(os, {{"L2", {0.1, 0.05}, {1e-2, 2.5e-3}}}, "t", "h", "err");
  const std::string s = os.str();
  EXPECT_NE(s.find("<svg"), std::string::npos);
  EXPECT_NE(s.find("L2"), std::string::npos);
  EXPECT_NE(s.find("polyline"), std::string::npos);
}

TEST(Report, Fnv) { EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull); }
