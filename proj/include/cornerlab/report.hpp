#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cornerlab {

/// 17 significant digits, the format used by every CSV the tools write.
std::string fmt_double(double v);
double parse_double(std::string_view s);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Comma-separated, single header row, no quoting.
CsvTable read_csv(std::istream& is);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Log-log polyline plot with labelled axes and a legend.
void write_loglog_svg(std::ostream& os, const std::vector<PlotSeries>& series, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel);

/// 64-bit FNV-1a, used to fingerprint configurations.
std::uint64_t fnv1a(std::string_view data);

struct StepStatus {
  std::string step;
  std::string status;
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string tool_version;
  std::vector<StepStatus> steps;
  std::vector<std::string> files;

  void step(std::string name, std::string status) { steps.push_back({std::move(name), std::move(status)}); }
};

void write_manifest(std::ostream& os, const RunManifest& m);

/// Writes `content` to `path` through a temporary file and rename. Refuses to
/// replace an existing file unless `force` is set.
void write_file_atomic(const std::filesystem::path& path, std::string_view content, bool force);

}  // namespace cornerlab
