#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sirs::cli {

// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Creates dir if needed and proves it writable. Throws IoError.
void ensure_writable_dir(const std::filesystem::path& dir);
// Write to a temporary sibling, then rename. Throws IoError.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool markers = false;  // draw points instead of a polyline
  std::string color = "#1f77b4";
};

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<SvgSeries>& series, bool zero_line = false);

}  // namespace sirs::cli
