#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace ipcw {

//! One polyline in data coordinates; gaps (NaN) split the line.
struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

//! Minimal self-contained SVG line plot (axes box, tick labels, legend).
void write_svg_plot(const std::filesystem::path& path,
                    const std::vector<SvgSeries>& series,
                    const std::string& title);

}  // namespace ipcw
