#pragma once

#include <string>
#include <vector>

#include "agreekit/simulate.hpp"

namespace agreekit::svg {

// One polyline; x and y must have equal length.  For time series x is the
// time grid; for planar paths x and y are the two coordinates.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;  // plot log10(y); nonpositive samples are clamped
  int width = 720;
  int height = 440;
  bool equal_axes = false;  // same unit length on both axes (planar paths)
};

// Renders a self-contained SVG document.  Output is deterministic: fixed
// palette, fixed tick rule, all numbers printed with %.6g.
std::string render_chart(const std::vector<Series>& series,
                         const ChartOptions& options);

void write_chart(const std::string& path, const std::vector<Series>& series,
                 const ChartOptions& options);

// All state components of a trace against time.
std::string render_state_chart(const SimTrace& trace, const std::string& title);

// Disagreement norm against time on a log scale.
std::string render_error_chart(const SimTrace& trace, const std::string& title);

}  // namespace agreekit::svg
