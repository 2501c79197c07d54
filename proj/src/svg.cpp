#include "agreekit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace agreekit::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
                          "#bcbd22", "#e377c2"};
constexpr int kPaletteSize = 10;
constexpr double kLogFloorDecades = 16.0;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12 * (1.0 + std::abs(hi))) {
      const double c = 0.5 * (lo + hi);
      const double h = std::max(1e-12, 0.5 * std::abs(c));
      lo = c - h;
      hi = c + h;
    }
  }
};

// Five ticks, evenly spaced in plot units.
std::vector<double> ticks(const Range& r) {
  std::vector<double> t;
  for (int i = 0; i <= 4; ++i) t.push_back(r.lo + (r.hi - r.lo) * i / 4.0);
  return t;
}

}  // namespace

std::string render_chart(const std::vector<Series>& series,
                         const ChartOptions& options) {
  for (const Series& s : series)
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("series x/y length mismatch");

  // Transform: y -> log10(y) when requested, nonpositive values clamped to
  // kLogFloorDecades below the largest sample.
  double ymax_raw = -std::numeric_limits<double>::infinity();
  if (options.log_y) {
    for (const Series& s : series)
      for (double v : s.y)
        if (std::isfinite(v) && v > 0) ymax_raw = std::max(ymax_raw, v);
    if (!std::isfinite(ymax_raw)) ymax_raw = 1.0;
  }
  const double log_floor =
      options.log_y ? std::log10(ymax_raw) - kLogFloorDecades : 0.0;
  auto ty = [&](double v) {
    if (!options.log_y) return v;
    if (!(v > 0)) return log_floor;
    return std::max(std::log10(v), log_floor);
  };

  Range rx, ry;
  for (const Series& s : series) {
    for (double v : s.x) rx.add(v);
    for (double v : s.y) ry.add(ty(v));
  }
  rx.pad();
  ry.pad();
  if (options.equal_axes) {
    const double cx = 0.5 * (rx.lo + rx.hi), cy = 0.5 * (ry.lo + ry.hi);
    const double h = 0.5 * std::max(rx.hi - rx.lo, ry.hi - ry.lo);
    rx = {cx - h, cx + h};
    ry = {cy - h, cy + h};
  }

  const double W = options.width, H = options.height;
  const double ml = 64, mr = 16, mt = options.title.empty() ? 16 : 40, mb = 48;
  const double pw = W - ml - mr, ph = H - mt - mb;
  auto px = [&](double v) { return ml + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double v) { return mt + (ry.hi - v) / (ry.hi - ry.lo) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
    << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width
    << " " << options.height << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  if (!options.title.empty())
    o << "<text x=\"" << num(W / 2) << "\" y=\"20\" text-anchor=\"middle\" "
         "font-size=\"15\">"
      << escape(options.title) << "</text>\n";

  for (double t : ticks(rx)) {
    const double x = px(t);
    o << "<line x1=\"" << num(x) << "\" y1=\"" << num(mt) << "\" x2=\""
      << num(x) << "\" y2=\"" << num(mt + ph)
      << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    o << "<text x=\"" << num(x) << "\" y=\"" << num(mt + ph + 16)
      << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  for (double t : ticks(ry)) {
    const double y = py(t);
    o << "<line x1=\"" << num(ml) << "\" y1=\"" << num(y) << "\" x2=\""
      << num(ml + pw) << "\" y2=\"" << num(y)
      << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    const std::string label =
        options.log_y ? ("1e" + num(t)) : num(t);
    o << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(y + 4)
      << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  o << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\""
    << num(pw) << "\" height=\"" << num(ph)
    << "\" fill=\"none\" stroke=\"#999\"/>\n";
  if (!options.x_label.empty())
    o << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(H - 10)
      << "\" text-anchor=\"middle\">" << escape(options.x_label) << "</text>\n";
  if (!options.y_label.empty())
    o << "<text x=\"14\" y=\"" << num(mt + ph / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << num(mt + ph / 2) << ")\">" << escape(options.y_label) << "</text>\n";

  int color = 0;
  for (const Series& s : series) {
    o << "<polyline fill=\"none\" stroke=\"" << kPalette[color % kPaletteSize]
      << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (i) o << ' ';
      o << num(px(s.x[i])) << ',' << num(py(ty(s.y[i])));
    }
    o << "\"/>\n";
    ++color;
  }

  // Legend only when labels are present and few enough to read.
  bool labeled = false;
  for (const Series& s : series) labeled |= !s.label.empty();
  if (labeled && series.size() <= 10) {
    double ly = mt + 8;
    int c = 0;
    for (const Series& s : series) {
      if (!s.label.empty()) {
        o << "<line x1=\"" << num(ml + pw - 110) << "\" y1=\"" << num(ly)
          << "\" x2=\"" << num(ml + pw - 90) << "\" y2=\"" << num(ly)
          << "\" stroke=\"" << kPalette[c % kPaletteSize]
          << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << num(ml + pw - 84) << "\" y=\"" << num(ly + 4)
          << "\">" << escape(s.label) << "</text>\n";
        ly += 16;
      }
      ++c;
    }
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

void write_chart(const std::string& path, const std::vector<Series>& series,
                 const ChartOptions& options) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << render_chart(series, options);
}

namespace {
std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}
}  // namespace

std::string render_state_chart(const SimTrace& trace, const std::string& title) {
  std::vector<Series> series;
  const Eigen::Index n = trace.states.rows();
  const std::vector<double> times = to_std(trace.times);
  for (Eigen::Index i = 0; i < n; ++i) {
    Series s;
    if (n <= 10) s.label = "x" + std::to_string(i + 1);
    s.x = times;
    s.y.resize(times.size());
    for (size_t j = 0; j < times.size(); ++j)
      s.y[j] = trace.states(i, static_cast<Eigen::Index>(j));
    series.push_back(std::move(s));
  }
  ChartOptions opt;
  opt.title = title;
  opt.x_label = "t";
  opt.y_label = "state";
  return render_chart(series, opt);
}

std::string render_error_chart(const SimTrace& trace, const std::string& title) {
  Series s;
  s.x = to_std(trace.times);
  s.y = to_std(trace.error_norms);
  ChartOptions opt;
  opt.title = title;
  opt.x_label = "t";
  opt.y_label = "disagreement";
  opt.log_y = true;
  return render_chart({s}, opt);
}

}  // namespace agreekit::svg
