// Minimal SVG line-chart renderer for trace plots: labeled axes, 1-2-5 tick
// placement, one polyline per series, legend box.  No external dependencies.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace svgchart {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Largest step from {1,2,5}*10^k not exceeding the raw spacing, so axes get
// round tick values.
inline double nice_step(double range, int target_ticks) {
  if (!(range > 0)) return 1.0;
  const double raw = range / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {5.0, 2.0, 1.0})
    if (mag * m <= raw) return mag * m;
  return mag;
}

struct AxisScale {
  double lo = 0, hi = 1, step = 1;
};

inline AxisScale axis_scale(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = (lo == 0) ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  AxisScale s;
  s.step = nice_step(hi - lo, 6);
  s.lo = std::floor(lo / s.step) * s.step;
  s.hi = std::ceil(hi / s.step) * s.step;
  return s;
}

inline const char* palette(size_t i) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return kColors[i % (sizeof(kColors) / sizeof(kColors[0]))];
}

}  // namespace detail

inline std::string render_line_chart(const ChartSpec& spec) {
  using namespace detail;
  const double width = 880, height = 540;
  const double ml = 78, mr = 24, mt = 46, mb = 58;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool any = false;
  for (const auto& s : spec.series)
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!any) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        any = true;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  if (!any) {
    xmin = ymin = 0;
    xmax = ymax = 1;
  }
  const AxisScale xs = axis_scale(xmin, xmax);
  const AxisScale ys = axis_scale(ymin, ymax);
  const auto px = [&](double x) { return ml + (x - xs.lo) / (xs.hi - xs.lo) * pw; };
  const auto py = [&](double y) { return mt + ph - (y - ys.lo) / (ys.hi - ys.lo) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << escape(spec.title) << "</text>\n";

  // grid + ticks
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  const double eps_x = xs.step * 1e-9, eps_y = ys.step * 1e-9;
  for (double t = xs.lo; t <= xs.hi + eps_x; t += xs.step) {
    const double x = px(t);
    out << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\""
        << mt + ph << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t = ys.lo; t <= ys.hi + eps_y; t += ys.step) {
    const double y = py(t);
    out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw
        << "\" y2=\"" << y << "\" stroke=\"#e0e0e0\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  out << "</g>\n";

  // axes + labels
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(spec.x_label) << "</text>\n";
  out << "<text x=\"20\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 20 "
      << mt + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

  // series
  for (size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    out << "<polyline fill=\"none\" stroke=\"" << palette(si)
        << "\" stroke-width=\"1.8\" points=\"";
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
    }
    out << "\"/>\n";
  }

  // legend, top-right inside the plot area
  if (!spec.series.empty()) {
    size_t widest = 0;
    for (const auto& s : spec.series) widest = std::max(widest, s.label.size());
    const double lw = 46 + 7.0 * static_cast<double>(widest);
    const double lh = 8 + 18.0 * static_cast<double>(spec.series.size());
    const double lx = ml + pw - lw - 10, ly = mt + 10;
    out << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"" << lw
        << "\" height=\"" << lh
        << "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#999\"/>\n";
    for (size_t si = 0; si < spec.series.size(); ++si) {
      const double ry = ly + 17 + 18.0 * static_cast<double>(si);
      out << "<line x1=\"" << lx + 8 << "\" y1=\"" << ry - 4 << "\" x2=\""
          << lx + 30 << "\" y2=\"" << ry - 4 << "\" stroke=\"" << palette(si)
          << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << lx + 36 << "\" y=\"" << ry
          << "\" font-family=\"sans-serif\" font-size=\"12\">"
          << escape(spec.series[si].label) << "</text>\n";
    }
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace svgchart
