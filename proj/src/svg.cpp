#include "rabi/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rabi::io {
namespace {

std::string fmt(double v, int prec = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// Blue→red ramp.
std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(255 * t), b = static_cast<int>(255 * (1 - t)), g = static_cast<int>(80 * (1 - std::abs(2 * t - 1)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) ticks.push_back(t);
  return ticks;
}

std::string render_svg(const Plot& plot) {
  const double left = 70, right = 20, top = 40, bottom = 55;
  const double w = plot.width - left - right, h = plot.height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  xmin = plot.axes.xmin.value_or(xmin);
  xmax = plot.axes.xmax.value_or(xmax);
  ymin = plot.axes.ymin.value_or(ymin);
  ymax = plot.axes.ymax.value_or(ymax);
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;

  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * w; };
  auto py = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * h; };
  auto inside = [&](double x, double y) { return x >= xmin && x <= xmax && y >= ymin && y <= ymax; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << plot.width << "\" height=\""
    << plot.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(left + w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(plot.axes.title) << "</text>\n";
  o << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : nice_ticks(xmin, xmax)) {
    o << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << fmt(top + h) << "\" x2=\"" << fmt(px(t)) << "\" y2=\""
      << fmt(top + h + 5) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(px(t)) << "\" y=\"" << fmt(top + h + 18) << "\" text-anchor=\"middle\">"
      << tick_label(t) << "</text>\n";
  }
  for (double t : nice_ticks(ymin, ymax)) {
    o << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(py(t)) << "\" x2=\"" << fmt(left) << "\" y2=\""
      << fmt(py(t)) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(py(t) + 4) << "\" text-anchor=\"end\">" << tick_label(t)
      << "</text>\n";
  }
  o << "<text x=\"" << fmt(left + w / 2) << "\" y=\"" << fmt(plot.height - 12.0)
    << "\" text-anchor=\"middle\">" << escape(plot.axes.xlabel) << "</text>\n";
  o << "<text x=\"16\" y=\"" << fmt(top + h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << fmt(top + h / 2) << ")\">" << escape(plot.axes.ylabel) << "</text>\n";

  for (double v : plot.axes.vlines)
    if (v >= xmin && v <= xmax)
      o << "<line x1=\"" << fmt(px(v)) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(px(v)) << "\" y2=\""
        << fmt(top + h) << "\" stroke=\"gray\" stroke-dasharray=\"4,3\"/>\n";

  o << "<g>\n";
  for (const auto& s : plot.series) {
    if (s.points) {
      double vmin = 0, vmax = 1;
      if (!s.values.empty()) {
        const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
        vmin = *lo;
        vmax = *hi > *lo ? *hi : *lo + 1;
      }
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!inside(s.x[i], s.y[i])) continue;
        const std::string color = s.values.empty() ? s.color : ramp((s.values[i] - vmin) / (vmax - vmin));
        o << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"2\" fill=\"" << color
          << "\"/>\n";
      }
    } else {
      std::string pts;
      auto flush = [&] {
        if (!pts.empty())
          o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"" << pts
            << "\"/>\n";
        pts.clear();
      };
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!inside(s.x[i], s.y[i])) {
          flush();
          continue;
        }
        pts += fmt(px(s.x[i])) + "," + fmt(py(s.y[i])) + " ";
      }
      flush();
    }
  }
  o << "</g>\n";

  double ly = top + 16;
  for (const auto& s : plot.series) {
    if (s.label.empty()) continue;
    o << "<rect x=\"" << fmt(left + w - 150) << "\" y=\"" << fmt(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
      << s.color << "\"/>\n";
    o << "<text x=\"" << fmt(left + w - 135) << "\" y=\"" << fmt(ly) << "\">" << escape(s.label) << "</text>\n";
    ly += 16;
  }
  o << "</svg>\n";
  return o.str();
}

void write_svg(const Plot& plot, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << render_svg(plot);
}

}  // namespace rabi::io
