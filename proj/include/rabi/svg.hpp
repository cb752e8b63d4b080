#pragma once

// Minimal static SVG 1.1 line/scatter plots.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rabi::io {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool points = false;  // markers instead of a polyline
  std::string color = "#1f77b4";
  std::vector<double> values{};  // optional per-point colour scale (points only), mapped low→high
};

struct Axes {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::optional<double> xmin{}, xmax{}, ymin{}, ymax{};
  std::vector<double> vlines{};
};

struct Plot {
  Axes axes;
  std::vector<Series> series;
  int width = 720;
  int height = 480;
};

std::string render_svg(const Plot& plot);
void write_svg(const Plot& plot, const std::filesystem::path& path);

// Tick positions covering [lo, hi] at a 1-2-5 step.
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace rabi::io
