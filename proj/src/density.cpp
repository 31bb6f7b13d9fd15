#include <algorithm>
#include <cmath>
#include <fstream>

#include "simtext/error.hpp"
#include "simtext/format.hpp"
#include "simtext/stats.hpp"

namespace simtext::stats {

DensitySummary density_summary(const std::vector<double>& values, int bins) {
  if (values.size() < 2) {
    throw AnalysisError("density_summary: need at least 2 values");
  }
  if (bins < 1) {
    throw AnalysisError("density_summary: bins must be >= 1");
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double lo = sorted.front();
  double hi = sorted.back();
  DensitySummary out;
  if (lo == hi) {
    out.bin_edges = {lo, hi};
    out.counts = {values.size()};
    out.kde_skipped = true;
    out.warning = "constant data: single bin, density curve skipped";
    return out;
  }
  out.bin_edges.resize(bins + 1);
  out.counts.assign(bins, 0);
  double width = (hi - lo) / bins;
  for (int i = 0; i <= bins; ++i) out.bin_edges[i] = lo + width * i;
  out.bin_edges[bins] = hi;
  for (double v : values) {
    int b = static_cast<int>((v - lo) / width);
    if (b >= bins) b = bins - 1;
    if (b < 0) b = 0;
    ++out.counts[b];
  }

  GroupSummary s = summarize(values);
  double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  double spread = s.sd;
  if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
  double n = static_cast<double>(values.size());
  out.bandwidth = 0.9 * spread * std::pow(n, -0.2);
  if (!(out.bandwidth > 0.0)) {
    out.kde_skipped = true;
    out.warning = "zero bandwidth: density curve skipped";
    return out;
  }
  const int grid = 256;
  double gx0 = lo - 3.0 * out.bandwidth;
  double gx1 = hi + 3.0 * out.bandwidth;
  double step = (gx1 - gx0) / (grid - 1);
  out.kde_x.resize(grid);
  out.kde_y.resize(grid);
  const double inv_norm = 0.39894228040143267793994605993438;  // 1/sqrt(2 pi)
  for (int g = 0; g < grid; ++g) {
    double x = gx0 + step * g;
    double sum = 0.0;
    for (double v : values) {
      double u = (x - v) / out.bandwidth;
      sum += std::exp(-0.5 * u * u);
    }
    out.kde_x[g] = x;
    out.kde_y[g] = inv_norm * sum / (n * out.bandwidth);
  }
  return out;
}

void write_density_csv(const std::string& path, const DensitySummary& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << "x,density\n";
  for (std::size_t i = 0; i < d.kde_x.size(); ++i) {
    out << format_double(d.kde_x[i]) << "," << format_double(d.kde_y[i])
        << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::string density_svg(
    const std::vector<std::pair<std::string, DensitySummary>>& groups) {
  const int width = 640;
  const int height = 400;
  const int pad = 48;
  double x_min = 0.0, x_max = 1.0, y_max = 1.0;
  bool have_curve = false;
  for (const auto& [name, d] : groups) {
    for (std::size_t i = 0; i < d.kde_x.size(); ++i) {
      if (!have_curve) {
        x_min = x_max = d.kde_x[i];
        y_max = d.kde_y[i];
        have_curve = true;
      } else {
        x_min = std::min(x_min, d.kde_x[i]);
        x_max = std::max(x_max, d.kde_x[i]);
        y_max = std::max(y_max, d.kde_y[i]);
      }
    }
  }
  if (!have_curve || x_max == x_min || y_max <= 0.0) {
    throw AnalysisError("density_svg: no density curves to draw");
  }
  auto sx = [&](double x) {
    return pad + (x - x_min) / (x_max - x_min) * (width - 2 * pad);
  };
  auto sy = [&](double y) {
    return height - pad - y / y_max * (height - 2 * pad);
  };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
  svg += "<rect x=\"" + std::to_string(pad) + "\" y=\"" +
         std::to_string(pad) + "\" width=\"" + std::to_string(width - 2 * pad) +
         "\" height=\"" + std::to_string(height - 2 * pad) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
  std::size_t color = 0;
  for (const auto& [name, d] : groups) {
    if (d.kde_x.empty()) {
      ++color;
      continue;
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += palette[color % 6];
    svg += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < d.kde_x.size(); ++i) {
      if (i) svg += " ";
      svg += format_fixed(sx(d.kde_x[i]), 2) + "," +
             format_fixed(sy(d.kde_y[i]), 2);
    }
    svg += "\"/>\n";
    svg += "<text x=\"" + std::to_string(pad + 8) + "\" y=\"" +
           std::to_string(pad + 16 + 16 * static_cast<int>(color)) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"";
    svg += palette[color % 6];
    svg += "\">" + name + "</text>\n";
    ++color;
  }
  svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" +
         std::to_string(height - 12) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\" "
         "text-anchor=\"middle\">" +
         format_double(x_min) + " to " + format_double(x_max) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace simtext::stats
