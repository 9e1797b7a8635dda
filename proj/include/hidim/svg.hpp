// Minimal static line chart: worst-case error versus dimension.
//
// Consumes the already-written sweep CSV (never the in-memory results, so a
// disabled plot can never change the table) and draws one polyline per
// classifier from its "max" rows, plus a 0.5 coin-flip reference line and
// the optimal-error floor.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hidim {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return std::string(buf);
}

}  // namespace detail

/// Renders the chart. csv_text must use the sweep schema; bayes_floor is
/// the constant optimal error of the swept family.
inline std::string sweep_svg_from_csv(const std::string& csv_text,
                                      double bayes_floor) {
  std::map<std::string, std::map<int, double>> series;  // classifier -> d -> p
  std::istringstream in(csv_text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    const auto f = detail::split_csv_line(line);
    if (f.size() < 11 || f[4] != "max") continue;
    series[f[3]][std::atoi(f[0].c_str())] = std::atof(f[6].c_str());
  }
  if (series.empty()) {
    throw std::invalid_argument("sweep_svg_from_csv: no max rows in CSV");
  }

  int d_min = 0;
  int d_max = 0;
  double p_max = 0.5;
  for (const auto& [name, pts] : series) {
    for (const auto& [d, p] : pts) {
      if (d_min == 0 || d < d_min) d_min = d;
      d_max = std::max(d_max, d);
      p_max = std::max(p_max, p);
    }
  }
  const double y_top = std::min(1.0, std::ceil((p_max + 0.05) * 10.0) / 10.0);

  const double width = 640.0;
  const double height = 420.0;
  const double left = 70.0;
  const double right = width - 170.0;
  const double top = 20.0;
  const double bottom = height - 50.0;
  const double lx0 = std::log2(static_cast<double>(d_min));
  const double lx1 = std::log2(static_cast<double>(d_max));
  auto x_of = [&](int d) {
    if (lx1 <= lx0) return 0.5 * (left + right);
    return left + (std::log2(static_cast<double>(d)) - lx0) / (lx1 - lx0) *
                      (right - left);
  };
  auto y_of = [&](double p) { return bottom - p / y_top * (bottom - top); };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b",
                                   "#17becf"};
  using detail::svg_num;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // axes
  svg << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(bottom)
      << "\" x2=\"" << svg_num(right) << "\" y2=\"" << svg_num(bottom)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(top)
      << "\" x2=\"" << svg_num(left) << "\" y2=\"" << svg_num(bottom)
      << "\" stroke=\"black\"/>\n";

  // y ticks every 0.1
  for (double p = 0.0; p <= y_top + 1e-9; p += 0.1) {
    const double y = y_of(p);
    svg << "<line x1=\"" << svg_num(left - 4) << "\" y1=\"" << svg_num(y)
        << "\" x2=\"" << svg_num(left) << "\" y2=\"" << svg_num(y)
        << "\" stroke=\"black\"/>\n";
    char label[16];
    std::snprintf(label, sizeof label, "%.1f", p);
    svg << "<text x=\"" << svg_num(left - 8) << "\" y=\"" << svg_num(y + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << label << "</text>\n";
  }
  svg << "<text x=\"16\" y=\"" << svg_num(0.5 * (top + bottom))
      << "\" font-size=\"12\" transform=\"rotate(-90 16 "
      << svg_num(0.5 * (top + bottom))
      << ")\" text-anchor=\"middle\">worst-case error</text>\n";

  // x ticks at the swept dimensions
  std::vector<int> dims;
  for (const auto& [name, pts] : series) {
    for (const auto& [d, p] : pts) dims.push_back(d);
  }
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  for (int d : dims) {
    const double x = x_of(d);
    svg << "<line x1=\"" << svg_num(x) << "\" y1=\"" << svg_num(bottom)
        << "\" x2=\"" << svg_num(x) << "\" y2=\"" << svg_num(bottom + 4)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << svg_num(x) << "\" y=\"" << svg_num(bottom + 18)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << d << "</text>\n";
  }
  svg << "<text x=\"" << svg_num(0.5 * (left + right)) << "\" y=\""
      << svg_num(height - 12)
      << "\" font-size=\"12\" text-anchor=\"middle\">dimension d (log "
         "scale)</text>\n";

  // reference lines: coin flip at 0.5 and the optimal floor
  auto dashed = [&](double p, const char* color, const std::string& label) {
    if (p > y_top) return;
    const double y = y_of(p);
    svg << "<line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(y)
        << "\" x2=\"" << svg_num(right) << "\" y2=\"" << svg_num(y)
        << "\" stroke=\"" << color
        << "\" stroke-dasharray=\"6 4\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << svg_num(right + 6) << "\" y=\"" << svg_num(y + 4)
        << "\" font-size=\"11\" fill=\"" << color << "\">" << label
        << "</text>\n";
  };
  dashed(0.5, "#888888", "0.5 (coin flip)");
  {
    char label[48];
    std::snprintf(label, sizeof label, "optimal %.4f", bayes_floor);
    dashed(bayes_floor, "#444444", label);
  }

  // one polyline per classifier plus legend entries
  int idx = 0;
  for (const auto& [name, pts] : series) {
    const char* color = kPalette[idx % 7];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (const auto& [d, p] : pts) {
      svg << svg_num(x_of(d)) << ',' << svg_num(y_of(p)) << ' ';
    }
    svg << "\"/>\n";
    for (const auto& [d, p] : pts) {
      svg << "<circle cx=\"" << svg_num(x_of(d)) << "\" cy=\""
          << svg_num(y_of(p)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = top + 16.0 * idx;
    svg << "<rect x=\"" << svg_num(right + 6) << "\" y=\"" << svg_num(ly)
        << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << svg_num(right + 20) << "\" y=\"" << svg_num(ly + 9)
        << "\" font-size=\"12\">" << name << "</text>\n";
    ++idx;
  }
  svg << "</svg>\n";
  return svg.str();
}

/// Sparsity-profile coordinates (rank, magnitude) as CSV.
inline std::string sparsity_curve_csv(const Eigen::VectorXd& magnitudes) {
  std::string out = "k,magnitude\n";
  char buf[40];
  for (Eigen::Index k = 0; k < magnitudes.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%ld,%.10g\n", static_cast<long>(k + 1),
                  magnitudes[k]);
    out += buf;
  }
  return out;
}

}  // namespace hidim
