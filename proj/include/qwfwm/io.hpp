#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qwfwm/scan_engine.hpp"

// Artifact emission: CSV (17 significant digits, LF endings, bitwise
// round-trippable) and self-contained single-polyline SVG charts.

namespace qwfwm {

inline std::string format_full(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_csv(const ScanResult& res, const std::string& path) {
  std::ofstream f(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!f) throw config_error("write_csv: cannot open " + path);
  f << "eta,z_um,rho_tunneling,rho_baseline,enhancement\n";
  for (const ScanRow& r : res.rows) {
    f << format_full(r.eta) << ',' << format_full(r.z_um) << ','
      << format_full(r.rho_tunneling) << ',' << format_full(r.rho_baseline) << ','
      << (r.enhancement ? format_full(*r.enhancement) : "nan") << '\n';
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // missing/undefined entries are NaN
};

inline CsvTable parse_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw config_error("parse_csv: cannot open " + path);
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = cells;
      first = false;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Minimal SVG line chart: one polyline per series, axes with labels, no
// external assets. Deterministic text output.

struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};

namespace detail {
inline std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}
inline std::string fmt3g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}
inline const char* svg_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
  return palette[i % 8];
}
}  // namespace detail

inline void write_svg(const std::vector<SvgSeries>& series, const std::string& x_label,
                      const std::string& y_label, const std::string& title,
                      const std::string& path) {
  const double W = 960, H = 600, ml = 90, mr = 30, mt = 50, mb = 60;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!any) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        any = true;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::ofstream f(path, std::ios::binary);
  if (!f) throw config_error("write_svg: cannot open " + path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  f << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  f << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">" << title
    << "</text>\n";
  // axes
  f << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
    << H - mb << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
    << "\" stroke=\"black\"/>\n";
  f << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 16
    << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label << "</text>\n";
  f << "<text x=\"20\" y=\"" << (mt + H - mb) / 2
    << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
    << (mt + H - mb) / 2 << ")\">" << y_label << "</text>\n";
  for (int i = 0; i <= 2; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 2.0;
    const double yv = ymin + (ymax - ymin) * i / 2.0;
    f << "<text x=\"" << detail::fmt2(px(xv)) << "\" y=\"" << H - mb + 18
      << "\" text-anchor=\"middle\" font-size=\"12\">" << detail::fmt3g(xv) << "</text>\n";
    f << "<text x=\"" << ml - 8 << "\" y=\"" << detail::fmt2(py(yv) + 4)
      << "\" text-anchor=\"end\" font-size=\"12\">" << detail::fmt3g(yv) << "</text>\n";
  }
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    f << "<polyline fill=\"none\" stroke=\"" << detail::svg_color(si)
      << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      f << detail::fmt2(px(s.x[i])) << ',' << detail::fmt2(py(s.y[i])) << ' ';
    }
    f << "\"/>\n";
    f << "<text x=\"" << W - mr - 200 << "\" y=\"" << mt + 18 * double(si + 1)
      << "\" font-size=\"12\" fill=\"" << detail::svg_color(si) << "\">" << s.label
      << "</text>\n";
  }
  f << "</svg>\n";
}

// Chart for a ScanResult: one polyline per (slice, variant) pair.
inline void write_svg(const ScanResult& res, const std::string& title, const std::string& path) {
  const bool eta_axis = res.axis == "eta";
  // group rows by the slice value (z for eta scans, eta for distance scans)
  std::vector<double> slices;
  for (const ScanRow& r : res.rows) {
    const double key = eta_axis ? r.z_um : r.eta;
    bool found = false;
    for (double s : slices)
      if (s == key) found = true;
    if (!found) slices.push_back(key);
  }
  std::vector<SvgSeries> series;
  for (double s : slices) {
    SvgSeries tun, base;
    char lbl[64];
    std::snprintf(lbl, sizeof(lbl), "%s=%g tunneling", eta_axis ? "z_um" : "eta", s);
    tun.label = lbl;
    std::snprintf(lbl, sizeof(lbl), "%s=%g baseline", eta_axis ? "z_um" : "eta", s);
    base.label = lbl;
    bool has_base = false;
    for (const ScanRow& r : res.rows) {
      if ((eta_axis ? r.z_um : r.eta) != s) continue;
      const double x = eta_axis ? r.eta : r.z_um;
      tun.x.push_back(x);
      tun.y.push_back(r.rho_tunneling);
      if (std::isfinite(r.rho_baseline)) {
        base.x.push_back(x);
        base.y.push_back(r.rho_baseline);
        has_base = true;
      }
    }
    series.push_back(std::move(tun));
    if (has_base) series.push_back(std::move(base));
  }
  write_svg(series, eta_axis ? "eta" : "z (um)", "rho", title, path);
}

}  // namespace qwfwm
