#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dyadic/error.hpp"

namespace dyadic {

struct ResultRow {
  std::string experiment;
  std::string parameters;  // key=value pairs separated by ';'
  std::string quantity;
  double value = 0.0;
  std::optional<double> exponent;
  std::optional<double> residual;
  std::string criterion;   // acceptance criterion this row feeds, if any
  std::optional<bool> pass;
};

struct Series {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<double> x, y;
};

struct ResultTable {
  static constexpr int schema_version = 1;
  std::vector<ResultRow> rows;
  std::vector<Series> series;

  bool breached() const {
    return std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.pass && !*r.pass; });
  }

  std::string csv() const {
    std::ostringstream os;
    os << "schema,experiment,parameters,quantity,value,exponent,residual,criterion,status\n";
    for (const auto& r : rows) {
      os << schema_version << ',' << r.experiment << ',' << r.parameters << ',' << r.quantity << ','
         << format(r.value) << ',' << (r.exponent ? format(*r.exponent) : "") << ','
         << (r.residual ? format(*r.residual) : "") << ',' << r.criterion << ','
         << (r.pass ? (*r.pass ? "pass" : "fail") : "") << '\n';
    }
    return os.str();
  }

  static std::string format(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }
};

/// Line plot with log axes where the data allow, data repeated in a
/// comment block.
inline std::string render_svg(const Series& s) {
  const double W = 480, H = 320, ml = 64, mr = 16, mt = 28, mb = 44;
  const bool logx = std::all_of(s.x.begin(), s.x.end(), [](double v) { return v > 0; });
  const bool logy = std::all_of(s.y.begin(), s.y.end(), [](double v) { return v > 0; });
  auto tx = [&](double v) { return logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return logy ? std::log10(v) : v; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    x0 = std::min(x0, tx(s.x[i])), x1 = std::max(x1, tx(s.x[i]));
    y0 = std::min(y0, ty(s.y[i])), y1 = std::max(y1, ty(s.y[i]));
  }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };

  std::ostringstream os;
  char buf[160];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<!-- data\n" << s.x_label << ',' << s.y_label << '\n';
  for (std::size_t i = 0; i < s.x.size(); ++i) os << ResultTable::format(s.x[i]) << ',' << ResultTable::format(s.y[i]) << '\n';
  os << "-->\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"18\" font-size=\"13\" font-family=\"sans-serif\">%s</text>\n", ml,
                s.name.c_str());
  os << buf;
  std::snprintf(buf, sizeof buf, "<path d=\"M%g %g V%g H%g\" stroke=\"black\" fill=\"none\"/>\n", ml, mt, H - mb, W - mr);
  os << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\" font-family=\"sans-serif\">%s%s</text>\n",
                (W + ml) / 2 - 30, H - 10, s.x_label.c_str(), logx ? " (log)" : "");
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"12\" y=\"%g\" font-size=\"11\" font-family=\"sans-serif\" transform=\"rotate(-90 12 %g)\">%s%s</text>\n",
                (H + mt) / 2 + 30, (H + mt) / 2 + 30, s.y_label.c_str(), logy ? " (log)" : "");
  os << buf;
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px(s.x[i]), py(s.y[i]));
    os << buf;
  }
  os << "\"/>\n";
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"steelblue\"/>\n", px(s.x[i]), py(s.y[i]));
    os << buf;
  }
  os << "</svg>\n";
  return os.str();
}

/// Writes <dir>/<name>.csv and one <dir>/<name>-<series>.svg per series;
/// returns the paths written.
inline std::vector<std::string> write_outputs(const ResultTable& t, const std::string& name, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw error(errc::io, "cannot create output directory " + dir);
  std::vector<std::string> paths;
  auto put = [&](const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw error(errc::io, "cannot write " + p.string());
    out << body;
    paths.push_back(p.string());
  };
  put(fs::path(dir) / (name + ".csv"), t.csv());
  for (const auto& s : t.series) put(fs::path(dir) / (name + "-" + s.name + ".svg"), render_svg(s));
  return paths;
}

}  // namespace dyadic
