#pragma once

// Field dumps, CSV tables and SVG plots.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fbstrip/error.hpp"
#include "fbstrip/grid.hpp"
#include "fbstrip/support.hpp"

namespace fbstrip {

/// Shortest decimal that reads back to the same double.
inline std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

inline double parse_real(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  require(r.ec == std::errc() && r.ptr == s.data() + s.size(), ErrorCode::ParseError, "bad number '" + s + "'");
  return v;
}

inline constexpr const char* kFieldMagic = "# fbfield v1";

struct FieldDump {
  StripParams params;  ///< gamma as requested, before snapping
  GridSpec grid;
  ScalarField field;   ///< ny + 1 rows; the top row is zero
};

/// Rows 0..ny-1, bottom first; the top row is the zero boundary and is not
/// written.
inline void write_field(std::ostream& os, const FieldDump& d) {
  const auto& g = d.grid;
  const auto& p = d.params;
  os << kFieldMagic << '\n';
  os << "nx=" << g.nx << " ny=" << g.ny << " lambda=" << format_real(g.lambda) << " L=" << format_real(g.L_top)
     << " gamma=" << format_real(p.gamma) << " h=" << format_real(p.h) << " b=" << format_real(p.b)
     << " m=" << format_real(p.m) << '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) os << ' ';
      os << format_real(d.field(i, j));
    }
    os << '\n';
  }
}

inline void write_field_file(const std::string& path, const FieldDump& d) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::InvalidArgument, "cannot write " + path);
  write_field(os, d);
}

inline FieldDump read_field(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)) && line == kFieldMagic, ErrorCode::ParseError,
          "missing field header");
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::ParseError, "missing parameter line");
  std::map<std::string, std::string> kv;
  std::istringstream ls(line);
  std::string tok;
  while (ls >> tok) {
    const auto eq = tok.find('=');
    require(eq != std::string::npos, ErrorCode::ParseError, "bad header token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"nx", "ny", "lambda", "L", "gamma", "h", "b", "m"}) {
    require(kv.count(key) == 1, ErrorCode::ParseError, std::string("header lacks ") + key);
  }
  FieldDump d;
  d.grid.nx = std::stoi(kv["nx"]);
  d.grid.ny = std::stoi(kv["ny"]);
  d.grid.lambda = parse_real(kv["lambda"]);
  d.grid.L_top = parse_real(kv["L"]);
  d.params = {parse_real(kv["b"]), parse_real(kv["m"]), parse_real(kv["h"]), parse_real(kv["gamma"]),
              d.grid.lambda};
  require(d.grid.nx > 0 && d.grid.ny > 0, ErrorCode::ParseError, "nonpositive grid size");
  d.field = ScalarField(d.grid.nx, d.grid.ny + 1, 0.0);
  for (int j = 0; j < d.grid.ny; ++j) {
    require(static_cast<bool>(std::getline(is, line)), ErrorCode::ParseError,
            "expected " + std::to_string(d.grid.ny) + " rows, got " + std::to_string(j));
    std::istringstream rs(line);
    for (int i = 0; i < d.grid.nx; ++i) {
      require(static_cast<bool>(rs >> tok), ErrorCode::ParseError, "short row " + std::to_string(j));
      d.field(i, j) = parse_real(tok);
    }
    require(!(rs >> tok), ErrorCode::ParseError, "long row " + std::to_string(j));
  }
  return d;
}

inline FieldDump read_field_file(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorCode::ParseError, "cannot open " + path);
  return read_field(is);
}

// ---------------------------------------------------------------- CSV

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), cols_(header.size()) {
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    require(cells.size() == cols_, ErrorCode::InvalidArgument, "CSV row width mismatch");
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) os_ << ',';
      os_ << cells[k];
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
  std::size_t cols_;
};

// ---------------------------------------------------------------- SVG

namespace detail {

inline std::string heat_colour(double s) {
  s = std::clamp(s, 0.0, 1.0);
  // white -> blue ramp
  const int r = static_cast<int>(std::lround(255 * (1.0 - 0.85 * s)));
  const int g = static_cast<int>(std::lround(255 * (1.0 - 0.65 * s)));
  const int b = static_cast<int>(std::lround(255 * (1.0 - 0.2 * s)));
  std::ostringstream os;
  os << "rgb(" << r << ',' << g << ',' << b << ')';
  return os.str();
}

}  // namespace detail

/// Heat map of u / m with iso-lines at m/10, ..., 9m/10 (marching squares)
/// and the free-boundary polyline in red.
inline void write_svg(std::ostream& os, const FieldDump& d, double max_height = 0.0) {
  const auto& g = d.grid;
  const auto& u = d.field;
  const double dx = g.dx();
  const double dy = g.dy();
  const double top = max_height > 0.0 ? std::min(max_height, g.L_top) : g.L_top;
  const int rows = std::min(u.rows(), static_cast<int>(std::ceil(top / dy)) + 1);
  const double scale = 600.0 / std::max(g.lambda, top);
  const double W = g.lambda * scale;
  const double H = top * scale;
  auto X = [&](double x) { return (x + 0.5 * g.lambda) * scale; };
  auto Y = [&](double y) { return H - y * scale; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_real(W + 20) << "\" height=\""
     << format_real(H + 20) << "\" viewBox=\"-10 -10 " << format_real(W + 20) << ' ' << format_real(H + 20)
     << "\">\n";
  const double cw = dx * scale;
  const double ch = dy * scale;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double v = u(i, j) / d.params.m;
      if (v <= 0.0) continue;
      os << "<rect x=\"" << format_real(X(-0.5 * g.lambda + i * dx) - 0.5 * cw) << "\" y=\""
         << format_real(Y(j * dy) - 0.5 * ch) << "\" width=\"" << format_real(cw) << "\" height=\""
         << format_real(ch) << "\" fill=\"" << detail::heat_colour(v) << "\"/>\n";
    }
  }
  // Iso-lines on the cell complex spanned by the nodes (no periodic wrap).
  os << "<g stroke=\"black\" stroke-width=\"0.6\" fill=\"none\">\n";
  for (int lev = 1; lev <= 9; ++lev) {
    const double c = d.params.m * lev / 10.0;
    for (int j = 0; j + 1 < rows; ++j) {
      for (int i = 0; i + 1 < g.nx; ++i) {
        const double x0 = -0.5 * g.lambda + i * dx;
        const double y0 = j * dy;
        const double v[4] = {u(i, j), u(i + 1, j), u(i + 1, j + 1), u(i, j + 1)};
        const double px[4] = {x0, x0 + dx, x0 + dx, x0};
        const double py[4] = {y0, y0, y0 + dy, y0 + dy};
        std::vector<std::pair<double, double>> hits;
        for (int e = 0; e < 4; ++e) {
          const int f = (e + 1) % 4;
          if ((v[e] < c) != (v[f] < c)) {
            const double s = (c - v[e]) / (v[f] - v[e]);
            hits.emplace_back(px[e] + s * (px[f] - px[e]), py[e] + s * (py[f] - py[e]));
          }
        }
        for (std::size_t k = 0; k + 1 < hits.size(); k += 2) {
          os << "<line x1=\"" << format_real(X(hits[k].first)) << "\" y1=\"" << format_real(Y(hits[k].second))
             << "\" x2=\"" << format_real(X(hits[k + 1].first)) << "\" y2=\""
             << format_real(Y(hits[k + 1].second)) << "\"/>\n";
        }
      }
    }
  }
  os << "</g>\n";
  const Support sup = extract_support(u, dx, dy, g.lambda, 0.0);
  if (!sup.polyline.empty()) {
    os << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < sup.polyline.size(); ++k) {
      if (k) os << ' ';
      os << format_real(X(sup.polyline[k].first)) << ',' << format_real(Y(std::min(sup.polyline[k].second, top)));
    }
    os << "\"/>\n";
  }
  // Dirichlet part of the seam above gamma.
  os << "<line x1=\"" << format_real(X(-0.5 * g.lambda)) << "\" y1=\"" << format_real(Y(d.params.gamma))
     << "\" x2=\"" << format_real(X(-0.5 * g.lambda)) << "\" y2=\"" << format_real(Y(top))
     << "\" stroke=\"green\" stroke-width=\"2\"/>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << format_real(W) << "\" height=\"" << format_real(H)
     << "\" fill=\"none\" stroke=\"gray\"/>\n";
  os << "</svg>\n";
}

inline void write_svg_file(const std::string& path, const FieldDump& d, double max_height = 0.0) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::InvalidArgument, "cannot write " + path);
  write_svg(os, d, max_height);
}

}  // namespace fbstrip
