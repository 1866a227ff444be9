#pragma once

// Lateral Dirichlet height as a function of h.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fbstrip/error.hpp"

namespace fbstrip {

class ThetaSchedule {
 public:
  enum class Kind { Constant, Table };

  static ThetaSchedule constant(double v) {
    require(v > 0.0 && std::isfinite(v), ErrorCode::InvalidArgument, "theta must be positive");
    ThetaSchedule t;
    t.kind_ = Kind::Constant;
    t.value_ = v;
    return t;
  }

  /// Step interpolation: theta(h) is the value of the last knot at or below
  /// h (the first value before the first knot).
  static ThetaSchedule table(std::vector<std::pair<double, double>> knots) {
    require(!knots.empty(), ErrorCode::InvalidArgument, "theta table is empty");
    for (std::size_t k = 0; k < knots.size(); ++k) {
      require(knots[k].second > 0.0 && std::isfinite(knots[k].second), ErrorCode::InvalidArgument,
              "theta values must be positive");
      if (k > 0) {
        require(knots[k].first > knots[k - 1].first, ErrorCode::InvalidArgument,
                "theta table abscissae must be strictly increasing");
        require(knots[k].second <= knots[k - 1].second, ErrorCode::InvalidArgument,
                "theta must be non-increasing in h");
      }
    }
    ThetaSchedule t;
    t.kind_ = Kind::Table;
    t.knots_ = std::move(knots);
    return t;
  }

  /// Lines "h gamma"; blank lines and lines starting with '#' are skipped.
  static ThetaSchedule read_table(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::ParseError, "cannot open theta table " + path);
    std::vector<std::pair<double, double>> knots;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream ls(line);
      double h = 0.0;
      double g = 0.0;
      std::string rest;
      require(static_cast<bool>(ls >> h >> g) && !(ls >> rest), ErrorCode::ParseError,
              path + ":" + std::to_string(lineno) + ": expected 'h gamma'");
      knots.emplace_back(h, g);
    }
    return table(std::move(knots));
  }

  /// "const:<v>" or "table:<file>".
  static ThetaSchedule parse(const std::string& spec) {
    if (spec.rfind("const:", 0) == 0) {
      const std::string v = spec.substr(6);
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(v, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == v.size() && used > 0, ErrorCode::ParseError, "bad theta constant '" + v + "'");
      return constant(x);
    }
    if (spec.rfind("table:", 0) == 0) return read_table(spec.substr(6));
    throw Error(ErrorCode::ParseError, "theta must be const:<v> or table:<file>, got '" + spec + "'");
  }

  double operator()(double h) const {
    if (kind_ == Kind::Constant) return value_;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), h,
                               [](double x, const auto& kv) { return x < kv.first; });
    if (it == knots_.begin()) return knots_.front().second;
    return std::prev(it)->second;
  }

  /// theta multiplied by s (values and abscissae), the rescaling that keeps
  /// the problem self-similar when m is scaled by s^{b+1}.
  ThetaSchedule scaled(double s) const {
    require(s > 0.0, ErrorCode::InvalidArgument, "scale must be positive");
    if (kind_ == Kind::Constant) return constant(value_ * s);
    auto k = knots_;
    for (auto& kv : k) {
      kv.first *= s;
      kv.second *= s;
    }
    return table(std::move(k));
  }

  /// Largest value, used to size the strip.
  double max_value() const { return kind_ == Kind::Constant ? value_ : knots_.front().second; }

  Kind kind() const { return kind_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  std::string describe() const {
    if (kind_ == Kind::Constant) {
      std::ostringstream os;
      os.precision(17);
      os << "const:" << value_;
      return os.str();
    }
    return "table:" + std::to_string(knots_.size()) + " knots";
  }

 private:
  Kind kind_ = Kind::Constant;
  double value_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

}  // namespace fbstrip
