/*
 * Copyright 2026 The ldphull Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "ldphull/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ldphull {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return obj.at(key);
}

double number(const json& value, const char* what) {
  if (!value.is_number()) throw ParseError(std::string(what) + " must be a number");
  return value.get<double>();
}

Vec2 vec2(const json& value, const char* what) {
  if (!value.is_array() || value.size() != 2) {
    throw ParseError(std::string(what) + " must be a 2-element array");
  }
  return {number(value[0], what), number(value[1], what)};
}

std::vector<double> numbers(const json& value, const char* what) {
  if (!value.is_array()) throw ParseError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : value) out.push_back(number(v, what));
  return out;
}

Model1D model_1d(const json& spec) {
  const std::string type = field(spec, "type").get<std::string>();
  if (type == "gaussian1d") {
    return Gaussian1D{number(field(spec, "mean"), "mean"),
                      number(field(spec, "variance"), "variance")};
  }
  if (type == "atoms1d") {
    return Atoms1D{numbers(field(spec, "points"), "points"),
                   numbers(field(spec, "probs"), "probs")};
  }
  throw ParseError("unknown y type \"" + type + "\"");
}

json model_1d_to_json(const Model1D& y) {
  if (const auto* g = std::get_if<Gaussian1D>(&y)) {
    return {{"type", "gaussian1d"}, {"mean", g->mean}, {"variance", g->variance}};
  }
  const auto& a = std::get<Atoms1D>(y);
  return {{"type", "atoms1d"}, {"points", a.points}, {"probs", a.probs}};
}

}  // namespace

IncrementModel model_from_json(const json& spec) {
  try {
    const std::string type = field(spec, "type").get<std::string>();
    const double eps = spec.contains("eps") ? number(spec.at("eps"), "eps") : 0.0;
    if (type == "gaussian") {
      const json& cov = field(spec, "cov");
      if (!cov.is_array() || cov.size() != 2) {
        throw ParseError("cov must be a 2x2 array");
      }
      const Vec2 r0 = vec2(cov[0], "cov"), r1 = vec2(cov[1], "cov");
      Mat2 m;
      m << r0.x(), r0.y(), r1.x(), r1.y();
      return IncrementModel::gaussian(vec2(field(spec, "mean"), "mean"), m, eps);
    }
    if (type == "atoms") {
      std::vector<Vec2> points;
      for (const auto& p : field(spec, "points")) points.push_back(vec2(p, "points"));
      return IncrementModel::atoms(std::move(points),
                                   numbers(field(spec, "probs"), "probs"), eps);
    }
    if (type == "graph1d") {
      return IncrementModel::graph(number(field(spec, "mu1"), "mu1"),
                                   model_1d(field(spec, "y")), eps);
    }
    throw ParseError("unknown distribution type \"" + type + "\"");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed distribution spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid distribution: ") + e.what());
  }
}

json model_to_json(const IncrementModel& model) {
  json out = std::visit(
      [](const auto& kind) -> json {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Gaussian2D>) {
          return {{"type", "gaussian"},
                  {"mean", {kind.mean.x(), kind.mean.y()}},
                  {"cov",
                   {{kind.cov(0, 0), kind.cov(0, 1)},
                    {kind.cov(1, 0), kind.cov(1, 1)}}}};
        } else if constexpr (std::is_same_v<T, Atoms2D>) {
          json points = json::array();
          for (const Vec2& p : kind.points) points.push_back({p.x(), p.y()});
          return {{"type", "atoms"}, {"points", points}, {"probs", kind.probs}};
        } else {
          return {{"type", "graph1d"},
                  {"mu1", kind.mu1},
                  {"y", model_1d_to_json(kind.y)}};
        }
      },
      model.kind());
  out["eps"] = model.epsilon();
  return out;
}

IncrementModel load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read distribution spec " + path);
  json spec;
  try {
    in >> spec;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return model_from_json(spec);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<Vec2> read_points_csv(std::istream& in) {
  std::vector<Vec2> out;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (out.empty() && line.rfind("x,y", 0) == 0) continue;
    std::istringstream fields(line);
    std::string xs, ys, extra;
    if (!std::getline(fields, xs, ',') || !std::getline(fields, ys, ',') ||
        std::getline(fields, extra, ',')) {
      throw ParseError("row " + std::to_string(row) + ": expected \"x,y\"");
    }
    try {
      std::size_t px = 0, py = 0;
      const double x = std::stod(xs, &px);
      const double y = std::stod(ys, &py);
      if (xs.find_first_not_of(" \t", px) != std::string::npos ||
          ys.find_first_not_of(" \t", py) != std::string::npos) {
        throw std::invalid_argument("trailing characters");
      }
      out.emplace_back(x, y);
    } catch (const std::logic_error&) {
      throw ParseError("row " + std::to_string(row) + ": not a number pair");
    }
  }
  return out;
}

void write_points_csv(std::ostream& out, const std::vector<Vec2>& points) {
  out << "x,y\n";
  for (const Vec2& p : points) {
    out << format_double(p.x()) << ',' << format_double(p.y()) << '\n';
  }
}

}  // namespace ldphull
