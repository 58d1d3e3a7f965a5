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


/**
 * @file  io.hpp
 * @brief Distribution specs in JSON and point lists in CSV.
 *
 *   {"type":"gaussian","mean":[0,0],"cov":[[1,0],[0,1]],"eps":0}
 *   {"type":"atoms","points":[[1,1],[1,-1]],"probs":[0.5,0.5],"eps":0}
 *   {"type":"graph1d","mu1":1,
 *    "y":{"type":"atoms1d","points":[1,-1],"probs":[0.5,0.5]},"eps":0}
 *
 * with y alternatively {"type":"gaussian1d","mean":0,"variance":1}. "eps"
 * is optional and defaults to 0.
 */

#pragma once

#include "ldphull/increments.hpp"

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldphull {

/// Malformed input or unreadable file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

IncrementModel model_from_json(const nlohmann::json& spec);
nlohmann::json model_to_json(const IncrementModel& model);

IncrementModel load_distribution(const std::string& path);

/// "%.17g": round-trips every double.
std::string format_double(double x);

/// Rows "x,y"; blank lines and lines starting with '#' are skipped, as is a
/// leading header row "x,y".
std::vector<Vec2> read_points_csv(std::istream& in);
void write_points_csv(std::ostream& out, const std::vector<Vec2>& points);

}  // namespace ldphull
