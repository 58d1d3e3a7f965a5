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

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ldphull {

enum class ErrorKind {
  NotFullPlane,
  NoConvergence,
  OutsideDomain,
  OutOfRange,
  NoCandidate,
  NotSymmetric,
};

std::string_view to_string(ErrorKind kind);

/// Domain failure of a numerical operation. Precondition violations on
/// arguments are reported with std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<double> a_max = std::nullopt)
      : std::runtime_error(what), kind_(kind), a_max_(a_max) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Largest attainable area, set for OutOfRange failures.
  std::optional<double> a_max() const noexcept { return a_max_; }

 private:
  ErrorKind kind_;
  std::optional<double> a_max_;
};

}  // namespace ldphull
