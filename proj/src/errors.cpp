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

#include "ldphull/errors.hpp"

namespace ldphull {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotFullPlane: return "NotFullPlane";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NoCandidate: return "NoCandidate";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
  }
  return "Unknown";
}

}  // namespace ldphull
