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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ldphull {

/// Runs the ldphull command line. args excludes the program name. Returns the
/// process exit code: 0 on success, 2 on domain errors (a JSON error object
/// is written to err), 1 on usage, I/O or parse errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

/// Worker count: the flag when given, else LDP_HULL_THREADS, else the
/// hardware concurrency. Non-positive or malformed values fall through.
int resolve_threads(std::optional<int> flag);

}  // namespace ldphull
