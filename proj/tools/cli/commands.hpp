/*
 Copyright 2026 The disevo Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "disevo/scalar.hpp"

namespace disevo::cli {

enum class Format { json, csv };

Format parse_format(const std::string& text);

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_inconsistent = 2,
    exit_off_surface = 3,
    exit_missing_parameter = 4,
    exit_verify_failed = 5,
};

struct Options {
    std::optional<ArithmeticMode> mode;  // --mode; DISEVO_MODE wins over it
    std::optional<double> tolerance;
    bool strict = false;
    std::uint64_t seed = 20140421;
    std::size_t count = 1000;
    Format format = Format::json;
    std::vector<std::string> suites;  // empty runs all
    std::optional<std::size_t> i, n, f;
};

struct Outcome {
    int code = exit_ok;
    std::string out;  // report on stdout
    std::string err;  // diagnostics on stderr
};

/// Mode precedence: DISEVO_MODE, then --mode, then the scenario, then exact.
ArithmeticMode resolve_mode(const Options& options, std::optional<ArithmeticMode> scenario_mode);

Outcome analyze(const std::vector<std::string>& scenario_paths, const Options& options);
Outcome evolve(const std::vector<std::string>& scenario_paths, const Options& options);
Outcome dof(const std::vector<std::string>& scenario_paths, const Options& options);
Outcome verify(const Options& options);

}  // namespace disevo::cli
