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
#include <string>
#include <vector>

#include "disevo/scalar.hpp"

namespace disevo {

struct VerifyOptions {
    std::uint64_t seed = 20140421;
    std::size_t count = 1000;
};

struct SuiteResult {
    std::string name;
    std::string invariant;  // one-line statement of what was checked
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::vector<std::string> messages;  // first few failures
    bool passed() const { return failures == 0; }
};

/// first-class, presymplectic, momentum-update, lhr, commuting, counting,
/// extended-canonical.
const std::vector<std::string>& suite_names();

/// Runs one randomized invariant suite. Throws Error for an unknown name.
template <class T>
SuiteResult run_suite(const std::string& name, const VerifyOptions& options);

}  // namespace disevo
