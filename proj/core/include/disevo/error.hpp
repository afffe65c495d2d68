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

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace disevo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class LabelError : public Error {
public:
    using Error::Error;
};

/// Data handed to an evolution step violates one of its constraints.
class OffConstraintSurface : public Error {
public:
    OffConstraintSurface(const std::string& what, std::vector<std::string> residuals)
        : Error(what), residuals_(std::move(residuals)) {}
    const std::vector<std::string>& residuals() const { return residuals_; }

private:
    std::vector<std::string> residuals_;
};

class MissingParameter : public Error {
public:
    MissingParameter(const std::string& what, std::size_t expected, std::size_t given)
        : Error(what), expected_(expected), given_(given) {}
    std::size_t expected() const { return expected_; }
    std::size_t given() const { return given_; }

private:
    std::size_t expected_;
    std::size_t given_;
};

/// The combined constraints at some slice admit no solution.
class InconsistentDynamics : public Error {
public:
    InconsistentDynamics(const std::string& what, std::string slice)
        : Error(what), slice_(std::move(slice)) {}
    const std::string& slice() const { return slice_; }

private:
    std::string slice_;
};

class VerificationFailed : public Error {
public:
    using Error::Error;
};

class ScenarioError : public Error {
public:
    using Error::Error;
};

/// Non-fatal diagnostics (for example automatic symmetrization) go through
/// this handler. The default writes to stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace disevo
