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

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>

namespace disevo {

using Rational = mpq_class;

enum class ArithmeticMode { exact, floating };

std::string to_string(ArithmeticMode mode);
ArithmeticMode parse_mode(std::string_view text);

// Tolerance for every rank decision made in float mode. Process wide; set it
// once before any analysis starts.
double tolerance();
void set_tolerance(double tol);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static bool is_zero(const Rational& v, double /*scale*/ = 1.0) { return sgn(v) == 0; }
    static Rational from_int(long v) { return Rational(v); }
    static Rational from_ratio(long num, long den) {
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    static double to_double(const Rational& v) { return v.get_d(); }
    static double magnitude(const Rational& v) { return std::fabs(v.get_d()); }
    static std::string to_string(const Rational& v) { return v.get_str(); }
    static Rational parse(std::string_view text);
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static bool is_zero(double v, double scale = 1.0) {
        return std::fabs(v) <= tolerance() * (scale > 1.0 ? scale : 1.0);
    }
    static double from_int(long v) { return static_cast<double>(v); }
    static double from_ratio(long num, long den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static double to_double(double v) { return v; }
    static double magnitude(double v) { return std::fabs(v); }
    static std::string to_string(double v);
    static double parse(std::string_view text);
};

}  // namespace disevo
