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

#include <cstddef>

#include "disevo/evolution.hpp"

namespace disevo {

/// Effective action of moves i+1..f folded left to right. For f = i + 1 this
/// is the move itself. Multipliers introduced on the way sit on the final
/// slice.
template <class T>
EffectiveAction<T> effective_range(const Schedule<T>& schedule, std::size_t i, std::size_t f);

struct DofCount {
    std::size_t via_initial = 0;  // 2Q_i - 2 #pre
    std::size_t via_final = 0;    // 2Q_f - 2 #post, multipliers included on both sides
    std::size_t value = 0;
    std::size_t pre_constraints = 0;
    std::size_t post_constraints = 0;
    std::size_t multipliers = 0;
};

/// Number of propagating degrees of freedom from slice i to slice f. Throws
/// VerificationFailed if the two formulas disagree.
template <class T>
DofCount propagating_count(const Schedule<T>& schedule, std::size_t i, std::size_t f);

struct ReducedDimension {
    std::size_t value = 0;
    std::size_t slice_dim = 0;  // Q_n plus multipliers carried by the incoming effective move
    std::size_t first_class = 0;
    std::size_t second_class = 0;
};

/// Dimension of the reduced phase space at slice n for the window i..f.
template <class T>
ReducedDimension reduced_dimension(const Schedule<T>& schedule, std::size_t i, std::size_t n, std::size_t f);

}  // namespace disevo
