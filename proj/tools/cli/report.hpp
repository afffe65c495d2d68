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

#include <nlohmann/json.hpp>

#include <string>

#include "disevo/counting.hpp"
#include "disevo/models.hpp"

namespace disevo::cli {

using json = nlohmann::ordered_json;

// Scalars are written as "p/q" strings in exact mode and as shortest
// round-trip numbers in float mode, so both modes read back unchanged.
template <class T>
json scalar_json(const T& v);
template <class T>
T scalar_from_json(const json& j);

template <class T>
json vector_json(const Vector<T>& v);
template <class T>
Vector<T> vector_from_json(const json& j);

json slice_json(const Slice& s);
Slice slice_from_json(const json& j);

template <class T>
json constraint_json(const AffineConstraint<T>& c);
template <class T>
AffineConstraint<T> constraint_from_json(const json& j, const Slice& slice);

template <class T>
json constraint_set_json(const ConstraintSet<T>& set);
template <class T>
ConstraintSet<T> constraint_set_from_json(const json& j, const Slice& slice);

template <class T>
json constraint_report_json(const ConstraintReport<T>& report);
template <class T>
ConstraintReport<T> constraint_report_from_json(const json& j);

json dof_json(std::size_t i, std::size_t f, const DofCount& c);
json reduced_json(std::size_t i, std::size_t n, std::size_t f, const ReducedDimension& r);

template <class T>
json phase_point_json(const PhasePoint<T>& pt);

template <class T>
json surface_run_json(const SurfaceRun<T>& run);

/// Quotes a CSV field when it needs it.
std::string csv_field(const std::string& text);

}  // namespace disevo::cli
