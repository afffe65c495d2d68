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

#include "report.hpp"

namespace disevo::cli {

template <>
json scalar_json<Rational>(const Rational& v) {
    return v.get_str();
}

template <>
json scalar_json<double>(const double& v) {
    return v;
}

template <>
Rational scalar_from_json<Rational>(const json& j) {
    if (j.is_string()) return ScalarTraits<Rational>::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw ScenarioError("expected a rational written as a string");
}

template <>
double scalar_from_json<double>(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return ScalarTraits<double>::parse(j.get<std::string>());
    throw ScenarioError("expected a number");
}

template <class T>
json vector_json(const Vector<T>& v) {
    json out = json::array();
    for (const auto& e : v) out.push_back(scalar_json(e));
    return out;
}

template <class T>
Vector<T> vector_from_json(const json& j) {
    Vector<T> v;
    for (const auto& e : j) v.push_back(scalar_from_json<T>(e));
    return v;
}

json slice_json(const Slice& s) {
    json out{{"step", s.step}, {"labels", s.labels}};
    if (s.multiplier_count() > 0) out["multiplier"] = s.multiplier;
    return out;
}

Slice slice_from_json(const json& j) {
    Slice s(j.at("step").get<std::string>(), j.at("labels").get<std::vector<std::string>>());
    if (j.contains("multiplier")) s.multiplier = j["multiplier"].get<std::vector<bool>>();
    return s;
}

template <class T>
json constraint_json(const AffineConstraint<T>& c) {
    return json{{"text", describe(c)},
                {"tag", to_string(c.tag)},
                {"provenance", to_string(c.provenance)},
                {"origin", c.origin},
                {"gx", vector_json(c.gx)},
                {"gp", vector_json(c.gp)},
                {"c0", scalar_json(c.c0)}};
}

template <class T>
AffineConstraint<T> constraint_from_json(const json& j, const Slice& slice) {
    AffineConstraint<T> c;
    c.slice = slice;
    c.gx = vector_from_json<T>(j.at("gx"));
    c.gp = vector_from_json<T>(j.at("gp"));
    c.c0 = scalar_from_json<T>(j.at("c0"));
    c.tag = parse_constraint_tag(j.at("tag").get<std::string>());
    c.provenance = parse_provenance(j.at("provenance").get<std::string>());
    c.origin = j.value("origin", "");
    if (c.gx.size() != slice.dim() || c.gp.size() != slice.dim())
        throw DimensionError("constraint does not match slice '" + slice.step + "'");
    return c;
}

template <class T>
json constraint_set_json(const ConstraintSet<T>& set) {
    json out = json::array();
    for (const auto& c : set) out.push_back(constraint_json(c));
    return out;
}

template <class T>
ConstraintSet<T> constraint_set_from_json(const json& j, const Slice& slice) {
    ConstraintSet<T> set;
    set.slice = slice;
    for (const auto& e : j) set.constraints.push_back(constraint_from_json<T>(e, slice));
    return set;
}

namespace {

SliceStatus parse_status(const std::string& text) {
    for (auto s : {SliceStatus::consistent, SliceStatus::fixes_parameters, SliceStatus::inconsistent})
        if (to_string(s) == text) return s;
    throw ScenarioError("unknown slice status '" + text + "'");
}

}  // namespace

template <class T>
json constraint_report_json(const ConstraintReport<T>& report) {
    json slices = json::array();
    for (const auto& s : report.slices) {
        slices.push_back(json{{"slice", slice_json(s.slice)},
                              {"status", to_string(s.status)},
                              {"dependent", s.dependent},
                              {"first_class", s.first_class},
                              {"second_class", s.second_class},
                              {"pre", constraint_set_json(s.pre)},
                              {"post", constraint_set_json(s.post)},
                              {"combined", constraint_set_json(s.combined)}});
    }
    return json{{"sweeps", report.sweeps}, {"slices", std::move(slices)}};
}

template <class T>
ConstraintReport<T> constraint_report_from_json(const json& j) {
    ConstraintReport<T> r;
    r.sweeps = j.at("sweeps").get<std::size_t>();
    for (const auto& e : j.at("slices")) {
        SliceReport<T> s;
        s.slice = slice_from_json(e.at("slice"));
        s.status = parse_status(e.at("status").get<std::string>());
        s.dependent = e.at("dependent").get<std::size_t>();
        s.first_class = e.at("first_class").get<std::size_t>();
        s.second_class = e.at("second_class").get<std::size_t>();
        s.pre = constraint_set_from_json<T>(e.at("pre"), s.slice);
        s.post = constraint_set_from_json<T>(e.at("post"), s.slice);
        s.combined = constraint_set_from_json<T>(e.at("combined"), s.slice);
        r.slices.push_back(std::move(s));
    }
    return r;
}

json dof_json(std::size_t i, std::size_t f, const DofCount& c) {
    return json{{"i", i},
                {"f", f},
                {"value", c.value},
                {"via_initial", c.via_initial},
                {"via_final", c.via_final},
                {"pre_constraints", c.pre_constraints},
                {"post_constraints", c.post_constraints},
                {"multipliers", c.multipliers}};
}

json reduced_json(std::size_t i, std::size_t n, std::size_t f, const ReducedDimension& r) {
    return json{{"i", i},
                {"n", n},
                {"f", f},
                {"value", r.value},
                {"slice_dim", r.slice_dim},
                {"first_class", r.first_class},
                {"second_class", r.second_class}};
}

template <class T>
json phase_point_json(const PhasePoint<T>& pt) {
    return json{{"step", pt.slice.step}, {"labels", pt.slice.labels}, {"x", vector_json(pt.x)}, {"p", vector_json(pt.p)}};
}

template <class T>
json surface_run_json(const SurfaceRun<T>& run) {
    json steps = json::array();
    for (const auto& s : run.steps) {
        steps.push_back(json{{"index", s.index},
                             {"kind", to_string(s.kind)},
                             {"type", to_string(s.move.kind)},
                             {"position", s.position},
                             {"surface", s.surface},
                             {"post_count", s.post_count},
                             {"extension_count", s.extension_count},
                             {"emitted_pre", constraint_set_json(s.emitted.pre)},
                             {"emitted_post", constraint_set_json(s.emitted.post)}});
    }
    const auto& fin = run.final_state;
    return json{{"initial_surface", run.initial_surface},
                {"monotone", run.monotone},
                {"steps", std::move(steps)},
                {"final", json{{"slice", slice_json(fin.slice)},
                               {"extension", fin.extension},
                               {"x", vector_json(fin.x)},
                               {"p", vector_json(fin.p)},
                               {"post", constraint_set_json(fin.post)}}}};
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

#define DISEVO_INSTANTIATE_REPORT(T)                                                      \
    template json vector_json<T>(const Vector<T>&);                                       \
    template Vector<T> vector_from_json<T>(const json&);                                  \
    template json constraint_json<T>(const AffineConstraint<T>&);                         \
    template AffineConstraint<T> constraint_from_json<T>(const json&, const Slice&);      \
    template json constraint_set_json<T>(const ConstraintSet<T>&);                        \
    template ConstraintSet<T> constraint_set_from_json<T>(const json&, const Slice&);     \
    template json constraint_report_json<T>(const ConstraintReport<T>&);                  \
    template ConstraintReport<T> constraint_report_from_json<T>(const json&);             \
    template json phase_point_json<T>(const PhasePoint<T>&);                              \
    template json surface_run_json<T>(const SurfaceRun<T>&);

DISEVO_INSTANTIATE_REPORT(Rational)
DISEVO_INSTANTIATE_REPORT(double)

}  // namespace disevo::cli
