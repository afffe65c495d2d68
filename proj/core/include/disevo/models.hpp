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

#include <optional>
#include <string>
#include <vector>

#include "disevo/evolution.hpp"
#include "disevo/local_moves.hpp"

namespace disevo {

/// ¼ Σ over the edges of the complete graph on `labels` of (φ_s - φ_t)².
/// Three labels give the triangle, four the tetrahedron.
template <class T>
QuadraticForm<T> simplex_form(const std::vector<std::string>& labels);

/// Σ_i ((φ^i)² - φ^i φ^{i+1}) over a cyclically ordered square.
template <class T>
QuadraticForm<T> square_form(const std::vector<std::string>& cyclic_labels);

/// The triangle as a move with all three vertices on prev.
template <class T>
QuadraticAction<T> triangle_action();

/// The triangle split over two slices; prev and next together must hold
/// exactly three labels.
template <class T>
QuadraticAction<T> triangle_action(const Slice& prev, const Slice& next);

/// Single layer of triangles between two cyclic slices.
struct SlabSpec {
    std::size_t q_prev = 0;
    std::size_t q_next = 0;
    std::vector<std::vector<int>> adjacency;  // q_prev rows of q_next entries

    /// Throws ScenarioError on bad shapes or entries outside {0, 1, 2}.
    void validate() const;
    SlabSpec transposed() const;
};

template <class T>
QuadraticAction<T> cdt_slab_action(const SlabSpec& spec, const std::string& prev_step = "0",
                                   const std::string& next_step = "1");

enum class PachnerKind { one_two, two_one, square, two_two };

std::string to_string(PachnerKind kind);
PachnerKind parse_pachner_kind(const std::string& text);
MoveKind move_kind(PachnerKind kind);

/// Local move on a cyclic 1D surface of vertex labels. Positions are 0-based:
///   1-2    glues a triangle on the edge (s[i], s[i+1]) and adds `new_label`;
///   2-1    removes s[i] with its neighbours as e-variables (needs 4 vertices);
///   square replaces s[i] by `new_label` through one square;
///   2-2    glues a tetrahedron on s[i..i+3], every vertex e (needs 4 vertices).
/// An empty `new_label` picks the first free "v<N>".
template <class T>
MoveSpec<T> pachner_move(PachnerKind kind, const std::vector<std::string>& surface, std::size_t position,
                         const std::string& new_label = {});

std::vector<std::string> next_surface(PachnerKind kind, const std::vector<std::string>& surface, std::size_t position,
                                      const std::string& new_label);

std::string fresh_label(const std::vector<std::string>& taken);

// ---- scenarios --------------------------------------------------------------

struct ScenarioMove {
    PachnerKind kind = PachnerKind::one_two;
    std::size_t position = 0;
    std::string label;                           // for 1-2 and square; generated when empty
    std::optional<std::vector<Rational>> lambda;
};

struct DofQuery {
    std::size_t i = 0;
    std::size_t f = 0;
};

struct ReducedQuery {
    std::size_t i = 0;
    std::size_t n = 0;
    std::size_t f = 0;
};

struct Scenario {
    std::string name;
    std::optional<ArithmeticMode> mode;
    std::optional<double> tolerance;
    std::vector<SlabSpec> slabs;
    std::size_t surface_size = 0;
    std::vector<ScenarioMove> moves;
    std::vector<DofQuery> dof;
    std::vector<ReducedQuery> reduced;
    std::optional<std::vector<Rational>> initial_x;
    std::optional<std::vector<Rational>> initial_p;
    std::vector<std::optional<std::vector<Rational>>> lambdas;  // per slab

    std::size_t slices() const { return slabs.empty() ? 0 : slabs.size() + 1; }
};

/// Parses and validates a scenario document; `source` names it in errors.
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::string& path);

template <class T>
T convert_scalar(const Rational& v);

template <class T>
Schedule<T> build_schedule(const Scenario& scenario);

template <class T>
struct SurfaceStep {
    std::size_t index = 0;
    PachnerKind kind = PachnerKind::one_two;
    std::size_t position = 0;
    MoveSpec<T> move;
    std::vector<std::string> surface;  // after the move
    std::size_t post_count = 0;        // post-constraints on the extended slice after the move
    std::size_t extension_count = 0;
    MoveConstraints<T> emitted;
};

template <class T>
struct SurfaceRun {
    std::vector<std::string> initial_surface;
    ExtendedState<T> initial;
    std::vector<SurfaceStep<T>> steps;
    ExtendedState<T> final_state;
    bool monotone = true;
};

/// Runs the scenario's local moves on a surface of `surface_size` vertices
/// labeled "s1".."sN".
template <class T>
SurfaceRun<T> run_surface(const Scenario& scenario, bool strict = false);

}  // namespace disevo
