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

#include "disevo/legendre.hpp"

namespace disevo {

enum class MoveKind { I, II, III, IV };

std::string to_string(MoveKind kind);
MoveKind parse_move_kind(const std::string& text);

/// Which step the e-variables of a local action are attributed to. Only
/// affects how the action is presented; x_e is the same at both steps.
enum class ActionSide { prev, next };

/// A local evolution move: the roles of the touched variables and the action
/// contribution over them. Variables not mentioned in `roles` are b.
template <class T>
struct MoveSpec {
    MoveKind kind = MoveKind::IV;
    RoleMap roles;
    QuadraticForm<T> form;      // S over the e, n and o labels
    QuadraticAction<T> action;  // the same S, o (+e) on prev and n (+e) on next
    ActionSide e_side = ActionSide::next;
    std::string name;

    std::vector<std::string> labels(Role role) const { return roles.labels_with(role); }
};

/// Builds and validates a move. The kind must agree with the roles: I has n
/// and no o, II has o and no n, III has both in equal number, IV neither.
template <class T>
MoveSpec<T> make_move(MoveKind kind, RoleMap roles, QuadraticForm<T> form,
                      std::optional<ActionSide> side = std::nullopt, std::string name = {});

/// Phase space on an evolving slice, possibly extended by formal pairs that
/// carry p = 0.
template <class T>
struct ExtendedState {
    Slice slice;
    Vector<T> x;
    Vector<T> p;
    ConstraintSet<T> post;        // post-constraints on the whole extended slice
    std::vector<bool> extension;  // per label
    std::size_t step = 0;

    std::size_t dim() const { return slice.dim(); }
    std::size_t extension_count() const;
    PhasePoint<T> point() const { return {slice, x, p, MomentumTag::post}; }
};

template <class T>
ExtendedState<T> initial_state(const std::vector<std::string>& labels, Vector<T> x, Vector<T> p, std::size_t step = 0);

/// Adds canonical pairs with x = 0, p = 0 and the constraint p = 0.
template <class T>
ExtendedState<T> extend_phase_space(const ExtendedState<T>& state, const std::vector<std::string>& new_labels,
                                    const std::vector<std::string>& old_labels);

/// Drops extension pairs together with their p = 0 constraints.
template <class T>
ExtendedState<T> reduce_phase_space(const ExtendedState<T>& state, const std::vector<std::string>& labels);

/// The move's update as an affine map on the extended phase space:
/// z' = linear·z + offset + Σ λ_r lambda_directions[r], z = (x, p).
template <class T>
struct UpdateMap {
    Slice slice;
    Matrix<T> linear;
    Vector<T> offset;
    std::vector<Vector<T>> lambda_directions;
};

template <class T>
struct MoveConstraints {
    ConstraintSet<T> pre;   // at k, one per left-null vector of ∂²S/∂x_o∂x_n
    ConstraintSet<T> post;  // at k+1: p_o = 0 and one per right-null vector
};

/// Constraints a move emits. `slice` is the extended slice the move acts on
/// (it must already contain the n labels).
template <class T>
MoveConstraints<T> move_constraints(const MoveSpec<T>& move, const Slice& slice);

template <class T>
UpdateMap<T> update_map(const MoveSpec<T>& move, const Slice& slice);

template <class T>
struct MomentumUpdate {
    ExtendedState<T> state;
    MoveConstraints<T> emitted;
    Vector<T> lambda;
};

/// Applies the move to the state. Missing n labels are added as extension
/// pairs first; o labels stay on the slice as extension pairs with p = 0.
/// Undetermined n-variables take `lambda` (zero when omitted, an error in
/// strict mode).
template <class T>
MomentumUpdate<T> momentum_update(const MoveSpec<T>& move, const ExtendedState<T>& state,
                                  const std::optional<Vector<T>>& lambda = std::nullopt, bool strict = false);

/// Post-constraints at k+1 implied by `post_set` at k, excluding the move's own
/// emitted constraints. The source values of o are projected out.
template <class T>
ConstraintSet<T> transport_constraints(const MoveSpec<T>& move, const ConstraintSet<T>& post_set);

/// x' = x and p' = p + ∇S for every label on the extended slice.
template <class T>
ExtendedState<T> extended_canonical_update(const MoveSpec<T>& move, const ExtendedState<T>& state);

}  // namespace disevo
