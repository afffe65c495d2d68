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
#include <utility>
#include <vector>

#include "disevo/analysis.hpp"

namespace disevo {

/// The evolution relation of one move, resolved into a solver for the
/// pre-momentum equation and the free directions of the target.
template <class T>
struct EvolutionMap {
    QuadraticAction<T> action;
    ConstraintSet<T> domain;  // pre-constraints the input must satisfy
    std::vector<std::pair<std::string, Vector<T>>> free_directions;
    Matrix<T> particular_map;  // solves B x_next = rhs, orthogonal to free directions

    const Slice& source() const { return action.prev; }
    const Slice& target() const { return action.next; }
};

template <class T>
EvolutionMap<T> evolution_map(const QuadraticAction<T>& s);

/// Solves the pre-momentum equation for x_next, adds Σ λ_r R_r and returns
/// the post-momenta. λ defaults to zero when omitted.
template <class T>
PhasePoint<T> forward_evolve(const QuadraticAction<T>& s, const PhasePoint<T>& pt,
                             const std::optional<Vector<T>>& lambda = std::nullopt);

template <class T>
PhasePoint<T> backward_evolve(const QuadraticAction<T>& s, const PhasePoint<T>& pt,
                              const std::optional<Vector<T>>& mu = std::nullopt);

/// Result of integrating out the middle slice of two consecutive moves.
///
/// The bulk solution is x_mid = bulk_map·(x_prev, x_next) + bulk_offset
/// + Σ κ_h kappa_directions[h] + Σ γ_g gauge_directions[g]; the κ_h are the
/// multipliers appended to action.next.
template <class T>
struct EffectiveAction {
    QuadraticAction<T> action;
    Slice bulk;
    std::vector<std::string> multiplier_labels;
    Matrix<T> bulk_map;
    Vector<T> bulk_offset;
    std::vector<Vector<T>> kappa_directions;
    std::vector<Vector<T>> gauge_directions;
    /// Boundary-data constraints H_h: rows over (x_prev, x_next) plus constant.
    std::vector<Vector<T>> boundary_constraints;
    std::size_t hessian_rank = 0;
    std::size_t multiplier_rank = 0;  // rank check behind the κ selection
    bool consistent = true;           // false if no boundary data satisfy every H_h = 0

    bool hessian_invertible() const { return hessian_rank == bulk.dim(); }

    /// Multiplier values reproducing an on-shell bulk configuration.
    Vector<T> multipliers_for(const Vector<T>& x_prev, const Vector<T>& x_mid, const Vector<T>& x_next) const;
};

template <class T>
EffectiveAction<T> effective_action(const QuadraticAction<T>& s_in, const QuadraticAction<T>& s_out);

template <class T>
class Schedule {
public:
    Schedule() = default;
    /// Aligns each move's prev slice with the previous move's next slice;
    /// throws LabelError when they do not carry the same labels.
    explicit Schedule(std::vector<QuadraticAction<T>> moves);

    std::size_t moves() const { return moves_.size(); }
    std::size_t slices() const { return moves_.empty() ? 0 : moves_.size() + 1; }
    const QuadraticAction<T>& move(std::size_t k) const { return moves_.at(k); }  // S_{k+1}: slice k -> k+1
    const Slice& slice(std::size_t n) const;
    const std::vector<QuadraticAction<T>>& all() const { return moves_; }

private:
    std::vector<QuadraticAction<T>> moves_;
};

enum class SliceStatus { consistent, fixes_parameters, inconsistent };

std::string to_string(SliceStatus status);

template <class T>
struct SliceReport {
    Slice slice;
    ConstraintSet<T> pre;
    ConstraintSet<T> post;
    ConstraintSet<T> combined;
    SliceStatus status = SliceStatus::consistent;
    std::size_t dependent = 0;             // case (a): pre constraints implied by post ones
    std::size_t first_class = 0;           // case (b)
    std::size_t second_class = 0;          // case (c), counted per constraint
};

template <class T>
struct ConstraintReport {
    std::vector<SliceReport<T>> slices;
    std::size_t sweeps = 0;
};

/// Primary constraints per move, then alternating backward (pre-image) and
/// forward (image) sweeps until nothing new appears.
template <class T>
ConstraintReport<T> match_and_propagate(const Schedule<T>& schedule);

/// Constraints at the source of `s` whose points can reach `target`; rows over
/// (x_prev, p_prev) plus constant.
template <class T>
AffineSystem<T> constraint_preimage(const QuadraticAction<T>& s, const std::vector<Vector<T>>& target);

/// Constraints at the target of `s` satisfied by every image of `source`.
template <class T>
AffineSystem<T> constraint_image(const QuadraticAction<T>& s, const std::vector<Vector<T>>& source);

}  // namespace disevo
