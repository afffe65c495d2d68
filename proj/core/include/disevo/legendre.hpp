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

#include <string>
#include <vector>

#include "disevo/action.hpp"

namespace disevo {

enum class MomentumTag { pre, post, matched };
enum class ConstraintTag { pre, post, both };
enum class Provenance { primary, secondary, extension };

std::string to_string(MomentumTag tag);
std::string to_string(ConstraintTag tag);
std::string to_string(Provenance provenance);
ConstraintTag parse_constraint_tag(const std::string& text);
Provenance parse_provenance(const std::string& text);

template <class T>
struct PhasePoint {
    Slice slice;
    Vector<T> x;
    Vector<T> p;
    MomentumTag tag = MomentumTag::matched;
};

/// gx·x + gp·p + c0 = 0 on one slice.
template <class T>
struct AffineConstraint {
    Slice slice;
    Vector<T> gx;
    Vector<T> gp;
    T c0 = T(0);
    ConstraintTag tag = ConstraintTag::pre;
    Provenance provenance = Provenance::primary;
    std::string origin;

    T evaluate(const Vector<T>& x, const Vector<T>& p) const;
    /// (gx, gp, c0) stacked into one row.
    Vector<T> row() const;
    bool pre_side() const { return tag != ConstraintTag::post; }
    bool post_side() const { return tag != ConstraintTag::pre; }
};

template <class T>
AffineConstraint<T> constraint_from_row(const Slice& slice, const Vector<T>& row, ConstraintTag tag,
                                        Provenance provenance, std::string origin);

template <class T>
struct ConstraintSet {
    Slice slice;
    std::vector<AffineConstraint<T>> constraints;

    std::size_t size() const { return constraints.size(); }
    bool empty() const { return constraints.empty(); }
    auto begin() const { return constraints.begin(); }
    auto end() const { return constraints.end(); }
    const AffineConstraint<T>& operator[](std::size_t i) const { return constraints[i]; }

    std::vector<Vector<T>> rows() const;
    /// Stacked (gx, gp) without the constant.
    std::vector<Vector<T>> gradients() const;
};

/// Ω = -B; for the CDT slab this is the adjacency matrix.
template <class T>
Matrix<T> lagrangian_two_form(const QuadraticAction<T>& s);

template <class T>
PhasePoint<T> post_legendre(const QuadraticAction<T>& s, const Vector<T>& x_prev, const Vector<T>& x_next);

template <class T>
PhasePoint<T> pre_legendre(const QuadraticAction<T>& s, const Vector<T>& x_prev, const Vector<T>& x_next);

/// One constraint per right-null vector R of B, in the normal form whose
/// p-gradient is R.
template <class T>
ConstraintSet<T> post_constraints(const QuadraticAction<T>& s);

/// One constraint per left-null vector L of B; p-gradient is L.
template <class T>
ConstraintSet<T> pre_constraints(const QuadraticAction<T>& s);

/// Formatted residuals of the constraints that (x, p) violates; empty when
/// the point lies on the surface.
template <class T>
std::vector<std::string> violated(const ConstraintSet<T>& set, const Vector<T>& x, const Vector<T>& p);

/// True when the stacked gradients have full row rank.
template <class T>
bool is_irreducible(const ConstraintSet<T>& set);

/// Union of a pre set and a post set on one slice, arranged so that the tags
/// describe the spans exactly: a basis of span(pre) ∩ span(post) tagged both,
/// then the remaining pre constraints, then the remaining post constraints.
template <class T>
struct MergedConstraints {
    ConstraintSet<T> combined;
    std::size_t coinciding = 0;  // dim of span(pre) ∩ span(post)
    bool feasible = true;
};

template <class T>
MergedConstraints<T> merge_constraints(const ConstraintSet<T>& pre, const ConstraintSet<T>& post);

/// Drops constraints that depend on earlier ones (as affine functions).
template <class T>
ConstraintSet<T> make_irreducible(const ConstraintSet<T>& set);

/// Human-readable form such as "p[1:2] - p[1:3] - 5/2*x[1:2] + 5/2*x[1:3] = 0".
template <class T>
std::string describe(const AffineConstraint<T>& c);

}  // namespace disevo
