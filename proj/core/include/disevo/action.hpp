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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "disevo/kernel.hpp"

namespace disevo {

/// Labeled configuration variables at one step. Multiplier flags mark the
/// auxiliary variables introduced when an effective action carries
/// boundary-data constraints.
struct Slice {
    std::string step;
    std::vector<std::string> labels;
    std::vector<bool> multiplier;  // empty, or one flag per label

    Slice() = default;
    Slice(std::string step_label, std::vector<std::string> variable_labels);

    std::size_t dim() const { return labels.size(); }
    std::optional<std::size_t> index_of(const std::string& label) const;
    bool is_multiplier(std::size_t i) const { return i < multiplier.size() && multiplier[i]; }
    std::size_t multiplier_count() const;

    /// Throws LabelError on duplicate labels.
    void validate() const;
};

bool same_labels(const Slice& a, const Slice& b);

/// Labels "<step>:<1..q>".
Slice numbered_slice(const std::string& step, std::size_t q);

template <class T>
struct ActionBlocks {
    Matrix<T> A, B, C;
    Vector<T> a, c;
    T s0 = T(0);
};

/// S = ½xᵀAx + xᵀBy + ½yᵀCy + a·x + c·y + s0 with x on prev and y on next.
template <class T>
struct QuadraticAction {
    Slice prev;
    Slice next;
    Matrix<T> A, B, C;
    Vector<T> a, c;
    T s0 = T(0);
};

template <class T>
QuadraticAction<T> build_action(Slice prev, Slice next, ActionBlocks<T> blocks);

template <class T>
QuadraticAction<T> zero_action(Slice prev, Slice next);

template <class T>
T evaluate(const QuadraticAction<T>& s, const Vector<T>& x_prev, const Vector<T>& x_next);

/// Blockwise sum over the union of variables. Labels shared between S1.next
/// and S2.prev (the common boundary) land on the prev side of the result.
template <class T>
QuadraticAction<T> add_actions(const QuadraticAction<T>& s1, const QuadraticAction<T>& s2);

/// Second derivatives with respect to the shared middle slice, ordered as
/// s_in.next.
template <class T>
Matrix<T> hessian_at(const QuadraticAction<T>& s_in, const QuadraticAction<T>& s_out);

/// Reorders both slices: new position i holds old label perm[i].
template <class T>
QuadraticAction<T> permute_action(const QuadraticAction<T>& s, const std::vector<std::size_t>& prev_perm,
                                  const std::vector<std::size_t>& next_perm);

/// Reorders the prev slice to follow `target` (same label set required).
template <class T>
QuadraticAction<T> align_prev(const QuadraticAction<T>& s, const Slice& target);

/// A quadratic function over an unordered set of labeled variables; the
/// working representation for sums and eliminations.
template <class T>
struct QuadraticForm {
    std::vector<std::string> vars;
    Matrix<T> hess;
    Vector<T> grad;
    T constant = T(0);

    std::optional<std::size_t> index_of(const std::string& label) const;
    T value(const Vector<T>& z) const;
    Vector<T> gradient(const Vector<T>& z) const;
    /// Same function over a superset of variables.
    QuadraticForm embed(const std::vector<std::string>& superset) const;
};

template <class T>
QuadraticForm<T> to_form(const QuadraticAction<T>& s);

template <class T>
QuadraticForm<T> add_forms(const QuadraticForm<T>& f, const QuadraticForm<T>& g);

/// Splits a form into an action; every variable must belong to exactly one of
/// the two slices, and slice labels absent from the form get zero blocks.
template <class T>
QuadraticAction<T> to_action(const QuadraticForm<T>& f, const Slice& prev, const Slice& next);

enum class Role { b, e, n, o };

std::string to_string(Role role);

struct RoleMap {
    std::map<std::string, Role> roles;  // labels not listed are b

    Role role_of(const std::string& label) const;
    std::vector<std::string> labels_with(Role role) const;
};

}  // namespace disevo
