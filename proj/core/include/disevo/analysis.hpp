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
#include <vector>

#include "disevo/legendre.hpp"

namespace disevo {

enum class ObservableTag { pre, post, both };

std::string to_string(ObservableTag tag);

template <class T>
struct AffineObservable {
    Slice slice;
    Vector<T> gx;
    Vector<T> gp;
    T c0 = T(0);
    ObservableTag tag = ObservableTag::both;
};

/// {f, g} = gx_f·gp_g - gp_f·gx_g. Works for constraints and observables.
template <class F, class G>
auto poisson_bracket(const F& f, const G& g) -> decltype(f.c0) {
    using T = decltype(f.c0);
    if (f.slice.labels != g.slice.labels) throw LabelError("poisson_bracket: functions live on different slices");
    T s = dot(f.gx, g.gp);
    s -= dot(f.gp, g.gx);
    return s;
}

template <class T>
struct SecondClassPair {
    AffineConstraint<T> first;
    AffineConstraint<T> second;
    T bracket = T(0);
};

template <class T>
struct ClassificationReport {
    Slice slice;
    Matrix<T> dirac_matrix;
    std::vector<Vector<T>> first_class_combinations;  // coefficients over the input constraints
    std::vector<AffineConstraint<T>> first_class;
    std::vector<SecondClassPair<T>> second_class;
    std::vector<AffineConstraint<T>> gauge_generators;
    /// (p-gradient of pre_l)ᵀ H (p-gradient of post_r), when H was supplied.
    std::optional<Matrix<T>> hessian_contractions;

    std::size_t first_class_count() const { return first_class.size(); }
    std::size_t second_class_count() const { return 2 * second_class.size(); }
};

template <class T>
Matrix<T> dirac_matrix(const ConstraintSet<T>& set);

/// Splits an irreducible set into first-class combinations (null space of
/// the Dirac matrix) and symplectically paired second-class combinations.
template <class T>
ClassificationReport<T> classify(const ConstraintSet<T>& set, const Matrix<T>* hessian = nullptr);

/// p-gradients of the report's gauge generators, each checked to be a null
/// vector of the Hessian, a right-null vector of Ω_in and a left-null vector
/// of Ω_out. Throws VerificationFailed otherwise.
template <class T>
std::vector<Vector<T>> gauge_modes(const QuadraticAction<T>& s_in, const QuadraticAction<T>& s_out,
                                   const ClassificationReport<T>& report);

/// Affine functions commuting with every constraint, modulo constants and
/// modulo the constraints, as a canonical echelon basis.
template <class T>
std::vector<AffineObservable<T>> observable_basis(const ConstraintSet<T>& set);

}  // namespace disevo
