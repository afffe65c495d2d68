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
#include <variant>
#include <vector>

#include "disevo/matrix.hpp"

namespace disevo {

template <class T>
struct RowEchelon {
    Matrix<T> reduced;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form. Pivots are only taken among the first
/// `pivot_cols` columns (all columns when pivot_cols is npos); the rest are
/// carried along, which is how augmented systems are handled.
template <class T>
RowEchelon<T> row_reduce(const Matrix<T>& m, std::size_t pivot_cols = static_cast<std::size_t>(-1));

template <class T>
std::size_t rank(const Matrix<T>& m);

template <class T>
struct NullSpaces {
    std::size_t rank = 0;
    std::vector<Vector<T>> right_null;
    std::vector<Vector<T>> left_null;
};

/// Rank plus canonical bases of both null spaces. The basis of a subspace is
/// its reduced row echelon basis, so the result does not depend on how the
/// subspace was found.
template <class T>
NullSpaces<T> rank_nullspace(const Matrix<T>& m);

template <class T>
std::vector<Vector<T>> canonical_basis(const std::vector<Vector<T>>& vectors, std::size_t dim);

template <class T>
struct AffineSolution {
    Vector<T> particular;  // orthogonal to every null direction
    std::vector<Vector<T>> null_basis;
};

template <class T>
struct Infeasible {
    Vector<T> certificate;  // left-null vector w with w·b != 0
};

template <class T>
using AffineSolveResult = std::variant<AffineSolution<T>, Infeasible<T>>;

template <class T>
AffineSolveResult<T> affine_solve(const Matrix<T>& m, const Vector<T>& b);

/// Linear operator form of affine_solve. For every b in the column space,
/// particular_map * b is the solution orthogonal to null_basis.
template <class T>
struct SolveOperator {
    std::size_t rank = 0;
    Matrix<T> particular_map;
    std::vector<Vector<T>> null_basis;
    std::vector<Vector<T>> left_null;
};

template <class T>
SolveOperator<T> solve_operator(const Matrix<T>& m);

template <class T>
Matrix<T> inverse(const Matrix<T>& m);

template <class T>
struct Tangent {
    Vector<T> dx;
    Vector<T> dp;
};

template <class T>
T symplectic_pairing(const Tangent<T>& u, const Tangent<T>& v);

// ---- subspace helpers -------------------------------------------------------

template <class T>
bool in_span(const std::vector<Vector<T>>& basis, const Vector<T>& v);

/// Coefficients c with Σ c_i basis_i = v; basis must be independent and v in
/// its span (DimensionError otherwise).
template <class T>
Vector<T> span_coefficients(const std::vector<Vector<T>>& basis, const Vector<T>& v);

template <class T>
std::vector<Vector<T>> span_intersection(const std::vector<Vector<T>>& u, const std::vector<Vector<T>>& v,
                                         std::size_t dim);

/// Indices of the first maximal independent subset, scanning in order.
template <class T>
std::vector<std::size_t> independent_subset(const std::vector<Vector<T>>& vectors, std::size_t dim);

// ---- affine systems ---------------------------------------------------------
//
// A row r of length n+1 stands for the equation r[0..n)·z + r[n] = 0.

template <class T>
struct AffineSystem {
    std::vector<Vector<T>> rows;
    bool feasible = true;
};

/// Irreducible equivalent of `rows` (RREF of the augmented matrix).
template <class T>
AffineSystem<T> reduce_affine(const std::vector<Vector<T>>& rows, std::size_t nvars);

/// Projection of the solution set onto the variables with drop[i] == false.
/// Returned rows have length (#kept + 1).
template <class T>
AffineSystem<T> eliminate_variables(const std::vector<Vector<T>>& rows, const std::vector<bool>& drop);

}  // namespace disevo
