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

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "disevo/counting.hpp"
#include "disevo/models.hpp"

namespace disevo::testing {

using Q = Rational;

inline Q q(const char* text) { return ScalarTraits<Rational>::parse(text); }

inline Vector<Q> qv(std::initializer_list<long> v) {
    Vector<Q> out;
    for (long e : v) out.push_back(Q(e));
    return out;
}

inline SlabSpec slab(std::size_t qp, std::size_t qn, std::vector<std::vector<int>> adjacency) {
    SlabSpec s;
    s.q_prev = qp;
    s.q_next = qn;
    s.adjacency = std::move(adjacency);
    return s;
}

// The slabs behind the three worked two-move examples.
inline SlabSpec slab_a1() { return slab(3, 3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}); }
inline SlabSpec slab_23() { return slab(2, 3, {{1, 0, 0}, {2, 1, 1}}); }
inline SlabSpec slab_32() { return slab_23().transposed(); }

template <class T = Q>
Schedule<T> schedule_of(const std::vector<SlabSpec>& slabs) {
    std::vector<QuadraticAction<T>> moves;
    for (std::size_t k = 0; k < slabs.size(); ++k)
        moves.push_back(cdt_slab_action<T>(slabs[k], std::to_string(k), std::to_string(k + 1)));
    return Schedule<T>(std::move(moves));
}

template <class T = Q>
Schedule<T> example_a() { return schedule_of<T>({slab_a1(), slab_32()}); }
template <class T = Q>
Schedule<T> example_b() { return schedule_of<T>({slab_23(), slab_32()}); }
template <class T = Q>
Schedule<T> example_c() { return schedule_of<T>({slab_32(), slab_23()}); }
template <class T = Q>
Schedule<T> no_boundary_chain() {
    return schedule_of<T>({slab(0, 3, {}), slab(3, 4, {{1, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}}),
                           slab(4, 4, {{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}})});
}

/// Constraint built from coefficients over (x, p) plus constant, for comparisons.
inline AffineConstraint<Q> constraint(const Slice& s, Vector<Q> gx, Vector<Q> gp, Q c0 = 0) {
    AffineConstraint<Q> c;
    c.slice = s;
    c.gx = std::move(gx);
    c.gp = std::move(gp);
    c.c0 = std::move(c0);
    return c;
}

/// True when the two sets span the same affine functions.
template <class T>
bool same_span(const std::vector<Vector<T>>& a, const std::vector<Vector<T>>& b, std::size_t dim) {
    return canonical_basis(a, dim) == canonical_basis(b, dim);
}

inline std::string scenario_dir() { return DISEVO_SCENARIO_DIR; }

}  // namespace disevo::testing
