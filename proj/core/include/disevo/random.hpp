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

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "disevo/local_moves.hpp"

namespace disevo {

/// Seeded source of small integer data. Integer entries keep exact-mode runs
/// fast and make float-mode runs comparable to them.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : rng_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    bool coin() { return integer(0, 1) == 1; }

    template <class T>
    T scalar(int range = 3) {
        return ScalarTraits<T>::from_int(integer(-range, range));
    }

    template <class T>
    Vector<T> vector(std::size_t n, int range = 3) {
        Vector<T> v(n);
        for (auto& e : v) e = scalar<T>(range);
        return v;
    }

    template <class T>
    Matrix<T> matrix(std::size_t r, std::size_t c, int range = 3) {
        Matrix<T> m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = scalar<T>(range);
        return m;
    }

    template <class T>
    Matrix<T> symmetric(std::size_t n, int range = 3) {
        Matrix<T> m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = scalar<T>(range);
        return m;
    }

    /// r x c matrix of rank at most `rank` (a product of two random factors).
    template <class T>
    Matrix<T> low_rank(std::size_t r, std::size_t c, std::size_t rank, int range = 2) {
        return matrix<T>(r, rank, range) * matrix<T>(rank, c, range);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

struct RandomActionOptions {
    bool homogeneous = false;    // no linear or constant parts
    bool degenerate = true;      // allow a rank-deficient coupling block
};

template <class T>
QuadraticAction<T> random_action(RandomSource& rng, const Slice& prev, const Slice& next,
                                 RandomActionOptions opts = {}) {
    ActionBlocks<T> b;
    const std::size_t qp = prev.dim(), qn = next.dim();
    b.A = rng.symmetric<T>(qp);
    b.C = rng.symmetric<T>(qn);
    const std::size_t full = std::min(qp, qn);
    if (opts.degenerate && full > 0 && rng.coin())
        b.B = rng.low_rank<T>(qp, qn, rng.index(0, full - 1));
    else
        b.B = rng.matrix<T>(qp, qn);
    b.a = opts.homogeneous ? zeros<T>(qp) : rng.vector<T>(qp);
    b.c = opts.homogeneous ? zeros<T>(qn) : rng.vector<T>(qn);
    b.s0 = opts.homogeneous ? T(0) : rng.scalar<T>();
    return build_action(prev, next, std::move(b));
}

/// A random local move of the given kind on a slice with `surface` live labels
/// ("r1".."rN"). New variables are named "n1", "n2", ...
template <class T>
MoveSpec<T> random_move(RandomSource& rng, MoveKind kind, const std::vector<std::string>& surface) {
    const std::size_t q = surface.size();
    std::size_t ne = rng.index(0, std::min<std::size_t>(q, 3));
    std::size_t no = 0, nn = 0;
    switch (kind) {
        case MoveKind::I: nn = rng.index(1, 2); break;
        case MoveKind::II: no = rng.index(1, std::min<std::size_t>(2, q)); break;
        case MoveKind::III: no = nn = rng.index(1, std::min<std::size_t>(2, q)); break;
        case MoveKind::IV: ne = std::max<std::size_t>(ne, 1); break;
    }
    ne = std::min(ne, q - no);
    std::vector<std::string> shuffled = surface;
    std::shuffle(shuffled.begin(), shuffled.end(), rng.engine());
    RoleMap roles;
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < no; ++i) {
        roles.roles[shuffled[i]] = Role::o;
        vars.push_back(shuffled[i]);
    }
    for (std::size_t i = no; i < no + ne; ++i) {
        roles.roles[shuffled[i]] = Role::e;
        vars.push_back(shuffled[i]);
    }
    for (std::size_t i = 0; i < nn; ++i) {
        std::string l = "n" + std::to_string(i + 1);
        roles.roles[l] = Role::n;
        vars.push_back(l);
    }
    QuadraticForm<T> f;
    f.vars = vars;
    f.hess = rng.symmetric<T>(vars.size());
    if (kind == MoveKind::III && rng.coin()) {
        // Rank-deficient o/n coupling so that pre- and post-constraints appear.
        auto w = rng.low_rank<T>(no, nn, rng.index(0, no - 1));
        for (std::size_t i = 0; i < no; ++i)
            for (std::size_t j = 0; j < nn; ++j) f.hess(i, no + ne + j) = f.hess(no + ne + j, i) = w(i, j);
    }
    f.grad = rng.vector<T>(vars.size());
    return make_move(kind, std::move(roles), std::move(f));
}

}  // namespace disevo
