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

#include "disevo/analysis.hpp"
#include <algorithm>

namespace disevo {

std::string to_string(ObservableTag tag) {
    switch (tag) {
        case ObservableTag::pre: return "pre";
        case ObservableTag::post: return "post";
        case ObservableTag::both: return "both";
    }
    return "?";
}

namespace {

template <class T>
T form(const Matrix<T>& m, const Vector<T>& u, const Vector<T>& v) {
    return dot(u, m * v);
}

template <class T>
AffineConstraint<T> combine(const ConstraintSet<T>& set, const Vector<T>& coef, ConstraintTag tag) {
    const std::size_t q = set.slice.dim();
    AffineConstraint<T> c;
    c.slice = set.slice;
    c.gx = zeros<T>(q);
    c.gp = zeros<T>(q);
    c.c0 = T(0);
    c.tag = tag;
    c.provenance = Provenance::secondary;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (coef[i] == 0) continue;
        ++nonzero;
        c.gx = c.gx + scaled(set[i].gx, coef[i]);
        c.gp = c.gp + scaled(set[i].gp, coef[i]);
        c.c0 += coef[i] * set[i].c0;
        c.provenance = set[i].provenance;
        c.origin = set[i].origin;
    }
    if (nonzero > 1) c.origin = "combination";
    return c;
}

template <class T>
ConstraintTag side_of(const std::vector<Vector<T>>& pre_span, const std::vector<Vector<T>>& post_span,
                      const Vector<T>& row) {
    bool pre = in_span(pre_span, row), post = in_span(post_span, row);
    if (pre && post) return ConstraintTag::both;
    return post && !pre ? ConstraintTag::post : ConstraintTag::pre;
}

}  // namespace

template <class T>
Matrix<T> dirac_matrix(const ConstraintSet<T>& set) {
    const std::size_t k = set.size();
    Matrix<T> m(k, k);
    std::vector<double> size(k);
    for (std::size_t i = 0; i < k; ++i) size[i] = std::max(max_abs(set[i].gx), max_abs(set[i].gp));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            m(i, j) = poisson_bracket(set[i], set[j]);
            // Cancellation noise in float mode is relative to the gradients, not to the matrix.
            if (ScalarTraits<T>::is_zero(m(i, j), size[i] * size[j] * static_cast<double>(set.slice.dim())))
                m(i, j) = T(0);
        }
    return m;
}

template <class T>
ClassificationReport<T> classify(const ConstraintSet<T>& set, const Matrix<T>* hessian) {
    ClassificationReport<T> rep;
    rep.slice = set.slice;
    const std::size_t k = set.size();
    const std::size_t width = 2 * set.slice.dim() + 1;
    rep.dirac_matrix = dirac_matrix(set);
    if (k == 0) return rep;

    std::vector<Vector<T>> pre_rows, post_rows;
    for (const auto& c : set) {
        if (c.pre_side()) pre_rows.push_back(c.row());
        if (c.post_side()) post_rows.push_back(c.row());
    }

    auto ns = rank_nullspace(rep.dirac_matrix);
    rep.first_class_combinations = ns.right_null;
    for (const auto& coef : ns.right_null) {
        auto c = combine(set, coef, ConstraintTag::pre);
        c.tag = side_of(pre_rows, post_rows, c.row());
        rep.first_class.push_back(std::move(c));
    }

    // Symplectic Gram-Schmidt on a complement of the null space (the row
    // space of the antisymmetric Dirac matrix).
    std::vector<Vector<T>> rest = canonical_basis(
        [&] {
            std::vector<Vector<T>> rows;
            for (std::size_t i = 0; i < k; ++i) rows.push_back(rep.dirac_matrix.row(i));
            return rows;
        }(),
        k);
    while (!rest.empty()) {
        Vector<T> e = rest.front();
        std::size_t partner = rest.size();
        for (std::size_t j = 1; j < rest.size(); ++j)
            if (!ScalarTraits<T>::is_zero(form(rep.dirac_matrix, e, rest[j]), rep.dirac_matrix.max_abs())) {
                partner = j;
                break;
            }
        if (partner == rest.size()) throw VerificationFailed("classify: Dirac matrix degenerate on its row space");
        Vector<T> f = rest[partner];
        T w = form(rep.dirac_matrix, e, f);
        std::vector<Vector<T>> next;
        for (std::size_t j = 1; j < rest.size(); ++j) {
            if (j == partner) continue;
            const Vector<T>& v = rest[j];
            T af = form(rep.dirac_matrix, v, f) / w;
            T ae = form(rep.dirac_matrix, v, e) / w;
            next.push_back(v - scaled(e, af) + scaled(f, ae));
        }
        SecondClassPair<T> pair;
        pair.first = combine(set, e, ConstraintTag::pre);
        pair.first.tag = side_of(pre_rows, post_rows, pair.first.row());
        pair.second = combine(set, f, ConstraintTag::post);
        pair.second.tag = side_of(pre_rows, post_rows, pair.second.row());
        pair.bracket = w;
        rep.second_class.push_back(std::move(pair));
        rest = std::move(next);
    }

    // Gauge generators: first-class functions lying in both spans.
    auto both = span_intersection(pre_rows, post_rows, width);
    std::vector<Vector<T>> fc_rows;
    for (const auto& c : rep.first_class) fc_rows.push_back(c.row());
    for (const auto& r : span_intersection(both, fc_rows, width)) {
        auto g = constraint_from_row(set.slice, r, ConstraintTag::both, Provenance::secondary, "gauge generator");
        for (const auto& c : set)
            if (in_span(std::vector<Vector<T>>{c.row()}, r)) {
                g.provenance = c.provenance;
                g.origin = c.origin;
            }
        rep.gauge_generators.push_back(std::move(g));
    }

    if (hessian) {
        if (hessian->rows() != set.slice.dim() || hessian->cols() != set.slice.dim())
            throw DimensionError("classify: Hessian does not match the slice dimension");
        std::vector<const AffineConstraint<T>*> pre, post;
        for (const auto& c : set) {
            if (c.pre_side()) pre.push_back(&c);
            if (c.post_side()) post.push_back(&c);
        }
        Matrix<T> lhr(pre.size(), post.size());
        for (std::size_t i = 0; i < pre.size(); ++i)
            for (std::size_t j = 0; j < post.size(); ++j) lhr(i, j) = dot(pre[i]->gp, (*hessian) * post[j]->gp);
        rep.hessian_contractions = std::move(lhr);
    }
    return rep;
}

template <class T>
std::vector<Vector<T>> gauge_modes(const QuadraticAction<T>& s_in, const QuadraticAction<T>& s_out,
                                   const ClassificationReport<T>& report) {
    const Slice& mid = s_in.next;
    if (!same_labels(mid, report.slice)) throw LabelError("gauge_modes: report is not on the shared slice");
    Matrix<T> h = hessian_at(s_in, s_out);
    auto out = align_prev(s_out, mid);
    std::vector<Vector<T>> modes;
    for (const auto& g : report.gauge_generators) {
        Vector<T> v(mid.dim());
        for (std::size_t i = 0; i < mid.dim(); ++i) v[i] = g.gp[*report.slice.index_of(mid.labels[i])];
        double scale = std::max({h.max_abs(), s_in.B.max_abs(), out.B.max_abs(), max_abs(v)});
        if (!is_zero_vector(h * v, scale))
            throw VerificationFailed("gauge generator " + describe(g) + " is not a Hessian null vector");
        if (!is_zero_vector(lagrangian_two_form(s_in) * v, scale))
            throw VerificationFailed("gauge generator " + describe(g) + " is not a right-null vector of Ω_in");
        if (!is_zero_vector(left_multiply(v, lagrangian_two_form(out)), scale))
            throw VerificationFailed("gauge generator " + describe(g) + " is not a left-null vector of Ω_out");
        modes.push_back(std::move(v));
    }
    return modes;
}

template <class T>
std::vector<AffineObservable<T>> observable_basis(const ConstraintSet<T>& set) {
    const std::size_t q = set.slice.dim();
    ObservableTag tag = ObservableTag::both;
    bool any_pre = false, any_post = false;
    for (const auto& c : set) {
        any_pre = any_pre || c.tag == ConstraintTag::pre;
        any_post = any_post || c.tag == ConstraintTag::post;
    }
    if (any_pre && !any_post) tag = ObservableTag::pre;
    if (any_post && !any_pre) tag = ObservableTag::post;

    // {f, C} = f_x·C_p - f_p·C_x = 0 is linear in (f_x, f_p).
    std::vector<Vector<T>> commutant;
    if (set.empty()) {
        for (std::size_t i = 0; i < 2 * q; ++i) commutant.push_back(unit<T>(2 * q, i));
    } else {
        Matrix<T> cond(set.size(), 2 * q);
        for (std::size_t r = 0; r < set.size(); ++r)
            for (std::size_t i = 0; i < q; ++i) {
                cond(r, i) = set[r].gp[i];
                cond(r, q + i) = -set[r].gx[i];
            }
        commutant = rank_nullspace(cond).right_null;
    }

    // Reduce modulo the constraint gradients that themselves commute, then
    // take the echelon basis of what survives.
    std::vector<Vector<T>> reduced;
    auto inside = span_intersection(set.gradients(), commutant, 2 * q);
    if (!inside.empty()) {
        auto g = row_reduce(Matrix<T>::from_rows(inside, 2 * q));
        for (auto v : commutant) {
            for (std::size_t i = 0; i < g.pivots.size(); ++i) {
                T f = v[g.pivots[i]];
                if (f == 0) continue;
                v = v - scaled(g.reduced.row(i), f);
            }
            reduced.push_back(std::move(v));
        }
    } else {
        reduced = commutant;
    }
    std::vector<AffineObservable<T>> out;
    for (const auto& v : canonical_basis(reduced, 2 * q)) {
        AffineObservable<T> o;
        o.slice = set.slice;
        o.gx.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(q));
        o.gp.assign(v.begin() + static_cast<std::ptrdiff_t>(q), v.end());
        o.tag = tag;
        out.push_back(std::move(o));
    }
    return out;
}

#define DISEVO_INSTANTIATE_ANALYSIS(T)                                                                \
    template Matrix<T> dirac_matrix<T>(const ConstraintSet<T>&);                                      \
    template ClassificationReport<T> classify<T>(const ConstraintSet<T>&, const Matrix<T>*);          \
    template std::vector<Vector<T>> gauge_modes<T>(const QuadraticAction<T>&, const QuadraticAction<T>&, \
                                                   const ClassificationReport<T>&);                   \
    template std::vector<AffineObservable<T>> observable_basis<T>(const ConstraintSet<T>&);

DISEVO_INSTANTIATE_ANALYSIS(Rational)
DISEVO_INSTANTIATE_ANALYSIS(double)

}  // namespace disevo
