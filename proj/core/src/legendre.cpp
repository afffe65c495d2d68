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

#include "disevo/legendre.hpp"

namespace disevo {

std::string to_string(MomentumTag tag) {
    switch (tag) {
        case MomentumTag::pre: return "pre";
        case MomentumTag::post: return "post";
        case MomentumTag::matched: return "matched";
    }
    return "?";
}

std::string to_string(ConstraintTag tag) {
    switch (tag) {
        case ConstraintTag::pre: return "pre";
        case ConstraintTag::post: return "post";
        case ConstraintTag::both: return "both";
    }
    return "?";
}

std::string to_string(Provenance provenance) {
    switch (provenance) {
        case Provenance::primary: return "primary";
        case Provenance::secondary: return "secondary";
        case Provenance::extension: return "extension";
    }
    return "?";
}

ConstraintTag parse_constraint_tag(const std::string& text) {
    if (text == "pre") return ConstraintTag::pre;
    if (text == "post") return ConstraintTag::post;
    if (text == "both") return ConstraintTag::both;
    throw Error("unknown constraint tag '" + text + "'");
}

Provenance parse_provenance(const std::string& text) {
    if (text == "primary") return Provenance::primary;
    if (text == "secondary") return Provenance::secondary;
    if (text == "extension") return Provenance::extension;
    throw Error("unknown provenance '" + text + "'");
}

template <class T>
T AffineConstraint<T>::evaluate(const Vector<T>& x, const Vector<T>& p) const {
    T v = dot(gx, x);
    v += dot(gp, p);
    v += c0;
    return v;
}

template <class T>
Vector<T> AffineConstraint<T>::row() const {
    Vector<T> r = concat(gx, gp);
    r.push_back(c0);
    return r;
}

template <class T>
AffineConstraint<T> constraint_from_row(const Slice& slice, const Vector<T>& row, ConstraintTag tag,
                                        Provenance provenance, std::string origin) {
    const std::size_t q = slice.dim();
    if (row.size() != 2 * q + 1) throw DimensionError("constraint row does not match slice dimension");
    AffineConstraint<T> c;
    c.slice = slice;
    c.gx.assign(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(q));
    c.gp.assign(row.begin() + static_cast<std::ptrdiff_t>(q), row.begin() + static_cast<std::ptrdiff_t>(2 * q));
    c.c0 = row[2 * q];
    c.tag = tag;
    c.provenance = provenance;
    c.origin = std::move(origin);
    return c;
}

template <class T>
std::vector<Vector<T>> ConstraintSet<T>::rows() const {
    std::vector<Vector<T>> out;
    for (const auto& c : constraints) out.push_back(c.row());
    return out;
}

template <class T>
std::vector<Vector<T>> ConstraintSet<T>::gradients() const {
    std::vector<Vector<T>> out;
    for (const auto& c : constraints) out.push_back(concat(c.gx, c.gp));
    return out;
}

template <class T>
Matrix<T> lagrangian_two_form(const QuadraticAction<T>& s) {
    return -s.B;
}

template <class T>
PhasePoint<T> post_legendre(const QuadraticAction<T>& s, const Vector<T>& x_prev, const Vector<T>& x_next) {
    if (x_prev.size() != s.prev.dim() || x_next.size() != s.next.dim())
        throw DimensionError("post_legendre: input dimensions do not match the action");
    Vector<T> p = left_multiply(x_prev, s.B) + s.C * x_next + s.c;
    return {s.next, x_next, std::move(p), MomentumTag::post};
}

template <class T>
PhasePoint<T> pre_legendre(const QuadraticAction<T>& s, const Vector<T>& x_prev, const Vector<T>& x_next) {
    if (x_prev.size() != s.prev.dim() || x_next.size() != s.next.dim())
        throw DimensionError("pre_legendre: input dimensions do not match the action");
    Vector<T> p = -(s.A * x_prev + s.B * x_next + s.a);
    return {s.prev, x_prev, std::move(p), MomentumTag::pre};
}

template <class T>
ConstraintSet<T> post_constraints(const QuadraticAction<T>& s) {
    ConstraintSet<T> out{s.next, {}};
    if (s.next.dim() == 0) return out;
    auto ns = rank_nullspace(s.B);
    for (const auto& r : ns.right_null) {
        AffineConstraint<T> c;
        c.slice = s.next;
        c.gp = r;
        c.gx = -(s.C * r);
        c.c0 = -dot(r, s.c);
        c.tag = ConstraintTag::post;
        c.provenance = Provenance::primary;
        c.origin = "move " + s.prev.step + "->" + s.next.step;
        out.constraints.push_back(std::move(c));
    }
    return out;
}

template <class T>
ConstraintSet<T> pre_constraints(const QuadraticAction<T>& s) {
    ConstraintSet<T> out{s.prev, {}};
    if (s.prev.dim() == 0) return out;
    auto ns = rank_nullspace(s.B);
    for (const auto& l : ns.left_null) {
        AffineConstraint<T> c;
        c.slice = s.prev;
        c.gp = l;
        c.gx = s.A * l;
        c.c0 = dot(l, s.a);
        c.tag = ConstraintTag::pre;
        c.provenance = Provenance::primary;
        c.origin = "move " + s.prev.step + "->" + s.next.step;
        out.constraints.push_back(std::move(c));
    }
    return out;
}

template <class T>
std::vector<std::string> violated(const ConstraintSet<T>& set, const Vector<T>& x, const Vector<T>& p) {
    std::vector<std::string> out;
    double scale = std::max({1.0, max_abs(x), max_abs(p)});
    for (const auto& c : set.constraints) {
        T r = c.evaluate(x, p);
        double cs = std::max({scale, max_abs(c.gx), max_abs(c.gp)});
        if (!ScalarTraits<T>::is_zero(r, cs))
            out.push_back(describe(c) + " has residual " + ScalarTraits<T>::to_string(r));
    }
    return out;
}

template <class T>
bool is_irreducible(const ConstraintSet<T>& set) {
    if (set.empty()) return true;
    return rank(Matrix<T>::from_rows(set.gradients(), 2 * set.slice.dim())) == set.size();
}

template <class T>
ConstraintSet<T> make_irreducible(const ConstraintSet<T>& set) {
    ConstraintSet<T> out{set.slice, {}};
    auto keep = independent_subset(set.rows(), 2 * set.slice.dim() + 1);
    for (auto i : keep) out.constraints.push_back(set.constraints[i]);
    return out;
}

template <class T>
MergedConstraints<T> merge_constraints(const ConstraintSet<T>& pre, const ConstraintSet<T>& post) {
    if (pre.slice.labels != post.slice.labels)
        throw LabelError("merge_constraints: pre and post sets live on different slices");
    const Slice& slice = pre.slice;
    const std::size_t width = 2 * slice.dim() + 1;
    MergedConstraints<T> out;
    out.combined.slice = slice;

    auto pre_rows = pre.rows();
    auto post_rows = post.rows();
    auto common = span_intersection(pre_rows, post_rows, width);
    out.coinciding = common.size();

    std::vector<Vector<T>> kept;
    auto origin_of = [](const ConstraintSet<T>& s) { return s.empty() ? std::string() : s[0].origin; };
    for (const auto& r : common) {
        // Prefer an existing constraint's provenance when the basis vector is one of them.
        Provenance prov = Provenance::secondary;
        std::string origin = origin_of(pre);
        for (const auto& c : pre.constraints)
            if (in_span(std::vector<Vector<T>>{c.row()}, r)) { prov = c.provenance; origin = c.origin; }
        out.combined.constraints.push_back(constraint_from_row(slice, r, ConstraintTag::both, prov, origin));
        kept.push_back(r);
    }
    auto add = [&](const ConstraintSet<T>& s) {
        for (const auto& c : s.constraints) {
            auto r = c.row();
            if (in_span(kept, r)) continue;
            kept.push_back(r);
            out.combined.constraints.push_back(c);
        }
    };
    add(pre);
    add(post);

    std::vector<Vector<T>> all = kept;
    out.feasible = reduce_affine(all, width - 1).feasible;
    return out;
}

namespace {

template <class T>
void append_term(std::string& s, const T& coef, const std::string& symbol) {
    if (coef == 0) return;
    bool neg = coef < 0;
    T mag = neg ? T(-coef) : coef;
    if (s.empty())
        s += neg ? "-" : "";
    else
        s += neg ? " - " : " + ";
    if (mag != 1) s += ScalarTraits<T>::to_string(mag) + "*";
    s += symbol;
}

}  // namespace

template <class T>
std::string describe(const AffineConstraint<T>& c) {
    std::string s;
    for (std::size_t i = 0; i < c.gp.size(); ++i) append_term(s, c.gp[i], "p[" + c.slice.labels[i] + "]");
    for (std::size_t i = 0; i < c.gx.size(); ++i) append_term(s, c.gx[i], "x[" + c.slice.labels[i] + "]");
    if (c.c0 != 0) {
        bool neg = c.c0 < 0;
        T mag = neg ? T(-c.c0) : c.c0;
        s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        s += ScalarTraits<T>::to_string(mag);
    }
    if (s.empty()) s = "0";
    return s + " = 0";
}

#define DISEVO_INSTANTIATE_LEGENDRE(T)                                                                    \
    template struct AffineConstraint<T>;                                                                  \
    template struct ConstraintSet<T>;                                                                     \
    template AffineConstraint<T> constraint_from_row<T>(const Slice&, const Vector<T>&, ConstraintTag,   \
                                                        Provenance, std::string);                         \
    template Matrix<T> lagrangian_two_form<T>(const QuadraticAction<T>&);                                 \
    template PhasePoint<T> post_legendre<T>(const QuadraticAction<T>&, const Vector<T>&, const Vector<T>&); \
    template PhasePoint<T> pre_legendre<T>(const QuadraticAction<T>&, const Vector<T>&, const Vector<T>&); \
    template ConstraintSet<T> post_constraints<T>(const QuadraticAction<T>&);                             \
    template ConstraintSet<T> pre_constraints<T>(const QuadraticAction<T>&);                              \
    template std::vector<std::string> violated<T>(const ConstraintSet<T>&, const Vector<T>&, const Vector<T>&); \
    template bool is_irreducible<T>(const ConstraintSet<T>&);                                             \
    template std::string describe<T>(const AffineConstraint<T>&);                                         \
    template ConstraintSet<T> make_irreducible<T>(const ConstraintSet<T>&);                               \
    template MergedConstraints<T> merge_constraints<T>(const ConstraintSet<T>&, const ConstraintSet<T>&);

DISEVO_INSTANTIATE_LEGENDRE(Rational)
DISEVO_INSTANTIATE_LEGENDRE(double)

}  // namespace disevo
