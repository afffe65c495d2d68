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

#include "disevo/action.hpp"

#include <iostream>
#include <mutex>
#include <set>

namespace disevo {

namespace {

std::mutex g_warn_mutex;
WarningHandler g_warn_handler;

template <class T>
void check_shape(const Matrix<T>& m, std::size_t r, std::size_t c, const char* name) {
    if (m.rows() != r || m.cols() != c)
        throw DimensionError(std::string("block ") + name + " must be " + std::to_string(r) + "x" +
                             std::to_string(c) + ", got " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
}

template <class T>
Matrix<T> symmetrized(const Matrix<T>& m, const char* name) {
    if (m.is_symmetric()) return m;
    warn(std::string("block ") + name + " is not symmetric; using (M + Mᵀ)/2");
    Matrix<T> s = (m + m.transpose()) * T(ScalarTraits<T>::from_ratio(1, 2));
    return s;
}

}  // namespace

void set_warning_handler(WarningHandler handler) {
    std::lock_guard<std::mutex> lock(g_warn_mutex);
    g_warn_handler = std::move(handler);
}

void warn(const std::string& message) {
    std::lock_guard<std::mutex> lock(g_warn_mutex);
    if (g_warn_handler)
        g_warn_handler(message);
    else
        std::cerr << "warning: " << message << '\n';
}

Slice::Slice(std::string step_label, std::vector<std::string> variable_labels)
    : step(std::move(step_label)), labels(std::move(variable_labels)) {}

std::optional<std::size_t> Slice::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return i;
    return std::nullopt;
}

std::size_t Slice::multiplier_count() const {
    std::size_t n = 0;
    for (bool m : multiplier) n += m ? 1 : 0;
    return n;
}

void Slice::validate() const {
    std::set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second) throw LabelError("duplicate label '" + l + "' in slice '" + step + "'");
    if (!multiplier.empty() && multiplier.size() != labels.size())
        throw DimensionError("slice '" + step + "': multiplier flags do not match labels");
}

bool same_labels(const Slice& a, const Slice& b) {
    if (a.dim() != b.dim()) return false;
    std::set<std::string> sa(a.labels.begin(), a.labels.end());
    for (const auto& l : b.labels)
        if (!sa.count(l)) return false;
    return true;
}

Slice numbered_slice(const std::string& step, std::size_t q) {
    std::vector<std::string> labels;
    for (std::size_t i = 1; i <= q; ++i) labels.push_back(step + ":" + std::to_string(i));
    return Slice(step, std::move(labels));
}

std::string to_string(Role role) {
    switch (role) {
        case Role::b: return "b";
        case Role::e: return "e";
        case Role::n: return "n";
        case Role::o: return "o";
    }
    return "?";
}

Role RoleMap::role_of(const std::string& label) const {
    auto it = roles.find(label);
    return it == roles.end() ? Role::b : it->second;
}

std::vector<std::string> RoleMap::labels_with(Role role) const {
    std::vector<std::string> out;
    for (const auto& [label, r] : roles)
        if (r == role) out.push_back(label);
    return out;
}

template <class T>
QuadraticAction<T> build_action(Slice prev, Slice next, ActionBlocks<T> blocks) {
    prev.validate();
    next.validate();
    for (const auto& l : prev.labels)
        if (next.index_of(l))
            throw LabelError("label '" + l + "' appears on both sides of one action");
    const std::size_t qp = prev.dim(), qn = next.dim();
    check_shape(blocks.A, qp, qp, "A");
    check_shape(blocks.B, qp, qn, "B");
    check_shape(blocks.C, qn, qn, "C");
    if (blocks.a.size() != qp) throw DimensionError("linear term a must have length " + std::to_string(qp));
    if (blocks.c.size() != qn) throw DimensionError("linear term c must have length " + std::to_string(qn));
    QuadraticAction<T> s;
    s.prev = std::move(prev);
    s.next = std::move(next);
    s.A = symmetrized(blocks.A, "A");
    s.B = std::move(blocks.B);
    s.C = symmetrized(blocks.C, "C");
    s.a = std::move(blocks.a);
    s.c = std::move(blocks.c);
    s.s0 = std::move(blocks.s0);
    return s;
}

template <class T>
QuadraticAction<T> zero_action(Slice prev, Slice next) {
    const std::size_t qp = prev.dim(), qn = next.dim();
    ActionBlocks<T> b{Matrix<T>(qp, qp), Matrix<T>(qp, qn), Matrix<T>(qn, qn), zeros<T>(qp), zeros<T>(qn), T(0)};
    return build_action(std::move(prev), std::move(next), std::move(b));
}

template <class T>
T evaluate(const QuadraticAction<T>& s, const Vector<T>& x, const Vector<T>& y) {
    if (x.size() != s.prev.dim() || y.size() != s.next.dim())
        throw DimensionError("evaluate: input dimensions do not match the action's slices");
    T half = ScalarTraits<T>::from_ratio(1, 2);
    T v = half * dot(x, s.A * x);
    v += dot(x, s.B * y);
    v += half * dot(y, s.C * y);
    v += dot(s.a, x);
    v += dot(s.c, y);
    v += s.s0;
    return v;
}

template <class T>
std::optional<std::size_t> QuadraticForm<T>::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == label) return i;
    return std::nullopt;
}

template <class T>
T QuadraticForm<T>::value(const Vector<T>& z) const {
    T half = ScalarTraits<T>::from_ratio(1, 2);
    T v = half * dot(z, hess * z);
    v += dot(grad, z);
    v += constant;
    return v;
}

template <class T>
Vector<T> QuadraticForm<T>::gradient(const Vector<T>& z) const {
    return hess * z + grad;
}

template <class T>
QuadraticForm<T> QuadraticForm<T>::embed(const std::vector<std::string>& superset) const {
    QuadraticForm<T> f;
    f.vars = superset;
    f.hess = Matrix<T>(superset.size(), superset.size());
    f.grad = zeros<T>(superset.size());
    f.constant = constant;
    std::vector<std::size_t> pos(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
        auto idx = f.index_of(vars[i]);
        if (!idx) throw LabelError("embed: label '" + vars[i] + "' missing from the target variable set");
        pos[i] = *idx;
    }
    for (std::size_t i = 0; i < vars.size(); ++i) {
        f.grad[pos[i]] = grad[i];
        for (std::size_t j = 0; j < vars.size(); ++j) f.hess(pos[i], pos[j]) = hess(i, j);
    }
    return f;
}

template <class T>
QuadraticForm<T> to_form(const QuadraticAction<T>& s) {
    const std::size_t qp = s.prev.dim(), qn = s.next.dim();
    QuadraticForm<T> f;
    f.vars = s.prev.labels;
    f.vars.insert(f.vars.end(), s.next.labels.begin(), s.next.labels.end());
    f.hess = Matrix<T>(qp + qn, qp + qn);
    f.hess.set_block(0, 0, s.A);
    f.hess.set_block(0, qp, s.B);
    f.hess.set_block(qp, 0, s.B.transpose());
    f.hess.set_block(qp, qp, s.C);
    f.grad = concat(s.a, s.c);
    f.constant = s.s0;
    return f;
}

template <class T>
QuadraticForm<T> add_forms(const QuadraticForm<T>& f, const QuadraticForm<T>& g) {
    std::vector<std::string> all = f.vars;
    for (const auto& v : g.vars)
        if (!f.index_of(v)) all.push_back(v);
    auto a = f.embed(all);
    auto b = g.embed(all);
    a.hess += b.hess;
    a.grad = a.grad + b.grad;
    a.constant += b.constant;
    return a;
}

template <class T>
QuadraticAction<T> to_action(const QuadraticForm<T>& f, const Slice& prev, const Slice& next) {
    std::vector<std::string> order = prev.labels;
    order.insert(order.end(), next.labels.begin(), next.labels.end());
    for (const auto& v : f.vars)
        if (!prev.index_of(v) && !next.index_of(v))
            throw LabelError("to_action: variable '" + v + "' belongs to neither slice");
    auto g = f.embed(order);
    const std::size_t qp = prev.dim(), qn = next.dim();
    ActionBlocks<T> b;
    b.A = g.hess.block(0, 0, qp, qp);
    b.B = g.hess.block(0, qp, qp, qn);
    b.C = g.hess.block(qp, qp, qn, qn);
    b.a = Vector<T>(g.grad.begin(), g.grad.begin() + static_cast<std::ptrdiff_t>(qp));
    b.c = Vector<T>(g.grad.begin() + static_cast<std::ptrdiff_t>(qp), g.grad.end());
    b.s0 = g.constant;
    return build_action(prev, next, std::move(b));
}

template <class T>
QuadraticAction<T> add_actions(const QuadraticAction<T>& s1, const QuadraticAction<T>& s2) {
    auto in = [](const Slice& s, const std::string& l) { return s.index_of(l).has_value(); };
    for (const auto& l : s1.prev.labels)
        if (in(s2.next, l))
            throw LabelError("add_actions: label '" + l + "' is prev in the first action and next in the second");

    Slice prev(s1.prev.step, s1.prev.labels), next(s2.next.step, {});
    std::vector<bool> prev_mult(s1.prev.labels.size(), false), next_mult;
    for (std::size_t i = 0; i < s1.prev.dim(); ++i) prev_mult[i] = s1.prev.is_multiplier(i);
    for (std::size_t i = 0; i < s2.prev.dim(); ++i) {
        const auto& l = s2.prev.labels[i];
        if (!in(prev, l)) {
            prev.labels.push_back(l);
            prev_mult.push_back(s2.prev.is_multiplier(i));
        }
    }
    for (std::size_t i = 0; i < s1.next.dim(); ++i) {
        const auto& l = s1.next.labels[i];
        if (in(s2.prev, l)) {
            if (!in(prev, l)) {
                prev.labels.push_back(l);
                prev_mult.push_back(s1.next.is_multiplier(i));
            }
        } else {
            next.labels.push_back(l);
            next_mult.push_back(s1.next.is_multiplier(i));
        }
    }
    for (std::size_t i = 0; i < s2.next.dim(); ++i) {
        const auto& l = s2.next.labels[i];
        if (!in(next, l)) {
            next.labels.push_back(l);
            next_mult.push_back(s2.next.is_multiplier(i));
        }
    }
    if (s1.next.step.size() && next.step.empty()) next.step = s1.next.step;
    for (bool m : prev_mult)
        if (m) { prev.multiplier = prev_mult; break; }
    for (bool m : next_mult)
        if (m) { next.multiplier = next_mult; break; }
    return to_action(add_forms(to_form(s1), to_form(s2)), prev, next);
}

template <class T>
Matrix<T> hessian_at(const QuadraticAction<T>& s_in, const QuadraticAction<T>& s_out) {
    if (!same_labels(s_in.next, s_out.prev))
        throw LabelError("hessian_at: S_in.next and S_out.prev are different slices");
    auto out = align_prev(s_out, s_in.next);
    Matrix<T> h = s_in.C + out.A;
    return h;
}

template <class T>
QuadraticAction<T> permute_action(const QuadraticAction<T>& s, const std::vector<std::size_t>& pp,
                                  const std::vector<std::size_t>& np) {
    const std::size_t qp = s.prev.dim(), qn = s.next.dim();
    if (pp.size() != qp || np.size() != qn) throw DimensionError("permute_action: permutation size mismatch");
    Slice prev(s.prev.step, {}), next(s.next.step, {});
    for (auto i : pp) prev.labels.push_back(s.prev.labels.at(i));
    for (auto i : np) next.labels.push_back(s.next.labels.at(i));
    if (!s.prev.multiplier.empty())
        for (auto i : pp) prev.multiplier.push_back(s.prev.multiplier[i]);
    if (!s.next.multiplier.empty())
        for (auto i : np) next.multiplier.push_back(s.next.multiplier[i]);
    ActionBlocks<T> b{Matrix<T>(qp, qp), Matrix<T>(qp, qn), Matrix<T>(qn, qn), zeros<T>(qp), zeros<T>(qn), s.s0};
    for (std::size_t i = 0; i < qp; ++i) {
        b.a[i] = s.a[pp[i]];
        for (std::size_t j = 0; j < qp; ++j) b.A(i, j) = s.A(pp[i], pp[j]);
        for (std::size_t j = 0; j < qn; ++j) b.B(i, j) = s.B(pp[i], np[j]);
    }
    for (std::size_t i = 0; i < qn; ++i) {
        b.c[i] = s.c[np[i]];
        for (std::size_t j = 0; j < qn; ++j) b.C(i, j) = s.C(np[i], np[j]);
    }
    return build_action(std::move(prev), std::move(next), std::move(b));
}

template <class T>
QuadraticAction<T> align_prev(const QuadraticAction<T>& s, const Slice& target) {
    if (!same_labels(s.prev, target))
        throw LabelError("slice '" + target.step + "' does not match the prev slice '" + s.prev.step + "'");
    if (s.prev.labels == target.labels) return s;
    std::vector<std::size_t> pp, np(s.next.dim());
    for (const auto& l : target.labels) pp.push_back(*s.prev.index_of(l));
    for (std::size_t i = 0; i < np.size(); ++i) np[i] = i;
    return permute_action(s, pp, np);
}

#define DISEVO_INSTANTIATE_ACTION(T)                                                                      \
    template struct QuadraticForm<T>;                                                                     \
    template QuadraticAction<T> build_action<T>(Slice, Slice, ActionBlocks<T>);                           \
    template QuadraticAction<T> zero_action<T>(Slice, Slice);                                             \
    template T evaluate<T>(const QuadraticAction<T>&, const Vector<T>&, const Vector<T>&);                \
    template QuadraticAction<T> add_actions<T>(const QuadraticAction<T>&, const QuadraticAction<T>&);     \
    template Matrix<T> hessian_at<T>(const QuadraticAction<T>&, const QuadraticAction<T>&);               \
    template QuadraticAction<T> permute_action<T>(const QuadraticAction<T>&, const std::vector<std::size_t>&, \
                                                  const std::vector<std::size_t>&);                       \
    template QuadraticAction<T> align_prev<T>(const QuadraticAction<T>&, const Slice&);                   \
    template QuadraticForm<T> to_form<T>(const QuadraticAction<T>&);                                      \
    template QuadraticForm<T> add_forms<T>(const QuadraticForm<T>&, const QuadraticForm<T>&);             \
    template QuadraticAction<T> to_action<T>(const QuadraticForm<T>&, const Slice&, const Slice&);

DISEVO_INSTANTIATE_ACTION(Rational)
DISEVO_INSTANTIATE_ACTION(double)

}  // namespace disevo
