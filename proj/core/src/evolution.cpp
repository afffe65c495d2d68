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

#include "disevo/evolution.hpp"

#include <set>

namespace disevo {

std::string to_string(SliceStatus status) {
    switch (status) {
        case SliceStatus::consistent: return "consistent";
        case SliceStatus::fixes_parameters: return "fixes-parameters";
        case SliceStatus::inconsistent: return "inconsistent";
    }
    return "?";
}

namespace {

template <class T>
void require_slice(const Slice& expected, const Slice& got, const char* what) {
    if (expected.labels != got.labels)
        throw LabelError(std::string(what) + ": phase point lives on slice '" + got.step + "', expected '" +
                         expected.step + "'");
}

template <class T>
Vector<T> combine_directions(const std::vector<Vector<T>>& dirs, const Vector<T>& coef, std::size_t dim) {
    Vector<T> v = zeros<T>(dim);
    for (std::size_t r = 0; r < dirs.size(); ++r) v = v + scaled(dirs[r], coef[r]);
    return v;
}

}  // namespace

template <class T>
EvolutionMap<T> evolution_map(const QuadraticAction<T>& s) {
    EvolutionMap<T> m;
    m.action = s;
    m.domain = pre_constraints(s);
    auto op = solve_operator(s.B);
    m.particular_map = op.particular_map;
    for (std::size_t r = 0; r < op.null_basis.size(); ++r)
        m.free_directions.emplace_back("lambda[" + s.next.step + "]#" + std::to_string(r + 1), op.null_basis[r]);
    return m;
}

template <class T>
PhasePoint<T> forward_evolve(const QuadraticAction<T>& s, const PhasePoint<T>& pt,
                             const std::optional<Vector<T>>& lambda) {
    require_slice<T>(s.prev, pt.slice, "forward_evolve");
    if (pt.x.size() != s.prev.dim() || pt.p.size() != s.prev.dim())
        throw DimensionError("forward_evolve: phase point has wrong dimension");
    auto bad = violated(pre_constraints(s), pt.x, pt.p);
    if (!bad.empty())
        throw OffConstraintSurface("initial data at slice '" + s.prev.step + "' violate a pre-constraint", bad);
    auto op = solve_operator(s.B);
    const std::size_t nfree = op.null_basis.size();
    Vector<T> lam = lambda ? *lambda : zeros<T>(nfree);
    if (lam.size() != nfree)
        throw MissingParameter("move " + s.prev.step + "->" + s.next.step + " has " + std::to_string(nfree) +
                                   " free parameters, got " + std::to_string(lam.size()),
                               nfree, lam.size());
    Vector<T> rhs = -(pt.p + s.A * pt.x + s.a);
    Vector<T> x_next = op.particular_map * rhs + combine_directions(op.null_basis, lam, s.next.dim());
    Vector<T> p_next = left_multiply(pt.x, s.B) + s.C * x_next + s.c;
    return {s.next, std::move(x_next), std::move(p_next), MomentumTag::post};
}

template <class T>
PhasePoint<T> backward_evolve(const QuadraticAction<T>& s, const PhasePoint<T>& pt, const std::optional<Vector<T>>& mu) {
    require_slice<T>(s.next, pt.slice, "backward_evolve");
    if (pt.x.size() != s.next.dim() || pt.p.size() != s.next.dim())
        throw DimensionError("backward_evolve: phase point has wrong dimension");
    auto bad = violated(post_constraints(s), pt.x, pt.p);
    if (!bad.empty())
        throw OffConstraintSurface("final data at slice '" + s.next.step + "' violate a post-constraint", bad);
    auto op = solve_operator(s.B.transpose());
    const std::size_t nfree = op.null_basis.size();
    Vector<T> m = mu ? *mu : zeros<T>(nfree);
    if (m.size() != nfree)
        throw MissingParameter("move " + s.prev.step + "->" + s.next.step + " has " + std::to_string(nfree) +
                                   " a posteriori free parameters, got " + std::to_string(m.size()),
                               nfree, m.size());
    Vector<T> rhs = pt.p - s.C * pt.x - s.c;
    Vector<T> x_prev = op.particular_map * rhs + combine_directions(op.null_basis, m, s.prev.dim());
    Vector<T> p_prev = -(s.A * x_prev + s.B * pt.x + s.a);
    return {s.prev, std::move(x_prev), std::move(p_prev), MomentumTag::pre};
}

// ---------------------------------------------------------------------------
// effective actions

template <class T>
Vector<T> EffectiveAction<T>::multipliers_for(const Vector<T>& x_prev, const Vector<T>& x_mid,
                                              const Vector<T>& x_next) const {
    Vector<T> u = concat(x_prev, x_next);
    if (u.size() != bulk_map.cols() || x_mid.size() != bulk.dim())
        throw DimensionError("multipliers_for: dimensions do not match the effective action");
    Vector<T> rest = x_mid - (bulk_map * u + bulk_offset);
    std::vector<Vector<T>> dirs = kappa_directions;
    dirs.insert(dirs.end(), gauge_directions.begin(), gauge_directions.end());
    Vector<T> coef = span_coefficients(dirs, rest);
    return Vector<T>(coef.begin(), coef.begin() + static_cast<std::ptrdiff_t>(kappa_directions.size()));
}

template <class T>
EffectiveAction<T> effective_action(const QuadraticAction<T>& s_in, const QuadraticAction<T>& s_out) {
    const Slice& prev = s_in.prev;
    const Slice& next_out = s_out.next;
    Slice mid(s_in.next.step, s_in.next.labels);
    for (const auto& l : s_out.prev.labels)
        if (!mid.index_of(l)) mid.labels.push_back(l);
    for (const auto& l : prev.labels)
        if (mid.index_of(l) || next_out.index_of(l))
            throw LabelError("effective_action: label '" + l + "' is both boundary and bulk");
    for (const auto& l : next_out.labels)
        if (mid.index_of(l)) throw LabelError("effective_action: label '" + l + "' is both boundary and bulk");

    const std::size_t qp = prev.dim(), qn = next_out.dim(), qm = mid.dim(), nu = qp + qn;
    std::vector<std::string> order = prev.labels;
    order.insert(order.end(), next_out.labels.begin(), next_out.labels.end());
    order.insert(order.end(), mid.labels.begin(), mid.labels.end());
    auto total = add_forms(to_form(s_in), to_form(s_out)).embed(order);

    Matrix<T> muu = total.hess.block(0, 0, nu, nu);
    Matrix<T> muy = total.hess.block(0, nu, nu, qm);
    Matrix<T> h = total.hess.block(nu, nu, qm, qm);
    Vector<T> gu(total.grad.begin(), total.grad.begin() + static_cast<std::ptrdiff_t>(nu));
    Vector<T> gy(total.grad.begin() + static_cast<std::ptrdiff_t>(nu), total.grad.end());
    Matrix<T> w = muy.transpose();

    auto op = solve_operator(h);
    const Matrix<T>& e = op.particular_map;
    Matrix<T> y = -(e * w);
    Vector<T> y0 = -(e * gy);

    T half = ScalarTraits<T>::from_ratio(1, 2);
    Matrix<T> yt = y.transpose();
    Matrix<T> q = muu + muy * y + yt * w + yt * h * y;
    Vector<T> lin = muy * y0 + yt * (h * y0) + gu + yt * gy;
    T c0 = half * dot(y0, h * y0);
    c0 += dot(gy, y0);
    c0 += total.constant;

    EffectiveAction<T> out;
    out.bulk = mid;
    out.hessian_rank = op.rank;
    out.bulk_map = y;
    out.bulk_offset = y0;

    // Solvability conditions n·(W u + g) for each Hessian null direction.
    const auto& null = op.null_basis;
    std::vector<Vector<T>> cond;
    for (const auto& n : null) {
        Vector<T> row = left_multiply(n, w);
        row.push_back(dot(n, gy));
        cond.push_back(std::move(row));
    }
    auto chosen = independent_subset(cond, nu + 1);
    out.multiplier_rank = chosen.size();
    std::vector<bool> picked(null.size(), false);
    for (auto j : chosen) picked[j] = true;
    std::vector<Vector<T>> chosen_rows;
    for (auto j : chosen) {
        chosen_rows.push_back(cond[j]);
        out.kappa_directions.push_back(null[j]);
        out.boundary_constraints.push_back(cond[j]);
    }
    // The selected conditions must admit boundary data.
    out.consistent = reduce_affine(chosen_rows, nu).feasible;
    for (std::size_t j = 0; j < null.size(); ++j) {
        if (picked[j]) continue;
        Vector<T> coef = span_coefficients(chosen_rows, cond[j]);
        Vector<T> g = null[j];
        for (std::size_t h2 = 0; h2 < chosen.size(); ++h2) g = g - scaled(null[chosen[h2]], coef[h2]);
        out.gauge_directions.push_back(std::move(g));
    }

    // Assemble over (prev | next_out, κ).
    const std::size_t m = chosen.size();
    Slice next_ext(next_out.step, next_out.labels);
    next_ext.multiplier.assign(qn, false);
    for (std::size_t i = 0; i < qn; ++i) next_ext.multiplier[i] = next_out.is_multiplier(i);
    for (std::size_t h2 = 0; h2 < m; ++h2) {
        std::string label = "kappa" + std::to_string(h2 + 1) + "@" + mid.step;
        while (next_ext.index_of(label) || prev.index_of(label)) label += "'";
        next_ext.labels.push_back(label);
        next_ext.multiplier.push_back(true);
        out.multiplier_labels.push_back(label);
    }
    bool any_mult = false;
    for (bool b : next_ext.multiplier) any_mult = any_mult || b;
    if (!any_mult) next_ext.multiplier.clear();

    QuadraticForm<T> f;
    f.vars = prev.labels;
    f.vars.insert(f.vars.end(), next_ext.labels.begin(), next_ext.labels.end());
    f.hess = Matrix<T>(nu + m, nu + m);
    f.hess.set_block(0, 0, q);
    f.grad = lin;
    for (std::size_t h2 = 0; h2 < m; ++h2) {
        for (std::size_t i = 0; i < nu; ++i) {
            f.hess(nu + h2, i) = chosen_rows[h2][i];
            f.hess(i, nu + h2) = chosen_rows[h2][i];
        }
        f.grad.push_back(chosen_rows[h2][nu]);
    }
    f.constant = c0;
    out.action = to_action(f, prev, next_ext);
    return out;
}

// ---------------------------------------------------------------------------
// schedules

template <class T>
Schedule<T>::Schedule(std::vector<QuadraticAction<T>> moves) {
    for (std::size_t k = 0; k < moves.size(); ++k) {
        if (k > 0) {
            const Slice& boundary = moves_.back().next;
            if (!same_labels(boundary, moves[k].prev))
                throw LabelError("moves " + std::to_string(k) + " and " + std::to_string(k + 1) +
                                 " do not share their boundary slice '" + boundary.step + "'");
            moves_.push_back(align_prev(moves[k], boundary));
        } else {
            moves_.push_back(std::move(moves[k]));
        }
    }
}

template <class T>
const Slice& Schedule<T>::slice(std::size_t n) const {
    if (n == 0) return moves_.at(0).prev;
    return moves_.at(n - 1).next;
}

namespace {

// Row over (x, p, const) of slice dim q, with p replaced by an affine
// expression p = Px·xa + Py·xb + p0, yields coefficients for (x, xa, xb).
// Used by both image and pre-image constructions.
template <class T>
struct Substituted {
    Vector<T> on_x, on_a, on_b;
    T constant;
};

template <class T>
Substituted<T> substitute(const Vector<T>& row, std::size_t q, const Matrix<T>& pa, const Matrix<T>& pb,
                          const Vector<T>& p0) {
    Vector<T> gx(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(q));
    Vector<T> gp(row.begin() + static_cast<std::ptrdiff_t>(q), row.begin() + static_cast<std::ptrdiff_t>(2 * q));
    Substituted<T> s{gx, left_multiply(gp, pa), left_multiply(gp, pb), row[2 * q]};
    s.constant += dot(gp, p0);
    return s;
}

}  // namespace

template <class T>
AffineSystem<T> constraint_preimage(const QuadraticAction<T>& s, const std::vector<Vector<T>>& target) {
    // Variables z = (x_prev, p_prev, x_next).
    const std::size_t qp = s.prev.dim(), qn = s.next.dim(), nz = 2 * qp + qn;
    std::vector<Vector<T>> rows;
    for (std::size_t i = 0; i < qp; ++i) {
        // p_prev + A x_prev + B x_next + a = 0
        Vector<T> r = zeros<T>(nz + 1);
        for (std::size_t j = 0; j < qp; ++j) r[j] = s.A(i, j);
        r[qp + i] = T(1);
        for (std::size_t j = 0; j < qn; ++j) r[2 * qp + j] = s.B(i, j);
        r[nz] = s.a[i];
        rows.push_back(std::move(r));
    }
    // p_next = Bᵀ x_prev + C x_next + c
    Matrix<T> bt = s.B.transpose();
    for (const auto& t : target) {
        auto sub = substitute(t, qn, bt, s.C, s.c);
        Vector<T> r = zeros<T>(nz + 1);
        for (std::size_t j = 0; j < qp; ++j) r[j] = sub.on_a[j];
        for (std::size_t j = 0; j < qn; ++j) r[2 * qp + j] = sub.on_x[j] + sub.on_b[j];
        r[nz] = sub.constant;
        rows.push_back(std::move(r));
    }
    std::vector<bool> drop(nz, false);
    for (std::size_t j = 0; j < qn; ++j) drop[2 * qp + j] = true;
    return eliminate_variables(rows, drop);
}

template <class T>
AffineSystem<T> constraint_image(const QuadraticAction<T>& s, const std::vector<Vector<T>>& source) {
    // Variables z = (x_next, p_next, x_prev).
    const std::size_t qp = s.prev.dim(), qn = s.next.dim(), nz = 2 * qn + qp;
    std::vector<Vector<T>> rows;
    for (std::size_t i = 0; i < qn; ++i) {
        // p_next - Bᵀ x_prev - C x_next - c = 0
        Vector<T> r = zeros<T>(nz + 1);
        for (std::size_t j = 0; j < qn; ++j) r[j] = -s.C(i, j);
        r[qn + i] = T(1);
        for (std::size_t j = 0; j < qp; ++j) r[2 * qn + j] = -s.B(j, i);
        r[nz] = -s.c[i];
        rows.push_back(std::move(r));
    }
    // p_prev = -(A x_prev + B x_next + a)
    Matrix<T> na = -s.A, nb = -s.B;
    Vector<T> na0 = -s.a;
    for (const auto& src : source) {
        auto sub = substitute(src, qp, na, nb, na0);
        Vector<T> r = zeros<T>(nz + 1);
        for (std::size_t j = 0; j < qn; ++j) r[j] = sub.on_b[j];
        for (std::size_t j = 0; j < qp; ++j) r[2 * qn + j] = sub.on_x[j] + sub.on_a[j];
        r[nz] = sub.constant;
        rows.push_back(std::move(r));
    }
    std::vector<bool> drop(nz, false);
    for (std::size_t j = 0; j < qp; ++j) drop[2 * qn + j] = true;
    return eliminate_variables(rows, drop);
}

namespace {

template <class T>
struct SliceState {
    ConstraintSet<T> pre, post;
    std::vector<Vector<T>> rows() const {
        auto r = pre.rows();
        auto q = post.rows();
        r.insert(r.end(), q.begin(), q.end());
        return r;
    }
};

// Scales a constraint row so its leading momentum coefficient is 1 (or its
// leading position coefficient when it has no momentum part).
template <class T>
Vector<T> normalized(Vector<T> row, std::size_t q) {
    std::size_t lead = row.size();
    for (std::size_t j = q; j < 2 * q && lead == row.size(); ++j)
        if (!ScalarTraits<T>::is_zero(row[j])) lead = j;
    for (std::size_t j = 0; j < q && lead == row.size(); ++j)
        if (!ScalarTraits<T>::is_zero(row[j])) lead = j;
    if (lead == row.size()) return row;
    T f = row[lead];
    for (auto& v : row) v /= f;
    return row;
}

// Adds rows not already implied; returns true if anything was added.
template <class T>
bool absorb(SliceState<T>& st, const AffineSystem<T>& sys, ConstraintTag tag, const std::string& origin) {
    const Slice& slice = tag == ConstraintTag::pre ? st.pre.slice : st.post.slice;
    const std::size_t width = 2 * slice.dim() + 1;
    if (!sys.feasible)
        throw InconsistentDynamics("constraints cannot be simultaneously satisfied at slice '" + slice.step + "'",
                                   slice.step);
    bool added = false;
    for (const auto& r : sys.rows) {
        auto current = st.rows();
        if (in_span(current, r)) continue;
        current.push_back(r);
        if (!reduce_affine(current, width - 1).feasible)
            throw InconsistentDynamics("constraints cannot be simultaneously satisfied at slice '" + slice.step + "'",
                                       slice.step);
        auto c = constraint_from_row(slice, normalized(r, slice.dim()), tag, Provenance::secondary, origin);
        (tag == ConstraintTag::pre ? st.pre : st.post).constraints.push_back(std::move(c));
        added = true;
    }
    return added;
}

}  // namespace

template <class T>
ConstraintReport<T> match_and_propagate(const Schedule<T>& schedule) {
    const std::size_t k = schedule.moves();
    if (k == 0) throw Error("schedule must contain at least one move");
    std::vector<SliceState<T>> st(k + 1);
    for (std::size_t n = 0; n <= k; ++n) {
        st[n].pre.slice = schedule.slice(n);
        st[n].post.slice = schedule.slice(n);
    }
    for (std::size_t m = 0; m < k; ++m) {
        st[m].pre = pre_constraints(schedule.move(m));
        st[m + 1].post = post_constraints(schedule.move(m));
    }
    for (std::size_t n = 0; n <= k; ++n) {
        auto rows = st[n].rows();
        if (!reduce_affine(rows, 2 * schedule.slice(n).dim()).feasible)
            throw InconsistentDynamics("constraints cannot be simultaneously satisfied at slice '" +
                                           schedule.slice(n).step + "'",
                                       schedule.slice(n).step);
    }

    ConstraintReport<T> report;
    const std::size_t cap = std::max<std::size_t>(4 * k, 4);
    bool changed = true;
    while (changed) {
        if (report.sweeps >= cap) throw VerificationFailed("constraint propagation did not reach a fixed point");
        ++report.sweeps;
        changed = false;
        for (std::size_t n = k; n >= 1; --n) {
            const auto& s = schedule.move(n - 1);
            auto sys = constraint_preimage(s, st[n].rows());
            changed |= absorb(st[n - 1], sys, ConstraintTag::pre,
                              "pre-image of slice " + s.next.step + " under move " + s.prev.step + "->" + s.next.step);
        }
        for (std::size_t n = 0; n < k; ++n) {
            const auto& s = schedule.move(n);
            auto sys = constraint_image(s, st[n].rows());
            changed |= absorb(st[n + 1], sys, ConstraintTag::post,
                              "image of slice " + s.prev.step + " under move " + s.prev.step + "->" + s.next.step);
        }
    }

    for (std::size_t n = 0; n <= k; ++n) {
        SliceReport<T> sr;
        sr.slice = schedule.slice(n);
        sr.pre = st[n].pre;
        sr.post = st[n].post;
        auto merged = merge_constraints(sr.pre, sr.post);
        if (!merged.feasible)
            throw InconsistentDynamics("constraints cannot be simultaneously satisfied at slice '" + sr.slice.step + "'",
                                       sr.slice.step);
        sr.combined = merged.combined;
        sr.dependent = merged.coinciding;
        auto cls = classify(sr.combined);
        sr.first_class = cls.first_class_count();
        sr.second_class = cls.second_class_count();
        sr.status = sr.second_class > 0 ? SliceStatus::fixes_parameters : SliceStatus::consistent;
        report.slices.push_back(std::move(sr));
    }
    return report;
}

#define DISEVO_INSTANTIATE_EVOLUTION(T)                                                                   \
    template struct EffectiveAction<T>;                                                                   \
    template class Schedule<T>;                                                                           \
    template EvolutionMap<T> evolution_map<T>(const QuadraticAction<T>&);                                 \
    template PhasePoint<T> forward_evolve<T>(const QuadraticAction<T>&, const PhasePoint<T>&,             \
                                             const std::optional<Vector<T>>&);                            \
    template PhasePoint<T> backward_evolve<T>(const QuadraticAction<T>&, const PhasePoint<T>&,            \
                                              const std::optional<Vector<T>>&);                           \
    template EffectiveAction<T> effective_action<T>(const QuadraticAction<T>&, const QuadraticAction<T>&); \
    template ConstraintReport<T> match_and_propagate<T>(const Schedule<T>&);                              \
    template AffineSystem<T> constraint_preimage<T>(const QuadraticAction<T>&, const std::vector<Vector<T>>&); \
    template AffineSystem<T> constraint_image<T>(const QuadraticAction<T>&, const std::vector<Vector<T>>&);

DISEVO_INSTANTIATE_EVOLUTION(Rational)
DISEVO_INSTANTIATE_EVOLUTION(double)

}  // namespace disevo
