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

#include "disevo/local_moves.hpp"

#include <set>

namespace disevo {

std::string to_string(MoveKind kind) {
    switch (kind) {
        case MoveKind::I: return "I";
        case MoveKind::II: return "II";
        case MoveKind::III: return "III";
        case MoveKind::IV: return "IV";
    }
    return "?";
}

MoveKind parse_move_kind(const std::string& text) {
    if (text == "I") return MoveKind::I;
    if (text == "II") return MoveKind::II;
    if (text == "III") return MoveKind::III;
    if (text == "IV") return MoveKind::IV;
    throw Error("unknown move type '" + text + "'");
}

template <class T>
std::size_t ExtendedState<T>::extension_count() const {
    std::size_t n = 0;
    for (bool b : extension) n += b ? 1 : 0;
    return n;
}

template <class T>
MoveSpec<T> make_move(MoveKind kind, RoleMap roles, QuadraticForm<T> form, std::optional<ActionSide> side,
                      std::string name) {
    auto n = roles.labels_with(Role::n), o = roles.labels_with(Role::o), e = roles.labels_with(Role::e);
    bool ok = false;
    switch (kind) {
        case MoveKind::I: ok = !n.empty() && o.empty(); break;
        case MoveKind::II: ok = n.empty() && !o.empty(); break;
        case MoveKind::III: ok = !n.empty() && n.size() == o.size(); break;
        case MoveKind::IV: ok = n.empty() && o.empty(); break;
    }
    if (!ok) throw Error("roles do not match a type " + to_string(kind) + " move");
    for (const auto& v : form.vars) {
        Role r = roles.role_of(v);
        if (r == Role::b) throw LabelError("action depends on untouched variable '" + v + "'");
    }
    MoveSpec<T> m;
    m.kind = kind;
    m.roles = std::move(roles);
    m.e_side = side.value_or(kind == MoveKind::II ? ActionSide::prev : ActionSide::next);
    m.name = name.empty() ? "type " + to_string(kind) : std::move(name);

    std::vector<std::string> prev = o, next = n;
    (m.e_side == ActionSide::prev ? prev : next).insert((m.e_side == ActionSide::prev ? prev : next).end(),
                                                        e.begin(), e.end());
    std::vector<std::string> all = prev;
    all.insert(all.end(), next.begin(), next.end());
    m.form = form.embed(all);
    m.action = to_action(m.form, Slice("k", prev), Slice("k+1", next));
    return m;
}

namespace {

template <class T>
AffineConstraint<T> momentum_zero(const Slice& slice, std::size_t j) {
    AffineConstraint<T> c;
    c.slice = slice;
    c.gx = zeros<T>(slice.dim());
    c.gp = unit<T>(slice.dim(), j);
    c.tag = ConstraintTag::both;
    c.provenance = Provenance::extension;
    c.origin = "extension " + slice.labels[j];
    return c;
}

// Re-expresses constraints on a slice with more (or reordered) labels.
template <class T>
ConstraintSet<T> embed_set(const ConstraintSet<T>& set, const Slice& target) {
    ConstraintSet<T> out{target, {}};
    for (const auto& c : set) {
        AffineConstraint<T> e = c;
        e.slice = target;
        e.gx = zeros<T>(target.dim());
        e.gp = zeros<T>(target.dim());
        for (std::size_t k = 0; k < set.slice.dim(); ++k) {
            auto j = target.index_of(set.slice.labels[k]);
            if (!j) throw LabelError("label '" + set.slice.labels[k] + "' is missing on the target slice");
            e.gx[*j] = c.gx[k];
            e.gp[*j] = c.gp[k];
        }
        out.constraints.push_back(std::move(e));
    }
    return out;
}

template <class T>
std::vector<std::string> missing_new_labels(const MoveSpec<T>& move, const Slice& slice) {
    std::vector<std::string> out;
    for (const auto& l : move.labels(Role::n))
        if (!slice.index_of(l)) out.push_back(l);
    return out;
}

// Index bookkeeping shared by the update map, the emitted constraints and
// transport. Form indices f*, slice indices s*.
template <class T>
struct Layout {
    const QuadraticForm<T>* form;
    std::vector<std::size_t> fe, fn, fo, se, sn, so;
    std::vector<Role> role;  // per slice index
    std::vector<std::optional<std::size_t>> fidx;  // slice index -> form index

    Layout(const MoveSpec<T>& move, const Slice& slice) : form(&move.form) {
        role.assign(slice.dim(), Role::b);
        fidx.assign(slice.dim(), std::nullopt);
        for (std::size_t j = 0; j < slice.dim(); ++j) {
            role[j] = move.roles.role_of(slice.labels[j]);
            fidx[j] = move.form.index_of(slice.labels[j]);
        }
        auto collect = [&](Role r, std::vector<std::size_t>& f, std::vector<std::size_t>& s) {
            for (const auto& l : move.labels(r)) {
                auto j = slice.index_of(l);
                if (!j) throw LabelError("move '" + move.name + "' touches '" + l + "', which is not on the slice");
                s.push_back(*j);
                f.push_back(*move.form.index_of(l));
            }
        };
        collect(Role::e, fe, se);
        collect(Role::n, fn, sn);
        collect(Role::o, fo, so);
    }

    const T& h(std::size_t a, std::size_t b) const { return form->hess(a, b); }
    const T& g(std::size_t a) const { return form->grad[a]; }

    Matrix<T> coupling() const {  // ∂²S/∂x_o∂x_n
        Matrix<T> w(fo.size(), fn.size());
        for (std::size_t r = 0; r < fo.size(); ++r)
            for (std::size_t c = 0; c < fn.size(); ++c) w(r, c) = h(fo[r], fn[c]);
        return w;
    }
};

template <class T>
std::vector<Vector<T>> units(std::size_t n) {
    std::vector<Vector<T>> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(unit<T>(n, i));
    return out;
}

template <class T>
NullSpaces<T> coupling_nulls(const Layout<T>& lay) {
    if (lay.fo.empty() || lay.fn.empty()) {
        NullSpaces<T> ns;
        ns.left_null = units<T>(lay.fo.size());
        ns.right_null = units<T>(lay.fn.size());
        return ns;
    }
    return rank_nullspace(lay.coupling());
}

}  // namespace

template <class T>
ExtendedState<T> initial_state(const std::vector<std::string>& labels, Vector<T> x, Vector<T> p, std::size_t step) {
    ExtendedState<T> s;
    s.slice = Slice(std::to_string(step), labels);
    s.slice.validate();
    if (x.size() != labels.size() || p.size() != labels.size())
        throw DimensionError("initial data do not match the number of labels");
    s.x = std::move(x);
    s.p = std::move(p);
    s.post.slice = s.slice;
    s.extension.assign(labels.size(), false);
    s.step = step;
    return s;
}

template <class T>
ExtendedState<T> extend_phase_space(const ExtendedState<T>& state, const std::vector<std::string>& new_labels,
                                    const std::vector<std::string>& old_labels) {
    std::vector<std::string> add = new_labels;
    add.insert(add.end(), old_labels.begin(), old_labels.end());
    if (add.empty()) return state;
    ExtendedState<T> out = state;
    for (const auto& l : add) {
        if (out.slice.index_of(l)) throw LabelError("extension label '" + l + "' is already on the slice");
        out.slice.labels.push_back(l);
        if (!out.slice.multiplier.empty()) out.slice.multiplier.push_back(false);
        out.x.push_back(T(0));
        out.p.push_back(T(0));
        out.extension.push_back(true);
    }
    out.slice.validate();
    out.post = embed_set(state.post, out.slice);
    for (std::size_t j = state.dim(); j < out.dim(); ++j) out.post.constraints.push_back(momentum_zero<T>(out.slice, j));
    return out;
}

template <class T>
ExtendedState<T> reduce_phase_space(const ExtendedState<T>& state, const std::vector<std::string>& labels) {
    std::set<std::size_t> drop;
    for (const auto& l : labels) {
        auto j = state.slice.index_of(l);
        if (!j) throw LabelError("label '" + l + "' is not on the slice");
        if (!state.extension[*j]) throw LabelError("label '" + l + "' is not an extension pair");
        drop.insert(*j);
    }
    ExtendedState<T> out;
    out.step = state.step;
    out.slice = Slice(state.slice.step, {});
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < state.dim(); ++j) {
        if (drop.count(j)) continue;
        keep.push_back(j);
        out.slice.labels.push_back(state.slice.labels[j]);
        out.x.push_back(state.x[j]);
        out.p.push_back(state.p[j]);
        out.extension.push_back(state.extension[j]);
    }
    out.post.slice = out.slice;
    for (const auto& c : state.post) {
        bool touches_dropped = false, touches_kept = false;
        for (std::size_t j = 0; j < state.dim(); ++j) {
            bool nz = c.gx[j] != 0 || c.gp[j] != 0;
            if (!nz) continue;
            (drop.count(j) ? touches_dropped : touches_kept) = true;
        }
        if (touches_dropped && !touches_kept) continue;
        if (touches_dropped)
            throw Error("cannot drop extension pairs: constraint " + describe(c) + " couples them to the rest");
        AffineConstraint<T> r = c;
        r.slice = out.slice;
        r.gx.clear();
        r.gp.clear();
        for (auto j : keep) {
            r.gx.push_back(c.gx[j]);
            r.gp.push_back(c.gp[j]);
        }
        out.post.constraints.push_back(std::move(r));
    }
    return out;
}

template <class T>
MoveConstraints<T> move_constraints(const MoveSpec<T>& move, const Slice& slice) {
    Layout<T> lay(move, slice);
    auto ns = coupling_nulls(lay);
    const std::size_t d = slice.dim();
    MoveConstraints<T> out;
    out.pre.slice = slice;
    out.post.slice = slice;
    for (const auto& l : ns.left_null) {
        AffineConstraint<T> c;
        c.slice = slice;
        c.gx = zeros<T>(d);
        c.gp = zeros<T>(d);
        for (std::size_t k = 0; k < lay.fo.size(); ++k) {
            if (l[k] == 0) continue;
            c.gp[lay.so[k]] += l[k];
            c.c0 += l[k] * lay.g(lay.fo[k]);
            for (std::size_t m = 0; m < d; ++m) {
                if (!lay.fidx[m] || lay.role[m] == Role::n) continue;
                c.gx[m] += l[k] * lay.h(lay.fo[k], *lay.fidx[m]);
            }
        }
        c.tag = ConstraintTag::pre;
        c.provenance = Provenance::primary;
        c.origin = move.name;
        out.pre.constraints.push_back(std::move(c));
    }
    for (auto j : lay.so) {
        auto c = momentum_zero<T>(slice, j);
        c.origin = move.name;
        out.post.constraints.push_back(std::move(c));
    }
    for (const auto& r : ns.right_null) {
        AffineConstraint<T> c;
        c.slice = slice;
        c.gx = zeros<T>(d);
        c.gp = zeros<T>(d);
        for (std::size_t k = 0; k < lay.fn.size(); ++k) {
            if (r[k] == 0) continue;
            c.gp[lay.sn[k]] += r[k];
            c.c0 -= r[k] * lay.g(lay.fn[k]);
            for (std::size_t m = 0; m < d; ++m) {
                if (!lay.fidx[m] || lay.role[m] == Role::o) continue;
                c.gx[m] -= r[k] * lay.h(lay.fn[k], *lay.fidx[m]);
            }
        }
        c.tag = ConstraintTag::post;
        c.provenance = Provenance::primary;
        c.origin = move.name;
        out.post.constraints.push_back(std::move(c));
    }
    return out;
}

template <class T>
UpdateMap<T> update_map(const MoveSpec<T>& move, const Slice& slice) {
    Layout<T> lay(move, slice);
    const std::size_t d = slice.dim();
    auto op = lay.fo.empty() || lay.fn.empty() ? SolveOperator<T>{} : solve_operator(lay.coupling());
    std::vector<Vector<T>> rnull = coupling_nulls(lay).right_null;
    const std::size_t r = rnull.size();

    // x' as affine rows over z = (x, p), with λ columns.
    Matrix<T> xl(d, 2 * d), xlam(d, r);
    Vector<T> xoff = zeros<T>(d);
    for (std::size_t j = 0; j < d; ++j)
        if (lay.role[j] != Role::n) xl(j, j) = T(1);
    if (!lay.fo.empty() && !lay.fn.empty()) {
        // W x_n = -p_o - ∂_o S |_{x_n = 0}
        for (std::size_t a = 0; a < lay.fn.size(); ++a) {
            std::size_t ja = lay.sn[a];
            for (std::size_t k = 0; k < lay.fo.size(); ++k) {
                T pk = op.particular_map(a, k);
                if (pk == 0) continue;
                xl(ja, d + lay.so[k]) -= pk;
                xoff[ja] -= pk * lay.g(lay.fo[k]);
                for (std::size_t m = 0; m < d; ++m) {
                    if (!lay.fidx[m] || lay.role[m] == Role::n) continue;
                    xl(ja, m) -= pk * lay.h(lay.fo[k], *lay.fidx[m]);
                }
            }
        }
    }
    for (std::size_t c = 0; c < r; ++c)
        for (std::size_t a = 0; a < lay.fn.size(); ++a) xlam(lay.sn[a], c) = rnull[c][a];

    UpdateMap<T> u;
    u.slice = slice;
    u.linear = Matrix<T>(2 * d, 2 * d);
    u.offset = zeros<T>(2 * d);
    u.lambda_directions.assign(r, zeros<T>(2 * d));
    u.linear.set_block(0, 0, xl);
    for (std::size_t j = 0; j < d; ++j) {
        u.offset[j] = xoff[j];
        for (std::size_t c = 0; c < r; ++c) u.lambda_directions[c][j] = xlam(j, c);
    }
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t row = d + j;
        Role role = lay.role[j];
        if (role == Role::o) continue;  // p_o' = 0
        if (role == Role::b || role == Role::e) u.linear(row, d + j) = T(1);
        if (role == Role::b) continue;
        // + ∂_j S evaluated at x'
        std::size_t fj = *lay.fidx[j];
        u.offset[row] += lay.g(fj);
        for (std::size_t m = 0; m < d; ++m) {
            if (!lay.fidx[m]) continue;
            T hm = lay.h(fj, *lay.fidx[m]);
            if (hm == 0) continue;
            for (std::size_t col = 0; col < 2 * d; ++col) u.linear(row, col) += hm * xl(m, col);
            u.offset[row] += hm * xoff[m];
            for (std::size_t c = 0; c < r; ++c) u.lambda_directions[c][row] += hm * xlam(m, c);
        }
    }
    return u;
}

template <class T>
ConstraintSet<T> transport_constraints(const MoveSpec<T>& move, const ConstraintSet<T>& post_set) {
    Slice slice = post_set.slice;
    for (const auto& l : missing_new_labels(move, slice)) {
        slice.labels.push_back(l);
        if (!slice.multiplier.empty()) slice.multiplier.push_back(false);
    }
    auto source = embed_set(post_set, slice);
    Layout<T> lay(move, slice);
    const std::size_t d = slice.dim();
    const std::size_t no = lay.so.size(), nn = lay.sn.size();
    const std::size_t ny = no + 2 * nn;
    const std::size_t width = 2 * d + ny;  // plus constant
    // Positions of the source-only unknowns.
    std::vector<std::optional<std::size_t>> yx(d), yp(d);
    for (std::size_t k = 0; k < no; ++k) yx[lay.so[k]] = 2 * d + k;
    for (std::size_t k = 0; k < nn; ++k) {
        yx[lay.sn[k]] = 2 * d + no + k;
        yp[lay.sn[k]] = 2 * d + no + nn + k;
    }
    // row += coef * ∂_j S, with x_o at the source and x_e, x_n at the target.
    auto add_grad = [&](Vector<T>& row, std::size_t j, const T& coef) {
        std::size_t fj = *lay.fidx[j];
        row[width] += coef * lay.g(fj);
        for (std::size_t m = 0; m < d; ++m) {
            if (!lay.fidx[m]) continue;
            T hm = lay.h(fj, *lay.fidx[m]);
            if (hm == 0) continue;
            std::size_t col = lay.role[m] == Role::o ? *yx[m] : m;
            row[col] += coef * hm;
        }
    };

    std::vector<Vector<T>> direct, system;
    std::vector<const AffineConstraint<T>*> direct_src;
    for (const auto& c : source) {
        Vector<T> row = zeros<T>(width + 1);
        bool uses_source = false;
        for (std::size_t j = 0; j < d; ++j) {
            Role role = lay.role[j];
            if (c.gx[j] != 0) {
                if (role == Role::o || role == Role::n) {
                    row[*yx[j]] += c.gx[j];
                    uses_source = true;
                } else {
                    row[j] += c.gx[j];
                }
            }
            if (c.gp[j] == 0) continue;
            switch (role) {
                case Role::b: row[d + j] += c.gp[j]; break;
                case Role::e:
                    row[d + j] += c.gp[j];
                    add_grad(row, j, -c.gp[j]);
                    break;
                case Role::o: add_grad(row, j, -c.gp[j]); break;
                case Role::n:
                    row[*yp[j]] += c.gp[j];
                    uses_source = true;
                    break;
            }
        }
        row[width] += c.c0;
        for (std::size_t j = 2 * d; j < width && !uses_source; ++j) uses_source = row[j] != 0;
        if (!uses_source) {
            direct.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(2 * d));
            direct.back().push_back(row[width]);
            direct_src.push_back(&c);
        }
        system.push_back(std::move(row));
    }
    for (std::size_t k = 0; k < nn; ++k) {
        Vector<T> row = zeros<T>(width + 1);
        row[d + lay.sn[k]] = T(1);
        add_grad(row, lay.sn[k], T(-1));
        system.push_back(std::move(row));
    }
    for (std::size_t k = 0; k < no; ++k) {
        Vector<T> row = zeros<T>(width + 1);
        row[d + lay.so[k]] = T(1);
        system.push_back(std::move(row));
    }
    std::vector<bool> drop(width, false);
    for (std::size_t j = 2 * d; j < width; ++j) drop[j] = true;
    auto image = eliminate_variables(system, drop);
    if (!image.feasible)
        throw InconsistentDynamics("move '" + move.name + "' maps the post-constraint surface to an empty set",
                                   slice.step);

    std::vector<Vector<T>> kept = move_constraints(move, slice).post.rows();
    ConstraintSet<T> out{slice, {}};
    auto consider = [&](const Vector<T>& row, const AffineConstraint<T>* src) {
        bool trivial = true;
        for (std::size_t j = 0; j < 2 * d; ++j) trivial = trivial && ScalarTraits<T>::is_zero(row[j]);
        if (trivial) return;
        if (in_span(kept, row)) return;
        kept.push_back(row);
        auto c = constraint_from_row(slice, row, ConstraintTag::post,
                                     src ? src->provenance : Provenance::secondary,
                                     src ? src->origin : "transport through " + move.name);
        out.constraints.push_back(std::move(c));
    };
    for (std::size_t i = 0; i < direct.size(); ++i) consider(direct[i], direct_src[i]);
    for (const auto& row : image.rows) consider(row, nullptr);
    return out;
}

template <class T>
MomentumUpdate<T> momentum_update(const MoveSpec<T>& move, const ExtendedState<T>& state,
                                  const std::optional<Vector<T>>& lambda, bool strict) {
    for (const auto& l : move.labels(Role::n)) {
        auto j = state.slice.index_of(l);
        if (j && !state.extension[*j])
            throw LabelError("new variable '" + l + "' of move '" + move.name + "' is already live");
    }
    for (Role r : {Role::e, Role::o})
        for (const auto& l : move.labels(r)) {
            auto j = state.slice.index_of(l);
            if (!j || state.extension[*j])
                throw LabelError("move '" + move.name + "' needs live variable '" + l + "'");
        }
    auto src = extend_phase_space(state, missing_new_labels(move, state.slice), {});

    MomentumUpdate<T> res;
    res.emitted = move_constraints(move, src.slice);
    auto bad = violated(res.emitted.pre, src.x, src.p);
    if (!bad.empty())
        throw OffConstraintSurface("state at step " + std::to_string(state.step) + " violates a pre-constraint of '" +
                                       move.name + "'",
                                   bad);
    auto u = update_map(move, src.slice);
    const std::size_t r = u.lambda_directions.size();
    if (lambda && lambda->size() != r)
        throw MissingParameter("move '" + move.name + "' has " + std::to_string(r) + " free parameters, got " +
                                   std::to_string(lambda->size()),
                               r, lambda->size());
    if (!lambda && strict && r > 0)
        throw MissingParameter("move '" + move.name + "' needs " + std::to_string(r) + " free parameters", r, 0);
    res.lambda = lambda ? *lambda : zeros<T>(r);

    Vector<T> z = concat(src.x, src.p);
    Vector<T> zn = u.linear * z + u.offset;
    for (std::size_t c = 0; c < r; ++c) zn = zn + scaled(u.lambda_directions[c], res.lambda[c]);
    const std::size_t d = src.dim();

    ExtendedState<T> out;
    out.step = state.step + 1;
    out.slice = Slice(std::to_string(out.step), src.slice.labels);
    out.x.assign(zn.begin(), zn.begin() + static_cast<std::ptrdiff_t>(d));
    out.p.assign(zn.begin() + static_cast<std::ptrdiff_t>(d), zn.end());
    out.extension = src.extension;
    for (const auto& l : move.labels(Role::n)) out.extension[*out.slice.index_of(l)] = false;
    for (const auto& l : move.labels(Role::o)) out.extension[*out.slice.index_of(l)] = true;

    auto transported = transport_constraints(move, src.post);
    ConstraintSet<T> post{out.slice, {}};
    for (auto c : res.emitted.post) {
        c.slice = out.slice;
        post.constraints.push_back(std::move(c));
    }
    for (auto c : transported) {
        c.slice = out.slice;
        post.constraints.push_back(std::move(c));
    }
    out.post = make_irreducible(post);
    res.emitted.post = embed_set(res.emitted.post, out.slice);
    res.state = std::move(out);
    return res;
}

template <class T>
ExtendedState<T> extended_canonical_update(const MoveSpec<T>& move, const ExtendedState<T>& state) {
    auto src = extend_phase_space(state, missing_new_labels(move, state.slice), {});
    Layout<T> lay(move, src.slice);
    const std::size_t d = src.dim();
    // p' = p + H x + g on the labels the action touches.
    Matrix<T> h(d, d);
    Vector<T> g = zeros<T>(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (!lay.fidx[i]) continue;
        g[i] = lay.g(*lay.fidx[i]);
        for (std::size_t j = 0; j < d; ++j)
            if (lay.fidx[j]) h(i, j) = lay.h(*lay.fidx[i], *lay.fidx[j]);
    }
    ExtendedState<T> out = src;
    out.step = state.step + 1;
    out.slice.step = std::to_string(out.step);
    out.p = src.p + h * src.x + g;
    for (const auto& l : move.labels(Role::n)) out.extension[*out.slice.index_of(l)] = false;
    for (const auto& l : move.labels(Role::o)) out.extension[*out.slice.index_of(l)] = true;
    out.post.slice = out.slice;
    out.post.constraints.clear();
    for (const auto& c : src.post) {
        // p = p' - H x' - g
        AffineConstraint<T> t = c;
        t.slice = out.slice;
        t.gx = c.gx - left_multiply(c.gp, h);
        t.c0 -= dot(c.gp, g);
        out.post.constraints.push_back(std::move(t));
    }
    return out;
}

#define DISEVO_INSTANTIATE_LOCAL_MOVES(T)                                                                    \
    template struct ExtendedState<T>;                                                                        \
    template MoveSpec<T> make_move<T>(MoveKind, RoleMap, QuadraticForm<T>, std::optional<ActionSide>, std::string); \
    template ExtendedState<T> initial_state<T>(const std::vector<std::string>&, Vector<T>, Vector<T>, std::size_t); \
    template ExtendedState<T> extend_phase_space<T>(const ExtendedState<T>&, const std::vector<std::string>&,  \
                                                    const std::vector<std::string>&);                       \
    template ExtendedState<T> reduce_phase_space<T>(const ExtendedState<T>&, const std::vector<std::string>&); \
    template MoveConstraints<T> move_constraints<T>(const MoveSpec<T>&, const Slice&);                       \
    template UpdateMap<T> update_map<T>(const MoveSpec<T>&, const Slice&);                                   \
    template MomentumUpdate<T> momentum_update<T>(const MoveSpec<T>&, const ExtendedState<T>&,               \
                                                  const std::optional<Vector<T>>&, bool);                    \
    template ConstraintSet<T> transport_constraints<T>(const MoveSpec<T>&, const ConstraintSet<T>&);         \
    template ExtendedState<T> extended_canonical_update<T>(const MoveSpec<T>&, const ExtendedState<T>&);

DISEVO_INSTANTIATE_LOCAL_MOVES(Rational)
DISEVO_INSTANTIATE_LOCAL_MOVES(double)

}  // namespace disevo
