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

#include "disevo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <variant>

#include "disevo/counting.hpp"
#include "disevo/random.hpp"

namespace disevo {

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"first-class", "presymplectic", "momentum-update", "lhr",
                                                   "commuting",   "counting",      "extended-canonical"};
    return names;
}

namespace {

// Exact equality in exact mode, 1e-9 relative to `scale` in float mode.
template <class T>
bool agree(const T& a, const T& b, double scale = 1.0) {
    if constexpr (ScalarTraits<T>::exact) {
        return a == b;
    } else {
        return std::fabs(a - b) <= 1e-9 * std::max(1.0, scale);
    }
}

template <class T>
bool agree(const Vector<T>& a, const Vector<T>& b, double scale = 1.0) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!agree(a[i], b[i], scale)) return false;
    return true;
}

template <class T>
std::string show(const T& v) {
    return ScalarTraits<T>::to_string(v);
}

template <class T>
T pairing(const Vector<T>& u, const Vector<T>& v) {
    const std::size_t q = u.size() / 2;
    Tangent<T> a{Vector<T>(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(q)),
                 Vector<T>(u.begin() + static_cast<std::ptrdiff_t>(q), u.end())};
    Tangent<T> b{Vector<T>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(q)),
                 Vector<T>(v.begin() + static_cast<std::ptrdiff_t>(q), v.end())};
    return symplectic_pairing(a, b);
}

template <class T>
double scale_of(std::initializer_list<Vector<T>> vs) {
    double s = 1.0;
    for (const auto& v : vs) s = std::max(s, max_abs(v));
    return s * s;
}

// Returns an empty string on success, otherwise a failure description.
using CaseFn = std::function<std::string(RandomSource&, std::size_t)>;

template <class T>
std::string first_class_case(RandomSource& rng, std::size_t) {
    auto s = random_action<T>(rng, numbered_slice("0", rng.index(0, 5)), numbered_slice("1", rng.index(0, 5)));
    auto pre = pre_constraints(s), post = post_constraints(s);
    for (const auto* set : {&pre, &post})
        for (std::size_t i = 0; i < set->size(); ++i)
            for (std::size_t j = 0; j < set->size(); ++j) {
                T b = poisson_bracket((*set)[i], (*set)[j]);
                if (!ScalarTraits<T>::is_zero(b, 1e3))
                    return "{" + describe((*set)[i]) + ", " + describe((*set)[j]) + "} = " + show(b);
            }
    return {};
}

template <class T>
std::string presymplectic_case(RandomSource& rng, std::size_t) {
    auto s = random_action<T>(rng, numbered_slice("0", rng.index(1, 5)), numbered_slice("1", rng.index(1, 5)));
    const std::size_t qp = s.prev.dim(), qn = s.next.dim();
    const std::size_t r = post_constraints(s).size();
    auto base_x = rng.vector<T>(qp);
    auto base = pre_legendre(s, base_x, rng.vector<T>(qn));
    // Tangents to the pre-constraint surface: (δx, -Aδx - Bw).
    auto tangent = [&] {
        auto dx = rng.vector<T>(qp);
        auto w = rng.vector<T>(qn);
        return std::make_pair(dx, Vector<T>(-(s.A * dx + s.B * w)));
    };
    auto [ux, up] = tangent();
    auto [vx, vp] = tangent();
    auto move = [&](const Vector<T>& dx, const Vector<T>& dp) {
        return PhasePoint<T>{s.prev, base.x + dx, base.p + dp, MomentumTag::pre};
    };
    auto l0 = rng.vector<T>(r), l1 = rng.vector<T>(r), l2 = rng.vector<T>(r);
    auto f0 = forward_evolve<T>(s, base, l0);
    auto fu = forward_evolve<T>(s, move(ux, up), l1);
    auto fv = forward_evolve<T>(s, move(vx, vp), l2);
    Vector<T> u = concat(ux, up), v = concat(vx, vp);
    Vector<T> u2 = concat(fu.x - f0.x, fu.p - f0.p), v2 = concat(fv.x - f0.x, fv.p - f0.p);
    T before = pairing(u, v), after = pairing(u2, v2);
    if (!agree(before, after, scale_of({u, v, u2, v2})))
        return "pairing " + show(before) + " before, " + show(after) + " after the move";
    return {};
}

template <class T>
std::string momentum_update_case(RandomSource& rng, std::size_t index) {
    const MoveKind kind = static_cast<MoveKind>(index % 4);
    std::vector<std::string> surface;
    const std::size_t q = rng.index(2, 5);
    for (std::size_t i = 1; i <= q; ++i) surface.push_back("r" + std::to_string(i));
    auto move = random_move<T>(rng, kind, surface);
    std::vector<std::string> fresh;
    for (const auto& l : move.labels(Role::n)) fresh.push_back(l);
    auto src = extend_phase_space(initial_state<T>(surface, zeros<T>(q), zeros<T>(q)), fresh, {});
    const std::size_t d = src.dim();

    // Points and tangents on C+_k ∩ K-_k.
    auto mc = move_constraints(move, src.slice);
    std::vector<Vector<T>> rows = src.post.rows();
    for (const auto& c : mc.pre) rows.push_back(c.row());
    Vector<T> base;
    std::vector<Vector<T>> dirs;
    if (rows.empty()) {
        base = rng.vector<T>(2 * d);
        for (std::size_t i = 0; i < 2 * d; ++i) dirs.push_back(unit<T>(2 * d, i));
    } else {
        Matrix<T> m(rows.size(), 2 * d);
        Vector<T> rhs(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < 2 * d; ++j) m(i, j) = rows[i][j];
            rhs[i] = -rows[i][2 * d];
        }
        auto sol = affine_solve(m, rhs);
        if (!std::holds_alternative<AffineSolution<T>>(sol)) return "constraint surface at k is empty";
        const auto& as = std::get<AffineSolution<T>>(sol);
        base = as.particular;
        dirs = as.null_basis;
        for (const auto& n : dirs) base = base + scaled(n, rng.scalar<T>());
    }
    auto combo = [&] {
        Vector<T> t = zeros<T>(2 * d);
        for (const auto& n : dirs) t = t + scaled(n, rng.scalar<T>());
        return t;
    };
    Vector<T> u = combo(), v = combo();
    auto at = [&](const Vector<T>& z) {
        ExtendedState<T> s = src;
        s.x.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(d));
        s.p.assign(z.begin() + static_cast<std::ptrdiff_t>(d), z.end());
        return s;
    };
    const std::size_t r = update_map(move, src.slice).lambda_directions.size();
    auto lambda = rng.vector<T>(r);
    auto image = [&](const Vector<T>& z) {
        auto res = momentum_update<T>(move, at(z), lambda);
        return concat(res.state.x, res.state.p);
    };
    Vector<T> z0 = image(base);
    Vector<T> u2 = image(base + u) - z0, v2 = image(base + v) - z0;
    T before = pairing(u, v), after = pairing(u2, v2);
    if (!agree(before, after, scale_of({u, v, u2, v2})))
        return "type " + to_string(kind) + ": pairing " + show(before) + " before, " + show(after) + " after";
    return {};
}

template <class T>
std::string lhr_case(RandomSource& rng, std::size_t) {
    const std::size_t q1 = rng.index(2, 5);
    auto s_in = random_action<T>(rng, numbered_slice("0", rng.index(1, q1)), numbered_slice("1", q1));
    auto s_out = random_action<T>(rng, numbered_slice("1", q1), numbered_slice("2", rng.index(1, q1)));
    auto h = hessian_at(s_in, s_out);
    auto pre = pre_constraints(s_out), post = post_constraints(s_in);
    for (const auto& l : pre)
        for (const auto& r : post) {
            T b = poisson_bracket(l, r);
            T c = dot(l.gp, h * r.gp);
            if (!agree(b, c, scale_of({l.gx, l.gp, r.gx, r.gp})))
                return "{" + describe(l) + ", " + describe(r) + "} = " + show(b) + " but the Hessian gives " + show(c);
        }
    return {};
}

template <class T>
std::string commuting_case(RandomSource& rng, std::size_t) {
    auto s_in = random_action<T>(rng, numbered_slice("0", rng.index(1, 4)), numbered_slice("1", rng.index(1, 4)));
    auto s_out = random_action<T>(rng, s_in.next, numbered_slice("2", rng.index(1, 4)));
    auto eff = effective_action(s_in, s_out);
    if (!eff.consistent) return {};
    const std::size_t q0 = s_in.prev.dim(), q2 = s_out.next.dim(), nu = q0 + q2;

    // Boundary data on the boundary-data constraint surface.
    Vector<T> u = rng.vector<T>(nu);
    if (!eff.boundary_constraints.empty()) {
        Matrix<T> m(eff.boundary_constraints.size(), nu);
        Vector<T> rhs(eff.boundary_constraints.size());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < nu; ++j) m(i, j) = eff.boundary_constraints[i][j];
            rhs[i] = -eff.boundary_constraints[i][nu];
        }
        auto sol = affine_solve(m, rhs);
        if (!std::holds_alternative<AffineSolution<T>>(sol)) return "boundary data constraints have no solution";
        const auto& as = std::get<AffineSolution<T>>(sol);
        u = as.particular;
        for (const auto& n : as.null_basis) u = u + scaled(n, rng.scalar<T>());
    }
    Vector<T> x0(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(q0));
    Vector<T> x2(u.begin() + static_cast<std::ptrdiff_t>(q0), u.end());
    Vector<T> x1 = eff.bulk_map * u + eff.bulk_offset;
    for (const auto& n : eff.kappa_directions) x1 = x1 + scaled(n, rng.scalar<T>());
    for (const auto& n : eff.gauge_directions) x1 = x1 + scaled(n, rng.scalar<T>());

    // Stepwise, with the bulk variables ordered as in the effective action.
    Vector<T> mid(s_in.next.dim());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = x1[*eff.bulk.index_of(s_in.next.labels[i])];
    auto out = align_prev(s_out, s_in.next);
    auto p0 = pre_legendre(s_in, x0, mid).p;
    auto p1_post = post_legendre(s_in, x0, mid).p;
    auto p1_pre = pre_legendre(out, mid, x2).p;
    auto p2 = post_legendre(out, mid, x2).p;
    const double sc = scale_of({x0, x1, x2});
    if (!agree(p1_post, p1_pre, sc)) return "generated bulk data are not on shell";

    auto kappa = eff.multipliers_for(x0, x1, x2);
    Vector<T> next = concat(x2, kappa);
    auto e0 = pre_legendre(eff.action, x0, next).p;
    auto e2 = post_legendre(eff.action, x0, next).p;
    Vector<T> e2_fields(e2.begin(), e2.begin() + static_cast<std::ptrdiff_t>(q2));
    Vector<T> e2_mult(e2.begin() + static_cast<std::ptrdiff_t>(q2), e2.end());
    if (!agree(p0, e0, sc)) return "initial momenta " + format_vector(p0) + " stepwise, " + format_vector(e0) + " effective";
    if (!agree(p2, e2_fields, sc))
        return "final momenta " + format_vector(p2) + " stepwise, " + format_vector(e2_fields) + " effective";
    if (!agree(e2_mult, zeros<T>(e2_mult.size()), sc)) return "multiplier momenta do not vanish on shell";
    return {};
}

template <class T>
bool spans_contain(const std::vector<Vector<T>>& big, const std::vector<Vector<T>>& small) {
    for (const auto& r : small)
        if (!in_span(big, r)) return false;
    return true;
}

template <class T>
std::string counting_case(RandomSource& rng, std::size_t) {
    const std::size_t k = rng.index(2, 3);
    std::vector<Slice> slices;
    for (std::size_t n = 0; n <= k; ++n) slices.push_back(numbered_slice(std::to_string(n), rng.index(1, 4)));
    std::vector<QuadraticAction<T>> moves;
    RandomActionOptions opts;
    opts.homogeneous = true;
    for (std::size_t n = 0; n < k; ++n) moves.push_back(random_action<T>(rng, slices[n], slices[n + 1], opts));
    Schedule<T> full(moves);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t f = i + 1; f <= k; ++f) propagating_count(full, i, f);  // throws on disagreement

    Schedule<T> shorter(std::vector<QuadraticAction<T>>(moves.begin(), moves.end() - 1));
    auto a = match_and_propagate(shorter);
    auto b = match_and_propagate(full);
    for (std::size_t n = 0; n < a.slices.size(); ++n) {
        // Rows implied by the other side are not stored twice, so compare the union.
        auto rows = [](const SliceReport<T>& r) {
            auto out = r.pre.rows();
            for (auto& v : r.post.rows()) out.push_back(std::move(v));
            return out;
        };
        if (!spans_contain(rows(b.slices[n]), rows(a.slices[n])))
            return "constraints at slice " + std::to_string(n) + " shrink when the schedule grows";
    }
    return {};
}

template <class T>
std::string extended_canonical_case(RandomSource& rng, std::size_t index) {
    const MoveKind kind = static_cast<MoveKind>(index % 4);
    std::vector<std::string> surface;
    const std::size_t q = rng.index(2, 5);
    for (std::size_t i = 1; i <= q; ++i) surface.push_back("r" + std::to_string(i));
    auto move = random_move<T>(rng, kind, surface);
    std::vector<std::string> fresh = move.labels(Role::n);
    auto src = extend_phase_space(initial_state<T>(surface, zeros<T>(q), zeros<T>(q)), fresh, {});
    const std::size_t d = src.dim();
    auto at = [&](const Vector<T>& z) {
        ExtendedState<T> s = src;
        s.x.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(d));
        s.p.assign(z.begin() + static_cast<std::ptrdiff_t>(d), z.end());
        auto out = extended_canonical_update(move, s);
        return concat(out.x, out.p);
    };
    Vector<T> base = rng.vector<T>(2 * d), u = rng.vector<T>(2 * d), v = rng.vector<T>(2 * d);
    Vector<T> z0 = at(base);
    Vector<T> u2 = at(base + u) - z0, v2 = at(base + v) - z0;
    T before = pairing(u, v), after = pairing(u2, v2);
    if (!agree(before, after, scale_of({u, v, u2, v2})))
        return "type " + to_string(kind) + ": pairing " + show(before) + " before, " + show(after) + " after";
    return {};
}

}  // namespace

template <class T>
SuiteResult run_suite(const std::string& name, const VerifyOptions& options) {
    CaseFn fn;
    SuiteResult res;
    res.name = name;
    if (name == "first-class") {
        fn = first_class_case<T>;
        res.invariant = "brackets among the pre-constraints (and among the post-constraints) of one move vanish";
    } else if (name == "presymplectic") {
        fn = presymplectic_case<T>;
        res.invariant = "forward evolution preserves the pairing of tangents to the pre-constraint surface, for any λ";
    } else if (name == "momentum-update") {
        fn = momentum_update_case<T>;
        res.invariant = "local moves of types I-IV preserve the pairing on C+ (and K- for II, III)";
    } else if (name == "lhr") {
        fn = lhr_case<T>;
        res.invariant = "{pre, post} equals the Hessian contraction of their momentum gradients";
    } else if (name == "commuting") {
        fn = commuting_case<T>;
        res.invariant = "stepwise and effective boundary momenta agree on shell";
    } else if (name == "counting") {
        fn = counting_case<T>;
        res.invariant = "both propagating-count formulas agree and constraints never shrink as the schedule grows";
    } else if (name == "extended-canonical") {
        fn = extended_canonical_case<T>;
        res.invariant = "the extended canonical update preserves the full pairing";
    } else {
        throw Error("unknown verification suite '" + name + "'");
    }
    std::size_t offset = 0;
    for (const auto& n : suite_names()) {
        if (n == name) break;
        ++offset;
    }
    RandomSource rng(options.seed + 0x9E3779B97F4A7C15ULL * (offset + 1));
    for (std::size_t i = 0; i < options.count; ++i) {
        ++res.cases;
        std::string msg;
        try {
            msg = fn(rng, i);
        } catch (const std::exception& e) {
            msg = std::string("exception: ") + e.what();
        }
        if (msg.empty()) continue;
        ++res.failures;
        if (res.messages.size() < 5) res.messages.push_back("case " + std::to_string(i) + ": " + msg);
    }
    return res;
}

template SuiteResult run_suite<Rational>(const std::string&, const VerifyOptions&);
template SuiteResult run_suite<double>(const std::string&, const VerifyOptions&);

}  // namespace disevo
