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

#include "disevo/models.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace disevo {

template <class T>
QuadraticForm<T> simplex_form(const std::vector<std::string>& labels) {
    const std::size_t n = labels.size();
    QuadraticForm<T> f;
    f.vars = labels;
    f.hess = Matrix<T>(n, n);
    f.grad = zeros<T>(n);
    // Each edge contributes ¼(φ_s - φ_t)², i.e. ½ on the diagonal and -½ off it.
    const T half = ScalarTraits<T>::from_ratio(1, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            f.hess(i, i) += half;
            f.hess(j, j) += half;
            f.hess(i, j) -= half;
            f.hess(j, i) -= half;
        }
    return f;
}

template <class T>
QuadraticForm<T> square_form(const std::vector<std::string>& cyclic_labels) {
    if (cyclic_labels.size() != 4) throw DimensionError("a square has four vertices");
    QuadraticForm<T> f;
    f.vars = cyclic_labels;
    f.hess = Matrix<T>(4, 4);
    f.grad = zeros<T>(4);
    for (std::size_t i = 0; i < 4; ++i) {
        std::size_t j = (i + 1) % 4;
        f.hess(i, i) += T(2);
        f.hess(i, j) -= T(1);
        f.hess(j, i) -= T(1);
    }
    return f;
}

template <class T>
QuadraticAction<T> triangle_action() {
    return triangle_action<T>(Slice("0", {"1", "2", "3"}), Slice("1", {}));
}

template <class T>
QuadraticAction<T> triangle_action(const Slice& prev, const Slice& next) {
    if (prev.dim() + next.dim() != 3) throw DimensionError("a triangle has three vertices");
    std::vector<std::string> labels = prev.labels;
    labels.insert(labels.end(), next.labels.begin(), next.labels.end());
    return to_action(simplex_form<T>(labels), prev, next);
}

void SlabSpec::validate() const {
    if (adjacency.size() != q_prev)
        throw ScenarioError("adjacency has " + std::to_string(adjacency.size()) + " rows, expected q_prev = " +
                            std::to_string(q_prev));
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
        if (adjacency[i].size() != q_next)
            throw ScenarioError("adjacency row " + std::to_string(i + 1) + " has " +
                                std::to_string(adjacency[i].size()) + " entries, expected q_next = " +
                                std::to_string(q_next));
        for (int e : adjacency[i])
            if (e < 0 || e > 2) throw ScenarioError("adjacency entries must be 0, 1 or 2");
    }
}

SlabSpec SlabSpec::transposed() const {
    SlabSpec t{q_next, q_prev, {}};
    t.adjacency.assign(q_next, std::vector<int>(q_prev, 0));
    for (std::size_t i = 0; i < q_prev; ++i)
        for (std::size_t j = 0; j < q_next; ++j) t.adjacency[j][i] = adjacency[i][j];
    return t;
}

namespace {

// diag(degree + 1) minus ½ per cyclic neighbour. For two vertices both
// neighbours coincide, for one vertex the neighbour terms cancel the +1.
template <class T>
Matrix<T> ring_block(std::size_t q, const std::vector<int>& degree) {
    Matrix<T> m(q, q);
    const T half = ScalarTraits<T>::from_ratio(1, 2);
    for (std::size_t i = 0; i < q; ++i) {
        m(i, i) += T(degree[i] + 1);
        m(i, (i + 1) % q) -= half;
        m(i, (i + q - 1) % q) -= half;
    }
    return m;
}

}  // namespace

template <class T>
QuadraticAction<T> cdt_slab_action(const SlabSpec& spec, const std::string& prev_step, const std::string& next_step) {
    spec.validate();
    std::vector<int> rows(spec.q_prev, 0), cols(spec.q_next, 0);
    Matrix<T> b(spec.q_prev, spec.q_next);
    for (std::size_t i = 0; i < spec.q_prev; ++i)
        for (std::size_t j = 0; j < spec.q_next; ++j) {
            int e = spec.adjacency[i][j];
            rows[i] += e;
            cols[j] += e;
            b(i, j) = T(-e);
        }
    ActionBlocks<T> blocks;
    blocks.A = ring_block<T>(spec.q_prev, rows);
    blocks.B = std::move(b);
    blocks.C = ring_block<T>(spec.q_next, cols);
    blocks.a = zeros<T>(spec.q_prev);
    blocks.c = zeros<T>(spec.q_next);
    return build_action(numbered_slice(prev_step, spec.q_prev), numbered_slice(next_step, spec.q_next),
                        std::move(blocks));
}

std::string to_string(PachnerKind kind) {
    switch (kind) {
        case PachnerKind::one_two: return "1-2";
        case PachnerKind::two_one: return "2-1";
        case PachnerKind::square: return "square";
        case PachnerKind::two_two: return "2-2";
    }
    return "?";
}

PachnerKind parse_pachner_kind(const std::string& text) {
    if (text == "1-2") return PachnerKind::one_two;
    if (text == "2-1") return PachnerKind::two_one;
    if (text == "square") return PachnerKind::square;
    if (text == "2-2") return PachnerKind::two_two;
    throw ScenarioError("unknown move kind '" + text + "' (expected 1-2, 2-1, square or 2-2)");
}

MoveKind move_kind(PachnerKind kind) {
    switch (kind) {
        case PachnerKind::one_two: return MoveKind::I;
        case PachnerKind::two_one: return MoveKind::II;
        case PachnerKind::square: return MoveKind::III;
        case PachnerKind::two_two: return MoveKind::IV;
    }
    return MoveKind::IV;
}

std::string fresh_label(const std::vector<std::string>& taken) {
    std::set<std::string> used(taken.begin(), taken.end());
    for (std::size_t n = 1;; ++n) {
        std::string l = "v" + std::to_string(n);
        if (!used.count(l)) return l;
    }
}

namespace {

std::size_t minimum_size(PachnerKind kind) {
    switch (kind) {
        case PachnerKind::one_two: return 2;
        case PachnerKind::two_one: return 4;
        case PachnerKind::square: return 3;
        case PachnerKind::two_two: return 4;
    }
    return 0;
}

void check_position(PachnerKind kind, const std::vector<std::string>& surface, std::size_t position) {
    if (surface.size() < minimum_size(kind))
        throw Error("a " + to_string(kind) + " move needs at least " + std::to_string(minimum_size(kind)) +
                    " vertices, the surface has " + std::to_string(surface.size()));
    if (position >= surface.size())
        throw Error("position " + std::to_string(position) + " is out of range for a surface of " +
                    std::to_string(surface.size()) + " vertices");
}

}  // namespace

std::vector<std::string> next_surface(PachnerKind kind, const std::vector<std::string>& surface, std::size_t position,
                                      const std::string& new_label) {
    check_position(kind, surface, position);
    std::vector<std::string> out = surface;
    switch (kind) {
        case PachnerKind::one_two:
            out.insert(out.begin() + static_cast<std::ptrdiff_t>(position) + 1, new_label);
            break;
        case PachnerKind::two_one: out.erase(out.begin() + static_cast<std::ptrdiff_t>(position)); break;
        case PachnerKind::square: out[position] = new_label; break;
        case PachnerKind::two_two: break;
    }
    return out;
}

template <class T>
MoveSpec<T> pachner_move(PachnerKind kind, const std::vector<std::string>& surface, std::size_t position,
                         const std::string& new_label) {
    check_position(kind, surface, position);
    const std::size_t q = surface.size();
    auto at = [&](std::ptrdiff_t off) {
        return surface[(position + q + static_cast<std::size_t>(off % static_cast<std::ptrdiff_t>(q))) % q];
    };
    std::string v = new_label.empty() ? fresh_label(surface) : new_label;
    if (kind == PachnerKind::one_two || kind == PachnerKind::square)
        for (const auto& l : surface)
            if (l == v) throw LabelError("new vertex label '" + v + "' is already on the surface");
    RoleMap roles;
    QuadraticForm<T> form;
    std::string name = to_string(kind) + " at " + std::to_string(position);
    switch (kind) {
        case PachnerKind::one_two:
            roles.roles = {{at(0), Role::e}, {at(1), Role::e}, {v, Role::n}};
            form = simplex_form<T>({at(0), at(1), v});
            break;
        case PachnerKind::two_one:
            roles.roles = {{at(-1), Role::e}, {at(1), Role::e}, {at(0), Role::o}};
            form = simplex_form<T>({at(-1), at(0), at(1)});
            break;
        case PachnerKind::square:
            roles.roles = {{at(-1), Role::e}, {at(1), Role::e}, {at(0), Role::o}, {v, Role::n}};
            form = square_form<T>({at(-1), at(0), at(1), v});
            break;
        case PachnerKind::two_two:
            roles.roles = {{at(0), Role::e}, {at(1), Role::e}, {at(2), Role::e}, {at(3), Role::e}};
            form = simplex_form<T>({at(0), at(1), at(2), at(3)});
            break;
    }
    return make_move(move_kind(kind), std::move(roles), std::move(form), std::nullopt, name);
}

// ---- scenario files ---------------------------------------------------------

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& source, const std::string& field, const std::string& msg) {
    throw ScenarioError(source + ": " + (field.empty() ? "" : field + ": ") + msg);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& source,
                const std::string& where) {
    if (!obj.is_object()) fail(source, where, "expected an object");
    for (const auto& [k, _] : obj.items())
        if (!allowed.count(k)) fail(source, where, "unknown field '" + k + "'");
}

std::size_t count_field(const json& obj, const char* key, const std::string& source, const std::string& where) {
    if (!obj.contains(key)) fail(source, where, std::string("missing field '") + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        fail(source, where + "." + key, "expected a non-negative integer");
    return v.get<std::size_t>();
}

Rational scalar_field(const json& v, const std::string& source, const std::string& where) {
    try {
        if (v.is_string()) return ScalarTraits<Rational>::parse(v.get<std::string>());
        if (v.is_number()) return ScalarTraits<Rational>::parse(v.dump());
    } catch (const Error& e) {
        fail(source, where, e.what());
    }
    fail(source, where, "expected a number or a \"p/q\" string");
}

std::vector<Rational> vector_field(const json& v, const std::string& source, const std::string& where) {
    if (!v.is_array()) fail(source, where, "expected an array");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(scalar_field(v[i], source, where + "[" + std::to_string(i) + "]"));
    return out;
}

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(source + ": parse error at " + line_col(text, e.byte) + ": " + e.what());
    }
    check_keys(doc, {"name", "mode", "tolerance", "slabs", "surface", "moves", "queries", "initial", "lambdas"}, source,
               "");
    Scenario sc;
    sc.name = doc.value("name", source);
    if (doc.contains("mode")) {
        if (!doc["mode"].is_string()) fail(source, "mode", "expected \"exact\" or \"float\"");
        try {
            sc.mode = parse_mode(doc["mode"].get<std::string>());
        } catch (const Error& e) {
            fail(source, "mode", e.what());
        }
    }
    if (doc.contains("tolerance")) {
        if (!doc["tolerance"].is_number() || doc["tolerance"].get<double>() <= 0)
            fail(source, "tolerance", "expected a positive number");
        sc.tolerance = doc["tolerance"].get<double>();
    }
    if (doc.contains("slabs")) {
        if (!doc["slabs"].is_array()) fail(source, "slabs", "expected an array");
        for (std::size_t k = 0; k < doc["slabs"].size(); ++k) {
            const auto& s = doc["slabs"][k];
            std::string where = "slabs[" + std::to_string(k) + "]";
            check_keys(s, {"q_prev", "q_next", "adjacency"}, source, where);
            SlabSpec spec;
            spec.q_prev = count_field(s, "q_prev", source, where);
            spec.q_next = count_field(s, "q_next", source, where);
            if (!s.contains("adjacency") || !s["adjacency"].is_array())
                fail(source, where + ".adjacency", "expected an array of rows");
            for (const auto& row : s["adjacency"]) {
                if (!row.is_array()) fail(source, where + ".adjacency", "expected an array of rows");
                std::vector<int> r;
                for (const auto& e : row) {
                    if (!e.is_number_integer()) fail(source, where + ".adjacency", "adjacency entries must be 0, 1 or 2");
                    r.push_back(e.get<int>());
                }
                spec.adjacency.push_back(std::move(r));
            }
            try {
                spec.validate();
            } catch (const ScenarioError& e) {
                fail(source, where, e.what());
            }
            if (!sc.slabs.empty() && sc.slabs.back().q_next != spec.q_prev)
                fail(source, where,
                     "q_prev = " + std::to_string(spec.q_prev) + " does not match q_next = " +
                         std::to_string(sc.slabs.back().q_next) + " of slab " + std::to_string(k - 1) + " at slice " +
                         std::to_string(k));
            sc.slabs.push_back(std::move(spec));
        }
    }
    if (doc.contains("surface")) {
        check_keys(doc["surface"], {"size"}, source, "surface");
        sc.surface_size = count_field(doc["surface"], "size", source, "surface");
    }
    if (doc.contains("moves")) {
        if (!doc["moves"].is_array()) fail(source, "moves", "expected an array");
        if (!doc["moves"].empty() && sc.surface_size == 0) fail(source, "moves", "local moves need a surface");
        std::vector<std::string> surface;
        for (std::size_t i = 1; i <= sc.surface_size; ++i) surface.push_back("s" + std::to_string(i));
        std::vector<std::string> used = surface;
        for (std::size_t k = 0; k < doc["moves"].size(); ++k) {
            const auto& m = doc["moves"][k];
            std::string where = "moves[" + std::to_string(k) + "]";
            check_keys(m, {"kind", "position", "label", "lambda"}, source, where);
            if (!m.contains("kind") || !m["kind"].is_string()) fail(source, where, "missing field 'kind'");
            ScenarioMove mv;
            try {
                mv.kind = parse_pachner_kind(m["kind"].get<std::string>());
            } catch (const ScenarioError& e) {
                fail(source, where + ".kind", e.what());
            }
            mv.position = count_field(m, "position", source, where);
            bool adds = mv.kind == PachnerKind::one_two || mv.kind == PachnerKind::square;
            if (m.contains("label")) {
                if (!adds) fail(source, where + ".label", "only 1-2 and square moves introduce a vertex");
                if (!m["label"].is_string()) fail(source, where + ".label", "expected a string");
                mv.label = m["label"].get<std::string>();
                for (const auto& u : used)
                    if (u == mv.label) fail(source, where + ".label", "label '" + mv.label + "' is already in use");
            } else if (adds) {
                mv.label = fresh_label(used);
            }
            if (m.contains("lambda")) mv.lambda = vector_field(m["lambda"], source, where + ".lambda");
            try {
                surface = next_surface(mv.kind, surface, mv.position, mv.label);
            } catch (const Error& e) {
                fail(source, where, e.what());
            }
            if (adds) used.push_back(mv.label);
            sc.moves.push_back(std::move(mv));
        }
    }
    if (sc.slabs.empty() && sc.moves.empty()) fail(source, "", "schedule must contain at least one move");

    if (doc.contains("queries")) {
        const auto& q = doc["queries"];
        check_keys(q, {"dof", "reduced"}, source, "queries");
        const std::size_t last = sc.slabs.size();
        if (q.contains("dof")) {
            if (!q["dof"].is_array()) fail(source, "queries.dof", "expected an array");
            for (std::size_t k = 0; k < q["dof"].size(); ++k) {
                std::string where = "queries.dof[" + std::to_string(k) + "]";
                check_keys(q["dof"][k], {"i", "f"}, source, where);
                DofQuery d{count_field(q["dof"][k], "i", source, where), count_field(q["dof"][k], "f", source, where)};
                if (d.i >= d.f || d.f > last) fail(source, where, "need 0 <= i < f <= " + std::to_string(last));
                sc.dof.push_back(d);
            }
        }
        if (q.contains("reduced")) {
            if (!q["reduced"].is_array()) fail(source, "queries.reduced", "expected an array");
            for (std::size_t k = 0; k < q["reduced"].size(); ++k) {
                std::string where = "queries.reduced[" + std::to_string(k) + "]";
                const auto& e = q["reduced"][k];
                check_keys(e, {"i", "n", "f"}, source, where);
                ReducedQuery r{count_field(e, "i", source, where), count_field(e, "n", source, where),
                               count_field(e, "f", source, where)};
                if (!(r.i < r.n && r.n < r.f) || r.f > last)
                    fail(source, where, "need 0 <= i < n < f <= " + std::to_string(last));
                sc.reduced.push_back(r);
            }
        }
    }
    if (doc.contains("initial")) {
        const auto& ini = doc["initial"];
        check_keys(ini, {"x", "p"}, source, "initial");
        const std::size_t q = sc.slabs.empty() ? sc.surface_size : sc.slabs.front().q_prev;
        if (ini.contains("x")) sc.initial_x = vector_field(ini["x"], source, "initial.x");
        if (ini.contains("p")) sc.initial_p = vector_field(ini["p"], source, "initial.p");
        for (const auto* v : {&sc.initial_x, &sc.initial_p})
            if (*v && (*v)->size() != q)
                fail(source, "initial", "expected " + std::to_string(q) + " values per vector, got " +
                                            std::to_string((*v)->size()));
    }
    if (doc.contains("lambdas")) {
        const auto& l = doc["lambdas"];
        if (!l.is_array()) fail(source, "lambdas", "expected an array with one entry per slab");
        if (l.size() > sc.slabs.size()) fail(source, "lambdas", "more entries than slabs");
        for (std::size_t k = 0; k < l.size(); ++k) {
            if (l[k].is_null())
                sc.lambdas.emplace_back(std::nullopt);
            else
                sc.lambdas.emplace_back(vector_field(l[k], source, "lambdas[" + std::to_string(k) + "]"));
        }
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    auto sc = parse_scenario(buf.str(), path);
    if (sc.name == path) {
        auto slash = path.find_last_of('/');
        std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
        auto dot = stem.rfind('.');
        sc.name = dot == std::string::npos ? stem : stem.substr(0, dot);
    }
    return sc;
}

template <>
Rational convert_scalar<Rational>(const Rational& v) {
    return v;
}

template <>
double convert_scalar<double>(const Rational& v) {
    return v.get_d();
}

template <class T>
Schedule<T> build_schedule(const Scenario& scenario) {
    if (scenario.slabs.empty()) throw ScenarioError(scenario.name + ": scenario has no slabs");
    std::vector<QuadraticAction<T>> moves;
    for (std::size_t k = 0; k < scenario.slabs.size(); ++k)
        moves.push_back(cdt_slab_action<T>(scenario.slabs[k], std::to_string(k), std::to_string(k + 1)));
    return Schedule<T>(std::move(moves));
}

template <class T>
SurfaceRun<T> run_surface(const Scenario& scenario, bool strict) {
    if (scenario.moves.empty()) throw ScenarioError(scenario.name + ": scenario has no local moves");
    SurfaceRun<T> run;
    for (std::size_t i = 1; i <= scenario.surface_size; ++i) run.initial_surface.push_back("s" + std::to_string(i));
    const std::size_t q = run.initial_surface.size();
    Vector<T> x = zeros<T>(q), p = zeros<T>(q);
    if (scenario.slabs.empty()) {
        if (scenario.initial_x)
            for (std::size_t i = 0; i < q; ++i) x[i] = convert_scalar<T>((*scenario.initial_x)[i]);
        if (scenario.initial_p)
            for (std::size_t i = 0; i < q; ++i) p[i] = convert_scalar<T>((*scenario.initial_p)[i]);
    }
    run.initial = initial_state(run.initial_surface, x, p);
    auto state = run.initial;
    auto surface = run.initial_surface;
    std::size_t previous = state.post.size();
    for (std::size_t k = 0; k < scenario.moves.size(); ++k) {
        const auto& m = scenario.moves[k];
        SurfaceStep<T> st;
        st.index = k;
        st.kind = m.kind;
        st.position = m.position;
        st.move = pachner_move<T>(m.kind, surface, m.position, m.label);
        std::optional<Vector<T>> lambda;
        if (m.lambda) {
            Vector<T> l;
            for (const auto& v : *m.lambda) l.push_back(convert_scalar<T>(v));
            lambda = std::move(l);
        }
        auto res = momentum_update(st.move, state, lambda, strict);
        state = std::move(res.state);
        surface = next_surface(m.kind, surface, m.position, m.label);
        st.surface = surface;
        st.post_count = state.post.size();
        st.extension_count = state.extension_count();
        st.emitted = std::move(res.emitted);
        if (st.post_count < previous) run.monotone = false;
        previous = st.post_count;
        run.steps.push_back(std::move(st));
    }
    run.final_state = std::move(state);
    return run;
}

#define DISEVO_INSTANTIATE_MODELS(T)                                                                          \
    template QuadraticForm<T> simplex_form<T>(const std::vector<std::string>&);                               \
    template QuadraticForm<T> square_form<T>(const std::vector<std::string>&);                                \
    template QuadraticAction<T> triangle_action<T>();                                                         \
    template QuadraticAction<T> triangle_action<T>(const Slice&, const Slice&);                              \
    template QuadraticAction<T> cdt_slab_action<T>(const SlabSpec&, const std::string&, const std::string&);  \
    template MoveSpec<T> pachner_move<T>(PachnerKind, const std::vector<std::string>&, std::size_t,          \
                                         const std::string&);                                                 \
    template Schedule<T> build_schedule<T>(const Scenario&);                                                  \
    template SurfaceRun<T> run_surface<T>(const Scenario&, bool);

DISEVO_INSTANTIATE_MODELS(Rational)
DISEVO_INSTANTIATE_MODELS(double)

}  // namespace disevo
