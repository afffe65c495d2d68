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

#include "commands.hpp"

#include <cstdlib>
#include <functional>
#include <future>
#include <sstream>

#include "disevo/verify.hpp"
#include "report.hpp"

namespace disevo::cli {

Format parse_format(const std::string& text) {
    if (text == "json") return Format::json;
    if (text == "csv") return Format::csv;
    throw Error("unknown format '" + text + "' (expected json or csv)");
}

ArithmeticMode resolve_mode(const Options& options, std::optional<ArithmeticMode> scenario_mode) {
    if (const char* env = std::getenv("DISEVO_MODE"); env && *env) return parse_mode(env);
    if (options.mode) return *options.mode;
    return scenario_mode.value_or(ArithmeticMode::exact);
}

namespace {

using Row = std::vector<std::string>;

struct Result {
    int code = exit_ok;
    json doc;
    std::vector<Row> rows;
    std::string err;
};

struct Job {
    std::string path;
    Scenario scenario;
    ArithmeticMode mode = ArithmeticMode::exact;
    double tolerance = 1e-10;
};

std::string num(std::size_t v) { return std::to_string(v); }

template <class T>
std::string scalar_text(const T& v) {
    return ScalarTraits<T>::to_string(v);
}

json header(const Job& job) {
    return json{{"scenario", job.scenario.name}, {"mode", to_string(job.mode)}, {"tolerance", job.tolerance}};
}

template <class T>
std::optional<Vector<T>> converted(const std::optional<std::vector<Rational>>& v) {
    if (!v) return std::nullopt;
    Vector<T> out;
    for (const auto& e : *v) out.push_back(convert_scalar<T>(e));
    return out;
}

// ---- analyze ----------------------------------------------------------------

template <class T>
Result analyze_one(const Job& job, const Options& options) {
    Result r;
    r.doc = header(job);
    const auto& sc = job.scenario;
    if (!sc.slabs.empty()) {
        auto schedule = build_schedule<T>(sc);
        auto report = match_and_propagate(schedule);
        r.doc["constraints"] = constraint_report_json(report);
        for (std::size_t n = 0; n < report.slices.size(); ++n) {
            const auto& s = report.slices[n];
            r.rows.push_back({sc.name, "slice", num(n), s.slice.step, num(s.slice.dim()), num(s.pre.size()),
                              num(s.post.size()), num(s.first_class), num(s.second_class), "0", to_string(s.status)});
        }
        json counts = json::array();
        for (const auto& q : sc.dof) counts.push_back(dof_json(q.i, q.f, propagating_count(schedule, q.i, q.f)));
        r.doc["dof"] = std::move(counts);
        json reduced = json::array();
        for (const auto& q : sc.reduced)
            reduced.push_back(reduced_json(q.i, q.n, q.f, reduced_dimension(schedule, q.i, q.n, q.f)));
        r.doc["reduced"] = std::move(reduced);
    }
    if (!sc.moves.empty()) {
        auto run = run_surface<T>(sc, options.strict);
        r.doc["surface"] = surface_run_json(run);
        for (const auto& s : run.steps)
            r.rows.push_back({sc.name, "move", num(s.index), to_string(s.kind), num(s.surface.size()),
                              num(s.emitted.pre.size()), num(s.post_count), "", "", num(s.extension_count),
                              "type " + to_string(s.move.kind)});
        if (!run.monotone) {
            r.code = exit_verify_failed;
            r.err = sc.name + ": post-constraint count decreased along the move sequence";
        }
    }
    return r;
}

const Row analyze_header = {"scenario", "record",       "index",      "label",  "q",
                            "pre",      "post",         "first_class", "second_class", "extensions",
                            "status"};

// ---- evolve -----------------------------------------------------------------

template <class T>
Result evolve_one(const Job& job, const Options& options) {
    Result r;
    r.doc = header(job);
    const auto& sc = job.scenario;
    auto add_rows = [&](const std::string& record, std::size_t index, const std::string& step,
                        const std::vector<std::string>& labels, const Vector<T>& x, const Vector<T>& p) {
        for (std::size_t i = 0; i < labels.size(); ++i)
            r.rows.push_back({sc.name, record, num(index), step, labels[i], scalar_text(x[i]), scalar_text(p[i])});
    };
    if (!sc.slabs.empty()) {
        auto schedule = build_schedule<T>(sc);
        const Slice& first = schedule.slice(0);
        PhasePoint<T> pt{first, converted<T>(sc.initial_x).value_or(zeros<T>(first.dim())),
                         converted<T>(sc.initial_p).value_or(zeros<T>(first.dim())), MomentumTag::pre};
        json trace = json::array();
        trace.push_back(phase_point_json(pt));
        add_rows("slice", 0, pt.slice.step, pt.slice.labels, pt.x, pt.p);
        for (std::size_t k = 0; k < schedule.moves(); ++k) {
            const auto& s = schedule.move(k);
            std::optional<Vector<T>> lambda;
            if (k < sc.lambdas.size()) lambda = converted<T>(sc.lambdas[k]);
            const std::size_t nfree = evolution_map(s).free_directions.size();
            if (options.strict && nfree > 0 && !lambda)
                throw MissingParameter("move " + s.prev.step + "->" + s.next.step + " needs " + std::to_string(nfree) +
                                           " free parameter(s) and --strict forbids the default 0",
                                       nfree, 0);
            pt = forward_evolve<T>(s, pt, lambda);
            trace.push_back(phase_point_json(pt));
            add_rows("slice", k + 1, pt.slice.step, pt.slice.labels, pt.x, pt.p);
        }
        r.doc["trace"] = std::move(trace);
    }
    if (!sc.moves.empty()) {
        auto run = run_surface<T>(sc, options.strict);
        // Replay to record the state after every move.
        json trace = json::array();
        auto state = run.initial;
        trace.push_back(json{{"index", 0}, {"labels", state.slice.labels}, {"x", vector_json(state.x)},
                             {"p", vector_json(state.p)}});
        add_rows("move", 0, "initial", state.slice.labels, state.x, state.p);
        for (std::size_t k = 0; k < run.steps.size(); ++k) {
            std::optional<Vector<T>> lambda = converted<T>(sc.moves[k].lambda);
            state = momentum_update(run.steps[k].move, state, lambda, options.strict).state;
            trace.push_back(json{{"index", k + 1},
                                 {"kind", to_string(run.steps[k].kind)},
                                 {"labels", state.slice.labels},
                                 {"x", vector_json(state.x)},
                                 {"p", vector_json(state.p)}});
            add_rows("move", k + 1, to_string(run.steps[k].kind), state.slice.labels, state.x, state.p);
        }
        r.doc["surface_trace"] = std::move(trace);
    }
    return r;
}

const Row evolve_header = {"scenario", "record", "index", "step", "label", "x", "p"};

// ---- dof --------------------------------------------------------------------

template <class T>
Result dof_one(const Job& job, const Options& options) {
    Result r;
    r.doc = header(job);
    const auto& sc = job.scenario;
    if (sc.slabs.empty()) throw ScenarioError(sc.name + ": counting needs a schedule of slabs");
    auto schedule = build_schedule<T>(sc);
    const std::size_t last = schedule.moves();
    std::vector<DofQuery> dq;
    std::vector<ReducedQuery> rq;
    if (options.i || options.f || options.n) {
        std::size_t i = options.i.value_or(0), f = options.f.value_or(last);
        if (!(i < f && f <= last))
            throw ScenarioError("need 0 <= i < f <= " + std::to_string(last) + ", got i = " + std::to_string(i) +
                                ", f = " + std::to_string(f));
        dq.push_back({i, f});
        if (options.n) {
            if (!(i < *options.n && *options.n < f))
                throw ScenarioError("need i < n < f, got n = " + std::to_string(*options.n));
            rq.push_back({i, *options.n, f});
        }
    } else {
        dq = sc.dof;
        rq = sc.reduced;
        if (dq.empty() && rq.empty()) dq.push_back({0, last});
    }
    json counts = json::array(), reduced = json::array();
    for (const auto& q : dq) {
        auto c = propagating_count(schedule, q.i, q.f);
        counts.push_back(dof_json(q.i, q.f, c));
        r.rows.push_back({sc.name, "dof", num(q.i), "", num(q.f), num(c.value), num(c.via_initial), num(c.via_final),
                          "", "", ""});
    }
    for (const auto& q : rq) {
        auto d = reduced_dimension(schedule, q.i, q.n, q.f);
        reduced.push_back(reduced_json(q.i, q.n, q.f, d));
        r.rows.push_back({sc.name, "reduced", num(q.i), num(q.n), num(q.f), num(d.value), "", "", num(d.slice_dim),
                          num(d.first_class), num(d.second_class)});
    }
    r.doc["dof"] = std::move(counts);
    r.doc["reduced"] = std::move(reduced);
    return r;
}

const Row dof_header = {"scenario",  "record",    "i",         "n",           "f",           "value",
                        "via_initial", "via_final", "slice_dim", "first_class", "second_class"};

// ---- driver -----------------------------------------------------------------

using Runner = std::function<Result(const Job&, const Options&)>;

Result failure(const Job& job, int code, const std::string& kind, const std::string& message, json extra = {}) {
    Result r;
    r.code = code;
    r.doc = header(job);
    json e{{"code", code}, {"kind", kind}, {"message", message}};
    if (!extra.is_null())
        for (auto& [k, v] : extra.items()) e[k] = v;
    r.doc["error"] = std::move(e);
    r.err = job.scenario.name + ": " + message;
    return r;
}

Result guarded(const Job& job, const Options& options, const Runner& run) {
    try {
        return run(job, options);
    } catch (const InconsistentDynamics& e) {
        return failure(job, exit_inconsistent, "inconsistent", std::string(e.what()) + " (slice " + e.slice() + ")",
                       json{{"slice", e.slice()}});
    } catch (const OffConstraintSurface& e) {
        std::string msg = e.what();
        for (const auto& res : e.residuals()) msg += "\n  violated: " + res;
        return failure(job, exit_off_surface, "off-surface", msg, json{{"residuals", e.residuals()}});
    } catch (const MissingParameter& e) {
        return failure(job, exit_missing_parameter, "missing-parameter", e.what(),
                       json{{"expected", e.expected()}, {"given", e.given()}});
    } catch (const VerificationFailed& e) {
        return failure(job, exit_verify_failed, "verification", e.what());
    } catch (const Error& e) {
        return failure(job, exit_usage, "usage", e.what());
    }
}

std::string render(const std::vector<Result>& results, const Row& head, Format format) {
    std::ostringstream out;
    if (format == Format::json) {
        if (results.size() == 1) {
            out << results.front().doc.dump(2) << "\n";
        } else {
            json all = json::array();
            for (const auto& r : results) all.push_back(r.doc);
            out << all.dump(2) << "\n";
        }
        return out.str();
    }
    auto line = [&](const Row& row) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
        out << "\n";
    };
    line(head);
    for (const auto& r : results)
        for (const auto& row : r.rows) line(row);
    return out.str();
}

Outcome drive(const std::vector<std::string>& paths, const Options& options, const Runner& exact,
              const Runner& floating, const Row& head) {
    Outcome outcome;
    std::vector<Job> jobs;
    for (const auto& path : paths) {
        Job job;
        job.path = path;
        try {
            job.scenario = load_scenario(path);
            job.mode = resolve_mode(options, job.scenario.mode);
        } catch (const Error& e) {
            outcome.code = exit_usage;
            outcome.err += std::string(e.what()) + "\n";
            return outcome;
        }
        job.tolerance = options.tolerance.value_or(job.scenario.tolerance.value_or(1e-10));
        jobs.push_back(std::move(job));
    }
    // The rank tolerance is process wide, so scenarios run concurrently only
    // when they agree on it.
    bool shared = true;
    for (const auto& j : jobs) shared &= j.tolerance == jobs.front().tolerance;
    auto run = [&](const Job& j) {
        set_tolerance(j.tolerance);
        return guarded(j, options, j.mode == ArithmeticMode::exact ? exact : floating);
    };
    std::vector<Result> results;
    if (shared && jobs.size() > 1) {
        set_tolerance(jobs.front().tolerance);
        std::vector<std::future<Result>> futures;
        for (const auto& j : jobs)
            futures.push_back(std::async(std::launch::async, [&, jp = &j] {
                return guarded(*jp, options, jp->mode == ArithmeticMode::exact ? exact : floating);
            }));
        for (auto& f : futures) results.push_back(f.get());
    } else {
        for (const auto& j : jobs) results.push_back(run(j));
    }
    for (const auto& r : results) {
        if (outcome.code == exit_ok) outcome.code = r.code;
        if (!r.err.empty()) outcome.err += r.err + "\n";
    }
    outcome.out = render(results, head, options.format);
    return outcome;
}

}  // namespace

Outcome analyze(const std::vector<std::string>& paths, const Options& options) {
    return drive(paths, options, analyze_one<Rational>, analyze_one<double>, analyze_header);
}

Outcome evolve(const std::vector<std::string>& paths, const Options& options) {
    return drive(paths, options, evolve_one<Rational>, evolve_one<double>, evolve_header);
}

Outcome dof(const std::vector<std::string>& paths, const Options& options) {
    return drive(paths, options, dof_one<Rational>, dof_one<double>, dof_header);
}

Outcome verify(const Options& options) {
    Outcome outcome;
    ArithmeticMode mode;
    try {
        mode = resolve_mode(options, std::nullopt);
    } catch (const Error& e) {
        outcome.code = exit_usage;
        outcome.err = std::string(e.what()) + "\n";
        return outcome;
    }
    set_tolerance(options.tolerance.value_or(1e-10));
    std::vector<std::string> names = options.suites.empty() ? suite_names() : options.suites;
    for (const auto& n : names) {
        bool known = false;
        for (const auto& s : suite_names()) known |= s == n;
        if (!known) {
            outcome.code = exit_usage;
            std::string list;
            for (const auto& s : suite_names()) list += (list.empty() ? "" : ", ") + s;
            outcome.err = "unknown suite '" + n + "' (available: " + list + ")\n";
            return outcome;
        }
    }
    VerifyOptions vo;
    vo.seed = options.seed;
    vo.count = options.count;
    json suites = json::array();
    std::vector<Row> rows;
    for (const auto& n : names) {
        auto res = mode == ArithmeticMode::exact ? run_suite<Rational>(n, vo) : run_suite<double>(n, vo);
        suites.push_back(json{{"suite", res.name},
                              {"invariant", res.invariant},
                              {"cases", res.cases},
                              {"failures", res.failures},
                              {"passed", res.passed()},
                              {"messages", res.messages}});
        rows.push_back({res.name, num(res.cases), num(res.failures), res.passed() ? "pass" : "fail"});
        if (!res.passed()) {
            outcome.code = exit_verify_failed;
            outcome.err += "suite " + res.name + " failed " + num(res.failures) + " of " + num(res.cases) +
                           " cases; violated invariant: " + res.invariant + "\n";
            for (const auto& m : res.messages) outcome.err += "  " + m + "\n";
        }
    }
    if (options.format == Format::json) {
        json doc{{"mode", to_string(mode)}, {"seed", options.seed}, {"count", options.count}, {"suites", suites}};
        outcome.out = doc.dump(2) + "\n";
    } else {
        std::ostringstream out;
        out << "suite,cases,failures,status\n";
        for (const auto& row : rows) out << row[0] << "," << row[1] << "," << row[2] << "," << row[3] << "\n";
        outcome.out = out.str();
    }
    return outcome;
}

}  // namespace disevo::cli
