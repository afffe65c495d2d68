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

#include "disevo/counting.hpp"

namespace disevo {

namespace {

template <class T>
void check_window(const Schedule<T>& schedule, std::size_t i, std::size_t f) {
    if (i >= f || f > schedule.moves())
        throw DimensionError("slice window " + std::to_string(i) + ".." + std::to_string(f) +
                             " is not valid for a schedule with " + std::to_string(schedule.slices()) + " slices");
}

template <class T>
EffectiveAction<T> trivial_effective(const QuadraticAction<T>& s) {
    EffectiveAction<T> e;
    e.action = s;
    return e;
}

}  // namespace

template <class T>
EffectiveAction<T> effective_range(const Schedule<T>& schedule, std::size_t i, std::size_t f) {
    check_window(schedule, i, f);
    auto acc = trivial_effective(schedule.move(i));
    for (std::size_t m = i + 1; m < f; ++m) {
        auto next = effective_action(acc.action, schedule.move(m));
        if (!next.consistent)
            throw InconsistentDynamics("boundary data constraints cannot be satisfied at slice '" +
                                           schedule.slice(m).step + "'",
                                       schedule.slice(m).step);
        acc = std::move(next);
    }
    return acc;
}

template <class T>
DofCount propagating_count(const Schedule<T>& schedule, std::size_t i, std::size_t f) {
    auto eff = effective_range(schedule, i, f);
    const auto& s = eff.action;
    DofCount d;
    d.pre_constraints = pre_constraints(s).size();
    d.post_constraints = post_constraints(s).size();
    d.multipliers = s.next.multiplier_count();
    d.via_initial = 2 * s.prev.dim() - 2 * d.pre_constraints;
    d.via_final = 2 * s.next.dim() - 2 * d.post_constraints;
    if (d.via_initial != d.via_final)
        throw VerificationFailed("counting formulas disagree for slices " + std::to_string(i) + ".." +
                                 std::to_string(f) + ": " + std::to_string(d.via_initial) + " vs " +
                                 std::to_string(d.via_final));
    d.value = d.via_initial;
    return d;
}

template <class T>
ReducedDimension reduced_dimension(const Schedule<T>& schedule, std::size_t i, std::size_t n, std::size_t f) {
    if (!(i < n && n < f)) throw DimensionError("reduced_dimension needs i < n < f");
    check_window(schedule, i, f);
    auto in = effective_range(schedule, i, n);
    auto out = effective_range(schedule, n, f);

    // The incoming move may carry multipliers on slice n; the outgoing move
    // does not see them, so they enter its pre side as extension pairs.
    const Slice& ext = in.action.next;
    auto post = post_constraints(in.action);
    auto pre_small = pre_constraints(align_prev(out.action, schedule.slice(n)));
    ConstraintSet<T> pre{ext, {}};
    const std::size_t q = ext.dim();
    for (const auto& c : pre_small) {
        AffineConstraint<T> e = c;
        e.slice = ext;
        e.gx = zeros<T>(q);
        e.gp = zeros<T>(q);
        for (std::size_t k = 0; k < c.slice.dim(); ++k) {
            auto j = *ext.index_of(c.slice.labels[k]);
            e.gx[j] = c.gx[k];
            e.gp[j] = c.gp[k];
        }
        pre.constraints.push_back(std::move(e));
    }
    for (std::size_t j = 0; j < q; ++j) {
        if (!ext.is_multiplier(j)) continue;
        AffineConstraint<T> e;
        e.slice = ext;
        e.gx = zeros<T>(q);
        e.gp = unit<T>(q, j);
        e.tag = ConstraintTag::pre;
        e.provenance = Provenance::extension;
        e.origin = "multiplier " + ext.labels[j];
        pre.constraints.push_back(std::move(e));
    }
    auto merged = merge_constraints(pre, post);
    if (!merged.feasible)
        throw InconsistentDynamics("constraints cannot be simultaneously satisfied at slice '" + ext.step + "'",
                                   ext.step);
    auto cls = classify(merged.combined);
    ReducedDimension r;
    r.slice_dim = q;
    r.first_class = cls.first_class_count();
    r.second_class = cls.second_class_count();
    r.value = 2 * q - 2 * r.first_class - r.second_class;
    return r;
}

#define DISEVO_INSTANTIATE_COUNTING(T)                                                                  \
    template EffectiveAction<T> effective_range<T>(const Schedule<T>&, std::size_t, std::size_t);       \
    template DofCount propagating_count<T>(const Schedule<T>&, std::size_t, std::size_t);               \
    template ReducedDimension reduced_dimension<T>(const Schedule<T>&, std::size_t, std::size_t, std::size_t);

DISEVO_INSTANTIATE_COUNTING(Rational)
DISEVO_INSTANTIATE_COUNTING(double)

}  // namespace disevo
