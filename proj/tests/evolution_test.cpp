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

#include "disevo/random.hpp"
#include "test_util.hpp"

namespace disevo::testing {
namespace {

std::size_t count_with(const ConstraintSet<Q>& set, Provenance prov) {
    std::size_t n = 0;
    for (const auto& c : set) n += c.provenance == prov ? 1 : 0;
    return n;
}

TEST(Evolution, ExampleAConstraintPlacement) {
    auto rep = match_and_propagate(example_a());
    ASSERT_EQ(rep.slices.size(), 3u);
    EXPECT_EQ(rep.slices[0].pre.size(), 1u);
    EXPECT_EQ(count_with(rep.slices[0].pre, Provenance::secondary), 1u);
    EXPECT_EQ(rep.slices[1].pre.size(), 1u);
    EXPECT_EQ(count_with(rep.slices[1].pre, Provenance::primary), 1u);
    for (const auto& s : rep.slices) EXPECT_TRUE(s.post.empty());
    EXPECT_TRUE(rep.slices[2].pre.empty());
    EXPECT_EQ(describe(rep.slices[0].pre[0]), "p[0:1] - p[0:3] + 10/3*x[0:1] - 10/3*x[0:3] = 0");
    EXPECT_EQ(describe(rep.slices[1].pre[0]), "p[1:2] - p[1:3] + 5/2*x[1:2] - 5/2*x[1:3] = 0");
}

TEST(Evolution, ExampleBConstraintPlacement) {
    auto rep = match_and_propagate(example_b());
    EXPECT_TRUE(rep.slices[0].pre.empty() && rep.slices[0].post.empty());
    EXPECT_TRUE(rep.slices[2].pre.empty() && rep.slices[2].post.empty());
    EXPECT_EQ(rep.slices[1].pre.size(), 1u);
    EXPECT_EQ(rep.slices[1].post.size(), 1u);
    EXPECT_EQ(rep.slices[1].second_class, 2u);
    EXPECT_EQ(rep.slices[1].status, SliceStatus::fixes_parameters);
}

TEST(Evolution, ExampleCConstraintPlacement) {
    auto rep = match_and_propagate(example_c());
    EXPECT_EQ(rep.slices[0].pre.size(), 1u);
    EXPECT_TRUE(rep.slices[0].post.empty());
    EXPECT_TRUE(rep.slices[1].pre.empty() && rep.slices[1].post.empty());
    EXPECT_TRUE(rep.slices[2].pre.empty());
    EXPECT_EQ(rep.slices[2].post.size(), 1u);
}

TEST(Evolution, NoBoundaryChainIsTotallyConstrained) {
    auto sch = no_boundary_chain();
    auto rep = match_and_propagate(sch);
    for (std::size_t n = 1; n < rep.slices.size(); ++n)
        EXPECT_EQ(rep.slices[n].post.size(), sch.slice(n).dim()) << "slice " << n;
}

TEST(Evolution, InconsistentScheduleNamesTheSlice) {
    // S1 = x_b forces p_b = 1 after the move; S2 = 0 forces p_b = 0 before the next.
    ActionBlocks<Q> b1{Matrix<Q>{{0}}, Matrix<Q>{{0}}, Matrix<Q>{{0}}, qv({0}), qv({1}), 0};
    auto s1 = build_action(Slice("0", {"a"}), Slice("1", {"b"}), b1);
    auto s2 = zero_action<Q>(Slice("1", {"b"}), Slice("2", {"c"}));
    try {
        match_and_propagate(Schedule<Q>({s1, s2}));
        FAIL() << "expected InconsistentDynamics";
    } catch (const InconsistentDynamics& e) {
        EXPECT_FALSE(e.slice().empty());
    }
}

TEST(Evolution, MismatchedScheduleIsRejected) {
    auto s1 = cdt_slab_action<Q>(slab_32(), "0", "1");
    auto s2 = cdt_slab_action<Q>(slab_a1(), "1", "2");
    EXPECT_THROW(Schedule<Q>({s1, s2}), Error);
}

TEST(Evolution, ZeroDataEvolvesToZero) {
    auto s = cdt_slab_action<Q>(slab_23());
    PhasePoint<Q> pt{s.prev, qv({0, 0}), qv({0, 0}), MomentumTag::pre};
    auto out = forward_evolve<Q>(s, pt, Vector<Q>{0});
    EXPECT_EQ(out.x, qv({0, 0, 0}));
    EXPECT_EQ(out.p, qv({0, 0, 0}));
}

TEST(Evolution, ConstantFieldOnTheTwoToThreeSlab) {
    auto s = cdt_slab_action<Q>(slab_23());
    PhasePoint<Q> pt{s.prev, qv({1, 1}), pre_legendre(s, qv({1, 1}), qv({1, 1, 1})).p, MomentumTag::pre};
    EXPECT_EQ(pt.p, qv({0, 0}));
    auto out = forward_evolve<Q>(s, pt, std::nullopt);
    EXPECT_EQ(out.x[1], out.x[2]);
    EXPECT_EQ(out.x, qv({1, 1, 1}));
    EXPECT_EQ(out.p, qv({0, 0, 0}));
    // λ moves along the right-null direction (0, 1, -1).
    auto moved = forward_evolve<Q>(s, pt, Vector<Q>{2});
    EXPECT_EQ(moved.x, qv({1, 3, -1}));
    EXPECT_EQ(evolution_map(s).free_directions.size(), 1u);
}

TEST(Evolution, RegularSlabAcceptsNoParameters) {
    auto s = cdt_slab_action<Q>(slab_a1());
    PhasePoint<Q> pt{s.prev, qv({1, 2, 3}), qv({0, 1, 0}), MomentumTag::pre};
    EXPECT_NO_THROW(forward_evolve<Q>(s, pt, std::nullopt));
    EXPECT_THROW(forward_evolve<Q>(s, pt, Vector<Q>{1}), MissingParameter);
    EXPECT_TRUE(evolution_map(s).free_directions.empty());
}

TEST(Evolution, OffSurfaceDataReportResiduals) {
    auto s = cdt_slab_action<Q>(slab_32());
    PhasePoint<Q> pt{s.prev, qv({0, 0, 0}), qv({0, 1, 0}), MomentumTag::pre};
    try {
        forward_evolve<Q>(s, pt, std::nullopt);
        FAIL() << "expected OffConstraintSurface";
    } catch (const OffConstraintSurface& e) {
        ASSERT_EQ(e.residuals().size(), 1u);
    }
    PhasePoint<Q> back{cdt_slab_action<Q>(slab_23()).next, qv({0, 0, 0}), qv({0, 1, 0}), MomentumTag::post};
    EXPECT_THROW(backward_evolve<Q>(cdt_slab_action<Q>(slab_23()), back, std::nullopt), OffConstraintSurface);
}

TEST(Evolution, BackwardUndoesForwardUpToFreeDirections) {
    RandomSource rng(41);
    for (int t = 0; t < 40; ++t) {
        auto s = random_action<Q>(rng, numbered_slice("0", rng.index(1, 4)), numbered_slice("1", rng.index(1, 4)));
        auto x = rng.vector<Q>(s.prev.dim());
        PhasePoint<Q> pt = pre_legendre(s, x, rng.vector<Q>(s.next.dim()));
        auto fwd = forward_evolve<Q>(s, pt, rng.vector<Q>(post_constraints(s).size()));
        auto back = backward_evolve<Q>(s, fwd, rng.vector<Q>(pre_constraints(s).size()));
        // x differs by a left-null direction of B, and the result is again on the pre surface.
        auto left = rank_nullspace(s.B).left_null;
        EXPECT_TRUE(in_span(left, back.x - pt.x));
        EXPECT_TRUE(violated(pre_constraints(s), back.x, back.p).empty());
        // Pre-observables cannot tell the two apart.
        for (const auto& o : observable_basis(pre_constraints(s)))
            EXPECT_EQ(dot(o.gx, back.x) + dot(o.gp, back.p), dot(o.gx, pt.x) + dot(o.gp, pt.p));
    }
}

TEST(Evolution, ExampleAEffectivePreConstraintMatchesSecondary) {
    auto sch = example_a();
    auto eff = effective_action(sch.move(0), sch.move(1));
    EXPECT_TRUE(eff.consistent);
    auto pre = pre_constraints(eff.action);
    ASSERT_EQ(pre.size(), 1u);
    auto rep = match_and_propagate(sch);
    EXPECT_TRUE(same_span<Q>(pre.rows(), rep.slices[0].pre.rows(), 7));
}

TEST(Evolution, ExampleBEffectiveMoveIsRegular) {
    auto sch = example_b();
    auto eff = effective_action(sch.move(0), sch.move(1));
    EXPECT_TRUE(eff.hessian_invertible());
    EXPECT_TRUE(eff.multiplier_labels.empty());
    EXPECT_EQ(rank(lagrangian_two_form(eff.action)), 2u);
    EXPECT_TRUE(pre_constraints(eff.action).empty());
    EXPECT_TRUE(post_constraints(eff.action).empty());
}

TEST(Evolution, ZeroMiddleCouplingLeavesBoundaryParts) {
    ActionBlocks<Q> b1{Matrix<Q>{{2}}, Matrix<Q>{{0, 0}}, Matrix<Q>{{1, 0}, {0, 1}}, qv({0}), qv({0, 0}), 0};
    ActionBlocks<Q> b2{Matrix<Q>{{1, 0}, {0, 3}}, Matrix<Q>{{0}, {0}}, Matrix<Q>{{5}}, qv({0, 0}), qv({0}), 0};
    auto s1 = build_action(Slice("0", {"a"}), Slice("1", {"m1", "m2"}), b1);
    auto s2 = build_action(Slice("1", {"m1", "m2"}), Slice("2", {"z"}), b2);
    auto eff = effective_action(s1, s2);
    EXPECT_EQ(eff.action.A, (Matrix<Q>{{2}}));
    EXPECT_EQ(eff.action.B, (Matrix<Q>{{0}}));
    EXPECT_EQ(eff.action.C, (Matrix<Q>{{5}}));
}

TEST(Evolution, EffectiveTwoFormIsTheSchurComplement) {
    RandomSource rng(43);
    int checked = 0;
    for (int t = 0; t < 40; ++t) {
        auto s1 = random_action<Q>(rng, numbered_slice("0", rng.index(1, 3)), numbered_slice("1", rng.index(1, 3)));
        auto s2 = random_action<Q>(rng, s1.next, numbered_slice("2", rng.index(1, 3)));
        auto eff = effective_action(s1, s2);
        if (!eff.hessian_invertible()) continue;
        ++checked;
        Matrix<Q> expected = -(s1.B * inverse(hessian_at(s1, s2)) * s2.B);
        EXPECT_EQ(eff.action.B, expected);
    }
    EXPECT_GT(checked, 10);
}

TEST(Evolution, EffectiveValueIsTheExtremalValue) {
    RandomSource rng(47);
    for (int t = 0; t < 30; ++t) {
        auto s1 = random_action<Q>(rng, numbered_slice("0", 2), numbered_slice("1", 2));
        auto s2 = random_action<Q>(rng, s1.next, numbered_slice("2", 2));
        auto eff = effective_action(s1, s2);
        if (!eff.hessian_invertible()) continue;
        auto x = rng.vector<Q>(2), z = rng.vector<Q>(2);
        auto y = eff.bulk_map * concat(x, z) + eff.bulk_offset;
        EXPECT_EQ(evaluate(eff.action, x, z), evaluate(s1, x, y) + evaluate(s2, y, z));
    }
}

TEST(Evolution, OrderingIndependence) {
    RandomSource rng(53);
    int checked = 0;
    for (int t = 0; t < 40; ++t) {
        auto s1 = random_action<Q>(rng, numbered_slice("0", 2), numbered_slice("1", 2));
        auto s2 = random_action<Q>(rng, s1.next, numbered_slice("2", 2));
        auto s3 = random_action<Q>(rng, s2.next, numbered_slice("3", 2));
        auto e12 = effective_action(s1, s2), e23 = effective_action(s2, s3);
        if (!e12.hessian_invertible() || !e23.hessian_invertible()) continue;
        auto left = effective_action(e12.action, s3), right = effective_action(s1, e23.action);
        if (!left.hessian_invertible() || !right.hessian_invertible()) continue;
        ++checked;
        EXPECT_EQ(left.action.A, right.action.A);
        EXPECT_EQ(left.action.B, right.action.B);
        EXPECT_EQ(left.action.C, right.action.C);
        EXPECT_EQ(left.action.a, right.action.a);
        EXPECT_EQ(left.action.c, right.action.c);
        EXPECT_EQ(left.action.s0, right.action.s0);
    }
    EXPECT_GT(checked, 10);
}

TEST(Evolution, ConstraintCountsNeverShrinkAsTheScheduleGrows) {
    auto one = match_and_propagate(schedule_of({slab_a1()}));
    auto two = match_and_propagate(example_a());
    for (std::size_t n = 0; n < one.slices.size(); ++n) {
        EXPECT_LE(one.slices[n].pre.size() + one.slices[n].post.size(),
                  two.slices[n].pre.size() + two.slices[n].post.size());
    }
}

TEST(Evolution, FloatModeAgreesOnTheExamples) {
    auto exact = match_and_propagate(example_a<Q>());
    auto flt = match_and_propagate(example_a<double>());
    ASSERT_EQ(exact.slices.size(), flt.slices.size());
    for (std::size_t n = 0; n < exact.slices.size(); ++n) {
        EXPECT_EQ(exact.slices[n].pre.size(), flt.slices[n].pre.size());
        EXPECT_EQ(exact.slices[n].post.size(), flt.slices[n].post.size());
    }
    EXPECT_NEAR(flt.slices[0].pre[0].gx[0], 10.0 / 3.0, 1e-9);
}

}  // namespace
}  // namespace disevo::testing
