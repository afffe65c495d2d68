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

TEST(Legendre, TwoFormEqualsAdjacency) {
    EXPECT_EQ(lagrangian_two_form(cdt_slab_action<Q>(slab_23())), (Matrix<Q>{{1, 0, 0}, {2, 1, 1}}));
    EXPECT_TRUE(lagrangian_two_form(zero_action<Q>(numbered_slice("0", 2), numbered_slice("1", 2))).is_zero());
    EXPECT_EQ(rank(lagrangian_two_form(cdt_slab_action<Q>(slab_a1()))), 3u);
}

TEST(Legendre, PostMomentaOfTheTwoToThreeSlab) {
    auto s = cdt_slab_action<Q>(slab_23());
    auto pt = post_legendre(s, qv({0, 0}), qv({0, 1, -1}));
    EXPECT_EQ(pt.p, (Vector<Q>{0, Q(5, 2), Q(-5, 2)}));
    EXPECT_EQ(pt.tag, MomentumTag::post);
    EXPECT_EQ(post_legendre(s, qv({7, 7}), qv({7, 7, 7})).p, qv({0, 0, 0}));
    EXPECT_EQ(pre_legendre(s, qv({7, 7}), qv({7, 7, 7})).p, qv({0, 0}));
    EXPECT_THROW(post_legendre(s, qv({0}), qv({0, 0, 0})), DimensionError);
}

TEST(Legendre, PostConstraintOfTheTwoToThreeSlab) {
    auto s = cdt_slab_action<Q>(slab_23());
    auto post = post_constraints(s);
    ASSERT_EQ(post.size(), 1u);
    // p2 - p3 - 5/2 (x2 - x3) = 0
    EXPECT_EQ(post[0].gp, qv({0, 1, -1}));
    EXPECT_EQ(post[0].gx, (Vector<Q>{0, Q(-5, 2), Q(5, 2)}));
    EXPECT_EQ(post[0].c0, 0);
    EXPECT_EQ(post[0].tag, ConstraintTag::post);
    EXPECT_EQ(post[0].provenance, Provenance::primary);
    EXPECT_EQ(describe(post[0]), "p[1:2] - p[1:3] - 5/2*x[1:2] + 5/2*x[1:3] = 0");
    EXPECT_TRUE(pre_constraints(s).empty());
}

TEST(Legendre, TimeReversedSlabGivesPreConstraintWithOppositeSign) {
    auto s = cdt_slab_action<Q>(slab_32());
    auto pre = pre_constraints(s);
    ASSERT_EQ(pre.size(), 1u);
    EXPECT_EQ(pre[0].gp, qv({0, 1, -1}));
    EXPECT_EQ(pre[0].gx, (Vector<Q>{0, Q(5, 2), Q(-5, 2)}));
    EXPECT_TRUE(post_constraints(s).empty());
}

TEST(Legendre, RegularSlabHasNoConstraints) {
    auto s = cdt_slab_action<Q>(slab_a1());
    EXPECT_TRUE(pre_constraints(s).empty());
    EXPECT_TRUE(post_constraints(s).empty());
}

TEST(Legendre, IndependentVariableGivesVanishingMomentum) {
    // S depends on x_prev and on the first next variable only.
    ActionBlocks<Q> b{Matrix<Q>{{1}}, Matrix<Q>{{2, 0}}, Matrix<Q>{{1, 0}, {0, 0}}, qv({0}), qv({0, 0}), 0};
    auto s = build_action(Slice("0", {"a"}), Slice("1", {"b", "c"}), b);
    auto post = post_constraints(s);
    ASSERT_EQ(post.size(), 1u);
    EXPECT_EQ(post[0].gp, qv({0, 1}));
    EXPECT_EQ(post[0].gx, qv({0, 0}));

    ActionBlocks<Q> r{Matrix<Q>{{1, 0}, {0, 0}}, Matrix<Q>{{2}, {0}}, Matrix<Q>{{1}}, qv({0, 0}), qv({0}), 0};
    auto t = build_action(Slice("0", {"b", "c"}), Slice("1", {"a"}), r);
    auto pre = pre_constraints(t);
    ASSERT_EQ(pre.size(), 1u);
    EXPECT_EQ(pre[0].gp, qv({0, 1}));
    EXPECT_EQ(pre[0].gx, qv({0, 0}));
}

TEST(Legendre, EmptySlicesHaveNoConstraints) {
    auto s = cdt_slab_action<Q>(slab(0, 3, {}));
    EXPECT_TRUE(pre_constraints(s).empty());
    EXPECT_EQ(post_constraints(s).size(), 3u);
    EXPECT_TRUE(post_legendre(zero_action<Q>(Slice("0", {}), Slice("1", {})), {}, {}).p.empty());
}

TEST(Legendre, PullbackOfTheCanonicalForm) {
    RandomSource rng(21);
    for (int t = 0; t < 40; ++t) {
        auto s = random_action<Q>(rng, numbered_slice("0", rng.index(1, 4)), numbered_slice("1", rng.index(1, 4)));
        auto u1 = rng.vector<Q>(s.prev.dim()), u2 = rng.vector<Q>(s.next.dim());
        auto v1 = rng.vector<Q>(s.prev.dim()), v2 = rng.vector<Q>(s.next.dim());
        // Ω(u, v) = -u_prevᵀ B v_next + v_prevᵀ B u_next
        Q omega = -dot(u1, s.B * v2) + dot(v1, s.B * u2);
        auto zero_p = zeros<Q>(s.prev.dim()), zero_n = zeros<Q>(s.next.dim());
        auto post0 = post_legendre(s, zero_p, zero_n).p;
        Tangent<Q> pu{u2, post_legendre(s, u1, u2).p - post0}, pv{v2, post_legendre(s, v1, v2).p - post0};
        EXPECT_EQ(symplectic_pairing(pu, pv), omega);
        auto pre0 = pre_legendre(s, zero_p, zero_n).p;
        Tangent<Q> mu{u1, pre_legendre(s, u1, u2).p - pre0}, mv{v1, pre_legendre(s, v1, v2).p - pre0};
        EXPECT_EQ(symplectic_pairing(mu, mv), omega);
    }
}

TEST(Legendre, CountBalanceAndGradientCorrespondence) {
    RandomSource rng(23);
    for (int t = 0; t < 60; ++t) {
        auto s = random_action<Q>(rng, numbered_slice("0", rng.index(0, 4)), numbered_slice("1", rng.index(0, 4)));
        auto pre = pre_constraints(s), post = post_constraints(s);
        EXPECT_EQ(static_cast<long>(pre.size()) - static_cast<long>(post.size()),
                  static_cast<long>(s.prev.dim()) - static_cast<long>(s.next.dim()));
        for (const auto& c : pre) EXPECT_TRUE(is_zero_vector(left_multiply(c.gp, s.B)));
        for (const auto& c : post) EXPECT_TRUE(is_zero_vector(s.B * c.gp));
        EXPECT_TRUE(is_irreducible(pre));
        EXPECT_TRUE(is_irreducible(post));
    }
}

TEST(Legendre, FirstClassSubAlgebra) {
    RandomSource rng(29);
    for (int t = 0; t < 60; ++t) {
        auto s = random_action<Q>(rng, numbered_slice("0", rng.index(0, 5)), numbered_slice("1", rng.index(0, 5)));
        for (const auto& set : {pre_constraints(s), post_constraints(s)})
            for (const auto& a : set)
                for (const auto& b : set) EXPECT_EQ(poisson_bracket(a, b), 0);
    }
}

TEST(Legendre, MomentaLieOnTheirConstraintSurfaces) {
    RandomSource rng(31);
    for (int t = 0; t < 40; ++t) {
        auto s = random_action<Q>(rng, numbered_slice("0", rng.index(1, 4)), numbered_slice("1", rng.index(1, 4)));
        auto x = rng.vector<Q>(s.prev.dim()), y = rng.vector<Q>(s.next.dim());
        auto post = post_legendre(s, x, y);
        auto pre = pre_legendre(s, x, y);
        EXPECT_TRUE(violated(post_constraints(s), post.x, post.p).empty());
        EXPECT_TRUE(violated(pre_constraints(s), pre.x, pre.p).empty());
    }
}

TEST(Legendre, MergeDetectsCoincidenceAndInfeasibility) {
    Slice sl("0", {"a"});
    ConstraintSet<Q> pre{sl, {constraint(sl, qv({0}), qv({1}))}};
    ConstraintSet<Q> post{sl, {constraint(sl, qv({0}), qv({2}))}};
    pre.constraints[0].tag = ConstraintTag::pre;
    post.constraints[0].tag = ConstraintTag::post;
    auto m = merge_constraints(pre, post);
    EXPECT_TRUE(m.feasible);
    EXPECT_EQ(m.coinciding, 1u);
    ASSERT_EQ(m.combined.size(), 1u);
    EXPECT_EQ(m.combined[0].tag, ConstraintTag::both);

    ConstraintSet<Q> clash{sl, {constraint(sl, qv({0}), qv({1}), 1)}};
    clash.constraints[0].tag = ConstraintTag::post;
    EXPECT_FALSE(merge_constraints(pre, clash).feasible);
}

TEST(Legendre, MakeIrreducibleDropsDependentRows) {
    Slice sl("0", {"a", "b"});
    ConstraintSet<Q> set{sl,
                         {constraint(sl, qv({1, 0}), qv({1, 0})), constraint(sl, qv({2, 0}), qv({2, 0})),
                          constraint(sl, qv({0, 1}), qv({0, 0}))}};
    EXPECT_FALSE(is_irreducible(set));
    auto r = make_irreducible(set);
    EXPECT_EQ(r.size(), 2u);
    EXPECT_TRUE(is_irreducible(r));
}

}  // namespace
}  // namespace disevo::testing
