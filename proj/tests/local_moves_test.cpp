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

std::vector<std::string> surface4() { return {"s1", "s2", "s3", "s4"}; }

ExtendedState<Q> state4() { return initial_state<Q>(surface4(), qv({1, 2, 3, 4}), qv({0, 0, 0, 0})); }

std::size_t at(const Slice& s, const std::string& label) { return *s.index_of(label); }

const AffineConstraint<Q>* find_on(const ConstraintSet<Q>& set, const std::string& label) {
    for (const auto& c : set) {
        auto j = c.slice.index_of(label);
        if (j && c.gp[*j] != 0) return &c;
    }
    return nullptr;
}

TEST(LocalMoves, OneTwoMomentumOfTheNewVertex) {
    auto mv = pachner_move<Q>(PachnerKind::one_two, surface4(), 1, "v");
    EXPECT_EQ(mv.kind, MoveKind::I);
    auto up = momentum_update<Q>(mv, state4(), Vector<Q>{5});
    const auto& st = up.state;
    EXPECT_EQ(st.x[at(st.slice, "v")], Q(5));
    // p_v = x_v - (x_s2 + x_s3)/2
    EXPECT_EQ(st.p[at(st.slice, "v")], q("5/2"));
    // p_s2 picks up (2 x_s2 - x_s3 - x_v)/2
    EXPECT_EQ(st.p[at(st.slice, "s2")], Q(-2));
    const auto* c = find_on(up.emitted.post, "v");
    ASSERT_NE(c, nullptr);
    const auto& s = c->slice;
    EXPECT_EQ(c->gx[at(s, "v")], Q(-1) * c->gp[at(s, "v")]);
    EXPECT_EQ(c->gx[at(s, "s2")], q("1/2") * c->gp[at(s, "v")]);
    EXPECT_EQ(c->gx[at(s, "s3")], q("1/2") * c->gp[at(s, "v")]);
    EXPECT_TRUE(violated(st.post, st.x, st.p).empty());
}

TEST(LocalMoves, TwoOnePreConstraint) {
    auto mv = pachner_move<Q>(PachnerKind::two_one, surface4(), 1);
    EXPECT_EQ(mv.kind, MoveKind::II);
    auto mc = move_constraints(mv, state4().slice);
    ASSERT_EQ(mc.pre.size(), 1u);
    EXPECT_EQ(describe(mc.pre[0]), "p[s2] - 1/2*x[s1] + x[s2] - 1/2*x[s3] = 0");
    // The removed vertex stays as an extension pair with p = 0.
    ASSERT_EQ(mc.post.size(), 1u);
    EXPECT_EQ(mc.post[0].gp[1], Q(1));

    auto on = state4();
    on.p[1] = Q(-2) + q("1/2") * (on.x[0] + on.x[2]);
    auto up = momentum_update<Q>(mv, on);
    EXPECT_TRUE(up.state.extension[1]);
    EXPECT_EQ(up.state.p[1], Q(0));
    auto off = state4();
    off.p[1] = Q(1);
    EXPECT_THROW(momentum_update<Q>(mv, off), OffConstraintSurface);
}

TEST(LocalMoves, SquareEmitsOnePreAndOnePost) {
    auto mv = pachner_move<Q>(PachnerKind::square, surface4(), 1, "v");
    EXPECT_EQ(mv.kind, MoveKind::III);
    auto ext = extend_phase_space(state4(), {"v"}, {});
    auto mc = move_constraints(mv, ext.slice);
    const auto& s = ext.slice;
    ASSERT_EQ(mc.pre.size(), 1u);
    const auto& pre = mc.pre[0];
    EXPECT_EQ(pre.gp[at(s, "s2")], Q(1));
    EXPECT_EQ(pre.gx[at(s, "s2")], Q(2));
    EXPECT_EQ(pre.gx[at(s, "s1")], Q(-1));
    EXPECT_EQ(pre.gx[at(s, "s3")], Q(-1));
    const auto* post = find_on(mc.post, "v");
    ASSERT_NE(post, nullptr);
    EXPECT_EQ(post->gp[at(s, "v")], Q(1));
    EXPECT_EQ(post->gx[at(s, "v")], Q(-2));
    EXPECT_EQ(post->gx[at(s, "s1")], Q(1));
    EXPECT_EQ(post->gx[at(s, "s3")], Q(1));
    EXPECT_EQ(mc.post.size(), 2u);  // p_s2 = 0 as well
}

TEST(LocalMoves, TwoTwoIsTypeFour) {
    auto mv = pachner_move<Q>(PachnerKind::two_two, surface4(), 0);
    EXPECT_EQ(mv.kind, MoveKind::IV);
    auto mc = move_constraints(mv, state4().slice);
    EXPECT_TRUE(mc.pre.empty());
    EXPECT_TRUE(mc.post.empty());
}

TEST(LocalMoves, PachnerMovesCheckTheSurface) {
    std::vector<std::string> three{"s1", "s2", "s3"};
    EXPECT_THROW(pachner_move<Q>(PachnerKind::two_one, three, 0), Error);
    EXPECT_THROW(pachner_move<Q>(PachnerKind::one_two, surface4(), 4, "v"), Error);
    EXPECT_THROW(pachner_move<Q>(PachnerKind::one_two, surface4(), 0, "s3"), LabelError);
    EXPECT_EQ(next_surface(PachnerKind::one_two, surface4(), 3, "v"),
              (std::vector<std::string>{"s1", "s2", "s3", "s4", "v"}));
    EXPECT_EQ(fresh_label({"s1", "v1"}), "v2");
}

TEST(LocalMoves, ZeroTypeFourIsTheIdentity) {
    RoleMap roles;
    roles.roles["s1"] = Role::e;
    roles.roles["s3"] = Role::e;
    QuadraticForm<Q> f;
    f.vars = {"s1", "s3"};
    f.hess = Matrix<Q>(2, 2);
    f.grad = qv({0, 0});
    auto mv = make_move(MoveKind::IV, roles, f);
    auto st = state4();
    st.p = qv({1, -1, 2, 0});
    auto up = momentum_update<Q>(mv, st);
    EXPECT_EQ(up.state.x, st.x);
    EXPECT_EQ(up.state.p, st.p);
    auto ec = extended_canonical_update(mv, st);
    EXPECT_EQ(ec.x, st.x);
    EXPECT_EQ(ec.p, st.p);
}

TEST(LocalMoves, MakeMoveChecksTheKind) {
    RoleMap roles;
    roles.roles["s1"] = Role::o;
    QuadraticForm<Q> f;
    f.vars = {"s1"};
    f.hess = Matrix<Q>(1, 1);
    f.grad = qv({0});
    EXPECT_THROW(make_move(MoveKind::I, roles, f), Error);
    EXPECT_NO_THROW(make_move(MoveKind::II, roles, f));
}

TEST(LocalMoves, ExtensionAndReductionRoundTrip) {
    auto st = state4();
    auto ext = extend_phase_space(st, {"a", "b"}, {});
    EXPECT_EQ(ext.dim(), 6u);
    EXPECT_EQ(ext.extension_count(), 2u);
    EXPECT_EQ(ext.post.size(), 2u);
    auto back = reduce_phase_space(ext, {"a", "b"});
    EXPECT_EQ(back.slice.labels, st.slice.labels);
    EXPECT_EQ(back.x, st.x);
    EXPECT_EQ(back.p, st.p);
    EXPECT_TRUE(back.post.empty());
    EXPECT_THROW(reduce_phase_space(st, {"s1"}), LabelError);
    EXPECT_THROW(extend_phase_space(st, {"s1"}, {}), LabelError);
}

TEST(LocalMoves, TransportThroughTypeFour) {
    auto mv = pachner_move<Q>(PachnerKind::two_two, surface4(), 0);
    auto s = state4().slice;
    ConstraintSet<Q> empty{s, {}};
    EXPECT_TRUE(transport_constraints(mv, empty).empty());
    // 2-2 touches every vertex of a four-vertex surface; use a five-vertex one to keep a b.
    std::vector<std::string> five{"s1", "s2", "s3", "s4", "s5"};
    auto mv5 = pachner_move<Q>(PachnerKind::two_two, five, 0);
    Slice s5("0", five);
    ConstraintSet<Q> pb{s5, {constraint(s5, qv({0, 0, 0, 0, 0}), qv({0, 0, 0, 0, 1}))}};
    auto moved = transport_constraints(mv5, pb);
    ASSERT_EQ(moved.size(), 1u);
    EXPECT_EQ(moved[0].gp, qv({0, 0, 0, 0, 1}));
    EXPECT_EQ(moved[0].gx, qv({0, 0, 0, 0, 0}));
    // An e momentum picks up the gradient of the action.
    ConstraintSet<Q> pe{s5, {constraint(s5, qv({0, 0, 0, 0, 0}), qv({1, 0, 0, 0, 0}))}};
    auto moved_e = transport_constraints(mv5, pe);
    ASSERT_EQ(moved_e.size(), 1u);
    auto form = simplex_form<Q>({"s1", "s2", "s3", "s4"});
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(-moved_e[0].gx[j], form.hess(0, j)) << j;
}

TEST(LocalMoves, TypeThreeRankRule) {
    RandomSource rng(71);
    std::vector<std::string> surface{"r1", "r2", "r3", "r4"};
    for (int t = 0; t < 60; ++t) {
        auto mv = random_move<Q>(rng, MoveKind::III, surface);
        auto os = mv.labels(Role::o), ns = mv.labels(Role::n);
        Matrix<Q> w(os.size(), ns.size());
        auto idx = [&](const std::string& l) {
            return static_cast<std::size_t>(std::find(mv.form.vars.begin(), mv.form.vars.end(), l) - mv.form.vars.begin());
        };
        for (std::size_t i = 0; i < os.size(); ++i)
            for (std::size_t j = 0; j < ns.size(); ++j) w(i, j) = mv.form.hess(idx(os[i]), idx(ns[j]));
        const std::size_t r = rank(w);
        std::vector<std::string> labels = surface;
        labels.insert(labels.end(), ns.begin(), ns.end());
        auto mc = move_constraints(mv, Slice("0", labels));
        EXPECT_EQ(mc.pre.size(), os.size() - r);
        EXPECT_EQ(mc.post.size(), os.size() + ns.size() - r);
    }
}

TEST(LocalMoves, ExtendedCanonicalUpdateAgreesOnTheSurface) {
    RandomSource rng(73);
    std::vector<std::string> surface{"r1", "r2", "r3", "r4"};
    for (int t = 0; t < 40; ++t) {
        MoveKind kind = rng.coin() ? MoveKind::I : MoveKind::IV;
        auto mv = random_move<Q>(rng, kind, surface);
        auto st = initial_state<Q>(surface, rng.vector<Q>(4), rng.vector<Q>(4));
        auto up = momentum_update<Q>(mv, st);
        auto ec = extended_canonical_update(mv, st);
        if (kind == MoveKind::IV) {
            EXPECT_EQ(ec.x, up.state.x);
            EXPECT_EQ(ec.p, up.state.p);
        } else {
            // Both updates put the new momenta on the move's post-constraint surface.
            EXPECT_TRUE(violated(up.emitted.post, up.state.x, up.state.p).empty());
            ASSERT_EQ(ec.dim(), up.state.dim());
            for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(ec.x[j], up.state.x[j]);
        }
    }
}

TEST(LocalMoves, StrictModeNeedsLambda) {
    auto mv = pachner_move<Q>(PachnerKind::one_two, surface4(), 1, "v");
    EXPECT_THROW(momentum_update<Q>(mv, state4(), std::nullopt, true), MissingParameter);
    EXPECT_THROW(momentum_update<Q>(mv, state4(), Vector<Q>{1, 2}), MissingParameter);
    EXPECT_NO_THROW(momentum_update<Q>(mv, state4()));
}

TEST(LocalMoves, FloatMatchesExact) {
    auto mvq = pachner_move<Q>(PachnerKind::one_two, surface4(), 1, "v");
    auto mvd = pachner_move<double>(PachnerKind::one_two, surface4(), 1, "v");
    auto uq = momentum_update<Q>(mvq, state4(), Vector<Q>{5});
    auto ud = momentum_update<double>(mvd, initial_state<double>(surface4(), {1, 2, 3, 4}, {0, 0, 0, 0}), Vector<double>{5});
    for (std::size_t j = 0; j < uq.state.dim(); ++j) {
        EXPECT_NEAR(ud.state.x[j], uq.state.x[j].get_d(), 1e-12);
        EXPECT_NEAR(ud.state.p[j], uq.state.p[j].get_d(), 1e-12);
    }
}

}  // namespace
}  // namespace disevo::testing
