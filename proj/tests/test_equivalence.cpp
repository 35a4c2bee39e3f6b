#include <gtest/gtest.h>

#include "circlesim/equivalence.hpp"
#include "circlesim/random.hpp"

using namespace circlesim;

namespace {

Rational q(long p, long d = 1) { return ratio(Integer(p), Integer(d)); }

GroupElement g1(std::int64_t a) { return GroupElement({a}); }

// Minimum over all 2^k unions of atoms of m(C symmetric-difference D).
Rational brute_force_defect(const std::vector<std::pair<Rational, Rational>>& atoms) {
  Rational best = -1;
  for (std::uint64_t C = 0; C < (std::uint64_t{1} << atoms.size()); ++C) {
    Rational v = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) v += (C >> i) & 1 ? atoms[i].second : atoms[i].first;
    if (best < 0 || v < best) best = v;
  }
  return best;
}

// Cylinder masses of an action by sampling every cell at a fine resolution.
CylinderTable sampled_action_table(const LatticeAction& A, const Window& W, const Partition& P, std::size_t N) {
  MassMap m;
  Assignment a(W.size());
  for (std::size_t k = 0; k < N; ++k) {
    Rational y = ratio(2 * k + 1, 2 * N);
    for (std::size_t g = 0; g < W.size(); ++g) a[g] = static_cast<std::uint32_t>(P.piece_of(evaluate(A, W.times()[g]).apply(y)));
    m[a] += ratio(1, N);
  }
  return CylinderTable(W, P, m);
}

}  // namespace

TEST(ActionToSim, Examples) {
  Window W(1, 2);
  auto P = Partition::uniform(2);
  EXPECT_EQ(action_to_sim(LatticeAction::identity(1, 2), W, P), diagonal_table(W, P));
  auto t = action_to_sim(LatticeAction({IntervalPermutation::rotation(2, 1)}), W, P);
  EXPECT_EQ(t.mass({0, 1}), q(1, 2));
  EXPECT_EQ(t.mass({1, 0}), q(1, 2));
  EXPECT_EQ(t.masses().size(), 2u);
  EXPECT_THROW(action_to_sim(LatticeAction::identity(2, 2), W, P), ShapeMismatch);
}

TEST(ActionToSim, MatchesPointSampling) {
  auto rng = random::trial_engine(51, 0);
  for (int i = 0; i < 15; ++i) {
    auto A = random::action(rng, 1 + i % 2, 8);
    Window W(A.dim(), 2);
    auto P = random::partition(rng, 3, 8);
    auto t = action_to_sim(A, W, P);
    EXPECT_EQ(t, sampled_action_table(A, W, P, 8));
    EXPECT_TRUE(t.is_shift_consistent());
    EXPECT_EQ(marginal(t), StepMeasure::lebesgue());
  }
}

TEST(ApplyD, IdentityInverseAndGroupLaw) {
  auto rng = random::trial_engine(52, 0);
  for (int i = 0; i < 20; ++i) {
    auto t = random::consistent_table(rng, Window(1, 2), random::partition(rng, 3, 16));
    auto f = random::adaptation(rng, 2, 16);
    auto h = random::adaptation(rng, 3, 16);
    EXPECT_EQ(apply_D(Adaptation::identity(), t), t);
    EXPECT_EQ(apply_D(h, apply_D(h.inverse(), t)), t);
    EXPECT_EQ(apply_D(compose(f, h), t), apply_D(f, apply_D(h, t)));
    // The kernel form agrees with relabelling on the image partition.
    EXPECT_EQ(apply_D(h, t, pushforward(h, t.partition())), apply_D(h, t));
  }
}

TEST(ApplyD, MarginalIsPushforward) {
  auto rng = random::trial_engine(53, 0);
  for (int i = 0; i < 10; ++i) {
    auto P = Partition::uniform(4);
    auto t = random::consistent_table(rng, Window(1, 2), P);
    auto h = random::adaptation(rng, 2, 8);
    auto d = apply_D(h, t);
    auto nu = pushforward(h, marginal(t));
    for (std::size_t j = 0; j < d.pieces(); ++j) EXPECT_EQ(mass(marginal(d), d.partition().piece(j)), mass(nu, d.partition().piece(j)));
  }
}

TEST(EmbedE, IdentityAdaptation) {
  auto rng = random::trial_engine(54, 0);
  auto A = random::action(rng, 2, 8);
  Window W(2, 2);
  auto P = random::partition(rng, 3, 8);
  EXPECT_EQ(embed_E(Adaptation::identity(), A, W, P), action_to_sim(A, W, P));
}

TEST(EmbedE, QuarterExampleTwoWays) {
  Adaptation h({{0, 0}, {q(1, 4), q(1, 2)}});
  EXPECT_EQ(h.inverse_at(q(1, 2)), q(1, 4));
  LatticeAction A({IntervalPermutation::rotation(4, 2)});
  Window W(1, 2);
  auto P = Partition::uniform(2);
  auto direct = embed_E(h, A, W, P);
  auto via = apply_D(h, action_to_sim(A, W, pullback(h, P)));
  EXPECT_EQ(direct, via);
  EXPECT_EQ(direct.mass({0, 1}), q(1, 4));
  EXPECT_EQ(direct.mass({1, 0}), q(1, 4));
  EXPECT_EQ(direct.mass({1, 1}), q(1, 2));
}

TEST(EmbedE, MarginalIsPushforwardOfLebesgue) {
  auto rng = random::trial_engine(55, 0);
  for (int i = 0; i < 15; ++i) {
    auto h = random::adaptation(rng, 1 + i % 3, 32);
    auto A = random::action(rng, 1, 16);
    auto P = random::partition(rng, 3, 8);
    auto t = embed_E(h, A, Window(1, 2), P);
    auto nu = pushforward(h, StepMeasure::lebesgue());
    for (std::size_t j = 0; j < P.size(); ++j) EXPECT_EQ(mass(marginal(t), P.piece(j)), mass(nu, P.piece(j)));
  }
}

TEST(Continuity, Examples) {
  auto rng = random::trial_engine(56, 0);
  auto A = random::action(rng, 1, 8);
  auto t = action_to_sim(A, Window(1, 2), Partition::uniform(8));
  auto r = continuity_bound_check(Adaptation::identity(), t, {{g1(0), 1}, {g1(1), 3}});
  EXPECT_EQ(r.lhs, 0);
  EXPECT_EQ(r.mid, 0);
  EXPECT_EQ(r.rhs, 0);
  auto single = action_to_sim(A, Window(1, 2), Partition::uniform(1));
  auto h = random::near_identity(rng, 3, 64, q(1, 16));
  auto s = continuity_bound_check(h, single, {{g1(0), 0}, {g1(1), 0}});
  EXPECT_EQ(s.lhs, 0);
  EXPECT_EQ(s.mid, 0);
  EXPECT_THROW(continuity_bound_check(h, iid_table(Window(1, 2), Partition::uniform(2), {q(1, 4), q(3, 4)}), {}),
               PreconditionError);
}

TEST(Continuity, RandomTriples) {
  auto rng = random::trial_engine(57, 0);
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 16;
    auto A = random::action(rng, 1 + i % 2, n);
    Window W(A.dim(), 2);
    auto t = action_to_sim(A, W, Partition::uniform(n));
    auto h = random::near_identity(rng, 4, 256, q(1, 64));
    ASSERT_LE(h.sup_distance_to_identity(), q(1, 64));
    CylinderSpec C;
    for (const auto& g : W.times())
      if (random::uniform(rng, 0, 1)) C.push_back({g, static_cast<std::uint32_t>(random::uniform(rng, 0, n - 1))});
    auto r = continuity_bound_check(h, t, C);
    EXPECT_LE(r.lhs, r.mid);
    EXPECT_LE(r.mid, r.rhs);
  }
}

TEST(Recover, RoundtripExact) {
  auto rng = random::trial_engine(58, 0);
  for (int i = 0; i < 20; ++i) {
    std::size_t n = 4 << (i % 3);
    auto A = random::action(rng, 1 + i % 2, n);
    auto t = action_to_sim(A, Window(A.dim(), 2), Partition::uniform(n));
    auto r = recover_action(t, 0);
    EXPECT_EQ(r.action, A);
    EXPECT_EQ(r.witness.max_defect(), 0);
  }
}

TEST(Recover, ThroughD) {
  auto rng = random::trial_engine(59, 0);
  for (int i = 0; i < 10; ++i) {
    std::size_t n = 8;
    auto A = random::action(rng, 1, n);
    auto h = random::adaptation(rng, 2, 16);
    auto P = pushforward(h, Partition::uniform(n));
    auto t = embed_E(h, A, Window(1, 2), P);
    auto r = recover_action(t, 0);
    // Same cylinder masses once mapped back by D(h^-1).
    auto back = apply_D(h.inverse(), t);
    EXPECT_EQ(action_to_sim(r.action, Window(1, 2), Partition::uniform(n)).masses(), back.masses());
  }
}

TEST(Recover, Errors) {
  EXPECT_THROW(recover_action(iid_table(Window(1, 2), Partition::uniform(2)), 0), PreconditionError);
  EXPECT_THROW(recover_action(iid_table(Window(1, 1), Partition::uniform(2)), 0), PreconditionError);
  // Tolerant recovery of a slightly mixed graph.
  auto t = average_sims(diagonal_table(Window(1, 2), Partition::uniform(2)), iid_table(Window(1, 2), Partition::uniform(2)),
                        q(1, 10));
  auto r = recover_action(t, q(1, 10));
  EXPECT_EQ(r.action, LatticeAction::identity(1, 2));
  EXPECT_EQ(r.witness.max_defect(), q(1, 40));
}

TEST(Realize, Fixtures) {
  Window W(1, 2);
  auto P = Partition::uniform(2);
  auto d = realize_sim_as_action(diagonal_table(W, P));
  EXPECT_EQ(d.generator(0), IntervalPermutation::identity(2));
  auto rot = action_to_sim(LatticeAction({IntervalPermutation::rotation(2, 1)}), W, P);
  EXPECT_EQ(action_to_sim(realize_sim_as_action(rot), W, P), rot);
  auto iid = realize_sim_as_action(iid_table(W, P));
  EXPECT_EQ(iid.resolution(), 4u);
  EXPECT_EQ(action_to_sim(iid, W, P), iid_table(W, P));
}

TEST(Realize, RandomTables) {
  auto rng = random::trial_engine(60, 0);
  for (int i = 0; i < 20; ++i) {
    Window W(1, 2 + i % 2);
    auto P = Partition::uniform(2 + (i / 2) % 2);
    auto t = random::consistent_table(rng, W, P);
    EXPECT_EQ(action_to_sim(realize_sim_as_action(t), W, P), t);
  }
}

TEST(Realize, Preconditions) {
  EXPECT_THROW(realize_sim_as_action(iid_table(Window(2, 2), Partition::uniform(2))), ShapeMismatch);
  EXPECT_THROW(realize_sim_as_action(iid_table(Window(1, 2), Partition::uniform(2), {q(1, 4), q(3, 4)})),
               PreconditionError);
  EXPECT_EQ(realize_sim_as_action(iid_table(Window(1, 1), Partition::uniform(3))).generator(0),
            IntervalPermutation::identity(3));
}

TEST(FactorDefect, Examples) {
  Window W(1, 2);
  auto I = DyadicSet::interval(1, 0, 1);
  auto A = LatticeAction({IntervalPermutation::rotation(4, 1)});
  EXPECT_EQ(factor_defect(A, I, I, W), 0);
  auto D = DyadicSet::interval(2, 1, 3);
  for (std::size_t w = 1; w <= 3; ++w) EXPECT_EQ(factor_defect(LatticeAction::identity(1, 2), I, D, Window(1, w)), q(1, 2));
  EXPECT_EQ(brute_force_defect(factor_atoms(LatticeAction::identity(1, 2), I, D, W)), q(1, 2));
}

TEST(FactorDefect, ClosedFormMatchesBruteForce) {
  auto rng = random::trial_engine(61, 0);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    auto A = random::action(rng, 1 + i % 2, 16);
    Window W(A.dim(), 1 + i % 2);
    int lvl = static_cast<int>(random::uniform(rng, 1, 4));
    std::vector<bool> mi(std::size_t{1} << lvl), md(std::size_t{1} << 4);
    for (auto&& b : mi) b = random::uniform(rng, 0, 1);
    for (auto&& b : md) b = random::uniform(rng, 0, 1);
    DyadicSet I(lvl, mi), D(4, md);
    auto atoms = factor_atoms(A, I, D, W);
    if (atoms.size() > 12) continue;
    ++checked;
    EXPECT_EQ(factor_defect(A, I, D, W), brute_force_defect(atoms));
  }
  EXPECT_GT(checked, 30);
}

TEST(InverseContinuity, Examples) {
  auto A = LatticeAction({IntervalPermutation::rotation(4, 1)});
  auto I = DyadicSet::interval(1, 0, 1);
  auto same = inverse_continuity_check(A, A, g1(1), I, q(1, 8));
  EXPECT_EQ(same.gap, 0);
  EXPECT_EQ(same.symmetric_difference, 0);
  auto B = LatticeAction({IntervalPermutation({1, 0, 2, 3})});
  auto r = inverse_continuity_check(A, B, g1(1), I, q(1, 2));
  // T^-1[0,1/2) = {3,0}; R^-1[0,1/2) = {0,1}.
  EXPECT_EQ(r.mass_first, q(1, 2));
  EXPECT_EQ(r.mass_second, q(1, 4));
  EXPECT_EQ(r.gap, q(1, 4));
  EXPECT_EQ(r.symmetric_difference, q(1, 2));
  EXPECT_TRUE(r.implication_holds);
}

TEST(InverseContinuity, RandomPairs) {
  auto rng = random::trial_engine(62, 0);
  for (int i = 0; i < 100; ++i) {
    auto A = random::action(rng, 1, 16), B = random::action(rng, 1, 16);
    std::vector<bool> m(8);
    for (auto&& b : m) b = random::uniform(rng, 0, 1);
    auto r = inverse_continuity_check(A, B, g1(static_cast<std::int64_t>(random::uniform(rng, 0, 4)) - 2), DyadicSet(3, m),
                                      pow2(-static_cast<long>(random::uniform(rng, 1, 5))));
    EXPECT_TRUE(r.implication_holds);
    EXPECT_EQ(r.symmetric_difference, 2 * r.gap);
  }
}
