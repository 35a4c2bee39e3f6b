#include <gtest/gtest.h>

#include <algorithm>

#include "circlesim/measure.hpp"
#include "circlesim/random.hpp"

using namespace circlesim;

namespace {

Rational q(long p, long d = 1) { return ratio(Integer(p), Integer(d)); }

StepMeasure half_three_halves() { return StepMeasure::step({0, q(1, 2)}, {q(1, 2), q(3, 2)}); }

// Midpoint Riemann sum of a step measure's density at step 2^-12.
Rational riemann_mass(const StepMeasure& mu, const Interval& I) {
  const long N = 1 << 12;
  Rational total = 0;
  for (long k = 0; k < N; ++k) {
    Rational x = q(2 * k + 1, 2 * N);
    if (!I.contains(x)) continue;
    std::size_t i = 0;
    while (i + 1 < mu.pieces().size() && mu.pieces()[i + 1].from <= x) ++i;
    total += mu.pieces()[i].density(x - mu.pieces()[i].from) / N;
  }
  return total;
}

Rational ramp(const Rational& t) { return t > 0 ? Rational(t * t / 2) : Rational(0); }

// Area of {(x,y) in [0,a) x [0,b) : x + y < s}.
Rational corner_area(const Rational& s, const Rational& a, const Rational& b) {
  return ramp(s) - ramp(s - a) - ramp(s - b) + ramp(s - a - b);
}

// (nu * mu)([lo,hi)) from a direct double integral over pairs of constant
// pieces; independent of convolve().
Rational convolution_oracle(const StepMeasure& nu, const StepMeasure& mu, const Interval& I) {
  Rational total = 0;
  for (std::size_t i = 0; i < nu.pieces().size(); ++i)
    for (std::size_t j = 0; j < mu.pieces().size(); ++j) {
      auto X = nu.piece_interval(i);
      auto Y = mu.piece_interval(j);
      Rational dens = nu.pieces()[i].density.coefficient(0) * mu.pieces()[j].density.coefficient(0);
      Rational area = 0;
      for (int k = 0; k <= 1; ++k)
        area += corner_area(I.hi + k - X.lo - Y.lo, X.length(), Y.length()) -
                corner_area(I.lo + k - X.lo - Y.lo, X.length(), Y.length());
      total += dens * area;
    }
  return total;
}

Rational weak_star_oracle(const StepMeasure& a, const StepMeasure& b, int L) {
  Rational total = 0;
  for (int l = 1; l <= L; ++l) {
    Rational worst = 0;
    long cells = 1L << l;
    for (long k = 0; k < cells; ++k) {
      Interval I{q(k, cells), q(k + 1, cells)};
      worst = std::max(worst, Rational(abs(mass(a, I) - mass(b, I))));
    }
    total += worst * pow2(-l);
  }
  return total;
}

}  // namespace

TEST(Measure, LebesgueHalf) { EXPECT_EQ(mass(StepMeasure::lebesgue(), {0, q(1, 2)}), q(1, 2)); }

TEST(Measure, AtomInside) { EXPECT_EQ(mass(StepMeasure::point_mass(q(1, 3)), {0, q(1, 2)}), 1); }

TEST(Measure, PiecewiseMassMatchesRiemann) {
  auto mu = half_three_halves();
  Interval I{q(1, 4), q(3, 4)};
  EXPECT_EQ(mass(mu, I), q(1, 2));
  EXPECT_EQ(riemann_mass(mu, I), q(1, 2));
}

TEST(Measure, TotalMassIsOne) {
  auto rng = random::trial_engine(11, 0);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(mass(random::good_measure(rng, 1 + i % 5, 32), {0, 1}), 1);
}

TEST(Measure, MassOutsideCircleThrows) {
  EXPECT_THROW(mass(StepMeasure::lebesgue(), {q(-1, 2), q(1, 2)}), DomainError);
  EXPECT_THROW(mass(StepMeasure::lebesgue(), {0, q(3, 2)}), DomainError);
}

TEST(Measure, ValidationRejectsBadInput) {
  EXPECT_THROW(StepMeasure::step({0, q(1, 2)}, {1, 2}), DomainError);                 // total 3/2
  EXPECT_THROW(StepMeasure::step({q(1, 4)}, {1}), DomainError);                       // not starting at 0
  EXPECT_THROW(StepMeasure::step({0, q(1, 2)}, {-1, 3}), DomainError);                // negative density
  EXPECT_THROW(StepMeasure({}, {{q(3, 2), 1}}), DomainError);                          // atom outside
  EXPECT_THROW(StepMeasure({}, {{q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)}}), DomainError);  // duplicate atom
}

TEST(Measure, Goodness) {
  EXPECT_TRUE(is_good(StepMeasure::lebesgue()));
  EXPECT_FALSE(is_good(StepMeasure::point_mass(q(1, 3))));
  auto gap = StepMeasure::step({0, q(1, 2), q(3, 4)}, {q(3, 2), 0, q(1)});
  EXPECT_FALSE(is_good(gap));
  EXPECT_NE(goodness_defect(gap)->find("support gap"), std::string::npos);
  EXPECT_NE(goodness_defect(StepMeasure::point_mass(0))->find("atom"), std::string::npos);
}

TEST(Convolution, PointMassAtZeroIsIdentity) {
  auto mu = half_three_halves();
  EXPECT_EQ(convolve(StepMeasure::point_mass(0), mu), mu);
}

TEST(Convolution, PointMassTranslates) {
  auto r = convolve(StepMeasure::point_mass(q(1, 4)), StepMeasure::uniform(0, q(1, 8)));
  EXPECT_EQ(r, StepMeasure::uniform(q(1, 4), q(3, 8)));
  // Wrapping across 1.
  auto w = convolve(StepMeasure::point_mass(q(7, 8)), StepMeasure::uniform(0, q(1, 4)));
  EXPECT_EQ(mass(w, {q(7, 8), 1}), q(1, 2));
  EXPECT_EQ(mass(w, {0, q(1, 8)}), q(1, 2));
}

TEST(Convolution, LebesgueAbsorbs) {
  auto rng = random::trial_engine(12, 0);
  for (int i = 0; i < 10; ++i) {
    auto mu = random::good_measure(rng, 1 + i % 4, 16);
    EXPECT_EQ(convolve(StepMeasure::lebesgue(), mu), StepMeasure::lebesgue());
  }
  EXPECT_EQ(convolve(StepMeasure::point_mass(q(1, 3)), StepMeasure::lebesgue()), StepMeasure::lebesgue());
}

TEST(Convolution, TwoUniformsGiveTriangle) {
  auto m = StepMeasure::uniform(0, q(1, 4));
  auto t = convolve(m, m);
  EXPECT_EQ(mass(t, {0, q(1, 4)}), q(1, 2));
  EXPECT_EQ(mass(t, {0, q(1, 8)}), q(1, 8));
  EXPECT_EQ(mass(t, {q(1, 2), 1}), 0);
  EXPECT_FALSE(t.piecewise_constant());
}

TEST(Convolution, AtomsCombine) {
  StepMeasure a({}, {{0, q(1, 2)}, {q(1, 2), q(1, 2)}});
  auto c = convolve(a, a);
  ASSERT_EQ(c.atoms().size(), 2u);
  EXPECT_EQ(mass(c, {0, q(1, 4)}), q(1, 2));
}

TEST(Convolution, MatchesDoubleIntegralOracle) {
  auto rng = random::trial_engine(13, 0);
  for (int trial = 0; trial < 25; ++trial) {
    auto nu = random::good_measure(rng, 1 + trial % 4, 16);
    auto mu = random::good_measure(rng, 1 + (trial / 4) % 3, 8);
    auto c = convolve(nu, mu);
    EXPECT_EQ(mass(c, {0, 1}), 1);
    for (long k = 0; k < 16; ++k) {
      Interval I{q(k, 16), q(k + 1, 16)};
      ASSERT_EQ(mass(c, I), convolution_oracle(nu, mu, I)) << "trial " << trial << " cell " << k;
    }
  }
}

TEST(Convolution, SmoothingIsNonAtomicAndClose) {
  auto rng = random::trial_engine(14, 0);
  for (int trial = 0; trial < 20; ++trial) {
    auto nu = random::good_measure(rng, 1 + trial % 5, 32);
    for (long e = 2; e <= 6; ++e) {
      Rational delta = pow2(-e);
      auto s = convolve(nu, StepMeasure::uniform(0, delta));
      EXPECT_TRUE(s.atoms().empty());
      EXPECT_LE(weak_star_distance(s, nu, 6).value, 2 * delta * max_density(nu));
    }
  }
  // Atoms are dissolved too.
  EXPECT_TRUE(convolve(StepMeasure::point_mass(q(1, 3)), StepMeasure::uniform(0, q(1, 8))).atoms().empty());
}

TEST(Quantile, LebesgueGivesIdentity) {
  EXPECT_EQ(quantile_adaptation(StepMeasure::lebesgue()).normalized(), Adaptation::identity());
}

TEST(Quantile, HalfThreeHalves) {
  auto h = quantile_adaptation(half_three_halves());
  EXPECT_EQ(h(q(1, 4)), q(1, 2));
  EXPECT_EQ(h.slope(0), 2);
  EXPECT_EQ(h.slope(1), q(2, 3));
  auto nu = half_three_halves();
  for (long k = 0; k < 64; ++k) EXPECT_EQ(nu.cdf(h(q(k, 64))), q(k, 64));
}

TEST(Quantile, RejectsNonGood) {
  EXPECT_THROW(quantile_adaptation(StepMeasure::point_mass(0)), PreconditionError);
  EXPECT_THROW(quantile_adaptation(StepMeasure::step({0, q(1, 2)}, {2, 0})), PreconditionError);
}

TEST(Pushforward, IdentityAndInverse) {
  auto mu = half_three_halves();
  EXPECT_EQ(pushforward(Adaptation::identity(), mu), mu);
  Adaptation h({{0, 0}, {q(1, 4), q(1, 2)}});
  auto nu = pushforward(h, StepMeasure::lebesgue());
  for (long k = 0; k < 16; ++k) {
    Interval I{q(k, 16), q(k + 1, 16)};
    EXPECT_EQ(mass(nu, I), mass(mu, I));
  }
}

TEST(Pushforward, QuantileRoundtrip) {
  auto rng = random::trial_engine(15, 0);
  for (int i = 0; i < 30; ++i) {
    auto nu = random::good_measure(rng, 1 + i % 6, 64);
    EXPECT_EQ(pushforward(quantile_adaptation(nu), StepMeasure::lebesgue()), nu);
  }
}

TEST(Pushforward, QuantileOfPushforwardRecoversAdaptation) {
  auto rng = random::trial_engine(16, 0);
  for (int i = 0; i < 30; ++i) {
    auto h = random::adaptation(rng, 1 + i % 5, 32);
    EXPECT_EQ(quantile_adaptation(pushforward(h, StepMeasure::lebesgue())).normalized(), h.normalized());
  }
}

TEST(Pushforward, CompositionLaw) {
  auto rng = random::trial_engine(17, 0);
  for (int i = 0; i < 20; ++i) {
    auto f = random::adaptation(rng, 2, 16);
    auto h = random::adaptation(rng, 3, 16);
    auto mu = random::good_measure(rng, 3, 16);
    EXPECT_EQ(pushforward(compose(f, h), mu), pushforward(f, pushforward(h, mu)));
  }
}

TEST(AdaptationTest, InverseAndSupDistance) {
  Adaptation h({{0, 0}, {q(1, 4), q(1, 2)}});
  auto hi = h.inverse();
  for (long k = 0; k < 32; ++k) EXPECT_EQ(hi(h(q(k, 32))), q(k, 32));
  EXPECT_EQ(compose(h, hi).normalized(), Adaptation::identity());
  EXPECT_EQ(h.sup_distance_to_identity(), q(1, 4));
  EXPECT_THROW(Adaptation({{0, 0}, {q(1, 2), q(1, 2)}, {q(1, 4), q(3, 4)}}), DomainError);
  EXPECT_THROW(Adaptation({{q(1, 8), 0}}), DomainError);
}

TEST(WeakStar, Examples) {
  auto m = StepMeasure::lebesgue();
  auto u = StepMeasure::uniform(0, q(1, 2));
  EXPECT_EQ(weak_star_distance(m, u, 1).value, q(1, 4));
  EXPECT_EQ(weak_star_distance(m, u, 1).tail_bound, q(1, 2));
  EXPECT_EQ(weak_star_distance(u, u, 5).value, 0);
  EXPECT_EQ(weak_star_distance(m, u, 4).value, weak_star_distance(u, m, 4).value);
  EXPECT_THROW(weak_star_distance(m, u, 0), DomainError);
}

TEST(WeakStar, MatchesOracle) {
  auto rng = random::trial_engine(18, 0);
  for (int i = 0; i < 20; ++i) {
    auto a = random::good_measure(rng, 1 + i % 4, 16);
    auto b = random::good_measure(rng, 1 + i % 3, 8);
    EXPECT_EQ(weak_star_distance(a, b, 5).value, weak_star_oracle(a, b, 5));
  }
  StepMeasure atomic({}, {{q(1, 3), q(1, 2)}, {q(5, 6), q(1, 2)}});
  EXPECT_EQ(weak_star_distance(atomic, StepMeasure::lebesgue(), 4).value,
            weak_star_oracle(atomic, StepMeasure::lebesgue(), 4));
}
