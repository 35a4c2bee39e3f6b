#pragma once

// Seeded generators of random instances. The engine is std::mt19937_64;
// trial k of a run seeded with s uses the engine seeded with
// splitmix64(s + k), so trials can be produced in any order.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "circlesim/action.hpp"
#include "circlesim/equivalence.hpp"
#include "circlesim/measure.hpp"
#include "circlesim/rational.hpp"
#include "circlesim/sim.hpp"
#include "circlesim/transform.hpp"

namespace circlesim::random {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Engine trial_engine(std::uint64_t seed, std::uint64_t trial) { return Engine(splitmix64(seed + trial)); }

/// Uniform in [lo, hi].
inline std::size_t uniform(Engine& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<std::size_t> shuffled(Engine& rng, std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

inline IntervalPermutation permutation(Engine& rng, std::size_t n) { return IntervalPermutation(shuffled(rng, n)); }

/// Permutation with the given cycle lengths on shuffled points.
inline IntervalPermutation with_cycle_lengths(Engine& rng, const std::vector<std::size_t>& lengths) {
  std::size_t n = std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
  auto pts = shuffled(rng, n);
  std::vector<std::size_t> p(n);
  std::size_t at = 0;
  for (auto len : lengths) {
    for (std::size_t i = 0; i < len; ++i) p[pts[at + i]] = pts[at + (i + 1) % len];
    at += len;
  }
  return IntervalPermutation(std::move(p));
}

inline IntervalPermutation full_cycle(Engine& rng, std::size_t n) { return with_cycle_lengths(rng, {n}); }

/// Random cycle structure with every cycle of length >= min_cycle.
inline IntervalPermutation aperiodic(Engine& rng, std::size_t n, std::size_t min_cycle) {
  if (min_cycle == 0 || min_cycle > n) throw DomainError("aperiodic: need 1 <= min_cycle <= n");
  std::vector<std::size_t> lengths;
  std::size_t left = n;
  while (left >= 2 * min_cycle) {
    std::size_t len = uniform(rng, min_cycle, left - min_cycle);
    lengths.push_back(len);
    left -= len;
  }
  lengths.push_back(left);
  return with_cycle_lengths(rng, lengths);
}

/// Commuting generators: for d = 1 a random permutation; for d >= 2 either a
/// product of independent permutations on a grid of factors or powers of a
/// single permutation, conjugated by a random relabelling.
inline LatticeAction action(Engine& rng, std::size_t d, std::size_t n) {
  if (d == 1) return LatticeAction({permutation(rng, n)});
  std::vector<IntervalPermutation> gens;
  std::vector<std::size_t> factors;
  if (d == 2 && n % 2 == 0 && uniform(rng, 0, 1) == 0) {
    std::vector<std::size_t> divisors;
    for (std::size_t a = 2; a < n; ++a)
      if (n % a == 0) divisors.push_back(a);
    std::size_t a = divisors.empty() ? n : divisors[uniform(rng, 0, divisors.size() - 1)];
    std::size_t b = n / a;
    auto s = permutation(rng, a);
    auto t = permutation(rng, b);
    std::vector<std::size_t> g0(n), g1(n);
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < b; ++j) {
        g0[i * b + j] = s[i] * b + j;
        g1[i * b + j] = i * b + t[j];
      }
    gens = {IntervalPermutation(std::move(g0)), IntervalPermutation(std::move(g1))};
  } else {
    auto T = permutation(rng, n);
    for (std::size_t i = 0; i < d; ++i) gens.push_back(power(T, static_cast<std::int64_t>(uniform(rng, 0, 4)) - 2));
  }
  auto phi = permutation(rng, n);
  return conjugate(phi, LatticeAction(std::move(gens)));
}

/// k distinct values from {1, ..., den-1}/den, sorted.
inline std::vector<Rational> grid_points(Engine& rng, std::size_t k, std::size_t den) {
  if (k + 1 > den) throw DomainError("grid_points: not enough grid points");
  auto v = shuffled(rng, den - 1);
  v.resize(k);
  std::sort(v.begin(), v.end());
  std::vector<Rational> out;
  for (auto x : v) out.push_back(ratio(x + 1, den));
  return out;
}

/// Adaptation with `interior` random knots on the grid of denominator den.
inline Adaptation adaptation(Engine& rng, std::size_t interior, std::size_t den) {
  auto z = grid_points(rng, interior, den);
  auto y = grid_points(rng, interior, den);
  std::vector<Adaptation::Knot> knots{{0, 0}};
  for (std::size_t i = 0; i < interior; ++i) knots.push_back({z[i], y[i]});
  return Adaptation(std::move(knots));
}

/// Adaptation with sup |h - Id| <= delta: knots on the grid of den, each
/// displaced by at most delta.
inline Adaptation near_identity(Engine& rng, std::size_t interior, std::size_t den, const Rational& delta) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto z = grid_points(rng, interior, den);
    std::vector<Adaptation::Knot> knots{{0, 0}};
    bool ok = true;
    for (const auto& zi : z) {
      Integer span = Integer(delta * Rational(static_cast<unsigned long>(den)));
      long s = span.get_si();
      long shift = static_cast<long>(uniform(rng, 0, 2 * static_cast<std::size_t>(s))) - s;
      Rational y = zi + ratio(Integer(shift), Integer(static_cast<unsigned long>(den)));
      if (y <= knots.back().second || y >= 1) {
        ok = false;
        break;
      }
      knots.push_back({zi, y});
    }
    if (ok) return Adaptation(std::move(knots));
  }
  return Adaptation::identity();
}

inline Partition partition(Engine& rng, std::size_t p, std::size_t den) {
  std::vector<Rational> cuts{0};
  for (const auto& c : grid_points(rng, p - 1, den)) cuts.push_back(c);
  return Partition(std::move(cuts));
}

/// Good step measure: `pieces` pieces on the grid of den, positive masses.
inline StepMeasure good_measure(Engine& rng, std::size_t pieces, std::size_t den) {
  auto P = partition(rng, pieces, den);
  std::vector<std::size_t> weights;
  for (std::size_t i = 0; i < pieces; ++i) weights.push_back(uniform(rng, 1, 9));
  std::size_t total = std::accumulate(weights.begin(), weights.end(), std::size_t{0});
  std::vector<Rational> densities;
  for (std::size_t i = 0; i < pieces; ++i) densities.push_back(ratio(weights[i], total) / P.length(i));
  return StepMeasure::step(P.cuts(), densities);
}

/// Random rational weights summing to 1.
inline std::vector<Rational> simplex(Engine& rng, std::size_t k, std::size_t max_weight = 6) {
  std::vector<std::size_t> w;
  for (std::size_t i = 0; i < k; ++i) w.push_back(uniform(rng, 1, max_weight));
  std::size_t total = std::accumulate(w.begin(), w.end(), std::size_t{0});
  std::vector<Rational> out;
  for (auto x : w) out.push_back(ratio(x, total));
  return out;
}

/// Shift-consistent table with Lebesgue marginal: a convex mixture of
/// action pushforwards, the independent table and the diagonal table.
inline CylinderTable consistent_table(Engine& rng, const Window& W, const Partition& P, std::size_t n = 0) {
  if (n == 0) n = 2 * P.size();
  std::size_t k = uniform(rng, 1, 3);
  auto weights = simplex(rng, k + 2);
  MassMap m;
  auto add = [&](const CylinderTable& t, const Rational& w) {
    for (const auto& [a, v] : t.masses()) m[a] += w * v;
  };
  for (std::size_t i = 0; i < k; ++i) add(action_to_sim(action(rng, W.dim(), n), W, P), weights[i]);
  add(iid_table(W, P), weights[k]);
  add(diagonal_table(W, P), weights[k + 1]);
  return CylinderTable(W, P, std::move(m));
}

/// p x p matrix with equal row and column sums and total mass 1.
inline JointMatrix joint_matrix(Engine& rng, std::size_t p) {
  JointMatrix eta(p, std::vector<Rational>(p));
  std::size_t total = 0;
  std::vector<std::vector<std::size_t>> raw(p, std::vector<std::size_t>(p));
  std::size_t shape = uniform(rng, 0, 2);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) {
      std::size_t v = uniform(rng, 0, 6);
      if (shape == 1 && uniform(rng, 0, 2) != 0) v = 0;  // sparse
      if (shape == 2 && i == j) v += 6;                  // diagonal-heavy
      raw[i][j] = raw[j][i] = v;
    }
  // Occasionally add a permutation-like component (breaks symmetry).
  if (uniform(rng, 0, 1) == 0) {
    auto pi = shuffled(rng, p);
    std::size_t w = uniform(rng, 1, 8);
    for (std::size_t i = 0; i < p; ++i) raw[i][pi[i]] += w;
  }
  for (const auto& row : raw) total += std::accumulate(row.begin(), row.end(), std::size_t{0});
  if (total == 0) {
    for (std::size_t i = 0; i < p; ++i) raw[i][i] = 1;
    total = p;
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) eta[i][j] = ratio(raw[i][j], total);
  return eta;
}

}  // namespace circlesim::random
