#pragma once

// Measure-preserving transformations of the circle that translate n equal
// intervals [i/n, (i+1)/n) onto [perm(i)/n, (perm(i)+1)/n).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "circlesim/distance.hpp"
#include "circlesim/errors.hpp"
#include "circlesim/rational.hpp"

namespace circlesim {

class IntervalPermutation {
 public:
  explicit IntervalPermutation(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
    if (perm_.empty()) throw DomainError("interval permutation needs resolution >= 1");
    std::vector<bool> seen(perm_.size(), false);
    for (auto v : perm_) {
      if (v >= perm_.size() || seen[v]) throw DomainError("perm is not a bijection of {0,...,n-1}");
      seen[v] = true;
    }
  }

  static IntervalPermutation identity(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return IntervalPermutation(std::move(p));
  }

  /// Rotation by k/n.
  static IntervalPermutation rotation(std::size_t n, std::size_t k) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (i + k) % n;
    return IntervalPermutation(std::move(p));
  }

  std::size_t resolution() const { return perm_.size(); }
  const std::vector<std::size_t>& perm() const { return perm_; }
  std::size_t operator[](std::size_t i) const { return perm_[i]; }

  /// Image of a point of [0,1).
  Rational apply(const Rational& y) const {
    Rational scaled = y * Rational(static_cast<unsigned long>(resolution()));
    Integer cell_z = scaled.get_num() / scaled.get_den();
    std::size_t cell = to_size(cell_z, "cell");
    return y + ratio(perm_[cell], resolution()) - ratio(cell, resolution());
  }

 private:
  std::vector<std::size_t> perm_;
};

inline std::size_t lcm_resolution(std::size_t a, std::size_t b) { return std::lcm(a, b); }

/// Same map, represented at resolution n2 (a multiple of the current one).
inline IntervalPermutation refine(const IntervalPermutation& T, std::size_t n2) {
  std::size_t n = T.resolution();
  if (n2 == 0 || n2 % n != 0)
    throw ShapeMismatch("refine: " + std::to_string(n2) + " is not a multiple of " + std::to_string(n));
  std::size_t k = n2 / n;
  std::vector<std::size_t> p(n2);
  for (std::size_t i = 0; i < n2; ++i) p[i] = T[i / k] * k + i % k;
  return IntervalPermutation(std::move(p));
}

inline std::pair<IntervalPermutation, IntervalPermutation> at_common_resolution(const IntervalPermutation& T,
                                                                                const IntervalPermutation& R) {
  std::size_t n = lcm_resolution(T.resolution(), R.resolution());
  return {refine(T, n), refine(R, n)};
}

/// Pointwise equality of the maps (resolutions may differ).
inline bool operator==(const IntervalPermutation& T, const IntervalPermutation& R) {
  if (T.resolution() == R.resolution()) return T.perm() == R.perm();
  auto [a, b] = at_common_resolution(T, R);
  return a.perm() == b.perm();
}

/// T o R (apply R first).
inline IntervalPermutation compose(const IntervalPermutation& T, const IntervalPermutation& R) {
  auto [t, r] = at_common_resolution(T, R);
  std::vector<std::size_t> p(t.resolution());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = t[r[i]];
  return IntervalPermutation(std::move(p));
}

inline IntervalPermutation inverse(const IntervalPermutation& T) {
  std::vector<std::size_t> p(T.resolution());
  for (std::size_t i = 0; i < p.size(); ++i) p[T[i]] = i;
  return IntervalPermutation(std::move(p));
}

inline IntervalPermutation power(const IntervalPermutation& T, std::int64_t k) {
  IntervalPermutation base = k < 0 ? inverse(T) : T;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  IntervalPermutation result = IntervalPermutation::identity(T.resolution());
  while (e > 0) {
    if (e & 1) result = compose(base, result);
    base = compose(base, base);
    e >>= 1;
  }
  return result;
}

/// Cycles of the permutation, each starting at its smallest element, in
/// order of smallest element.
inline std::vector<std::vector<std::size_t>> cycles(const IntervalPermutation& T) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(T.resolution(), false);
  for (std::size_t s = 0; s < T.resolution(); ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> c;
    for (std::size_t i = s; !seen[i]; i = T[i]) {
      seen[i] = true;
      c.push_back(i);
    }
    out.push_back(std::move(c));
  }
  return out;
}

/// Mass of the intervals fixed by T.
inline Rational fixed_mass(const IntervalPermutation& T) {
  std::size_t fixed = 0;
  for (std::size_t i = 0; i < T.resolution(); ++i)
    if (T[i] == i) ++fixed;
  return ratio(fixed, T.resolution());
}

/// Union of level-L dyadic intervals; mask[k] selects [k/2^L, (k+1)/2^L).
struct DyadicSet {
  int level = 0;
  std::vector<bool> mask;

  DyadicSet() : mask(1, false) {}
  DyadicSet(int lvl, std::vector<bool> m) : level(lvl), mask(std::move(m)) {
    if (level < 0 || level > 30) throw DomainError("dyadic level out of range");
    if (mask.size() != (std::size_t{1} << level)) throw ShapeMismatch("dyadic mask length must be 2^level");
  }

  static DyadicSet interval(int level, std::size_t first, std::size_t last) {
    std::vector<bool> m(std::size_t{1} << level, false);
    for (std::size_t k = first; k < last; ++k) m[k] = true;
    return {level, std::move(m)};
  }

  std::size_t cells() const { return mask.size(); }

  Rational mass() const {
    return ratio(static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)), cells());
  }

  /// Same set at a finer level.
  DyadicSet at_level(int finer) const {
    if (finer < level) throw ShapeMismatch("cannot coarsen a dyadic set");
    std::size_t k = std::size_t{1} << (finer - level);
    std::vector<bool> m(cells() * k);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = mask[i / k];
    return {finer, std::move(m)};
  }

  friend bool operator==(const DyadicSet& a, const DyadicSet& b) {
    int l = std::max(a.level, b.level);
    return a.at_level(l).mask == b.at_level(l).mask;
  }
};

inline int dyadic_level_of(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) return -1;
  int l = 0;
  while ((std::size_t{1} << l) < n) ++l;
  return l;
}

/// T^{-1}(S). T's resolution must be a power of two so the result is dyadic.
inline DyadicSet preimage(const IntervalPermutation& T, const DyadicSet& S) {
  int tl = dyadic_level_of(T.resolution());
  if (tl < 0) throw ShapeMismatch("preimage: resolution " + std::to_string(T.resolution()) + " is not dyadic");
  int level = std::max(tl, S.level);
  auto t = refine(T, std::size_t{1} << level);
  auto s = S.at_level(level);
  std::vector<bool> m(s.cells());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = s.mask[t[i]];
  return {level, std::move(m)};
}

/// Number of sets E_k enumerated through level L: 2 + 4 + ... + 2^L.
inline std::size_t dyadic_set_count(int L) { return (std::size_t{1} << (L + 1)) - 2; }

/// Truncated coarse metric sum_k 2^-k m(T^-1 E_k xor R^-1 E_k), E_k the
/// dyadic intervals of levels 1..L enumerated level by level, left to right.
inline TruncatedDistance coarse_dist(const IntervalPermutation& T, const IntervalPermutation& R, int L) {
  if (L < 1) throw DomainError("coarse_dist: depth must be >= 1");
  if (L > 20) throw DomainError("coarse_dist: depth too large");
  std::size_t N = std::lcm(std::lcm(T.resolution(), R.resolution()), std::size_t{1} << L);
  auto t = refine(T, N);
  auto r = refine(R, N);
  Rational value = 0;
  std::size_t index_base = 0;  // index of the first set of this level, minus one
  for (int l = 1; l <= L; ++l) {
    std::size_t sets = std::size_t{1} << l;
    std::size_t width = N / sets;
    // A cell lies in exactly one of T^-1 E, R^-1 E for the two level-l sets
    // holding its images whenever those images sit in different sets.
    std::vector<std::uint64_t> diff(sets, 0);
    for (std::size_t i = 0; i < N; ++i) {
      std::size_t a = t[i] / width;
      std::size_t b = r[i] / width;
      if (a != b) {
        ++diff[a];
        ++diff[b];
      }
    }
    for (std::size_t k = 0; k < sets; ++k) {
      if (diff[k] == 0) continue;
      value += ratio(diff[k], N) * pow2(-static_cast<long>(index_base + k + 1));
    }
    index_base += sets;
  }
  return {value, pow2(-static_cast<long>(dyadic_set_count(L)))};
}

/// Mass of the set where T and R differ.
inline Rational halmos_dist(const IntervalPermutation& T, const IntervalPermutation& R) {
  auto [t, r] = at_common_resolution(T, R);
  std::size_t differ = 0;
  for (std::size_t i = 0; i < t.resolution(); ++i)
    if (t[i] != r[i]) ++differ;
  return ratio(differ, t.resolution());
}

/// Rohlin tower: base cells b with b, T b, ..., T^{h-1} b pairwise disjoint.
struct RohlinTower {
  std::size_t resolution = 0;
  std::size_t height = 0;
  std::vector<std::size_t> base;  // in column order

  Rational mass() const {
    return ratio(base.size() * height, resolution);
  }

  DyadicSet base_set() const {
    int l = dyadic_level_of(resolution);
    if (l < 0) throw ShapeMismatch("tower base at non-dyadic resolution");
    std::vector<bool> m(resolution, false);
    for (auto b : base) m[b] = true;
    return {l, std::move(m)};
  }
};

/// Marks every h-th element along each cycle (cycles by smallest element)
/// for the first h * floor(len / h) elements. No mass requirement.
inline RohlinTower tower_columns(const IntervalPermutation& T, std::size_t h) {
  if (h == 0) throw DomainError("tower height must be >= 1");
  RohlinTower tower{T.resolution(), h, {}};
  for (const auto& c : cycles(T)) {
    std::size_t full = c.size() / h;
    for (std::size_t j = 0; j < full; ++j) tower.base.push_back(c[j * h]);
  }
  return tower;
}

/// Tower of height h covering all but at most epsilon of the circle.
inline RohlinTower rohlin_tower(const IntervalPermutation& T, std::size_t h, const Rational& epsilon) {
  if (h == 0) throw DomainError("tower height must be >= 1");
  if (epsilon < 0) throw DomainError("epsilon must be nonnegative");
  auto tower = tower_columns(T, h);
  Rational leftover = 1 - tower.mass();
  if (leftover > epsilon) {
    // Name the shortest cycle that leaves a remainder.
    std::size_t worst = 0;
    for (const auto& c : cycles(T))
      if (c.size() % h != 0 && (worst == 0 || c.size() < worst)) worst = c.size();
    throw PreconditionError("rohlin_tower infeasible: cycle of length " + std::to_string(worst) +
                            " too short for height " + std::to_string(h) + " at epsilon " + to_string(epsilon) +
                            " (uncovered mass " + to_string(leftover) + ")");
  }
  return tower;
}

/// For k = 1..K, the mass of intervals fixed by T^k.
inline std::vector<std::pair<std::size_t, Rational>> aperiodicity_scale(const IntervalPermutation& T, std::size_t K) {
  if (K == 0) throw DomainError("aperiodicity_scale: K must be >= 1");
  auto cs = cycles(T);
  std::vector<std::pair<std::size_t, Rational>> out;
  for (std::size_t k = 1; k <= K; ++k) {
    std::size_t fixed = 0;
    for (const auto& c : cs)
      if (k % c.size() == 0) fixed += c.size();
    out.push_back({k, ratio(fixed, T.resolution())});
  }
  return out;
}

}  // namespace circlesim
