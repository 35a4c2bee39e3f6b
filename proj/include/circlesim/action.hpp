#pragma once

// Z^d actions generated by d pairwise-commuting interval permutations.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "circlesim/distance.hpp"
#include "circlesim/errors.hpp"
#include "circlesim/transform.hpp"

namespace circlesim {

/// A time in Z^d, written additively.
struct GroupElement {
  std::vector<std::int64_t> coords;

  GroupElement() = default;
  explicit GroupElement(std::vector<std::int64_t> c) : coords(std::move(c)) {}
  GroupElement(std::initializer_list<std::int64_t> c) : coords(c) {}

  static GroupElement zero(std::size_t d) { return GroupElement(std::vector<std::int64_t>(d, 0)); }
  static GroupElement unit(std::size_t d, std::size_t i) {
    auto g = zero(d);
    g.coords[i] = 1;
    return g;
  }

  std::size_t dim() const { return coords.size(); }
  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](auto v) { return v == 0; });
  }
  std::int64_t max_norm() const {
    std::int64_t m = 0;
    for (auto v : coords) m = std::max<std::int64_t>(m, std::llabs(v));
    return m;
  }

  friend GroupElement operator+(const GroupElement& a, const GroupElement& b) {
    if (a.dim() != b.dim()) throw ShapeMismatch("group elements of different dimension");
    GroupElement r = a;
    for (std::size_t i = 0; i < r.dim(); ++i) r.coords[i] += b.coords[i];
    return r;
  }
  friend GroupElement operator-(const GroupElement& a) {
    GroupElement r = a;
    for (auto& v : r.coords) v = -v;
    return r;
  }
  friend GroupElement operator-(const GroupElement& a, const GroupElement& b) { return a + (-b); }
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

inline std::string to_string(const GroupElement& g) {
  std::string s = "(";
  for (std::size_t i = 0; i < g.dim(); ++i) s += (i ? "," : "") + std::to_string(g.coords[i]);
  return s + ")";
}

namespace detail {

/// Coordinate order 0, 1, -1, 2, -2, ...
inline std::pair<std::int64_t, int> zigzag_key(std::int64_t v) { return {std::llabs(v), v < 0 ? 1 : 0}; }

inline bool time_order(const GroupElement& a, const GroupElement& b) {
  if (a.max_norm() != b.max_norm()) return a.max_norm() < b.max_norm();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    auto ka = zigzag_key(a.coords[i]);
    auto kb = zigzag_key(b.coords[i]);
    if (ka != kb) return ka < kb;
  }
  return false;
}

}  // namespace detail

/// All elements of Z^d with max-norm exactly r, in enumeration order.
inline std::vector<GroupElement> times_with_norm(std::size_t d, std::int64_t r) {
  std::vector<GroupElement> out;
  std::vector<std::int64_t> c(d, -r);
  while (true) {
    GroupElement g(c);
    if (g.max_norm() == r) out.push_back(g);
    std::size_t i = 0;
    while (i < d && c[i] == r) c[i++] = -r;
    if (i == d) break;
    ++c[i];
  }
  std::sort(out.begin(), out.end(), detail::time_order);
  return out;
}

/// The fixed enumeration of Z^d: by max-norm, ties broken lexicographically
/// with coordinates ordered 0, 1, -1, 2, -2, ... The first element is 0.
inline std::vector<GroupElement> enumerate_times(std::size_t d, std::size_t count) {
  std::vector<GroupElement> out;
  for (std::int64_t r = 0; out.size() < count; ++r)
    for (auto& g : times_with_norm(d, r)) {
      if (out.size() == count) break;
      out.push_back(std::move(g));
    }
  return out;
}

class LatticeAction {
 public:
  /// Generators are brought to their common resolution and must commute.
  explicit LatticeAction(std::vector<IntervalPermutation> generators) {
    if (generators.empty()) throw DomainError("lattice action needs at least one generator");
    std::size_t n = 1;
    for (const auto& g : generators) n = std::lcm(n, g.resolution());
    for (const auto& g : generators) gens_.push_back(refine(g, n));
    for (std::size_t i = 0; i < gens_.size(); ++i)
      for (std::size_t j = i + 1; j < gens_.size(); ++j)
        if (compose(gens_[i], gens_[j]).perm() != compose(gens_[j], gens_[i]).perm())
          throw PreconditionError("generators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
  }

  static LatticeAction identity(std::size_t d, std::size_t n) {
    return LatticeAction(std::vector<IntervalPermutation>(d, IntervalPermutation::identity(n)));
  }

  std::size_t dim() const { return gens_.size(); }
  std::size_t resolution() const { return gens_.front().resolution(); }
  const std::vector<IntervalPermutation>& generators() const { return gens_; }
  const IntervalPermutation& generator(std::size_t i) const { return gens_.at(i); }

  friend bool operator==(const LatticeAction& a, const LatticeAction& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
      if (!(a.gens_[i] == b.gens_[i])) return false;
    return true;
  }

 private:
  std::vector<IntervalPermutation> gens_;
};

inline LatticeAction refine(const LatticeAction& A, std::size_t n) {
  std::vector<IntervalPermutation> g;
  for (const auto& t : A.generators()) g.push_back(refine(t, n));
  return LatticeAction(std::move(g));
}

/// The transformation at time gamma: product of generator powers.
inline IntervalPermutation evaluate(const LatticeAction& A, const GroupElement& gamma) {
  if (gamma.dim() != A.dim())
    throw ShapeMismatch("time of dimension " + std::to_string(gamma.dim()) + " for a Z^" + std::to_string(A.dim()) +
                        " action");
  auto result = IntervalPermutation::identity(A.resolution());
  for (std::size_t i = 0; i < A.dim(); ++i)
    if (gamma.coords[i] != 0) result = compose(power(A.generator(i), gamma.coords[i]), result);
  return result;
}

/// sum_{j=1..J} 2^-j coarse_dist(A^{gamma_j}, B^{gamma_j}, L); tail bound 2^-J.
inline TruncatedDistance action_dist(const LatticeAction& A, const LatticeAction& B, std::size_t J, int L) {
  if (A.dim() != B.dim())
    throw ShapeMismatch("action_dist: dimensions " + std::to_string(A.dim()) + " and " + std::to_string(B.dim()));
  if (J < 1) throw DomainError("action_dist: J must be >= 1");
  Rational value = 0;
  auto times = enumerate_times(A.dim(), J);
  for (std::size_t j = 0; j < J; ++j) {
    auto d = coarse_dist(evaluate(A, times[j]), evaluate(B, times[j]), L);
    value += pow2(-static_cast<long>(j + 1)) * d.value;
  }
  return {value, pow2(-static_cast<long>(J))};
}

/// phi A phi^{-1}, generator by generator.
inline LatticeAction conjugate(const IntervalPermutation& phi, const LatticeAction& A) {
  auto phi_inv = inverse(phi);
  std::vector<IntervalPermutation> g;
  for (const auto& t : A.generators()) g.push_back(compose(compose(phi, t), phi_inv));
  return LatticeAction(std::move(g));
}

/// For every nonzero gamma with max-norm <= K, the fixed mass of A^gamma.
inline std::vector<std::pair<GroupElement, Rational>> free_defect(const LatticeAction& A, std::int64_t K) {
  if (K < 1) throw DomainError("free_defect: K must be >= 1");
  std::vector<std::pair<GroupElement, Rational>> out;
  for (std::int64_t r = 1; r <= K; ++r)
    for (const auto& g : times_with_norm(A.dim(), r)) out.push_back({g, fixed_mass(evaluate(A, g))});
  return out;
}

inline bool is_free_at_scale(const LatticeAction& A, std::int64_t K) {
  auto defects = free_defect(A, K);
  return std::all_of(defects.begin(), defects.end(), [](const auto& p) { return p.second == 0; });
}

struct ConjugacyResult {
  IntervalPermutation phi;
  std::size_t height = 0;  // tower height used; 0 for an exact cycle-type match
  Rational distance;       // independently re-evaluated action_dist
};

namespace detail {

inline std::vector<std::size_t> cycle_type(const IntervalPermutation& T) {
  std::vector<std::size_t> t;
  for (const auto& c : cycles(T)) t.push_back(c.size());
  std::sort(t.begin(), t.end());
  return t;
}

/// phi carrying T's cycles onto R's cycles of equal length; phi T phi^-1 = R.
inline IntervalPermutation align_cycles(const IntervalPermutation& T, const IntervalPermutation& R) {
  auto by_length = [](std::vector<std::vector<std::size_t>> cs) {
    std::stable_sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return cs;
  };
  auto ct = by_length(cycles(T));
  auto cr = by_length(cycles(R));
  std::vector<std::size_t> phi(T.resolution());
  for (std::size_t k = 0; k < ct.size(); ++k)
    for (std::size_t i = 0; i < ct[k].size(); ++i) phi[ct[k][i]] = cr[k][i];
  return IntervalPermutation(std::move(phi));
}

/// Maps T's tower onto R's tower level by level (both trimmed to the same
/// number of columns) and the two leftover sets onto each other smallest-first.
inline IntervalPermutation stack_matching(const IntervalPermutation& T, const IntervalPermutation& R, std::size_t h) {
  auto tt = tower_columns(T, h);
  auto tr = tower_columns(R, h);
  std::size_t cols = std::min(tt.base.size(), tr.base.size());
  std::size_t n = T.resolution();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> phi(n, unset);
  std::vector<bool> hit(n, false);
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t a = tt.base[c];
    std::size_t b = tr.base[c];
    for (std::size_t level = 0; level < h; ++level) {
      phi[a] = b;
      hit[b] = true;
      a = T[a];
      b = R[b];
    }
  }
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (phi[i] != unset) continue;
    while (hit[next]) ++next;
    phi[i] = next;
    hit[next] = true;
  }
  return IntervalPermutation(std::move(phi));
}

}  // namespace detail

/// Smallest h with 2^{2-h} < epsilon/2.
inline std::size_t tower_height_for(const Rational& epsilon) {
  std::size_t h = 1;
  while (pow2(2 - static_cast<long>(h)) >= epsilon / 2) ++h;
  return h;
}

/// Finds phi with action_dist(conjugate(phi, A), B, J, L) < epsilon for two
/// Z-actions, by matching congruent Rohlin stacks. Every candidate is
/// verified with an independent action_dist evaluation.
inline ConjugacyResult wrp_conjugacy_search(const LatticeAction& A, const LatticeAction& B, const Rational& epsilon,
                                            std::size_t J, int L) {
  if (A.dim() != 1 || B.dim() != 1) throw ShapeMismatch("wrp_conjugacy_search needs Z-actions (d = 1)");
  if (epsilon <= 0) throw DomainError("epsilon must be positive");
  std::size_t n = std::lcm(A.resolution(), B.resolution());
  auto T = refine(A.generator(0), n);
  auto R = refine(B.generator(0), n);
  auto verify = [&](const IntervalPermutation& phi) {
    return action_dist(conjugate(phi, LatticeAction({T})), LatticeAction({R}), J, L).value;
  };

  if (detail::cycle_type(T) == detail::cycle_type(R)) {
    auto phi = detail::align_cycles(T, R);
    auto d = verify(phi);
    if (d < epsilon) return {std::move(phi), 0, d};
  }

  std::size_t h0 = tower_height_for(epsilon);
  std::size_t shortest = n;
  for (const auto& c : cycles(T)) shortest = std::min(shortest, c.size());
  for (const auto& c : cycles(R)) shortest = std::min(shortest, c.size());
  if (shortest < h0)
    throw PreconditionError("wrp_conjugacy_search: cycle of length " + std::to_string(shortest) +
                            " shorter than tower height " + std::to_string(h0));

  // The first candidate is h0; the remaining heights up to the shortest
  // cycle are tried in increasing order until one verifies.
  std::vector<std::size_t> heights{h0};
  for (std::size_t h = h0 + 1; h <= shortest; ++h) heights.push_back(h);
  for (auto h : heights) {
    auto phi = detail::stack_matching(T, R, h);
    auto d = verify(phi);
    if (d < epsilon) return {std::move(phi), h, d};
  }
  throw PreconditionError("wrp_conjugacy_search: no tower height up to " + std::to_string(shortest) +
                          " reached distance below " + to_string(epsilon) + " at resolution " + std::to_string(n));
}

}  // namespace circlesim
