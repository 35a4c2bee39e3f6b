#pragma once

// Bridges between actions and shift-invariant measures: the pushforward of
// Lebesgue measure along orbits, the embedding through an adaptation, the
// relabelling map D, recovery of an action from a graph table, realization
// of a one-dimensional table as an interval permutation, and the
// factor-defect functional.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "circlesim/action.hpp"
#include "circlesim/errors.hpp"
#include "circlesim/measure.hpp"
#include "circlesim/rational.hpp"
#include "circlesim/sim.hpp"
#include "circlesim/transform.hpp"

namespace circlesim {

inline constexpr std::size_t kMaxCells = std::size_t{1} << 22;

namespace detail {

inline std::size_t aligned_resolution(std::size_t n, const Partition& P) {
  Integer N = Integer(static_cast<unsigned long>(n));
  N = lcm(N, common_denominator(P.cuts()));
  if (N > Integer(static_cast<unsigned long>(kMaxCells)))
    throw DomainError("partition cannot be aligned with the action grid at a tractable resolution");
  return to_size(N, "resolution");
}

/// The cells of each window time under the action, refined to N.
inline std::vector<IntervalPermutation> window_maps(const LatticeAction& A, const Window& W, std::size_t N) {
  auto R = refine(A, N);
  std::vector<IntervalPermutation> maps;
  for (const auto& g : W.times()) maps.push_back(evaluate(R, g));
  return maps;
}

}  // namespace detail

/// Masses m(intersection over gamma of T^-gamma(I_gamma)) for every assignment.
inline CylinderTable action_to_sim(const LatticeAction& A, const Window& W, const Partition& P) {
  if (A.dim() != W.dim()) throw ShapeMismatch("action and window dimensions differ");
  std::size_t N = detail::aligned_resolution(A.resolution(), P);
  auto maps = detail::window_maps(A, W, N);
  std::vector<std::uint32_t> piece_of_cell(N);
  for (std::size_t k = 0; k < N; ++k) piece_of_cell[k] = static_cast<std::uint32_t>(P.piece_of(ratio(k, N)));
  std::map<Assignment, std::size_t> counts;
  Assignment a(W.size());
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t g = 0; g < maps.size(); ++g) a[g] = piece_of_cell[maps[g][k]];
    ++counts[a];
  }
  MassMap masses;
  for (const auto& [key, c] : counts) masses[key] = ratio(c, N);
  return CylinderTable(W, P, std::move(masses));
}

/// h^-1(P): the partition whose pieces h carries onto the pieces of P.
inline Partition pullback(const Adaptation& h, const Partition& P) {
  std::vector<Rational> cuts;
  for (const auto& c : P.cuts()) cuts.push_back(h.inverse_at(c));
  return Partition(std::move(cuts));
}

/// h(Q).
inline Partition pushforward(const Adaptation& h, const Partition& Q) {
  std::vector<Rational> cuts;
  for (const auto& c : Q.cuts()) cuts.push_back(h(c));
  return Partition(std::move(cuts));
}

/// D(h, t) on the image partition h(Q): the cylinder over h(I_j) carries
/// the mass of the cylinder over I_j.
inline CylinderTable apply_D(const Adaptation& h, const CylinderTable& t) {
  return CylinderTable(t.window(), pushforward(h, t.partition()), t.masses());
}

/// D(h, t) read on an arbitrary output partition: the cylinder over
/// J_gamma receives t's cell-uniform mass of the cylinder over h^-1(J_gamma).
inline CylinderTable apply_D(const Adaptation& h, const CylinderTable& t, const Partition& out) {
  const auto& P = t.partition();
  Kernel K(P.size());
  for (std::size_t c = 0; c < P.size(); ++c) {
    auto cell = P.piece(c);
    for (std::uint32_t j = 0; j < out.size(); ++j) {
      auto J = out.piece(j);
      Rational o = overlap(cell, {h.inverse_at(J.lo), h.inverse_at(J.hi)});
      if (o != 0) K[c].push_back({j, o / cell.length()});
    }
  }
  return apply_kernel(t, K, out);
}

/// Masses m(intersection over gamma of T^-gamma(h^-1(I_gamma))), computed
/// cell by cell: within a cell of A each T^gamma is a translation, so the
/// itinerary only changes where a translated pulled-back cut falls inside.
inline CylinderTable embed_E(const Adaptation& h, const LatticeAction& A, const Window& W, const Partition& P) {
  if (A.dim() != W.dim()) throw ShapeMismatch("action and window dimensions differ");
  std::size_t n = A.resolution();
  auto maps = detail::window_maps(A, W, n);
  Partition Q = pullback(h, P);
  MassMap masses;
  Assignment a(W.size());
  for (std::size_t k = 0; k < n; ++k) {
    Rational lo = ratio(k, n), hi = ratio(k + 1, n);
    std::vector<Rational> shift;
    std::vector<Rational> breaks{lo, hi};
    for (const auto& T : maps) {
      shift.push_back(ratio(T[k], n) - lo);
      for (const auto& c : Q.cuts()) {
        Rational b = c - shift.back();
        if (b > lo && b < hi) breaks.push_back(b);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      Rational mid = (breaks[i] + breaks[i + 1]) / 2;
      for (std::size_t g = 0; g < maps.size(); ++g) a[g] = static_cast<std::uint32_t>(Q.piece_of(mid + shift[g]));
      masses[a] += breaks[i + 1] - breaks[i];
    }
  }
  return CylinderTable(W, P, std::move(masses));
}

/// Mass of the cylinder with the given interval at each listed time, under
/// the cell-uniform reading of t.
inline Rational interval_cylinder_mass(const CylinderTable& t,
                                       const std::vector<std::pair<GroupElement, Interval>>& spec) {
  std::vector<std::pair<std::size_t, Interval>> fixed;
  for (const auto& [g, I] : spec) {
    auto idx = t.window().index_of(g);
    if (!idx) throw ShapeMismatch("time " + to_string(g) + " is not in the window");
    fixed.push_back({*idx, I});
  }
  Rational total = 0;
  for (const auto& [a, m] : t.masses()) {
    Rational v = m;
    for (const auto& [idx, I] : fixed) {
      auto cell = t.partition().piece(a[idx]);
      v *= overlap(cell, I) / cell.length();
      if (v == 0) break;
    }
    total += v;
  }
  return total;
}

struct ContinuityReport {
  Rational lhs;
  Rational mid;
  Rational rhs;
  Rational delta;
};

/// lhs = |t(cylinder over h^-1(I_gamma)) - t(C)|,
/// mid = sum over gamma of m(h^-1(I_gamma) symmetric-difference I_gamma),
/// rhs = 2 |W| delta with delta = sup |h - Id|.
inline ContinuityReport continuity_bound_check(const Adaptation& h, const CylinderTable& t, const CylinderSpec& C) {
  if (!(marginal(t) == StepMeasure::lebesgue()))
    throw PreconditionError("continuity_bound_check: marginal of the table is not Lebesgue");
  std::vector<std::pair<GroupElement, Interval>> original, pulled;
  Rational mid = 0;
  for (const auto& [g, piece] : C) {
    if (piece >= t.pieces()) throw ShapeMismatch("cylinder names piece " + std::to_string(piece));
    auto I = t.partition().piece(piece);
    Interval J{h.inverse_at(I.lo), h.inverse_at(I.hi)};
    original.push_back({g, I});
    pulled.push_back({g, J});
    mid += I.length() + J.length() - 2 * overlap(I, J);
  }
  ContinuityReport r;
  r.lhs = abs(interval_cylinder_mass(t, pulled) - interval_cylinder_mass(t, original));
  r.mid = mid;
  r.delta = h.sup_distance_to_identity();
  r.rhs = 2 * Rational(static_cast<long>(t.window().size())) * r.delta;
  if (!(r.lhs <= r.mid && r.mid <= r.rhs)) throw std::logic_error("continuity bound violated");
  return r;
}

struct PairWitness {
  GroupElement alpha;
  GroupElement beta;
  std::vector<std::uint32_t> map;  // piece -> designated target piece
  Rational defect;                 // max over pieces of mass escaping its target
};

struct GraphWitness {
  std::vector<PairWitness> pairs;
  Rational max_defect() const {
    Rational m = 0;
    for (const auto& p : pairs) m = std::max(m, p.defect);
    return m;
  }
};

namespace detail {

/// Sparse two-time marginal: row a lists the pieces b with positive mass.
inline std::vector<std::map<std::uint32_t, Rational>> pair_rows(const CylinderTable& t, std::size_t alpha,
                                                                std::size_t beta) {
  std::vector<std::map<std::uint32_t, Rational>> rows(t.pieces());
  for (const auto& [a, m] : t.masses()) rows[a[alpha]][a[beta]] += m;
  return rows;
}

/// Heaviest target of a row (smallest index on ties) and the row total.
inline std::pair<std::uint32_t, Rational> heaviest(const std::map<std::uint32_t, Rational>& row, Rational& total) {
  std::uint32_t best = 0;
  Rational best_mass = 0;
  total = 0;
  for (const auto& [b, v] : row) {
    total += v;
    if (v > best_mass) {
      best = b;
      best_mass = v;
    }
  }
  return {best, best_mass};
}

}  // namespace detail

inline PairWitness pair_witness(const CylinderTable& t, std::size_t alpha, std::size_t beta) {
  PairWitness w{t.window().times()[alpha], t.window().times()[beta], {}, 0};
  for (const auto& row : detail::pair_rows(t, alpha, beta)) {
    Rational r;
    auto [best, best_mass] = detail::heaviest(row, r);
    w.map.push_back(best);
    w.defect = std::max(w.defect, Rational(r - best_mass));
  }
  return w;
}

inline GraphWitness graph_witness(const CylinderTable& t) {
  GraphWitness g;
  for (std::size_t a = 0; a < t.window().size(); ++a)
    for (std::size_t b = 0; b < t.window().size(); ++b)
      if (a != b) g.pairs.push_back(pair_witness(t, a, b));
  return g;
}

struct RecoveredAction {
  LatticeAction action;
  Adaptation equalizer;  // quantile adaptation of the marginal
  GraphWitness witness;
};

/// Reads each generator from the (0, e_i) two-time marginal. Pieces are
/// moved by translation in the coordinates where the marginal becomes
/// Lebesgue measure.
inline RecoveredAction recover_action(const CylinderTable& t, const Rational& epsilon) {
  if (epsilon < 0 || epsilon >= 1) throw DomainError("recover_action: epsilon must lie in [0,1)");
  const auto& W = t.window();
  if (W.width() < 2) throw PreconditionError("recover_action: window must contain the unit vectors");
  auto nu = marginal(t);
  if (auto why = goodness_defect(nu)) throw PreconditionError("recover_action: marginal is not good: " + *why);
  auto h = quantile_adaptation(nu);

  const auto& P = t.partition();
  std::vector<Rational> starts;  // z-coordinates of the equalized pieces
  for (const auto& c : P.cuts()) starts.push_back(h.inverse_at(c));
  std::vector<Rational> all = starts;
  Integer den = common_denominator(all);
  if (den > Integer(static_cast<unsigned long>(kMaxCells))) throw DomainError("recover_action: resolution too large");
  std::size_t N = to_size(den, "resolution");
  auto cell_of = [&](const Rational& z) { return to_size(Integer(z * Rational(den)), "cell"); };

  std::vector<IntervalPermutation> gens;
  std::size_t zero = *W.index_of(GroupElement::zero(W.dim()));
  for (std::size_t i = 0; i < W.dim(); ++i) {
    std::size_t unit = *W.index_of(GroupElement::unit(W.dim(), i));
    auto rows = detail::pair_rows(t, zero, unit);
    std::vector<std::uint32_t> sigma;
    std::vector<bool> hit(P.size(), false);
    for (std::size_t a = 0; a < P.size(); ++a) {
      Rational r;
      auto [b, heavy] = detail::heaviest(rows[a], r);
      std::optional<std::size_t> target;
      if (heavy > 0 && heavy >= (1 - epsilon) * r) target = b;
      if (!target)
        throw PreconditionError("recover_action: piece " + std::to_string(a) + " has no majority target along axis " +
                                std::to_string(i));
      if (hit[*target]) throw PreconditionError("recover_action: induced piece map is not a bijection");
      hit[*target] = true;
      if (mass(nu, P.piece(a)) != mass(nu, P.piece(*target)))
        throw PreconditionError("recover_action: induced piece map does not preserve mass");
      sigma.push_back(static_cast<std::uint32_t>(*target));
    }
    std::vector<std::size_t> perm(N);
    for (std::size_t a = 0; a < P.size(); ++a) {
      std::size_t from = cell_of(starts[a]);
      std::size_t to = cell_of(starts[sigma[a]]);
      std::size_t end = a + 1 < P.size() ? cell_of(starts[a + 1]) : N;
      for (std::size_t k = from; k < end; ++k) perm[k] = to + (k - from);
    }
    gens.emplace_back(std::move(perm));
  }
  return {LatticeAction(std::move(gens)), h, graph_witness(t)};
}

/// Realizes a one-dimensional table with Lebesgue marginal as an interval
/// permutation: the order-(w-1) Markov extension, built by cutting each
/// block cell into outgoing slots and translating them onto receiving slots.
inline LatticeAction realize_sim_as_action(const CylinderTable& t) {
  const auto& W = t.window();
  const auto& P = t.partition();
  if (W.dim() != 1) throw ShapeMismatch("realize_sim_as_action: only d = 1 is supported");
  if (auto why = t.shift_inconsistency()) throw PreconditionError("realize_sim_as_action: " + *why);
  if (!(marginal(t) == StepMeasure::lebesgue()))
    throw PreconditionError("realize_sim_as_action: piece masses must equal piece lengths");

  std::size_t w = W.width();
  if (w == 1) {
    std::size_t N = detail::aligned_resolution(1, P);
    return LatticeAction({IntervalPermutation::identity(N)});
  }
  std::vector<std::size_t> head(w - 1);
  for (std::size_t k = 0; k + 1 < w; ++k) head[k] = k;
  MassMap blocks = t.marginalize(head);  // lex order, so grouped by first piece

  // Block cells laid out inside their first piece.
  std::map<Assignment, Rational> cell_start;
  {
    std::vector<Rational> cursor = P.cuts();
    for (const auto& [u, m] : blocks) {
      cell_start[u] = cursor[u[0]];
      cursor[u[0]] += m;
    }
  }
  struct Slot {
    Rational from;
    Rational to;
    Rational length;
  };
  std::vector<Slot> slots;
  std::map<Assignment, Rational> outgoing, receiving;
  for (const auto& [u, m] : blocks) outgoing[u] = receiving[u] = cell_start[u];
  // Iterating full words in lex order visits receiving slots of each target
  // block in increasing predecessor order.
  for (const auto& [word, m] : t.masses()) {
    Assignment u(word.begin(), word.end() - 1);
    Assignment v(word.begin() + 1, word.end());
    slots.push_back({outgoing[u], receiving[v], m});
    outgoing[u] += m;
    receiving[v] += m;
  }
  std::vector<Rational> ends;
  for (const auto& s : slots) {
    ends.push_back(s.from);
    ends.push_back(s.to);
    ends.push_back(s.length);
  }
  for (const auto& c : P.cuts()) ends.push_back(c);
  Integer den = common_denominator(ends);
  if (den > Integer(static_cast<unsigned long>(kMaxCells))) throw DomainError("realize_sim_as_action: resolution too large");
  std::size_t N = to_size(den, "resolution");
  auto cell = [&](const Rational& z) { return to_size(Integer(z * Rational(den)), "cell"); };
  std::vector<std::size_t> perm(N);
  for (const auto& s : slots) {
    std::size_t from = cell(s.from), to = cell(s.to), len = cell(s.length);
    for (std::size_t k = 0; k < len; ++k) perm[from + k] = to + k;
  }
  LatticeAction A({IntervalPermutation(std::move(perm))});
  if (!(action_to_sim(A, W, P) == t)) throw std::logic_error("realize_sim_as_action: realization does not reproduce the table");
  return A;
}

/// Masses (m(a and D), m(a minus D)) for each atom of the algebra generated by
/// T^-gamma(I), T^-gamma(Y minus I) over gamma in W.
inline std::vector<std::pair<Rational, Rational>> factor_atoms(const LatticeAction& A, const DyadicSet& I,
                                                               const DyadicSet& D, const Window& W) {
  if (A.dim() != W.dim()) throw ShapeMismatch("action and window dimensions differ");
  Integer N = lcm(Integer(static_cast<unsigned long>(A.resolution())), lcm(Integer(1) << I.level, Integer(1) << D.level));
  if (N > Integer(static_cast<unsigned long>(kMaxCells))) throw DomainError("factor_atoms: resolution too large");
  std::size_t n = to_size(N, "resolution");
  auto maps = detail::window_maps(A, W, n);
  auto inside = [n](const DyadicSet& S, std::size_t k) { return bool(S.mask[k / (n >> S.level)]); };
  std::map<std::vector<bool>, std::pair<std::size_t, std::size_t>> atoms;
  std::vector<bool> label(maps.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t g = 0; g < maps.size(); ++g) label[g] = inside(I, maps[g][k]);
    auto& cnt = atoms[label];
    (inside(D, k) ? cnt.first : cnt.second)++;
  }
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& [lab, c] : atoms) out.push_back({ratio(c.first, n), ratio(c.second, n)});
  return out;
}

/// min over unions C of atoms of m(C symmetric-difference D).
inline Rational factor_defect(const LatticeAction& A, const DyadicSet& I, const DyadicSet& D, const Window& W) {
  Rational total = 0;
  for (const auto& [in, out] : factor_atoms(A, I, D, W)) total += std::min(in, out);
  return total;
}

struct InverseContinuityReport {
  Rational mass_first;   // T-sim mass of J x I at times (0, gamma)
  Rational mass_second;  // R-sim mass of J x I
  Rational gap;
  Rational symmetric_difference;  // m(T^-gamma I symmetric-difference R^-gamma I)
  bool implication_holds = true;
};

inline InverseContinuityReport inverse_continuity_check(const LatticeAction& A, const LatticeAction& B,
                                                        const GroupElement& gamma, const DyadicSet& I,
                                                        const Rational& epsilon) {
  if (A.dim() != B.dim() || gamma.dim() != A.dim()) throw ShapeMismatch("inverse_continuity_check: dimensions differ");
  auto T = evaluate(A, gamma);
  auto R = evaluate(B, gamma);
  auto [t, r] = at_common_resolution(T, R);
  auto J = preimage(t, I);
  auto K = preimage(r, I);
  std::size_t cells = J.cells();
  std::size_t both = 0, diff = 0, in_j = 0;
  for (std::size_t k = 0; k < cells; ++k) {
    in_j += J.mask[k];
    both += J.mask[k] && K.mask[k];
    diff += J.mask[k] != K.mask[k];
  }
  InverseContinuityReport rep;
  rep.mass_first = ratio(in_j, cells);
  rep.mass_second = ratio(both, cells);
  rep.gap = abs(rep.mass_first - rep.mass_second);
  rep.symmetric_difference = ratio(diff, cells);
  rep.implication_holds = !(rep.gap < epsilon) || rep.symmetric_difference < 2 * epsilon;
  return rep;
}

}  // namespace circlesim
