#pragma once

// Shift-invariant measures on Y^{Z^d} restricted to a finite box window and a
// finite interval partition of Y.
//
// A CylinderTable lists the masses of all cylinders fixing one piece per
// window time. It is read under the cell-uniform convention: inside each
// cell (a product of pieces) the measure has uniform product density. Under
// that reading every operation below is exact in rationals.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circlesim/action.hpp"
#include "circlesim/errors.hpp"
#include "circlesim/measure.hpp"
#include "circlesim/rational.hpp"

namespace circlesim {

class Partition {
 public:
  explicit Partition(std::vector<Rational> cuts) : cuts_(std::move(cuts)) {
    if (cuts_.empty() || cuts_.front() != 0) throw DomainError("partition cuts must start at 0");
    for (std::size_t i = 1; i < cuts_.size(); ++i)
      if (cuts_[i] <= cuts_[i - 1]) throw DomainError("partition cuts must be strictly increasing");
    if (cuts_.back() >= 1) throw DomainError("partition cuts must lie in [0,1)");
  }

  static Partition uniform(std::size_t p) {
    if (p == 0) throw DomainError("partition needs at least one piece");
    std::vector<Rational> c;
    for (std::size_t i = 0; i < p; ++i) c.push_back(ratio(i, p));
    return Partition(std::move(c));
  }

  std::size_t size() const { return cuts_.size(); }
  const std::vector<Rational>& cuts() const { return cuts_; }
  Interval piece(std::size_t i) const { return {cuts_.at(i), i + 1 < cuts_.size() ? cuts_[i + 1] : Rational(1)}; }
  Rational length(std::size_t i) const { return piece(i).length(); }

  std::size_t piece_of(const Rational& x) const {
    auto it = std::upper_bound(cuts_.begin(), cuts_.end(), x);
    return static_cast<std::size_t>(it - cuts_.begin()) - 1;
  }

  /// Common refinement.
  friend Partition operator|(const Partition& a, const Partition& b) {
    std::vector<Rational> c = a.cuts_;
    c.insert(c.end(), b.cuts_.begin(), b.cuts_.end());
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return Partition(std::move(c));
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<Rational> cuts_;
};

/// The box {0, ..., w-1}^d of times, listed lexicographically (first
/// coordinate most significant).
class Window {
 public:
  Window(std::size_t d, std::size_t w) : d_(d), w_(w) {
    if (d == 0) throw DomainError("window dimension must be >= 1");
    if (w == 0) throw DomainError("window width must be >= 1");
    std::size_t size = 1;
    for (std::size_t i = 0; i < d; ++i) {
      if (size > 4096 / w) throw DomainError("window too large");
      size *= w;
    }
    for (std::size_t k = 0; k < size; ++k) {
      std::vector<std::int64_t> c(d);
      std::size_t rem = k;
      for (std::size_t i = d; i-- > 0;) {
        c[i] = static_cast<std::int64_t>(rem % w);
        rem /= w;
      }
      times_.emplace_back(std::move(c));
    }
  }

  std::size_t dim() const { return d_; }
  std::size_t width() const { return w_; }
  std::size_t size() const { return times_.size(); }
  const std::vector<GroupElement>& times() const { return times_; }

  std::optional<std::size_t> index_of(const GroupElement& g) const {
    if (g.dim() != d_) return std::nullopt;
    std::size_t k = 0;
    for (auto v : g.coords) {
      if (v < 0 || v >= static_cast<std::int64_t>(w_)) return std::nullopt;
      k = k * w_ + static_cast<std::size_t>(v);
    }
    return k;
  }

  friend bool operator==(const Window& a, const Window& b) { return a.d_ == b.d_ && a.w_ == b.w_; }

 private:
  std::size_t d_;
  std::size_t w_;
  std::vector<GroupElement> times_;
};

/// Piece index per window time, in window order.
using Assignment = std::vector<std::uint32_t>;
using MassMap = std::map<Assignment, Rational>;

/// Sub-window cylinder: a piece for each listed time.
using CylinderSpec = std::vector<std::pair<GroupElement, std::uint32_t>>;

class CylinderTable {
 public:
  /// Validates nonnegativity, total mass 1 and assignment shapes. Zero
  /// entries are dropped. Shift-consistency is not required here; see
  /// is_shift_consistent().
  CylinderTable(Window window, Partition partition, MassMap masses)
      : window_(std::move(window)), partition_(std::move(partition)) {
    Rational total = 0;
    for (auto& [a, m] : masses) {
      if (a.size() != window_.size()) throw ShapeMismatch("assignment length differs from window size");
      for (auto piece : a)
        if (piece >= partition_.size()) throw ShapeMismatch("assignment names piece " + std::to_string(piece));
      if (m < 0) throw DomainError("negative cylinder mass");
      total += m;
      if (m != 0) masses_.emplace(a, std::move(m));
    }
    if (total != 1) throw DomainError("cylinder masses total " + to_string(total) + ", expected 1");
  }

  const Window& window() const { return window_; }
  const Partition& partition() const { return partition_; }
  const MassMap& masses() const { return masses_; }
  std::size_t pieces() const { return partition_.size(); }

  Rational mass(const Assignment& a) const {
    auto it = masses_.find(a);
    return it == masses_.end() ? Rational(0) : it->second;
  }

  /// Sums out every window index not listed in keep (keep sorted ascending).
  MassMap marginalize(const std::vector<std::size_t>& keep) const { return marginalize_map(masses_, keep); }

  static MassMap marginalize_map(const MassMap& m, const std::vector<std::size_t>& keep) {
    MassMap out;
    Assignment sub(keep.size());
    for (const auto& [a, v] : m) {
      for (std::size_t k = 0; k < keep.size(); ++k) sub[k] = a[keep[k]];
      out[sub] += v;
    }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
  }

  /// Description of the first axis whose opposite faces disagree, if any.
  std::optional<std::string> shift_inconsistency() const {
    for (std::size_t axis = 0; axis < window_.dim(); ++axis) {
      std::vector<std::size_t> low, high;
      for (std::size_t k = 0; k < window_.size(); ++k) {
        auto x = window_.times()[k].coords[axis];
        if (x + 1 < static_cast<std::int64_t>(window_.width())) low.push_back(k);
        if (x > 0) high.push_back(k);
      }
      if (marginalize(low) != marginalize(high)) return "faces disagree along axis " + std::to_string(axis);
    }
    return std::nullopt;
  }

  bool is_shift_consistent() const { return !shift_inconsistency().has_value(); }

  friend bool operator==(const CylinderTable& a, const CylinderTable& b) {
    return a.window_ == b.window_ && a.partition_ == b.partition_ && a.masses_ == b.masses_;
  }

 private:
  Window window_;
  Partition partition_;
  MassMap masses_;
};

/// Product table: independent coordinates, piece j with probability probs[j].
inline CylinderTable iid_table(const Window& W, const Partition& P, std::vector<Rational> probs = {}) {
  if (probs.empty())
    for (std::size_t j = 0; j < P.size(); ++j) probs.push_back(P.length(j));
  if (probs.size() != P.size()) throw ShapeMismatch("iid_table: one probability per piece");
  MassMap m;
  Assignment a(W.size(), 0);
  while (true) {
    Rational v = 1;
    for (auto piece : a) v *= probs[piece];
    if (v != 0) m[a] = v;
    std::size_t i = a.size();
    while (i > 0 && a[i - 1] + 1 == P.size()) a[--i] = 0;
    if (i == 0) break;
    ++a[i - 1];
  }
  return CylinderTable(W, P, std::move(m));
}

/// All coordinates in the same piece, piece j with mass equal to its length.
inline CylinderTable diagonal_table(const Window& W, const Partition& P) {
  MassMap m;
  for (std::uint32_t j = 0; j < P.size(); ++j) m[Assignment(W.size(), j)] = P.length(j);
  return CylinderTable(W, P, std::move(m));
}

/// Sum of masses of all full-window assignments extending the given one.
inline Rational cylinder_mass(const CylinderTable& t, const CylinderSpec& spec) {
  std::vector<std::optional<std::uint32_t>> fixed(t.window().size());
  for (const auto& [g, piece] : spec) {
    auto idx = t.window().index_of(g);
    if (!idx) throw ShapeMismatch("time " + to_string(g) + " is not in the window");
    if (piece >= t.pieces()) throw ShapeMismatch("cylinder names piece " + std::to_string(piece));
    if (fixed[*idx] && *fixed[*idx] != piece) return 0;
    fixed[*idx] = piece;
  }
  Rational total = 0;
  for (const auto& [a, m] : t.masses()) {
    bool match = true;
    for (std::size_t k = 0; k < a.size() && match; ++k) match = !fixed[k] || *fixed[k] == a[k];
    if (match) total += m;
  }
  return total;
}

/// One-coordinate marginal, spread uniformly over each piece.
inline StepMeasure marginal(const CylinderTable& t) {
  if (auto why = t.shift_inconsistency()) throw PreconditionError("marginal: table is not shift-consistent: " + *why);
  auto single = t.marginalize({0});
  std::vector<Rational> densities;
  for (std::uint32_t j = 0; j < t.pieces(); ++j) {
    auto it = single.find(Assignment{j});
    Rational mj = it == single.end() ? Rational(0) : it->second;
    densities.push_back(mj / t.partition().length(j));
  }
  return StepMeasure::step(t.partition().cuts(), densities);
}

/// Row c of a kernel: the output pieces receiving mass from input piece c.
using Kernel = std::vector<std::vector<std::pair<std::uint32_t, Rational>>>;

/// Applies the same piece-to-piece kernel independently to every
/// coordinate. Used for re-expression on another partition, smoothing and
/// transport by an adaptation.
inline CylinderTable apply_kernel(const CylinderTable& t, const Kernel& K, const Partition& out) {
  if (K.size() != t.pieces()) throw ShapeMismatch("kernel rows must match input pieces");
  MassMap result;
  std::size_t W = t.window().size();
  std::vector<std::size_t> pos(W);
  Assignment b(W);
  for (const auto& [a, m] : t.masses()) {
    bool empty = false;
    for (std::size_t k = 0; k < W; ++k) empty = empty || K[a[k]].empty();
    if (empty) continue;
    std::fill(pos.begin(), pos.end(), 0);
    while (true) {
      Rational v = m;
      for (std::size_t k = 0; k < W; ++k) {
        const auto& [piece, w] = K[a[k]][pos[k]];
        b[k] = piece;
        v *= w;
      }
      if (v != 0) result[b] += v;
      std::size_t k = W;
      while (k > 0 && pos[k - 1] + 1 == K[a[k - 1]].size()) pos[--k] = 0;
      if (k == 0) break;
      ++pos[k - 1];
    }
  }
  return CylinderTable(t.window(), out, std::move(result));
}

/// The same cell-uniform measure's table on another partition.
inline CylinderTable reexpress(const CylinderTable& t, const Partition& Q) {
  if (t.partition() == Q) return t;
  Kernel K(t.pieces());
  for (std::size_t c = 0; c < t.pieces(); ++c) {
    auto src = t.partition().piece(c);
    for (std::uint32_t j = 0; j < Q.size(); ++j) {
      Rational o = overlap(src, Q.piece(j));
      if (o != 0) K[c].push_back({j, o / src.length()});
    }
  }
  return apply_kernel(t, K, Q);
}

/// Marginal table on the sub-box {0..w2-1}^d.
inline CylinderTable restrict_window(const CylinderTable& t, std::size_t w2) {
  if (w2 > t.window().width()) throw ShapeMismatch("cannot widen a window");
  if (w2 == t.window().width()) return t;
  Window W2(t.window().dim(), w2);
  std::vector<std::size_t> keep;
  for (const auto& g : W2.times()) keep.push_back(*t.window().index_of(g));
  return CylinderTable(W2, t.partition(), t.marginalize(keep));
}

/// max over all sub-window cylinders C of |t1(C) - t2(C)|. Tables are first
/// brought to the common partition refinement and the smaller window. The
/// triangle inequality holds among tables sharing one partition.
inline Rational sim_dist(const CylinderTable& t1, const CylinderTable& t2) {
  if (t1.window().dim() != t2.window().dim()) throw ShapeMismatch("sim_dist: window dimensions differ");
  std::size_t w = std::min(t1.window().width(), t2.window().width());
  Partition P = t1.partition() | t2.partition();
  auto a = reexpress(restrict_window(t1, w), P);
  auto b = reexpress(restrict_window(t2, w), P);
  MassMap diff = a.masses();
  for (const auto& [k, v] : b.masses()) diff[k] -= v;
  std::size_t W = a.window().size();
  if (W > 16) throw DomainError("sim_dist: window too large for exhaustive sub-window enumeration");
  Rational worst = 0;
  for (std::uint32_t subset = 1; subset < (1u << W); ++subset) {
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < W; ++k)
      if (subset & (1u << k)) keep.push_back(k);
    for (const auto& [s, v] : CylinderTable::marginalize_map(diff, keep)) worst = std::max(worst, Rational(abs(v)));
  }
  return worst;
}

/// Two-time marginal eta[a][b] = mass(time alpha in piece a, time beta in b).
using JointMatrix = std::vector<std::vector<Rational>>;

inline JointMatrix pair_matrix(const CylinderTable& t, std::size_t alpha, std::size_t beta) {
  JointMatrix eta(t.pieces(), std::vector<Rational>(t.pieces()));
  for (const auto& [a, m] : t.masses()) eta[a[alpha]][a[beta]] += m;
  return eta;
}

struct UnionWitness {
  std::uint64_t A = 0;  // bitmask over pieces
  Rational diameter;
};

struct GraphJoiningReport {
  bool is_graph = false;
  std::uint64_t worst_B = 0;
  std::uint64_t best_A = 0;
  Rational diameter;  // best achievable diameter for the worst B
};

namespace detail {

inline void check_joint(const JointMatrix& eta) {
  std::size_t p = eta.size();
  for (const auto& row : eta)
    if (row.size() != p) throw ShapeMismatch("joint matrix must be square");
  for (std::size_t i = 0; i < p; ++i) {
    Rational r = 0, c = 0;
    for (std::size_t j = 0; j < p; ++j) {
      r += eta[i][j];
      c += eta[j][i];
    }
    if (r != c) throw PreconditionError("graph test: the two marginals differ at piece " + std::to_string(i));
  }
}

/// Integer numerators over a common denominator; empty if they overflow.
inline std::optional<std::pair<std::vector<std::vector<std::int64_t>>, Integer>> scaled(const JointMatrix& eta) {
  std::vector<Rational> flat;
  for (const auto& row : eta) flat.insert(flat.end(), row.begin(), row.end());
  Integer D = common_denominator(flat);
  Rational total = 0;
  for (const auto& v : flat) total += abs(v);
  if (!Integer(total * Rational(D)).fits_slong_p() || !(total * Rational(D) < Rational(Integer(1) << 60)))
    return std::nullopt;
  std::vector<std::vector<std::int64_t>> out(eta.size(), std::vector<std::int64_t>(eta.size()));
  for (std::size_t i = 0; i < eta.size(); ++i)
    for (std::size_t j = 0; j < eta.size(); ++j) out[i][j] = Integer(eta[i][j] * Rational(D)).get_si();
  return std::make_pair(std::move(out), D);
}

template <class Num>
Num diam3(const Num& x, const Num& y, const Num& z) {
  return std::max({x, y, z}) - std::min({x, y, z});
}

/// Exhaustive search over unions A for a fixed B; ties keep the smallest mask.
template <class Num>
std::pair<std::uint64_t, Num> best_union(const std::vector<Num>& row, const std::vector<Num>& col, const Num& zb) {
  std::size_t p = row.size();
  Num x = 0, y = 0;
  std::uint64_t A = 0;
  std::uint64_t best_A = 0;
  Num best = diam3(x, y, zb);
  for (std::uint64_t step = 1; step < (std::uint64_t{1} << p); ++step) {
    int bit = __builtin_ctzll(step);
    std::uint64_t flip = std::uint64_t{1} << bit;
    if (A & flip) {
      x -= row[bit];
      y -= col[bit];
    } else {
      x += row[bit];
      y += col[bit];
    }
    A ^= flip;
    Num d = diam3(x, y, zb);
    if (d < best || (d == best && A < best_A)) {
      best = d;
      best_A = A;
    }
  }
  return {best_A, best};
}

template <class Num>
GraphJoiningReport enumerate_graph(const std::vector<std::vector<Num>>& eta, const Rational& scale,
                                   const Rational& epsilon) {
  std::size_t p = eta.size();
  std::vector<Num> row(p, Num(0));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) row[i] += eta[i][j];
  GraphJoiningReport rep;
  bool have = false;
  Num worst = 0;
  for (std::uint64_t B = 0; B < (std::uint64_t{1} << p); ++B) {
    std::vector<Num> col(p, Num(0));
    Num zb = 0;
    for (std::size_t j = 0; j < p; ++j)
      if (B & (std::uint64_t{1} << j)) {
        zb += row[j];  // column sum equals row sum: equal marginals
        for (std::size_t i = 0; i < p; ++i) col[i] += eta[i][j];
      }
    auto [A, d] = best_union(row, col, zb);
    if (!have || d > worst) {
      have = true;
      worst = d;
      rep.worst_B = B;
      rep.best_A = A;
    }
  }
  rep.diameter = Rational(worst) * scale;
  rep.is_graph = rep.diameter < epsilon;
  return rep;
}

}  // namespace detail

inline constexpr std::size_t kMaxEnumerationPieces = 12;

/// Exhaustive minimum over unions A of pieces of
/// Diameter{eta(A x Y), eta(A x B), eta(Y x B)} for one union B.
inline UnionWitness best_union_by_enumeration(const JointMatrix& eta, std::uint64_t B) {
  detail::check_joint(eta);
  std::size_t p = eta.size();
  if (p > kMaxEnumerationPieces) throw DomainError("graph test: too many pieces for exhaustive enumeration");
  std::vector<Rational> row(p), col(p);
  Rational zb = 0;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      row[i] += eta[i][j];
      if (B & (std::uint64_t{1} << j)) {
        col[i] += eta[i][j];
        zb += eta[i][j];
      }
    }
  auto [A, d] = detail::best_union(row, col, zb);
  return {A, d};
}

/// Greedy shortcut: A collects the pieces whose conditional mass into B
/// exceeds 1/2.
inline UnionWitness greedy_union(const JointMatrix& eta, std::uint64_t B) {
  detail::check_joint(eta);
  std::size_t p = eta.size();
  Rational x = 0, y = 0, z = 0;
  std::uint64_t A = 0;
  for (std::size_t i = 0; i < p; ++i) {
    Rational r = 0, c = 0;
    for (std::size_t j = 0; j < p; ++j) {
      r += eta[i][j];
      if (B & (std::uint64_t{1} << j)) {
        c += eta[i][j];
        z += eta[i][j];
      }
    }
    if (r > 0 && 2 * c > r) {
      A |= std::uint64_t{1} << i;
      x += r;
      y += c;
    }
  }
  return {A, detail::diam3(x, y, z)};
}

/// Graph-joining test over the finite algebra of unions of pieces: true iff
/// every B admits an A with diameter < epsilon. Reports the worst B.
inline GraphJoiningReport is_graph_joining(const JointMatrix& eta, const Rational& epsilon) {
  detail::check_joint(eta);
  if (eta.size() > kMaxEnumerationPieces) throw DomainError("graph test: too many pieces for exhaustive enumeration");
  if (auto s = detail::scaled(eta)) return detail::enumerate_graph(s->first, Rational(1) / Rational(s->second), epsilon);
  return detail::enumerate_graph(eta, Rational(1), epsilon);
}

/// Same test for a table over a two-time window.
inline GraphJoiningReport is_graph_joining(const CylinderTable& pair, const Rational& epsilon) {
  if (pair.window().size() != 2) throw ShapeMismatch("is_graph_joining needs a window of two times");
  return is_graph_joining(pair_matrix(pair, 0, 1), epsilon);
}

struct PairGraphReport {
  GroupElement alpha;
  GroupElement beta;
  GraphJoiningReport report;
};

inline std::vector<PairGraphReport> graph_sim_reports(const CylinderTable& t, const Rational& epsilon) {
  if (auto why = t.shift_inconsistency()) throw PreconditionError("is_graph_sim: " + *why);
  std::vector<PairGraphReport> out;
  const auto& times = t.window().times();
  for (std::size_t a = 0; a < times.size(); ++a)
    for (std::size_t b = 0; b < times.size(); ++b)
      if (a != b) out.push_back({times[a], times[b], is_graph_joining(pair_matrix(t, a, b), epsilon)});
  return out;
}

/// Every two-time marginal is a graph joining at epsilon.
inline bool is_graph_sim(const CylinderTable& t, const Rational& epsilon) {
  auto reps = graph_sim_reports(t, epsilon);
  return std::all_of(reps.begin(), reps.end(), [](const auto& r) { return r.report.is_graph; });
}

namespace detail {

inline Rational half_square_ramp(const Rational& t) { return t > 0 ? Rational(t * t / 2) : Rational(0); }

/// Area of {(x, y) in [0,len) x [0,delta) : x + y < s}.
inline Rational area_below(const Rational& s, const Rational& len, const Rational& delta) {
  return half_square_ramp(s) - half_square_ramp(s - len) - half_square_ramp(s - delta) +
         half_square_ramp(s - len - delta);
}

}  // namespace detail

/// w(I, c): probability that (uniform on piece c) + (uniform on [0,delta))
/// lands in I, modulo 1. Closed form; independent of convolve().
inline Rational smear_weight(const Interval& I, const Interval& c, const Rational& delta) {
  Rational len = c.length();
  Rational area = 0;
  for (int k = 0; k <= 1; ++k)
    area += detail::area_below(I.hi + k - c.lo, len, delta) - detail::area_below(I.lo + k - c.lo, len, delta);
  return area / (delta * len);
}

/// t * (m_delta)^{x Gamma}: every coordinate independently smeared by a
/// uniform shift in [0, delta).
inline CylinderTable convolve_sim(const CylinderTable& t, const Rational& delta) {
  if (delta < 0 || delta > 1) throw DomainError("convolve_sim: delta must lie in [0,1]");
  if (delta == 0) return t;
  const auto& P = t.partition();
  Kernel K(P.size());
  for (std::size_t c = 0; c < P.size(); ++c)
    for (std::uint32_t j = 0; j < P.size(); ++j) {
      Rational w = smear_weight(P.piece(j), P.piece(c), delta);
      if (w != 0) K[c].push_back({j, w});
    }
  return apply_kernel(t, K, P);
}

/// (1 - delta) t1 + delta t2.
inline CylinderTable average_sims(const CylinderTable& t1, const CylinderTable& t2, const Rational& delta) {
  if (!(t1.window() == t2.window()) || !(t1.partition() == t2.partition()))
    throw ShapeMismatch("average_sims: tables differ in window or partition");
  if (delta < 0 || delta > 1) throw DomainError("average_sims: delta must lie in [0,1]");
  MassMap m;
  for (const auto& [a, v] : t1.masses()) m[a] += (1 - delta) * v;
  for (const auto& [a, v] : t2.masses()) m[a] += delta * v;
  return CylinderTable(t1.window(), t1.partition(), std::move(m));
}

struct FixedMassReport {
  Rational cell_bound;          // mass of cells with equal pieces at gamma and gamma + beta
  Rational cell_uniform_exact;  // exact mass of C_beta for the cell-uniform measure
};

/// Cell-resolution over-approximation of the mass of {y : S^beta y = y}.
inline FixedMassReport fixed_mass_bound(const CylinderTable& t, const GroupElement& beta) {
  if (beta.dim() != t.window().dim()) throw ShapeMismatch("fixed_mass_bound: beta has wrong dimension");
  if (beta.is_zero()) throw DomainError("fixed_mass_bound: beta must be nonzero");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < t.window().size(); ++k)
    if (auto j = t.window().index_of(t.window().times()[k] + beta)) pairs.push_back({k, *j});
  if (pairs.empty()) throw PreconditionError("fixed_mass_bound: no gamma with gamma and gamma+beta in the window");
  Rational bound = 0;
  for (const auto& [a, m] : t.masses()) {
    bool all = std::all_of(pairs.begin(), pairs.end(), [&](const auto& p) { return a[p.first] == a[p.second]; });
    if (all) bound += m;
  }
  // With an absolutely continuous cell density the coincidence set is null.
  return {bound, 0};
}

/// Largest density of the cell-uniform marginal.
inline Rational max_cell_density(const CylinderTable& t) { return max_density(marginal(t)); }

}  // namespace circlesim
