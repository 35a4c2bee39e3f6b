#pragma once

// Probability measures on the circle Y = [0,1) at rational resolution.
//
// A StepMeasure is a finite list of pieces [from_i, from_{i+1}) (the last
// piece ends at 1) each carrying a polynomial density written in the local
// coordinate x - from_i, plus finitely many atoms. Ordinary step measures
// have constant densities; convolving two densities raises the degree, so
// the class is closed under convolution.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circlesim/distance.hpp"
#include "circlesim/errors.hpp"
#include "circlesim/polynomial.hpp"
#include "circlesim/rational.hpp"

namespace circlesim {

/// Half-open interval [lo, hi) inside [0,1].
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x < hi; }
};

inline Rational overlap(const Interval& a, const Interval& b) {
  Rational lo = std::max(a.lo, b.lo);
  Rational hi = std::min(a.hi, b.hi);
  return hi > lo ? Rational(hi - lo) : Rational(0);
}

struct Atom {
  Rational at;
  Rational mass;
};

struct Piece {
  Rational from;
  Polynomial density;  // in the local coordinate x - from
};

class StepMeasure {
 public:
  /// Validates: pieces start at 0, strictly increasing inside [0,1),
  /// nonnegative densities, positive atoms at distinct locations in [0,1),
  /// total mass exactly 1.
  StepMeasure(std::vector<Piece> pieces, std::vector<Atom> atoms = {})
      : pieces_(std::move(pieces)), atoms_(std::move(atoms)) {
    if (pieces_.empty()) pieces_.push_back({0, Polynomial()});
    validate();
  }

  static StepMeasure lebesgue() { return StepMeasure({{0, Polynomial::constant(1)}}); }

  /// Piecewise-constant measure: densities[i] on [breakpoints[i], breakpoints[i+1]).
  static StepMeasure step(const std::vector<Rational>& breakpoints, const std::vector<Rational>& densities) {
    if (breakpoints.size() != densities.size()) throw ShapeMismatch("breakpoints and densities differ in length");
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < breakpoints.size(); ++i)
      pieces.push_back({breakpoints[i], Polynomial::constant(densities[i])});
    return StepMeasure(std::move(pieces));
  }

  /// Normalized Lebesgue measure on [a, b), 0 <= a < b <= 1.
  static StepMeasure uniform(const Rational& a, const Rational& b) {
    if (!(0 <= a && a < b && b <= 1)) throw DomainError("uniform: need 0 <= a < b <= 1");
    Rational d = 1 / Rational(b - a);
    std::vector<Piece> pieces;
    if (a > 0) pieces.push_back({0, Polynomial()});
    pieces.push_back({a, Polynomial::constant(d)});
    if (b < 1) pieces.push_back({b, Polynomial()});
    return StepMeasure(std::move(pieces));
  }

  static StepMeasure point_mass(const Rational& at) { return StepMeasure({}, {{at, 1}}); }

  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  Rational piece_end(std::size_t i) const { return i + 1 < pieces_.size() ? pieces_[i + 1].from : Rational(1); }
  Interval piece_interval(std::size_t i) const { return {pieces_[i].from, piece_end(i)}; }

  bool piecewise_constant() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.density.is_constant(); });
  }

  /// mu([0, y)) for y in [0, 1].
  Rational cdf(const Rational& y) const {
    Rational acc = 0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const Rational& s = pieces_[i].from;
      if (s >= y) break;
      Rational e = std::min(piece_end(i), y);
      acc += pieces_[i].density.integral(0, e - s);
    }
    for (const auto& a : atoms_)
      if (a.at < y) acc += a.mass;
    return acc;
  }

  /// Canonical form: adjacent pieces carrying the same density function
  /// are merged; atoms sorted by location.
  StepMeasure normalized() const {
    std::vector<Piece> merged;
    for (const auto& p : pieces_) {
      if (!merged.empty()) {
        const Piece& last = merged.back();
        if (p.density.shifted(last.from - p.from) == last.density) continue;
      }
      merged.push_back(p);
    }
    StepMeasure out = *this;
    out.pieces_ = std::move(merged);
    std::sort(out.atoms_.begin(), out.atoms_.end(), [](const Atom& a, const Atom& b) { return a.at < b.at; });
    return out;
  }

  friend bool operator==(const StepMeasure& a, const StepMeasure& b) {
    auto x = a.normalized();
    auto y = b.normalized();
    if (x.pieces_.size() != y.pieces_.size() || x.atoms_.size() != y.atoms_.size()) return false;
    for (std::size_t i = 0; i < x.pieces_.size(); ++i)
      if (x.pieces_[i].from != y.pieces_[i].from || !(x.pieces_[i].density == y.pieces_[i].density)) return false;
    for (std::size_t i = 0; i < x.atoms_.size(); ++i)
      if (x.atoms_[i].at != y.atoms_[i].at || x.atoms_[i].mass != y.atoms_[i].mass) return false;
    return true;
  }

 private:
  void validate() const {
    if (pieces_.front().from != 0) throw DomainError("first piece must start at 0");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (p.from < 0 || p.from >= 1) throw DomainError("breakpoint outside [0,1): " + to_string(p.from));
      if (i > 0 && p.from <= pieces_[i - 1].from) throw DomainError("breakpoints must be strictly increasing");
      Rational len = piece_end(i) - p.from;
      // Exact for constant and linear densities; higher degrees arise only
      // from convolution of nonnegative densities.
      if (p.density(0) < 0 || p.density(len) < 0) throw DomainError("negative density on piece " + std::to_string(i));
    }
    Rational total = 0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) total += pieces_[i].density.integral(0, piece_end(i) - pieces_[i].from);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      const auto& a = atoms_[i];
      if (a.at < 0 || a.at >= 1) throw DomainError("atom outside [0,1): " + to_string(a.at));
      if (a.mass <= 0) throw DomainError("atom mass must be positive");
      for (std::size_t j = 0; j < i; ++j)
        if (atoms_[j].at == a.at) throw DomainError("duplicate atom location " + to_string(a.at));
      total += a.mass;
    }
    if (total != 1) throw DomainError("total mass is " + to_string(total) + ", expected 1");
  }

  std::vector<Piece> pieces_;
  std::vector<Atom> atoms_;
};

/// Exact mu-mass of the half-open interval I.
inline Rational mass(const StepMeasure& mu, const Interval& I) {
  if (!(0 <= I.lo && I.lo <= I.hi && I.hi <= 1))
    throw DomainError("interval [" + to_string(I.lo) + "," + to_string(I.hi) + ") not inside [0,1)");
  return mu.cdf(I.hi) - mu.cdf(I.lo);
}

/// Why mu fails to be good (non-atomic with full support), if it does.
inline std::optional<std::string> goodness_defect(const StepMeasure& mu) {
  if (!mu.atoms().empty()) return "atom present at " + to_string(mu.atoms().front().at);
  for (std::size_t i = 0; i < mu.pieces().size(); ++i) {
    // A nonzero nonnegative polynomial vanishes only at finitely many points.
    if (mu.pieces()[i].density.is_zero()) {
      auto I = mu.piece_interval(i);
      return "support gap: density vanishes on [" + to_string(I.lo) + "," + to_string(I.hi) + ")";
    }
  }
  return std::nullopt;
}

inline bool is_good(const StepMeasure& mu) { return !goodness_defect(mu).has_value(); }

/// Largest density value of a piecewise-constant measure.
inline Rational max_density(const StepMeasure& mu) {
  if (!mu.piecewise_constant()) throw PreconditionError("max_density: density not piecewise constant");
  Rational d = 0;
  for (const auto& p : mu.pieces()) d = std::max(d, p.density.coefficient(0));
  return d;
}

namespace detail {

/// A density contribution P(z) on [lo, hi) with P in absolute coordinates;
/// lo, hi lie in [0, 2) and get wrapped onto the circle.
struct RawPiece {
  Rational lo;
  Rational hi;
  Polynomial p;
};

inline StepMeasure assemble(const std::vector<RawPiece>& raw, const std::map<Rational, Rational>& atoms) {
  std::vector<RawPiece> wrapped;
  for (const auto& r : raw) {
    if (r.hi <= r.lo || r.p.is_zero()) continue;
    if (r.hi <= 1) {
      wrapped.push_back(r);
    } else if (r.lo >= 1) {
      wrapped.push_back({r.lo - 1, r.hi - 1, r.p.shifted(1)});
    } else {
      wrapped.push_back({r.lo, 1, r.p});
      wrapped.push_back({0, r.hi - 1, r.p.shifted(1)});
    }
  }
  // Sweep: add each polynomial at its start, remove it at its end.
  std::map<Rational, Polynomial> delta;
  delta[0];
  for (const auto& w : wrapped) {
    delta[w.lo] += w.p;
    if (w.hi < 1) delta[w.hi] -= w.p;
  }
  std::vector<Piece> pieces;
  Polynomial current;
  for (const auto& [x, d] : delta) {
    current += d;
    pieces.push_back({x, current.shifted(x)});
  }
  std::vector<Atom> out_atoms;
  for (const auto& [at, m] : atoms)
    if (m != 0) out_atoms.push_back({at, m});
  return StepMeasure(std::move(pieces), std::move(out_atoms)).normalized();
}

/// Convolution on the real line of P*1[b0,b1) with Q*1[c0,c1), P and Q in
/// absolute coordinates. Appends the piecewise-polynomial result.
inline void convolve_segments(const Polynomial& P, const Rational& b0, const Rational& b1, const Polynomial& Q,
                              const Rational& c0, const Rational& c1, std::vector<RawPiece>& out) {
  if (P.is_zero() || Q.is_zero()) return;
  // P(x) Q(z - x) = sum_{i,j} T[i][j] z^i x^j
  std::size_t dz = Q.coefficients().size();
  std::size_t dx = P.coefficients().size() + Q.coefficients().size();
  std::vector<std::vector<Rational>> T(dz, std::vector<Rational>(dx));
  const auto& p = P.coefficients();
  const auto& q = Q.coefficients();
  for (std::size_t a = 0; a < p.size(); ++a) {
    for (std::size_t b = 0; b < q.size(); ++b) {
      Integer binom = 1;
      for (std::size_t k = 0; k <= b; ++k) {
        if (k > 0) binom = binom * Integer(static_cast<unsigned long>(b - k + 1)) / Integer(static_cast<unsigned long>(k));
        Rational coef = p[a] * q[b] * Rational(binom);
        if (k % 2 == 1) coef = -coef;
        T[b - k][a + k] += coef;
      }
    }
  }
  // G(z, x) = antiderivative in x; evaluated at x = alpha + beta z.
  auto eval_G = [&](const Rational& alpha, const Rational& beta) {
    Polynomial result;
    Polynomial inner({alpha, beta});
    std::vector<Polynomial> powers{Polynomial::constant(1)};
    for (std::size_t i = 0; i < dz; ++i) {
      for (std::size_t j = 0; j < dx; ++j) {
        if (T[i][j] == 0) continue;
        while (powers.size() <= j + 1) powers.push_back(powers.back() * inner);
        result += Polynomial::monomial(i, T[i][j] / Rational(static_cast<long>(j + 1))) * powers[j + 1];
      }
    }
    return result;
  };
  std::vector<Rational> knots{b0 + c0, b0 + c1, b1 + c0, b1 + c1};
  std::sort(knots.begin(), knots.end());
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const Rational& za = knots[k];
    const Rational& zb = knots[k + 1];
    if (za >= zb) continue;
    Rational zm = (za + zb) / 2;
    // lo(z) = max(b0, z - c1), hi(z) = min(b1, z - c0)
    auto lo = (b0 >= zm - c1) ? std::pair<Rational, Rational>{b0, 0} : std::pair<Rational, Rational>{-c1, 1};
    auto hi = (b1 <= zm - c0) ? std::pair<Rational, Rational>{b1, 0} : std::pair<Rational, Rational>{-c0, 1};
    out.push_back({za, zb, eval_G(hi.first, hi.second) - eval_G(lo.first, lo.second)});
  }
}

}  // namespace detail

/// nu * mu on the circle: [nu*mu](A) = integral of mu(A - y) dnu(y).
inline StepMeasure convolve(const StepMeasure& nu, const StepMeasure& mu) {
  std::vector<detail::RawPiece> raw;
  std::map<Rational, Rational> atoms;
  for (const auto& a : nu.atoms())
    for (const auto& b : mu.atoms()) atoms[floor_frac(a.at + b.at)] += a.mass * b.mass;
  // atom x density: translated copy of the density
  auto translate = [&](const StepMeasure& dens, const Atom& atom) {
    for (std::size_t i = 0; i < dens.pieces().size(); ++i) {
      const auto& pc = dens.pieces()[i];
      if (pc.density.is_zero()) continue;
      Rational lo = pc.from + atom.at;
      Rational hi = dens.piece_end(i) + atom.at;
      raw.push_back({lo, hi, pc.density.shifted(-lo) * atom.mass});
    }
  };
  for (const auto& a : nu.atoms()) translate(mu, a);
  for (const auto& b : mu.atoms()) translate(nu, b);
  for (std::size_t i = 0; i < nu.pieces().size(); ++i) {
    const auto& f = nu.pieces()[i];
    if (f.density.is_zero()) continue;
    Polynomial P = f.density.shifted(-f.from);
    for (std::size_t j = 0; j < mu.pieces().size(); ++j) {
      const auto& g = mu.pieces()[j];
      if (g.density.is_zero()) continue;
      Polynomial Q = g.density.shifted(-g.from);
      detail::convolve_segments(P, f.from, nu.piece_end(i), Q, g.from, mu.piece_end(j), raw);
    }
  }
  return detail::assemble(raw, atoms);
}

/// Order-preserving piecewise-linear homeomorphism of the circle fixing 0,
/// through the knots (z_k, y_k) and the implicit end knot (1, 1).
class Adaptation {
 public:
  using Knot = std::pair<Rational, Rational>;

  explicit Adaptation(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.empty() || knots_.front().first != 0 || knots_.front().second != 0)
      throw DomainError("adaptation must start with knot (0,0)");
    for (std::size_t k = 1; k < knots_.size(); ++k) {
      if (knots_[k].first <= knots_[k - 1].first || knots_[k].second <= knots_[k - 1].second)
        throw DomainError("adaptation knots must be strictly increasing in both coordinates");
      if (knots_[k].first >= 1 || knots_[k].second >= 1) throw DomainError("adaptation knots must lie in [0,1)");
    }
  }

  static Adaptation identity() { return Adaptation({{0, 0}}); }

  const std::vector<Knot>& knots() const { return knots_; }

  Rational operator()(const Rational& z) const { return interpolate(z, false); }
  Rational inverse_at(const Rational& y) const { return interpolate(y, true); }

  Adaptation inverse() const {
    std::vector<Knot> swapped;
    for (const auto& [z, y] : knots_) swapped.push_back({y, z});
    return Adaptation(std::move(swapped));
  }

  /// Slope of the linear segment starting at knot k.
  Rational slope(std::size_t k) const {
    auto [z1, y1] = end_knot(k + 1);
    return (y1 - knots_[k].second) / (z1 - knots_[k].first);
  }

  /// sup |h(z) - z|; attained at a knot since h - Id is piecewise linear.
  Rational sup_distance_to_identity() const {
    Rational d = 0;
    for (const auto& [z, y] : knots_) d = std::max(d, Rational(abs(y - z)));
    return d;
  }

  /// Drops knots where the slope does not change.
  Adaptation normalized() const {
    std::vector<Knot> out{knots_.front()};
    for (std::size_t k = 1; k < knots_.size(); ++k)
      if (slope(k) != slope(k - 1)) out.push_back(knots_[k]);
    return Adaptation(std::move(out));
  }

  friend bool operator==(const Adaptation& a, const Adaptation& b) {
    return a.normalized().knots_ == b.normalized().knots_;
  }

 private:
  Knot end_knot(std::size_t k) const { return k < knots_.size() ? knots_[k] : Knot{1, 1}; }

  Rational interpolate(const Rational& x, bool inverse) const {
    if (x < 0 || x > 1) throw DomainError("adaptation argument outside [0,1]");
    auto first = [&](const Knot& k) -> const Rational& { return inverse ? k.second : k.first; };
    auto second = [&](const Knot& k) -> const Rational& { return inverse ? k.first : k.second; };
    std::size_t k = knots_.size() - 1;
    while (first(knots_[k]) > x) --k;
    Knot a = knots_[k];
    Knot b = end_knot(k + 1);
    return second(a) + (x - first(a)) * (second(b) - second(a)) / (first(b) - first(a));
  }

  std::vector<Knot> knots_;
};

/// outer o inner.
inline Adaptation compose(const Adaptation& outer, const Adaptation& inner) {
  std::vector<Rational> zs;
  for (const auto& [z, y] : inner.knots()) zs.push_back(z);
  for (const auto& [z, y] : outer.knots()) zs.push_back(inner.inverse_at(z));
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  std::vector<Adaptation::Knot> knots;
  for (const auto& z : zs) knots.push_back({z, outer(inner(z))});
  return Adaptation(std::move(knots));
}

/// The adaptation h with nu = h<m>: h(z) = y where z = nu([0,y)).
inline Adaptation quantile_adaptation(const StepMeasure& nu) {
  if (auto defect = goodness_defect(nu)) throw PreconditionError("quantile adaptation needs a good measure: " + *defect);
  if (!nu.piecewise_constant())
    throw PreconditionError("quantile adaptation needs a piecewise-constant density");
  std::vector<Adaptation::Knot> knots;
  for (const auto& p : nu.pieces()) knots.push_back({nu.cdf(p.from), p.from});
  return Adaptation(std::move(knots));
}

/// h<mu>(B) = mu(h^{-1}(B)).
inline StepMeasure pushforward(const Adaptation& h, const StepMeasure& mu) {
  std::vector<Rational> ys;
  for (const auto& p : mu.pieces()) ys.push_back(h(p.from));
  for (const auto& [z, y] : h.knots()) ys.push_back(y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<Piece> pieces;
  std::size_t src = 0;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const Rational& y0 = ys[k];
    Rational y1 = k + 1 < ys.size() ? ys[k + 1] : Rational(1);
    Rational z0 = h.inverse_at(y0);
    Rational z1 = h.inverse_at(y1);
    while (src + 1 < mu.pieces().size() && mu.pieces()[src + 1].from <= z0) ++src;
    Rational inv_slope = (z1 - z0) / (y1 - y0);
    const auto& pc = mu.pieces()[src];
    pieces.push_back({y0, pc.density.compose_affine(inv_slope, z0 - pc.from) * inv_slope});
  }
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({h(a.at), a.mass});
  return StepMeasure(std::move(pieces), std::move(atoms)).normalized();
}

/// sum_{l=1..L} 2^-l * max over level-l dyadic intervals I of |mu(I) - nu(I)|,
/// with tail bound 2^-L.
inline TruncatedDistance weak_star_distance(const StepMeasure& mu, const StepMeasure& nu, int L) {
  if (L < 1) throw DomainError("weak_star_distance: level must be >= 1");
  if (L > 24) throw DomainError("weak_star_distance: level too large");
  std::size_t N = std::size_t{1} << L;
  std::vector<Rational> diff(N + 1);
  for (std::size_t k = 0; k <= N; ++k) {
    Rational y = ratio(k, N);
    diff[k] = mu.cdf(y) - nu.cdf(y);
  }
  Rational value = 0;
  for (int l = 1; l <= L; ++l) {
    std::size_t step = std::size_t{1} << (L - l);
    Rational worst = 0;
    for (std::size_t k = 0; k + step <= N; k += step) worst = std::max(worst, Rational(abs(diff[k + step] - diff[k])));
    value += worst * pow2(-l);
  }
  return {value, pow2(-L)};
}

}  // namespace circlesim
