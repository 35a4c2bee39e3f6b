#pragma once

// JSON encodings. Rationals travel as strings "p/q" (integers are also
// accepted on input).

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "circlesim/action.hpp"
#include "circlesim/equivalence.hpp"
#include "circlesim/errors.hpp"
#include "circlesim/measure.hpp"
#include "circlesim/rational.hpp"
#include "circlesim/sim.hpp"
#include "circlesim/transform.hpp"

namespace circlesim::json_io {

using json = nlohmann::json;

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline Rational rational_of(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("expected a rational string, got " + j.dump());
}

inline std::size_t size_of(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError(std::string("expected a nonnegative integer for ") + what);
  return j.get<std::size_t>();
}

inline const json& array_of(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("expected an array for ") + what);
  return j;
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

// Measures

inline json to_json(const StepMeasure& mu) {
  json pieces = json::array(), atoms = json::array();
  for (const auto& p : mu.pieces()) {
    json density;
    if (p.density.is_constant()) {
      density = to_string(p.density.coefficient(0));
    } else {
      density = json::array();
      for (const auto& c : p.density.coefficients()) density.push_back(to_string(c));
    }
    pieces.push_back({{"from", to_string(p.from)}, {"density", density}});
  }
  for (const auto& a : mu.atoms()) atoms.push_back({{"at", to_string(a.at)}, {"mass", to_string(a.mass)}});
  return {{"pieces", pieces}, {"atoms", atoms}};
}

inline StepMeasure measure_from_json(const json& j) {
  std::vector<Piece> pieces;
  std::vector<Atom> atoms;
  for (const auto& p : array_of(field(j, "pieces"), "pieces")) {
    const auto& d = field(p, "density");
    Polynomial density;
    if (d.is_array()) {
      std::vector<Rational> c;
      for (const auto& v : d) c.push_back(rational_of(v));
      density = Polynomial(std::move(c));
    } else {
      density = Polynomial::constant(rational_of(d));
    }
    pieces.push_back({rational_of(field(p, "from")), std::move(density)});
  }
  if (j.contains("atoms"))
    for (const auto& a : array_of(j.at("atoms"), "atoms"))
      atoms.push_back({rational_of(field(a, "at")), rational_of(field(a, "mass"))});
  return StepMeasure(std::move(pieces), std::move(atoms));
}

inline json to_json(const Adaptation& h) {
  json knots = json::array();
  for (const auto& [z, y] : h.knots()) knots.push_back({to_string(z), to_string(y)});
  return {{"knots", knots}};
}

inline Adaptation adaptation_from_json(const json& j) {
  std::vector<Adaptation::Knot> knots;
  for (const auto& k : array_of(field(j, "knots"), "knots")) {
    if (!k.is_array() || k.size() != 2) throw ParseError("knot must be a pair [z, y]");
    knots.push_back({rational_of(k[0]), rational_of(k[1])});
  }
  return Adaptation(std::move(knots));
}

// Transformations

inline json to_json(const IntervalPermutation& T) { return {{"n", T.resolution()}, {"perm", T.perm()}}; }

inline std::vector<std::size_t> perm_of(const json& j) {
  std::vector<std::size_t> p;
  for (const auto& v : array_of(j, "perm")) p.push_back(size_of(v, "perm entry"));
  return p;
}

inline IntervalPermutation transform_from_json(const json& j) {
  std::size_t n = size_of(field(j, "n"), "n");
  auto p = perm_of(field(j, "perm"));
  if (p.size() != n) throw ShapeMismatch("perm length differs from n");
  return IntervalPermutation(std::move(p));
}

inline json to_json(const DyadicSet& S) {
  std::string mask;
  for (bool b : S.mask) mask += b ? '1' : '0';
  return {{"level", S.level}, {"mask", mask}};
}

inline DyadicSet dyadic_set_from_json(const json& j) {
  int level = static_cast<int>(size_of(field(j, "level"), "level"));
  const auto& m = field(j, "mask");
  if (!m.is_string()) throw ParseError("mask must be a string of 0/1");
  std::vector<bool> mask;
  for (char c : m.get<std::string>()) {
    if (c != '0' && c != '1') throw ParseError("mask must be a string of 0/1");
    mask.push_back(c == '1');
  }
  return DyadicSet(level, std::move(mask));
}

// Actions

inline json to_json(const LatticeAction& A) {
  json gens = json::array();
  for (const auto& g : A.generators()) gens.push_back(g.perm());
  return {{"d", A.dim()}, {"n", A.resolution()}, {"generators", gens}};
}

inline LatticeAction action_from_json(const json& j) {
  std::size_t d = size_of(field(j, "d"), "d");
  std::size_t n = size_of(field(j, "n"), "n");
  const auto& gens = array_of(field(j, "generators"), "generators");
  if (gens.size() != d) throw ShapeMismatch("number of generators differs from d");
  std::vector<IntervalPermutation> g;
  for (const auto& p : gens) {
    auto perm = perm_of(p);
    if (perm.size() != n) throw ShapeMismatch("generator length differs from n");
    g.emplace_back(std::move(perm));
  }
  return LatticeAction(std::move(g));
}

inline json to_json(const GroupElement& g) { return g.coords; }

// Tables

inline std::string assignment_key(const Assignment& a) {
  std::string s;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(a[k]);
  }
  return s;
}

inline Assignment parse_assignment(const std::string& key) {
  Assignment a;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad assignment key \"" + key + "\"");
    a.push_back(static_cast<std::uint32_t>(std::stoul(part)));
  }
  return a;
}

inline json to_json(const CylinderTable& t) {
  json cuts = json::array(), masses = json::object();
  for (const auto& c : t.partition().cuts()) cuts.push_back(to_string(c));
  for (const auto& [a, m] : t.masses()) masses[assignment_key(a)] = to_string(m);
  return {{"d", t.window().dim()}, {"w", t.window().width()}, {"cuts", cuts}, {"masses", masses}};
}

inline CylinderTable table_from_json(const json& j) {
  Window W(size_of(field(j, "d"), "d"), size_of(field(j, "w"), "w"));
  std::vector<Rational> cuts;
  for (const auto& c : array_of(field(j, "cuts"), "cuts")) cuts.push_back(rational_of(c));
  const auto& m = field(j, "masses");
  if (!m.is_object()) throw ParseError("masses must be an object");
  MassMap masses;
  for (const auto& [key, v] : m.items()) masses[parse_assignment(key)] += rational_of(v);
  return CylinderTable(W, Partition(std::move(cuts)), std::move(masses));
}

inline json to_json(const GraphWitness& w) {
  json pairs = json::array();
  for (const auto& p : w.pairs)
    pairs.push_back({{"alpha", to_json(p.alpha)}, {"beta", to_json(p.beta)}, {"map", p.map}, {"defect", to_string(p.defect)}});
  return {{"pairs", pairs}};
}

/// Two-space indentation and a trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace circlesim::json_io
