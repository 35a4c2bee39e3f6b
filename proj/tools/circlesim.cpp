// circlesim command-line front end.
//
// Exit codes: 0 success, 2 parse or invalid input, 3 shape mismatch,
// 4 precondition failure, 1 internal error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "circlesim.hpp"

namespace {

using namespace circlesim;
using json = nlohmann::json;

struct Cell {
  std::variant<Rational, std::int64_t, std::string> value;
};

using Row = std::vector<std::pair<std::string, Cell>>;

/// Rational columns get a decimal column and an exact "_q" sidecar.
std::string render_csv(const std::vector<Row>& rows) {
  std::ostringstream out;
  if (rows.empty()) return "";
  bool first = true;
  for (const auto& [name, cell] : rows.front()) {
    out << (first ? "" : ",") << name;
    if (std::holds_alternative<Rational>(cell.value)) out << "," << name << "_q";
    first = false;
  }
  out << "\n";
  for (const auto& row : rows) {
    first = true;
    for (const auto& [name, cell] : row) {
      out << (first ? "" : ",");
      first = false;
      if (auto* r = std::get_if<Rational>(&cell.value))
        out << to_decimal(*r) << "," << to_string(*r);
      else if (auto* i = std::get_if<std::int64_t>(&cell.value))
        out << *i;
      else
        out << std::get<std::string>(cell.value);
    }
    out << "\n";
  }
  return out.str();
}

std::string render_json(const std::vector<Row>& rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    json obj = json::object();
    for (const auto& [name, cell] : row) {
      if (auto* r = std::get_if<Rational>(&cell.value))
        obj[name] = to_string(*r);
      else if (auto* i = std::get_if<std::int64_t>(&cell.value))
        obj[name] = *i;
      else
        obj[name] = std::get<std::string>(cell.value);
    }
    arr.push_back(obj);
  }
  return json_io::dump(arr);
}

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw ParseError("cannot write " + g.out);
  f << text;
}

void emit_rows(const Globals& g, const std::vector<Row>& rows) {
  emit(g, g.format == "json" ? render_json(rows) : render_csv(rows));
}

Rational rational_arg(const std::string& s) { return parse_rational(s); }

Partition parse_cuts(const std::string& s) {
  std::vector<Rational> cuts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) cuts.push_back(parse_rational(part));
  return Partition(std::move(cuts));
}

std::string element_label(const GroupElement& g) {
  std::string s;
  for (std::size_t i = 0; i < g.coords.size(); ++i) s += (i ? ";" : "") + std::to_string(g.coords[i]);
  return s;
}

std::string mask_label(std::uint64_t mask, std::size_t p) {
  std::string s;
  for (std::size_t i = 0; i < p; ++i) s += (mask >> i) & 1 ? '1' : '0';
  return s;
}

// dist

void cmd_dist(const Globals& g, const std::string& a, const std::string& b, std::size_t J, int L) {
  auto A = json_io::action_from_json(json_io::read_file(a));
  auto B = json_io::action_from_json(json_io::read_file(b));
  auto d = action_dist(A, B, J, L);
  emit_rows(g, {{{"distance", {d.value}}, {"tail_bound", {d.tail_bound}}}});
}

// embed

void cmd_embed(const Globals& g, const std::string& hfile, const std::string& afile, std::size_t w,
               const std::string& cuts) {
  auto h = json_io::adaptation_from_json(json_io::read_file(hfile));
  auto A = json_io::action_from_json(json_io::read_file(afile));
  Partition P = cuts.empty() ? pushforward(h, Partition::uniform(A.resolution())) : parse_cuts(cuts);
  emit(g, json_io::dump(json_io::to_json(embed_E(h, A, Window(A.dim(), w), P))));
}

// recover

void cmd_recover(const Globals& g, const std::string& tfile, const Rational& epsilon, const std::string& witness_out) {
  auto t = json_io::table_from_json(json_io::read_file(tfile));
  try {
    auto r = recover_action(t, epsilon);
    for (const auto& p : r.witness.pairs)
      std::cerr << "defect " << element_label(p.alpha) << " -> " << element_label(p.beta) << ": " << to_string(p.defect)
                << "\n";
    if (!witness_out.empty()) {
      std::ofstream f(witness_out, std::ios::binary);
      f << json_io::dump(json_io::to_json(r.witness));
    }
    emit(g, json_io::dump(json_io::to_json(r.action)));
  } catch (const PreconditionError&) {
    auto w = graph_witness(t);
    const PairWitness* worst = &w.pairs.front();
    for (const auto& p : w.pairs)
      if (p.defect > worst->defect) worst = &p;
    std::cerr << "worst witness: " << json_io::to_json(GraphWitness{{*worst}}).dump() << "\n";
    throw;
  }
}

// realize

void cmd_realize(const Globals& g, const std::string& tfile) {
  auto t = json_io::table_from_json(json_io::read_file(tfile));
  auto A = realize_sim_as_action(t);
  if (!(action_to_sim(A, t.window(), t.partition()) == t))
    throw std::logic_error("realized action does not reproduce the input table");
  emit(g, json_io::dump(json_io::to_json(A)));
}

// smooth

void cmd_smooth(const Globals& g, const std::string& tfile, const Rational& delta, std::size_t repeat) {
  auto t = json_io::table_from_json(json_io::read_file(tfile));
  if (delta < 0 || delta > 1) throw DomainError("delta must lie in [0,1]");
  Rational D = max_cell_density(t);
  auto W = Rational(static_cast<long>(t.window().size()));
  std::vector<GroupElement> betas;
  for (const auto& b : t.window().times())
    if (!b.is_zero()) betas.push_back(b);
  std::vector<Rational> ladder;
  for (std::size_t i = 0; i < repeat; ++i) ladder.push_back(delta * pow2(-static_cast<long>(i)));
  if (ladder.empty() || ladder.back() != 0) ladder.push_back(0);
  std::vector<Row> rows;
  for (const auto& d : ladder) {
    auto s = convolve_sim(t, d);
    Row row{{"delta", {d}}, {"sim_dist", {sim_dist(s, t)}}, {"bound", {2 * W * d * D}}};
    for (const auto& b : betas) {
      std::string name = "fixed_mass_" + element_label(b);
      for (auto& c : name)
        if (c == ';') c = '_';
      row.push_back({name, {fixed_mass_bound(s, b).cell_bound}});
    }
    rows.push_back(std::move(row));
  }
  emit_rows(g, rows);
}

// wrp-demo

std::pair<LatticeAction, LatticeAction> demo_pair(random::Engine& rng, const std::string& kind, std::size_t n,
                                                  std::size_t min_cycle) {
  if (kind == "identical") {
    auto T = random::aperiodic(rng, n, min_cycle);
    return {LatticeAction({T}), LatticeAction({T})};
  }
  if (kind == "cycles") return {LatticeAction({random::full_cycle(rng, n)}), LatticeAction({random::full_cycle(rng, n)})};
  if (kind == "mixed") {
    auto T = random::aperiodic(rng, n, min_cycle);
    auto R = random::aperiodic(rng, n, min_cycle);
    return {LatticeAction({T}), LatticeAction({R})};
  }
  throw DomainError("unknown pair kind \"" + kind + "\"");
}

void cmd_wrp_demo(const Globals& g, std::size_t trials, std::size_t n, std::size_t min_cycle, const Rational& epsilon,
                  std::size_t J, int L, const std::string& kind, bool timing) {
  if (!g.seed) throw DomainError("wrp-demo needs --seed");
  std::vector<Row> rows;
  for (std::size_t k = 0; k < trials; ++k) {
    auto rng = random::trial_engine(*g.seed, k);
    auto [A, B] = demo_pair(rng, kind, n, min_cycle);
    auto start = std::chrono::steady_clock::now();
    Row row{{"trial", {static_cast<std::int64_t>(k)}}, {"epsilon_requested", {epsilon}}};
    try {
      auto r = wrp_conjugacy_search(A, B, epsilon, J, L);
      // Re-verify from the raw permutations: phi T phi^-1 built by hand.
      const auto& T = A.generator(0);
      std::vector<std::size_t> conj(T.resolution());
      for (std::size_t i = 0; i < conj.size(); ++i) conj[r.phi[i]] = r.phi[T[i]];
      auto achieved = action_dist(LatticeAction({IntervalPermutation(conj)}), B, J, L).value;
      row.push_back({"epsilon_achieved", {achieved}});
      row.push_back({"height", {static_cast<std::int64_t>(r.height)}});
      row.push_back({"status", {std::string(achieved == r.distance && achieved < epsilon ? "ok" : "unverified")}});
    } catch (const PreconditionError&) {
      row.push_back({"epsilon_achieved", {std::string("")}});
      row.push_back({"height", {std::string("")}});
      row.push_back({"status", {std::string("infeasible")}});
    }
    if (timing) {
      auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      row.push_back({"time_ms", {std::to_string(ms)}});
    }
    rows.push_back(std::move(row));
  }
  emit_rows(g, rows);
}

// graph-test

void cmd_graph_test(const Globals& g, const std::string& tfile, const Rational& epsilon) {
  auto t = json_io::table_from_json(json_io::read_file(tfile));
  std::vector<Row> rows;
  for (const auto& r : graph_sim_reports(t, epsilon))
    rows.push_back({{"alpha", {element_label(r.alpha)}},
                    {"beta", {element_label(r.beta)}},
                    {"is_graph", {std::string(r.report.is_graph ? "true" : "false")}},
                    {"diameter", {r.report.diameter}},
                    {"worst_B", {mask_label(r.report.worst_B, t.pieces())}},
                    {"best_A", {mask_label(r.report.best_A, t.pieces())}}});
  emit_rows(g, rows);
}

// factor-defect

void cmd_factor_defect(const Globals& g, const std::string& afile, const std::string& ifile, const std::string& dfile,
                       std::size_t w) {
  auto A = json_io::action_from_json(json_io::read_file(afile));
  auto I = json_io::dyadic_set_from_json(json_io::read_file(ifile));
  auto D = json_io::dyadic_set_from_json(json_io::read_file(dfile));
  Window W(A.dim(), w);
  auto atoms = factor_atoms(A, I, D, W);
  emit_rows(g, {{{"defect", {factor_defect(A, I, D, W)}}, {"atoms", {static_cast<std::int64_t>(atoms.size())}}}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circlesim: exact finite-resolution experiments with circle actions and shift-invariant measures"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "PRNG seed")->type_name("UINT64");
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_option("--format", g.format, "result format")->check(CLI::IsMember({"csv", "json"}));
  app.fallthrough();

  std::string file_a, file_b, file_h, file_t, file_i, file_d, cuts, witness_out, kind = "mixed";
  std::string epsilon = "0", delta = "1/4";
  std::size_t J = 2, w = 2, repeat = 6, trials = 20, n = 1024, min_cycle = 64;
  int L = 1;
  bool timing = false;

  auto* dist = app.add_subcommand("dist", "action_dist between two action files");
  dist->add_option("first", file_a)->required()->check(CLI::ExistingFile);
  dist->add_option("second", file_b)->required()->check(CLI::ExistingFile);
  dist->add_option("--J", J, "number of enumerated times");
  dist->add_option("--L", L, "dyadic level");

  auto* embed = app.add_subcommand("embed", "table of E(h, A) on a window");
  embed->add_option("--adaptation", file_h)->required();
  embed->add_option("--action", file_a)->required();
  embed->add_option("--w", w, "window width");
  embed->add_option("--cuts", cuts, "partition cuts, comma separated (default: h applied to the action grid)");

  auto* recover = app.add_subcommand("recover", "recover an action from a graph table");
  recover->add_option("table", file_t)->required();
  recover->add_option("--epsilon", epsilon);
  recover->add_option("--witness", witness_out, "write the graph witness here");

  auto* realize = app.add_subcommand("realize", "realize a one-dimensional table as an interval permutation");
  realize->add_option("table", file_t)->required();

  auto* smooth = app.add_subcommand("smooth", "smoothing ladder for a table");
  smooth->add_option("table", file_t)->required();
  smooth->add_option("--delta", delta, "largest delta");
  smooth->add_option("--repeat", repeat, "ladder length (delta halves each step)");

  auto* wrp = app.add_subcommand("wrp-demo", "random conjugacy-search trials");
  wrp->add_option("--trials", trials);
  wrp->add_option("--n", n, "resolution");
  wrp->add_option("--min-cycle", min_cycle, "shortest allowed cycle");
  wrp->add_option("--epsilon", epsilon, "target distance")->default_str("1/16");
  wrp->add_option("--J", J)->default_str("6");
  wrp->add_option("--L", L)->default_str("6");
  wrp->add_option("--pair", kind, "identical, cycles or mixed")->check(CLI::IsMember({"identical", "cycles", "mixed"}));
  wrp->add_flag("--timing", timing, "append a wall-clock column (not deterministic)");

  auto* graph = app.add_subcommand("graph-test", "graph-joining test on every pair of window times");
  graph->add_option("table", file_t)->required();
  graph->add_option("--epsilon", epsilon)->default_str("1/4");

  auto* fdef = app.add_subcommand("factor-defect", "minimal cylinder approximation error of a set");
  fdef->add_option("--action", file_a)->required();
  fdef->add_option("--I", file_i)->required();
  fdef->add_option("--D", file_d)->required();
  fdef->add_option("--w", w, "window width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (seed_opt->count()) g.seed = seed;

  try {
    if (dist->parsed()) {
      cmd_dist(g, file_a, file_b, J, L);
    } else if (embed->parsed()) {
      cmd_embed(g, file_h, file_a, w, cuts);
    } else if (recover->parsed()) {
      cmd_recover(g, file_t, rational_arg(epsilon), witness_out);
    } else if (realize->parsed()) {
      cmd_realize(g, file_t);
    } else if (smooth->parsed()) {
      cmd_smooth(g, file_t, rational_arg(delta), repeat);
    } else if (wrp->parsed()) {
      if (wrp->count("--epsilon") == 0) epsilon = "1/16";
      if (wrp->count("--J") == 0) J = 6;
      if (wrp->count("--L") == 0) L = 6;
      cmd_wrp_demo(g, trials, n, min_cycle, rational_arg(epsilon), J, L, kind, timing);
    } else if (graph->parsed()) {
      if (graph->count("--epsilon") == 0) epsilon = "1/4";
      cmd_graph_test(g, file_t, rational_arg(epsilon));
    } else if (fdef->parsed()) {
      cmd_factor_defect(g, file_a, file_i, file_d, w);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ShapeMismatch& e) {
    std::cerr << "shape mismatch: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
