#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mutlin/cpath.hpp"
#include "mutlin/ctypes.hpp"
#include "mutlin/errors.hpp"
#include "mutlin/eval.hpp"
#include "mutlin/gctl.hpp"
#include "mutlin/solver.hpp"
#include "mutlin/tree.hpp"

namespace {

using nlohmann::json;

constexpr int kHolds = 0, kFails = 1, kUsage = 2, kBudget = 3;

// Arguments are file paths when such a file exists, literal text otherwise.
std::string slurp(const std::string& arg) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(arg, ec)) return arg;
  std::ifstream in(arg);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

struct Output {
  bool as_json = false;
  json j;

  void field(const std::string& k, const json& v) { j[k] = v; }
  void finish(const std::string& human) {
    if (as_json)
      std::cout << j.dump(2) << "\n";
    else
      std::cout << human << "\n";
  }
};

json stats_json(const mutlin::SolverStats& st) {
  return {{"iterations", st.iterations},
          {"nodes", st.nodes_generated},
          {"trees", st.trees_built},
          {"guesses", st.guesses_tried},
          {"seconds", st.elapsed_seconds}};
}

// One input in exactly one of the four grammars.
struct Input {
  std::string formula, cpath, ctype, gctl;

  void add_flags(CLI::App* cmd, bool second = false) {
    const char* suffix = second ? "2" : "";
    cmd->add_option(second ? "--formula2" : "-f,--formula", formula,
                    "logic formula (text or file)");
    cmd->add_option(std::string("--cpath") + suffix, cpath, "query (text or file)");
    cmd->add_option(std::string("--ctype") + suffix, ctype, "type (text or file)");
    cmd->add_option(std::string("--gctl") + suffix, gctl, "GCTL formula (text or file)");
  }
  int kinds() const {
    return !formula.empty() + !cpath.empty() + !ctype.empty() + !gctl.empty();
  }
};

mutlin::Formula root_context() {
  using mutlin::Formula;
  using mutlin::Modality;
  return Formula::conj(
      Formula::negation(Formula::modal(Modality::Up, Formula::top())),
      Formula::negation(Formula::modal(Modality::Left, Formula::top())));
}

// The binary-tree satisfiability problem behind each input kind.
mutlin::Formula to_solver_formula(const Input& in) {
  using mutlin::Formula;
  if (!in.formula.empty()) return mutlin::parse_formula(slurp(in.formula));
  Formula f;
  if (!in.cpath.empty())
    f = mutlin::cpath::translate_query(mutlin::cpath::parse_cpath(slurp(in.cpath)));
  else if (!in.ctype.empty())
    f = Formula::conj(
        mutlin::ctypes::translate_type(mutlin::ctypes::parse_ctype(slurp(in.ctype))),
        root_context());
  else
    f = mutlin::gctl::translate_gctl(mutlin::gctl::parse_gctl(slurp(in.gctl)));
  return Formula::conj(mutlin::nary_formula_to_binary(f), mutlin::single_tree_axiom());
}

mutlin::Formula to_plain_translation(const Input& in) {
  if (!in.formula.empty()) return mutlin::parse_formula(slurp(in.formula));
  if (!in.cpath.empty())
    return mutlin::cpath::translate_query(mutlin::cpath::parse_cpath(slurp(in.cpath)));
  if (!in.ctype.empty())
    return mutlin::ctypes::translate_type(mutlin::ctypes::parse_ctype(slurp(in.ctype)));
  return mutlin::gctl::translate_gctl(mutlin::gctl::parse_gctl(slurp(in.gctl)));
}

int report_decision(Output& out, const char* yes, const char* no, bool holds,
                    const std::optional<mutlin::KripkeTree>& cex,
                    const mutlin::SolverStats& stats) {
  out.field("holds", holds);
  out.field("stats", stats_json(stats));
  std::string human = holds ? yes : no;
  if (cex) {
    out.field("counterexample", json::parse(mutlin::tree_to_json(*cex)));
    human += "\ncounterexample: " + mutlin::tree_to_json(*cex);
  }
  out.finish(human);
  return holds ? kHolds : kFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision procedures for a counting mu-calculus on finite trees"};
  app.require_subcommand(1);
  app.fallthrough();  // let --json/--max-nodes/--max-iters follow the subcommand

  bool as_json = false;
  mutlin::SolverOptions opts;
  app.add_flag("--json", as_json, "machine-readable output");
  app.add_option("--max-nodes", opts.max_nodes,
                 "tableau node budget (default 2000000)");
  app.add_option("--max-iters", opts.max_iterations,
                 "update rounds per counting guess (default 100000)");

  Input in1, in2;
  int bound = 5;

  CLI::App* sat = app.add_subcommand("sat", "decide satisfiability");
  in1.add_flags(sat);
  CLI::App* model = app.add_subcommand("model", "decide satisfiability, print a witness");
  in1.add_flags(model);
  CLI::App* empty = app.add_subcommand("empty", "decide query/type emptiness");
  in1.add_flags(empty);
  CLI::App* contains = app.add_subcommand("contains", "decide containment (first in second)");
  in1.add_flags(contains);
  in2.add_flags(contains, true);
  CLI::App* equiv = app.add_subcommand("equiv", "decide equivalence");
  in1.add_flags(equiv);
  in2.add_flags(equiv, true);
  CLI::App* translate = app.add_subcommand("translate", "print the logic translation");
  in1.add_flags(translate);
  CLI::App* oracle = app.add_subcommand("oracle-check",
                                        "brute-force satisfiability up to a tree size");
  in1.add_flags(oracle);
  oracle->add_option("--bound", bound, "max nodes to enumerate (default 5)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Output out;
  out.as_json = as_json;

  try {
    if (in1.kinds() != 1 || (contains->parsed() || equiv->parsed() ? in2.kinds() != 1 : false)) {
      std::cerr << "error: give exactly one input per operand "
                   "(-f/--cpath/--ctype/--gctl)\n";
      return kUsage;
    }

    if (translate->parsed()) {
      mutlin::Formula f = to_plain_translation(in1);
      out.field("formula", to_string(f));
      out.finish(to_string(f));
      return kHolds;
    }

    if (oracle->parsed()) {
      if (in1.formula.empty()) {
        std::cerr << "error: oracle-check takes a -f/--formula input\n";
        return kUsage;
      }
      mutlin::Formula f = mutlin::parse_formula(slurp(in1.formula));
      auto witness = mutlin::brute_force_sat(f, bound);
      out.field("sat", witness.has_value());
      out.field("bound", bound);
      if (witness) {
        out.field("model", json::parse(mutlin::tree_to_json(*witness)));
        out.finish("SAT (within " + std::to_string(bound) +
                   " nodes)\nmodel: " + mutlin::tree_to_json(*witness));
        return kHolds;
      }
      out.finish("UNSAT within " + std::to_string(bound) + " nodes");
      return kFails;
    }

    if (sat->parsed() || model->parsed()) {
      mutlin::Formula f = to_solver_formula(in1);
      mutlin::SatResult r = mutlin::satisfiable(f, opts);
      out.field("sat", r.sat);
      out.field("stats", stats_json(r.stats));
      std::string human = r.sat ? "SAT" : "UNSAT";
      if (model->parsed() && r.model) {
        out.field("model", json::parse(mutlin::tree_to_json(*r.model)));
        human += "\nmodel: " + mutlin::tree_to_json(*r.model);
      }
      out.finish(human);
      return r.sat ? kHolds : kFails;
    }

    // frontend reasoning: empty / contains / equiv on cpath or ctype inputs
    bool want_cpath = !in1.cpath.empty();
    bool want_ctype = !in1.ctype.empty();
    if (!want_cpath && !want_ctype) {
      std::cerr << "error: " << (empty->parsed() ? "empty" : contains->parsed() ? "contains" : "equiv")
                << " needs --cpath or --ctype input\n";
      return kUsage;
    }
    if (want_cpath) {
      auto q1 = mutlin::cpath::parse_cpath(slurp(in1.cpath));
      if (empty->parsed()) {
        auto d = mutlin::cpath::query_empty(q1, opts);
        return report_decision(out, "empty", "non-empty", d.holds, d.counterexample,
                               d.stats);
      }
      auto q2 = mutlin::cpath::parse_cpath(slurp(in2.cpath));
      auto d = contains->parsed() ? mutlin::cpath::query_contained(q1, q2, opts)
                                  : mutlin::cpath::query_equiv(q1, q2, opts);
      return report_decision(out, contains->parsed() ? "contained" : "equivalent",
                             contains->parsed() ? "not contained" : "not equivalent",
                             d.holds, d.counterexample, d.stats);
    }
    auto e1 = mutlin::ctypes::parse_ctype(slurp(in1.ctype));
    if (empty->parsed()) {
      auto d = mutlin::ctypes::type_empty(e1, opts);
      return report_decision(out, "empty", "non-empty", d.holds, d.counterexample,
                             d.stats);
    }
    auto e2 = mutlin::ctypes::parse_ctype(slurp(in2.ctype));
    auto d = contains->parsed() ? mutlin::ctypes::type_contained(e1, e2, opts)
                                : mutlin::ctypes::type_equiv(e1, e2, opts);
    return report_decision(out, contains->parsed() ? "contained" : "equivalent",
                           contains->parsed() ? "not contained" : "not equivalent",
                           d.holds, d.counterexample, d.stats);
  } catch (const mutlin::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const mutlin::budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
