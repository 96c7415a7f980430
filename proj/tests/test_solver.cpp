#include "doctest.h"
#include "mutlin/errors.hpp"
#include "mutlin/solver.hpp"

using namespace mutlin;

namespace {
SatResult solve(const char* s, SolverOptions opts = {}) {
  return satisfiable(parse_formula(s), opts);
}
}  // namespace

TEST_CASE("basic satisfiability") {
  CHECK(solve("p").sat);
  CHECK(solve("T").sat);
  CHECK(!solve("p & ~p").sat);
  CHECK(solve("p | (q & ~q)").sat);
  CHECK(solve("<dn>p").sat);
  CHECK(solve("<up>p").sat);
  CHECK(solve("<rt>p & <dn>q").sat);
  CHECK(!solve("<up>T & ~<up>T").sat);
  CHECK(solve("p & ~<dn>T & ~<up>T").sat);
}

TEST_CASE("witnesses satisfy the formula per the oracle") {
  for (const char* s :
       {"p", "<dn>p", "<up>p & <rt>q", "#(p) > 2", "#(p) > 1 & #(q) <= 0",
        "mu $x . (p & ~<dn>T) | <dn>$x", "<dn>(p & <rt>q)"}) {
    SatResult r = solve(s);
    REQUIRE_MESSAGE(r.sat, std::string(s));
    REQUIRE(r.model.has_value());
    CHECK(validate(*r.model).empty());
    CHECK_MESSAGE(sat_on_tree(nnf(parse_formula(s)), *r.model), s);
  }
}

TEST_CASE("counting unsatisfiability") {
  CHECK(!solve("#(p) > 0 & #(p) <= 0").sat);
  CHECK(!solve("#(p) > 2 & #(T) <= 2").sat);
  CHECK(!solve("p & #(T) <= 0").sat);
  CHECK(solve("#(p) > 1 & #(p) <= 2").sat);
}

TEST_CASE("the running example: sat in 3 rounds with a 7-node witness") {
  SatResult r = solve("#(#(p1) > 1 & p2) > 4");
  REQUIRE(r.sat);
  CHECK(r.stats.iterations == 3);
  REQUIRE(r.witness);
  CHECK(r.witness->size == 7);
  REQUIRE(r.model.has_value());
  CHECK(r.model->size() == 7);
  CHECK(sat_on_tree(parse_formula("#(#(p1) > 1 & p2) > 4"), *r.model));
}

TEST_CASE("budget errors are distinct from unsat") {
  SolverOptions tight;
  tight.max_nodes = 3;
  CHECK_THROWS_AS(solve("#(#(p1) > 1 & p2) > 4", tight), budget_error);
  SolverOptions one_round;
  one_round.max_iterations = 1;
  CHECK_THROWS_AS(solve("<dn><dn>p", one_round), budget_error);
}

TEST_CASE("ill-formed input is rejected up front") {
  CHECK_THROWS_AS(solve("mu $x . <dn>$x | <up>$x"), std::invalid_argument);
  CHECK_THROWS_AS(solve("mu $x . $x"), std::invalid_argument);
}

TEST_CASE("node invariants") {
  Tableau tb(parse_formula("#(p) <= 1"));
  const Lean& lean = tb.lean();

  DynBitset empty(lean.size());
  CHECK(!tb.make_node(empty).has_value());  // no proposition

  DynBitset p(lean.size());
  p.set(*lean.prop_index("p"));
  CHECK(tb.make_node(p).has_value());

  // both <up>T and <lf>T
  DynBitset both = p;
  both.set(lean.modal_top[static_cast<int>(Modality::Up)]);
  both.set(lean.modal_top[static_cast<int>(Modality::Left)]);
  CHECK(!tb.make_node(both).has_value());

  // a present <= atom caps its counter
  const auto& atom = lean.atoms[0];
  DynBitset over = p;
  over.set(atom.entry);
  over.set(atom.bits[1]);  // counter = 2 > 1
  CHECK(!tb.make_node(over).has_value());
  DynBitset ok = p;
  ok.set(atom.entry);
  ok.set(atom.bits[0]);  // counter = 1
  CHECK(tb.make_node(ok).has_value());
}

TEST_CASE("node entailment") {
  Tableau tb(parse_formula("p & (q | <dn>p)"));
  const Lean& lean = tb.lean();
  DynBitset bits(lean.size());
  bits.set(*lean.prop_index("p"));
  bits.set(lean.modal_top[static_cast<int>(Modality::Down)]);
  bits.set(*lean.modal_index(Modality::Down, parse_formula("p")));
  int n = *tb.make_node(bits);

  CHECK(tb.entails(n, parse_formula("p")));
  CHECK(!tb.entails(n, parse_formula("q")));
  CHECK(tb.entails(n, parse_formula("~q")));
  CHECK(tb.entails(n, Formula::top()));
  CHECK(tb.entails(n, parse_formula("<dn>p")));
  CHECK(tb.entails(n, parse_formula("p & (q | <dn>p)")));
  CHECK(!tb.entails(n, Formula::negation(Formula::top())));
  // formulas outside the closure are errors
  CHECK_THROWS_AS(tb.entails(n, parse_formula("<rt>q")), closure_error);
  CHECK_THROWS_AS(tb.entails(n, parse_formula("zzz")), closure_error);
}

TEST_CASE("entailment unfolds fixpoints") {
  Formula f = parse_formula("mu $x . p | <dn>$x");
  Tableau tb(f);
  const Lean& lean = tb.lean();
  DynBitset bits(lean.size());
  bits.set(*lean.prop_index("p"));
  int n = *tb.make_node(bits);
  CHECK(tb.entails(n, f));

  DynBitset viadown(lean.size());
  viadown.set(*lean.prop_index("p'"));
  viadown.set(lean.modal_top[static_cast<int>(Modality::Down)]);
  viadown.set(*lean.modal_index(Modality::Down, f));
  int m = *tb.make_node(viadown);
  CHECK(tb.entails(m, f));
  CHECK(!tb.entails(m, parse_formula("p")));
}

TEST_CASE("modal and counter consistency") {
  Formula f = parse_formula("#(p) > 1");
  Tableau tb(f);
  const Lean& lean = tb.lean();
  const auto& atom = lean.atoms[0];
  int uptop = lean.modal_top[static_cast<int>(Modality::Up)];

  // leaf that satisfies p: counter 1
  DynBitset lb(lean.size());
  lb.set(*lean.prop_index("p"));
  lb.set(uptop);
  lb.set(atom.entry);
  lb.set(atom.bits[0]);
  int leaf = *tb.make_node(lb);

  // parent satisfying p with one child: counter 2, flag set
  DynBitset pb(lean.size());
  pb.set(*lean.prop_index("p"));
  pb.set(lean.modal_top[static_cast<int>(Modality::Down)]);
  pb.set(atom.entry);
  pb.set(atom.bits[1]);
  pb.set(atom.flag);
  int parent = *tb.make_node(pb);

  CHECK(tb.counter_consistent(parent, leaf, -1));
  CHECK(tb.modal_consistent(parent, leaf, Modality::Down));

  // wrong counter: parent claiming 1
  DynBitset wrong = pb;
  wrong.set(atom.bits[1], false);
  wrong.set(atom.bits[0]);
  wrong.set(atom.flag, false);
  int bad = *tb.make_node(wrong);
  CHECK(!tb.counter_consistent(bad, leaf, -1));

  // leaves() accepts exactly the properly initialized down-free nodes
  auto ls = tb.leaves({leaf, parent});
  REQUIRE(ls.size() == 1);
  CHECK(ls[0]->node == leaf);
}

TEST_CASE("tree entailment verifies guesses at the root") {
  Formula f = parse_formula("#(p) > 1");
  Tableau tb(f);
  const Lean& lean = tb.lean();
  const auto& atom = lean.atoms[0];

  // single p-node tree: atom guessed true but count is 1, so not entailed
  DynBitset nb(lean.size());
  nb.set(*lean.prop_index("p"));
  nb.set(atom.entry);
  nb.set(atom.bits[0]);
  auto t1 = tb.tree(*tb.make_node(nb));
  CHECK(!tb.tree_entails(t1, f));

  // counter 2 at a root: flag present, entailed
  DynBitset rb(lean.size());
  rb.set(*lean.prop_index("p"));
  rb.set(lean.modal_top[static_cast<int>(Modality::Down)]);
  rb.set(atom.entry);
  rb.set(atom.bits[1]);
  rb.set(atom.flag);
  DynBitset cb = nb;
  cb.set(lean.modal_top[static_cast<int>(Modality::Up)]);
  auto t2 = tb.tree(*tb.make_node(rb), tb.tree(*tb.make_node(cb)));
  CHECK(tb.tree_entails(t2, f));
}

TEST_CASE("spec-level update grows trees bottom-up") {
  Formula f = parse_formula("<dn>p");
  Tableau tb(f);
  const Lean& lean = tb.lean();

  DynBitset leafb(lean.size());
  leafb.set(*lean.prop_index("p"));
  leafb.set(lean.modal_top[static_cast<int>(Modality::Up)]);
  int leaf = *tb.make_node(leafb);

  DynBitset parb(lean.size());
  parb.set(*lean.prop_index("p'"));
  parb.set(lean.modal_top[static_cast<int>(Modality::Down)]);
  parb.set(*lean.modal_index(Modality::Down, parse_formula("p")));
  int par = *tb.make_node(parb);

  auto [x, y] = tb.update(tb.leaves({leaf, par}), {leaf, par});
  REQUIRE(x.size() == 2);  // the leaf plus the new two-node tree
  CHECK(x[1]->node == par);
  CHECK(x[1]->left->node == leaf);
  CHECK(y == std::set<int>{leaf});  // par was used as a root
  CHECK(tb.tree_entails(x[1], f));
}

TEST_CASE("iteration stats grow with modal depth") {
  CHECK(solve("p").stats.iterations == 1);
  CHECK(solve("<dn>p").stats.iterations == 2);
  CHECK(solve("<dn><dn>p").stats.iterations == 3);
}

TEST_CASE("solver agrees with the bounded oracle on small formulas") {
  const char* cases[] = {
      "p & q",
      "p & ~q & <rt>(q & ~p)",
      "<dn>T & #(T) <= 1",
      "#(p) > 1 & #(~p) > 1",
      "<dn>(p & <dn>p) & #(p) <= 1",
      "mu $x . (p & <up>q) | <up>$x",
      "~(mu $x . p | <dn>$x | <rt>$x)",
      "#(p & <rt>p) > 1",
  };
  for (const char* s : cases) {
    Formula f = parse_formula(s);
    SatResult r = satisfiable(f);
    bool oracle = brute_force_sat(f, 4).has_value();
    if (r.sat) {
      REQUIRE(r.model.has_value());
      CHECK_MESSAGE(sat_on_tree(nnf(f), *r.model), s);
    }
    if (oracle) CHECK_MESSAGE(r.sat, s);
  }
}

TEST_CASE("verbose witnesses keep internal labels") {
  SolverOptions opts;
  opts.keep_internal_labels = true;
  SatResult r = solve("#(p) > 1", opts);
  REQUIRE(r.sat);
  bool saw_counter = false;
  for (const auto& l : r.model->labels)
    for (const auto& s : l)
      if (s.find("c0[") != std::string::npos) saw_counter = true;
  CHECK(saw_counter);
}
