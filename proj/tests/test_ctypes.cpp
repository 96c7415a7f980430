#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "mutlin/ctypes.hpp"
#include "mutlin/errors.hpp"
#include "mutlin/eval.hpp"

using namespace mutlin;
using namespace mutlin::ctypes;

namespace {
// A tree labeled `root` whose children are leaves with the given labels.
KripkeTree flat(const std::string& root, const std::vector<std::string>& kids) {
  std::vector<std::vector<int>> ch(kids.size() + 1);
  std::vector<std::vector<std::string>> labels{{root}};
  for (std::size_t i = 0; i < kids.size(); ++i) {
    ch[0].push_back(static_cast<int>(i) + 1);
    labels.push_back({kids[i]});
  }
  return make_nary(0, std::move(ch), std::move(labels));
}

// Matches any tree labeled p: the count of children in eps is always zero.
std::string any(const std::string& p) { return p + "[eps <= 0]"; }
}  // namespace

TEST_CASE("parsing") {
  TypePtr e = parse_ctype("p1[p2[eps <= 0] > 5]");
  REQUIRE(e->kind == TypeExpr::Kind::Labeled);
  CHECK(e->name == "p1");
  CHECK(e->gt);
  CHECK(e->k == 5);
  REQUIRE(e->child->kind == TypeExpr::Kind::Labeled);
  CHECK(e->child->name == "p2");
  CHECK(!e->child->gt);
  CHECK(e->child->k == 0);

  // p[e] abbreviates p[e > 0]
  e = parse_ctype("p[eps]");
  CHECK(e->gt);
  CHECK(e->k == 0);

  // concat binds tighter than alternation, and is right-associative
  e = parse_ctype("p[eps] . q[eps] + r[eps]");
  REQUIRE(e->kind == TypeExpr::Kind::Alt);
  CHECK(e->left->kind == TypeExpr::Kind::Concat);
  e = parse_ctype("p[eps] . q[eps] . r[eps]");
  REQUIRE(e->kind == TypeExpr::Kind::Concat);
  CHECK(e->right->kind == TypeExpr::Kind::Concat);

  // let binders
  e = parse_ctype("let $x = p[eps] . $x + eps in $x");
  REQUIRE(e->kind == TypeExpr::Kind::LetRec);
  REQUIRE(e->vars == std::vector<std::string>{"x"});
  CHECK(e->child->kind == TypeExpr::Kind::Var);
  CHECK(e->bodies[0]->kind == TypeExpr::Kind::Alt);

  // sugar: * desugars to a let, ? to an alternation with eps, postfix + to e.e*
  e = parse_ctype("p[eps]*");
  REQUIRE(e->kind == TypeExpr::Kind::LetRec);
  CHECK(e->bodies.size() == 1);
  e = parse_ctype("p[eps]?");
  REQUIRE(e->kind == TypeExpr::Kind::Alt);
  CHECK(e->left->kind == TypeExpr::Kind::Epsilon);
  e = parse_ctype("p[eps]+");
  REQUIRE(e->kind == TypeExpr::Kind::Concat);
  CHECK(e->left->kind == TypeExpr::Kind::Labeled);
  CHECK(e->right->kind == TypeExpr::Kind::LetRec);

  // a + with an expression after it is the alternation, not the postfix plus
  e = parse_ctype("p[eps] + q[eps]");
  CHECK(e->kind == TypeExpr::Kind::Alt);
  e = parse_ctype("let $x = p[eps]+ in $x");
  CHECK(e->kind == TypeExpr::Kind::LetRec);
  CHECK(e->bodies[0]->kind == TypeExpr::Kind::Concat);

  CHECK_THROWS_AS(parse_ctype("$x"), parse_error);        // free variable
  CHECK_THROWS_AS(parse_ctype("p[eps"), parse_error);     // missing bracket
  CHECK_THROWS_AS(parse_ctype("p[eps] q"), parse_error);  // trailing input
  CHECK_THROWS_AS(parse_ctype("let $x = eps in $y"), parse_error);
  CHECK_THROWS_AS(parse_ctype(""), parse_error);
}

TEST_CASE("printing round-trips") {
  for (const char* s :
       {"eps", "p[eps]", "p1[p2[eps <= 0] > 5]", "p[eps] . q[eps] + r[eps]",
        "(p[eps] + q[eps]) . r[eps]", "let $x = p[eps] . $x + eps in $x",
        "p[eps]*", "p[eps]? . q[eps]+", "let $x = eps, $y = $x in $y"}) {
    std::string printed = to_string(parse_ctype(s));
    CHECK(to_string(parse_ctype(printed)) == printed);
  }
  CHECK(to_string(parse_ctype("p[eps > 0]")) == "p[eps]");
  CHECK(type_size(parse_ctype("p[eps] . q[eps]")) == 5);
}

TEST_CASE("nullable") {
  CHECK(nullable(parse_ctype("eps")));
  CHECK(!nullable(parse_ctype("p[eps]")));
  CHECK(nullable(parse_ctype("p[eps]*")));
  CHECK(!nullable(parse_ctype("p[eps]+")));
  CHECK(nullable(parse_ctype("p[eps]?")));
  CHECK(nullable(parse_ctype("eps . eps")));
  CHECK(!nullable(parse_ctype("p[eps] . eps")));
  CHECK(nullable(parse_ctype("p[eps] + eps")));
  CHECK(!nullable(parse_ctype("let $x = p[eps] . $x + p[eps] in $x")));
}

TEST_CASE("membership semantics") {
  KripkeTree six = flat("p1", {"p2", "p2", "p2", "p2", "p2", "p2"});
  CHECK(member(six, parse_ctype("p1[" + any("p2") + " > 5]")));
  CHECK(!member(six, parse_ctype("p1[" + any("p2") + " <= 5]")));
  CHECK(member(six, parse_ctype("p1[" + any("p2") + " <= 6]")));

  // counting ignores children outside the body language
  KripkeTree mixed = flat("p1", {"p2", "q", "p2"});
  CHECK(member(mixed, parse_ctype("p1[" + any("p2") + " > 1]")));
  CHECK(member(mixed, parse_ctype("p1[" + any("q") + " <= 1]")));
  CHECK(!member(mixed, parse_ctype("p1[" + any("q") + " > 1]")));

  // a leaf has zero matching children, so <= bounds hold and > 0 fails
  KripkeTree leaf = flat("p1", {});
  CHECK(member(leaf, parse_ctype("p1[" + any("p2") + " <= 5]")));
  CHECK(!member(leaf, parse_ctype("p1[" + any("p2") + "]")));
  CHECK(!member(leaf, parse_ctype("q[eps <= 0]")));

  // no single tree is the empty forest
  CHECK(!member(leaf, parse_ctype("eps")));

  // top-level concatenation and alternation over the one-tree forest
  CHECK(member(leaf, parse_ctype(any("p1") + " . eps")));
  CHECK(member(leaf, parse_ctype("eps . " + any("p1"))));
  CHECK(!member(leaf, parse_ctype(any("p1") + " . " + any("p1"))));
  CHECK(member(leaf, parse_ctype(any("q") + " + " + any("p1"))));

  // recursion: chains of p1 ending in a p2 leaf
  std::string chain = "let $x = p1[$x] + p2[eps <= 0] in $x";
  KripkeTree t = make_nary(0, {{1}, {2}, {}}, {{"p1"}, {"p1"}, {"p2"}});
  CHECK(member(t, parse_ctype(chain)));
  KripkeTree bad = make_nary(0, {{1}, {2}, {}}, {{"p1"}, {"p1"}, {"p1"}});
  CHECK(!member(bad, parse_ctype(chain)));

  // star under counting: at least two children that are p2 chains
  std::string star = "p1[p2[" + any("p2") + " <= 9] > 1]";
  CHECK(member(flat("p1", {"p2", "p2"}), parse_ctype(star)));
  CHECK(!member(flat("p1", {"p2"}), parse_ctype(star)));
}

TEST_CASE("translation clauses") {
  CHECK(translate_type(parse_ctype("eps")) == Formula::negation(Formula::top()));
  CHECK(translate_type_negated(parse_ctype("eps")) == Formula::top());

  // homomorphic clauses (the right operand's origins are renumbered)
  TypePtr a = parse_ctype(any("a"));
  Formula alt = translate_type(parse_ctype(any("a") + " + " + any("b")));
  REQUIRE(alt.kind() == Kind::Or);
  CHECK(alt.child(0) == translate_type(a));
  CHECK(alt.child(1) == Formula::prop("b"));  // any("b") simplifies to a proposition
  Formula cat = translate_type(parse_ctype(any("a") + " . " + any("b")));
  REQUIRE(cat.kind() == Kind::And);
  CHECK(cat.child(0) == translate_type(a));
  REQUIRE(cat.child(1).kind() == Kind::Modal);
  CHECK(cat.child(1).modality() == Modality::Right);
  CHECK(cat.child(1).child(0) == Formula::prop("b"));

  // F(p1[p2[eps <= 0] <= 5]) =
  //   p1 & ((o1 & nominal) & #(F(p2[...]) & <up>(nominal & o1)) <= 5)
  Formula f = translate_type(parse_ctype("p1[p2[eps <= 0] <= 5]"));
  REQUIRE(f.kind() == Kind::And);
  CHECK(f.child(0) == Formula::prop("p1"));
  Formula o = Formula::prop("o1");
  Formula nominal = Formula::conj(Formula::count_le(o, 1), Formula::count_gt(o, 0));
  CHECK(f.child(1).child(0) == Formula::conj(o, nominal));
  Formula atom = f.child(1).child(1);
  REQUIRE(atom.kind() == Kind::CountLe);
  CHECK(atom.bound() == 5);
  CHECK(atom.child(0) ==
        Formula::conj(Formula::prop("p2"),
                      Formula::modal(Modality::Up, Formula::conj(nominal, o))));

  // the negated translation complements each bound and keeps anchors positive
  Formula g = translate_type_negated(parse_ctype("p1[p2[eps <= 0] <= 5]"));
  REQUIRE(g.kind() == Kind::Or);
  CHECK(g.child(0) == Formula::negation(Formula::prop("p1")));
  CHECK(g.child(1).child(1).kind() == Kind::CountGt);
  CHECK(g.child(1).child(1).bound() == 5);

  // origins avoid user propositions; the empty-count body needs no origin
  Formula h = translate_type(parse_ctype("o1[" + any("o2") + "]"));
  auto props = propositions(h);
  CHECK(std::count(props.begin(), props.end(), "o3") == 1);
  CHECK(std::count(props.begin(), props.end(), "o4") == 0);
  Formula h2 = translate_type(parse_ctype("a[b[c[eps] > 0] > 0]"));
  props = propositions(h2);
  CHECK(std::count(props.begin(), props.end(), "o1") == 1);
  CHECK(std::count(props.begin(), props.end(), "o2") == 1);

  // translated size is linear in the expression size
  for (const char* s : {"p[eps]", "p1[p2[eps <= 0] > 5]", "p[eps]* . q[eps]?",
                        "let $x = p[$x] + q[eps <= 1] in $x"}) {
    TypePtr e = parse_ctype(s);
    CHECK(formula_size(translate_type(e)) <= 30 * type_size(e));
    CHECK(formula_size(translate_type_negated(e)) <= 30 * type_size(e));
  }
}

TEST_CASE("membership agrees with the translation on enumerated trees") {
  // Satisfiability of F(e) (over single rooted trees) must agree with the
  // existence of a member among all small trees for these inhabited types.
  for (const std::string& s : {any("p"), std::string("p[q[eps <= 0] > 1]"),
                               std::string(any("q") + " + " + any("p"))}) {
    TypePtr e = parse_ctype(s);
    bool found = false;
    enumerate_trees({"p", "q"}, 4, [&](const KripkeTree& t) {
      if (t.right_sib[t.root] >= 0) return true;  // forest, not a tree
      if (member(binary_to_nary(t), e)) {
        found = true;
        return false;
      }
      return true;
    });
    CHECK(found);
    TypeDecision d = type_empty(e);
    CHECK(!d.holds);
    REQUIRE(d.counterexample.has_value());
    CHECK(member(*d.counterexample, e));
  }
}

TEST_CASE("emptiness") {
  // nullable types are inhabited by the empty forest
  TypeDecision d = type_empty(parse_ctype("eps"));
  CHECK(!d.holds);
  CHECK(!d.counterexample.has_value());

  // no tree has a child matching eps
  CHECK(type_empty(parse_ctype("p[eps > 0]")).holds);

  // a let binder reaches the solver as a (vacuously guarded) fixpoint
  d = type_empty(parse_ctype("let $x = p[eps <= 0] in $x"));
  CHECK(!d.holds);
  REQUIRE(d.counterexample.has_value());
  CHECK(member(*d.counterexample, parse_ctype(any("p"))));

  // recursion through a counted body leaves the decidable fragment: the
  // translation has a fixpoint variable inside a global counting atom
  CHECK_THROWS(type_empty(parse_ctype("let $x = p[$x] + q[eps <= 0] in $x")));
}

TEST_CASE("containment and equivalence") {
  std::string lo = "p1[" + any("p2") + " <= 1]";
  std::string hi = "p1[" + any("p2") + " <= 2]";
  CHECK(type_contained(parse_ctype(lo), parse_ctype(hi)).holds);

  TypeDecision d = type_contained(parse_ctype(hi), parse_ctype(lo));
  CHECK(!d.holds);
  REQUIRE(d.counterexample.has_value());
  CHECK(member(*d.counterexample, parse_ctype(hi)));
  CHECK(!member(*d.counterexample, parse_ctype(lo)));

  // reflexivity and a syntactic variant
  CHECK(type_contained(parse_ctype(lo), parse_ctype(lo)).holds);
  CHECK(type_equiv(parse_ctype(any("a") + " + " + any("b")),
                   parse_ctype(any("b") + " + " + any("a")))
            .holds);

  // a nullable type is never contained in a non-nullable one
  d = type_contained(parse_ctype("p[eps]?"), parse_ctype("p[eps]"));
  CHECK(!d.holds);
  CHECK(!d.counterexample.has_value());
}
