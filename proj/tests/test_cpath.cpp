#include <string>

#include "doctest.h"
#include "mutlin/cpath.hpp"
#include "mutlin/errors.hpp"
#include "mutlin/eval.hpp"

using namespace mutlin;
using namespace mutlin::cpath;

namespace {
KripkeTree chain(const std::vector<std::vector<std::string>>& labels) {
  // node i is the parent of node i+1
  std::vector<std::vector<int>> ch(labels.size());
  for (std::size_t i = 0; i + 1 < labels.size(); ++i) ch[i] = {static_cast<int>(i) + 1};
  return make_nary(0, ch, labels);
}
}  // namespace

TEST_CASE("parsing") {
  QueryPtr q = parse_cpath("up*::p1/dn::p2");
  REQUIRE(q->kind == TopPath::Kind::Path);
  REQUIRE(q->path->kind == PathExpr::Kind::Compose);
  CHECK(q->path->left->kind == PathExpr::Kind::AxisProp);
  CHECK(q->path->left->axis == Axis::UpStar);
  CHECK(q->path->left->prop == "p1");
  CHECK(q->path->right->axis == Axis::Down);
  CHECK(q->path->right->prop == "p2");

  q = parse_cpath("dn::c[dn*::a > 5]");
  REQUIRE(q->path->kind == PathExpr::Kind::Qualified);
  CHECK(q->path->left->prop == "c");
  REQUIRE(q->path->qual->kind == Qualifier::Kind::CountGt);
  CHECK(q->path->qual->k == 5);
  CHECK(q->path->qual->path->axis == Axis::DownStar);

  q = parse_cpath("T");
  CHECK(q->path->kind == PathExpr::Kind::Top);

  // sugar: <=, &, bare counting, stacked qualifiers
  CHECK(parse_cpath("p[dn::a <= 2]")->path->qual->kind == Qualifier::Kind::Not);
  CHECK(parse_cpath("p[dn::a][dn::b]")->path->qual->kind == Qualifier::Kind::Not);
  CHECK(parse_cpath("p[dn::a & dn::b]")->path->qual->kind == Qualifier::Kind::Not);
  CHECK(parse_cpath("p[dn::a]")->path->qual->k == 0);

  CHECK_THROWS_AS(parse_cpath("dn::"), parse_error);
  CHECK_THROWS_AS(parse_cpath("p[")
, parse_error);
  CHECK_THROWS_AS(parse_cpath("p q"), parse_error);
  try {
    parse_cpath("dn::c[");
  } catch (const parse_error& e) {
    CHECK(e.position() == 6);
  }
}

TEST_CASE("printing round-trips") {
  for (const char* s :
       {"T", "dn", "up*", "dn::a", "up*::p1/dn::p2", "dn::c[dn*::a > 5]",
        "/dn::a | rt::b", "a \\ b", "p[!(dn::a > 0 | rt::b > 1)]", "/(a | b)",
        "a & b | c"}) {
    QueryPtr q = parse_cpath(s);
    std::string printed = to_string(q);
    CHECK(to_string(parse_cpath(printed)) == printed);
  }
}

TEST_CASE("relational semantics basics") {
  KripkeTree t = chain({{"p1"}, {"p2"}});
  QueryAnswer all = eval_cpath(parse_cpath("T"), t);
  CHECK(all.size() == 4);

  CHECK(eval_cpath(parse_cpath("p1 \\ p1"), t).empty());
  CHECK(eval_cpath(parse_cpath("dn"), t) == QueryAnswer{{0, 1}});
  CHECK(eval_cpath(parse_cpath("up"), t) == QueryAnswer{{1, 0}});
  CHECK(eval_cpath(parse_cpath("dn::p2"), t) == QueryAnswer{{0, 1}});
  CHECK(eval_cpath(parse_cpath("dn::p1"), t).empty());
  CHECK(eval_cpath(parse_cpath("p1"), t) == QueryAnswer{{0, 0}});

  // the p1 ancestors with at least one p2 descendant, from any context
  CHECK(eval_cpath(parse_cpath("up*::p1[dn*::p2]"), t) == QueryAnswer{{1, 0}});
  // rooted restriction
  CHECK(eval_cpath(parse_cpath("/dn::p2"), t) == QueryAnswer{{0, 1}});
  CHECK(eval_cpath(parse_cpath("/up::p1"), t).empty());
}

TEST_CASE("relational semantics: siblings and counting") {
  // root a with children b, b, c
  KripkeTree t = make_nary(0, {{1, 2, 3}, {}, {}, {}}, {{"a"}, {"b"}, {"b"}, {"c"}});
  CHECK(eval_cpath(parse_cpath("rt"), t) == QueryAnswer{{1, 2}, {2, 3}});
  CHECK(eval_cpath(parse_cpath("lf"), t) == QueryAnswer{{2, 1}, {3, 2}});
  CHECK(eval_cpath(parse_cpath("dn*"), t) ==
        QueryAnswer{{0, 1}, {0, 2}, {0, 3}});

  // a has more than 1 b child; the counting qualifier selects it
  CHECK(eval_cpath(parse_cpath("a[dn::b > 1]"), t) == QueryAnswer{{0, 0}});
  CHECK(eval_cpath(parse_cpath("a[dn::b > 2]"), t).empty());
  CHECK(eval_cpath(parse_cpath("a[dn::b <= 1]"), t).empty());
  CHECK(eval_cpath(parse_cpath("a[dn::c <= 1]"), t) == QueryAnswer{{0, 0}});
}

TEST_CASE("translation clauses") {
  CHECK(translate_query(parse_cpath("dn")) == Formula::modal(Modality::Up, Formula::top()));
  CHECK(translate_query(parse_cpath("rt")) == Formula::modal(Modality::Left, Formula::top()));
  CHECK(translate_query(parse_cpath("a | b")) ==
        Formula::disj(translate_query(parse_cpath("a")), translate_query(parse_cpath("b"))));

  // F(dn::p1[dn*::p2 > 2]) =
  //   ((<up>T & p1) & (o1 & nominal)) & #(mu x1.<up>(anchor | x1) & p2) > 2
  // where nominal = #(o1)<=1 & #(o1)>0 and anchor = nominal & o1.
  Formula f = translate_query(parse_cpath("dn::p1[dn*::p2 > 2]"));
  Formula o = Formula::prop("o1");
  Formula nominal = Formula::conj(Formula::count_le(o, 1), Formula::count_gt(o, 0));
  Formula anchor = Formula::conj(nominal, o);
  Formula walk = Formula::mu(
      "x1", Formula::modal(Modality::Up, Formula::disj(anchor, Formula::var("x1"))));
  Formula expected = Formula::conj(
      Formula::conj(Formula::conj(Formula::modal(Modality::Up, Formula::top()),
                                  Formula::prop("p1")),
                    Formula::conj(o, nominal)),
      Formula::count_gt(Formula::conj(walk, Formula::prop("p2")), 2));
  CHECK(f == expected);

  // distinct qualifiers get distinct origins
  Formula g = translate_query(parse_cpath("a[dn::b]/rt::a[dn::c]"));
  auto props = propositions(g);
  CHECK(std::count(props.begin(), props.end(), "o1") == 1);
  CHECK(std::count(props.begin(), props.end(), "o2") == 1);

  // user propositions never collide with origins
  Formula h = translate_query(parse_cpath("o1[dn::b]"));
  props = propositions(h);
  CHECK(std::count(props.begin(), props.end(), "o2") == 1);
}

TEST_CASE("translated size is linear") {
  for (const char* s : {"dn::a", "dn::a[dn*::b > 3]", "up*::p1/dn::p2 \\ /dn*::q",
                        "a[dn::b | !(rt::c > 2)]"}) {
    QueryPtr q = parse_cpath(s);
    CHECK(formula_size(translate_query(q)) <= 22 * std::string(s).size());
  }
}

TEST_CASE("emptiness") {
  QueryDecision d = query_empty(parse_cpath("p \\ p"));
  CHECK(d.holds);

  d = query_empty(parse_cpath("dn::a"));
  CHECK(!d.holds);
  REQUIRE(d.counterexample.has_value());
  CHECK(validate(*d.counterexample).empty());
  CHECK(!eval_cpath(parse_cpath("dn::a"), *d.counterexample).empty());

  // up and lf from the root of a one-node-only query family
  CHECK(query_empty(parse_cpath("/up::a")).holds);
  CHECK(!query_empty(parse_cpath("/dn::a")).holds);
}

TEST_CASE("containment and equivalence") {
  QueryPtr narrow = parse_cpath("dn::a[dn*::b > 1]");
  QueryPtr wide = parse_cpath("dn::a[dn*::b > 0]");

  CHECK(query_contained(narrow, narrow).holds);
  CHECK(query_contained(narrow, wide).holds);

  QueryDecision d = query_contained(wide, narrow);
  CHECK(!d.holds);
  if (d.counterexample) {
    auto a = eval_cpath(wide, *d.counterexample);
    auto b = eval_cpath(narrow, *d.counterexample);
    CHECK(!std::includes(b.begin(), b.end(), a.begin(), a.end()));
  }

  CHECK(query_equiv(narrow, narrow).holds);
  CHECK(!query_equiv(narrow, wide).holds);
  CHECK(query_equiv(parse_cpath("a | b"), parse_cpath("b | a")).holds);
}
