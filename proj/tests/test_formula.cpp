#include "doctest.h"

#include "mutlin/errors.hpp"
#include "mutlin/formula.hpp"

using namespace mutlin;

TEST_CASE("parse/print round trip") {
  const char* cases[] = {
      "p",
      "T",
      "~p",
      "p | q & r",
      "(p | q) & r",
      "<dn>p & <up>(q | ~r)",
      "mu $x . p | <dn>$x",
      "#(p & q) > 4",
      "#(<dn>p) <= 0",
      "let $x = p | <rt>$x in $x",
  };
  for (const char* c : cases) {
    Formula f = parse_formula(c);
    Formula g = parse_formula(to_string(f));
    CHECK(f == g);
  }
}

TEST_CASE("printing is canonical") {
  CHECK(to_string(parse_formula("p|q&r")) == "p | q & r");
  CHECK(to_string(parse_formula("(p|q)&r")) == "(p | q) & r");
  CHECK(to_string(parse_formula("~(p)")) == "~p");
  CHECK(to_string(parse_formula("#( p ) > 3")) == "#(p) > 3");
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_formula("p &"), parse_error);
  CHECK_THROWS_AS(parse_formula("<xx>p"), parse_error);
  CHECK_THROWS_AS(parse_formula("#(p) = 3"), parse_error);
  CHECK_THROWS_AS(parse_formula("mu x . p"), parse_error);
  CHECK_THROWS_AS(parse_formula("p q"), parse_error);
  CHECK_THROWS_AS(parse_formula(""), parse_error);
}

TEST_CASE("hash consing gives pointer identity") {
  CHECK(parse_formula("p & (q | r)") == parse_formula("p  &  ( q | r )"));
  CHECK(parse_formula("p") != parse_formula("q"));
}

TEST_CASE("size") {
  CHECK(formula_size(parse_formula("p")) == 1);
  CHECK(formula_size(parse_formula("~p")) == 2);
  CHECK(formula_size(parse_formula("p | q")) == 3);
  CHECK(formula_size(parse_formula("<dn>p")) == 2);
  CHECK(formula_size(parse_formula("mu $x . $x | p")) == 4);
  // counting contributes ceil(log2(k+1)) for the constant
  CHECK(formula_size(parse_formula("#(p) > 3")) == 3);
  CHECK(formula_size(parse_formula("#(p) > 0")) == 1);
  CHECK(formula_size(parse_formula("#(p) <= 7")) == 4);
}

TEST_CASE("max_k") {
  CHECK(max_k(parse_formula("p & q")) == 0);
  CHECK(max_k(parse_formula("#(p) > 3")) == 4);
  CHECK(max_k(parse_formula("#(p) <= 3")) == 4);
  CHECK(max_k(parse_formula("#(p) > 1 & #(q) > 2")) == 5);
  // nested counting sums through the body
  CHECK(max_k(parse_formula("#(#(p1) > 1 & p2) > 4")) == 7);
}

TEST_CASE("nnf pushes negation to atoms") {
  CHECK(nnf(parse_formula("~(p | q)")) == parse_formula("~p & ~q"));
  CHECK(nnf(parse_formula("~(p & q)")) == parse_formula("~p | ~q"));
  CHECK(nnf(parse_formula("~~p")) == parse_formula("p"));
  CHECK(nnf(parse_formula("~#(p) > 3")) == parse_formula("#(p) <= 3"));
  CHECK(nnf(parse_formula("~#(p) <= 3")) == parse_formula("#(p) > 3"));
  CHECK(nnf(parse_formula("~<dn>p")) == parse_formula("<dn>~p | ~<dn>T"));
  CHECK(nnf(parse_formula("~<up>T")) == parse_formula("~<up>T"));
}

TEST_CASE("nnf on fixpoints keeps least fixpoints") {
  Formula f = nnf(parse_formula("~(mu $x . p | <dn>$x)"));
  CHECK(f == parse_formula("mu $x . ~p & (<dn>$x | ~<dn>T)"));
}

TEST_CASE("nnf is idempotent") {
  const char* cases[] = {
      "~(p | <dn>(q & ~r))",
      "~(mu $x . p | <dn>$x)",
      "~#(p & ~q) <= 2",
      "~(#(~<rt>p) > 1 | ~q)",
  };
  for (const char* c : cases) {
    Formula f = nnf(parse_formula(c));
    CHECK(nnf(f) == f);
  }
}

TEST_CASE("substitute and unfold") {
  Formula f = parse_formula("mu $x . p | <dn>$x");
  Formula u = unfold(f);
  CHECK(u == Formula::disj(parse_formula("p"), Formula::modal(Modality::Down, f)));
  // one more unfolding step is idempotent on the closed fixpoint
  CHECK(unfold(f) == u);

  Formula let = parse_formula("let $x = p | <rt>$x in $x");
  Formula lu = unfold(let);
  CHECK(lu == Formula::disj(parse_formula("p"), Formula::modal(Modality::Right, let)));
}

TEST_CASE("binders are renamed apart") {
  Formula f = parse_formula("(mu $x . p | <dn>$x) & (mu $x . q | <rt>$x)");
  // the two binders must not share a name after parsing
  CHECK(f.child(0).name() != f.child(1).name());
}

TEST_CASE("well-formedness") {
  CHECK(check_wellformed(parse_formula("mu $x . p | <dn>$x")).empty());
  CHECK(check_wellformed(parse_formula("mu $x . p | <dn><up>p | <rt>$x")).empty());
  // counting atoms are global: a fixpoint closed inside one is fine, but a
  // variable bound outside the atom has no meaning there
  CHECK(check_wellformed(parse_formula("#(mu $x . p | <dn>$x) > 1")).empty());
  auto v0 = check_wellformed(parse_formula("mu $x . #($x) > 1"));
  REQUIRE(!v0.empty());
  CHECK(v0[0].message.find("counting") != std::string::npos);

  auto v1 = check_wellformed(parse_formula("mu $x . <dn>$x | <up>$x"));
  REQUIRE(!v1.empty());
  CHECK(v1[0].message.find("converse") != std::string::npos);

  auto v2 = check_wellformed(parse_formula("mu $x . p | $x"));
  REQUIRE(!v2.empty());
  CHECK(v2[0].message.find("unguarded") != std::string::npos);

  auto v3 = check_wellformed(parse_formula("p | <dn>$y"));
  REQUIRE(!v3.empty());
  CHECK(v3[0].message.find("unbound") != std::string::npos);
  CHECK(v3[0].path == "/1/0");

  auto v4 = check_wellformed(parse_formula("mu $x . <rt>$x & <lf>$x"));
  CHECK(!v4.empty());
}

TEST_CASE("free variables and propositions") {
  Formula f = parse_formula("p & <dn>$y & mu $x . q | <rt>$x");
  auto fv = free_vars(f);
  CHECK(fv == std::set<std::string>{"y"});
  CHECK(propositions(f) == std::vector<std::string>{"p", "q"});
  CHECK(fresh_prop(f) == "p'");
}

TEST_CASE("bits_for") {
  CHECK(bits_for(0) == 0);
  CHECK(bits_for(1) == 1);
  CHECK(bits_for(3) == 2);
  CHECK(bits_for(4) == 3);
  CHECK(bits_for(7) == 3);
  CHECK(bits_for(8) == 4);
}
