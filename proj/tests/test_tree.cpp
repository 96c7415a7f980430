#include <set>

#include "doctest.h"
#include "mutlin/errors.hpp"
#include "mutlin/tree.hpp"

using namespace mutlin;

namespace {
// 0 -> (1, 2, 3), 2 -> (4)
KripkeTree sample_nary() {
  return make_nary(0, {{1, 2, 3}, {}, {4}, {}, {}},
                   {{"a"}, {"b"}, {"c"}, {"d"}, {"e"}});
}
}  // namespace

TEST_CASE("nary derived links") {
  KripkeTree t = sample_nary();
  CHECK(t.parent[1] == 0);
  CHECK(t.parent[4] == 2);
  CHECK(t.left_sib[2] == 1);
  CHECK(t.next_sib[1] == 2);
  CHECK(t.next_sib[3] == -1);
  CHECK(validate(t).empty());
}

TEST_CASE("bijection with binary form") {
  KripkeTree t = sample_nary();
  KripkeTree b = nary_to_binary(t);
  CHECK(b.form == KripkeTree::Form::Binary);
  // first-child/right-sibling wiring
  CHECK(b.first_child[0] == 1);
  CHECK(b.right_sib[1] == 2);
  CHECK(b.right_sib[2] == 3);
  CHECK(b.right_sib[3] == -1);
  CHECK(b.first_child[2] == 4);
  CHECK(validate(b).empty());

  KripkeTree back = binary_to_nary(b);
  CHECK(back.children == t.children);
  CHECK(back.labels == t.labels);
  CHECK(back.root == t.root);
}

TEST_CASE("binary root with sibling encodes a forest and will not convert") {
  KripkeTree b = make_binary(0, {-1, -1}, {1, -1}, {{"a"}, {"b"}});
  CHECK(validate(b).empty());
  CHECK_THROWS_AS(binary_to_nary(b), eval_error);
}

TEST_CASE("validate catches broken trees") {
  // unreachable node
  KripkeTree t = make_nary(0, {{1}, {}, {}}, {{"a"}, {"b"}, {"c"}});
  CHECK(!validate(t).empty());
  // empty label
  KripkeTree u = make_nary(0, {{}}, {{}});
  CHECK(!validate(u).empty());
  // cycle / shared child
  KripkeTree v = make_nary(0, {{1, 1}, {}}, {{"a"}, {"b"}});
  CHECK(!validate(v).empty());
}

TEST_CASE("json round trip is exact") {
  for (const KripkeTree& t : {sample_nary(), nary_to_binary(sample_nary())}) {
    std::string s = tree_to_json(t);
    KripkeTree u = tree_from_json(s);
    CHECK(tree_to_json(u) == s);
    CHECK(validate(u).empty());
    CHECK(u.labels == t.labels);
  }
}

TEST_CASE("json rejects garbage") {
  CHECK_THROWS_AS(tree_from_json("not json"), parse_error);
  CHECK_THROWS_AS(tree_from_json("{}"), parse_error);
  CHECK_THROWS_AS(tree_from_json(R"({"form":"weird","nodes":{},"edges":{}})"), parse_error);
}

TEST_CASE("enumerate_trees counts shapes times labelings") {
  // #binary shapes on n nodes is Catalan(n); labels over one prop are forced.
  std::size_t counts[5] = {0, 0, 0, 0, 0};
  enumerate_trees({"p"}, 4, [&](const KripkeTree& t) {
    CHECK(validate(t).empty());
    ++counts[t.size()];
    return true;
  });
  CHECK(counts[1] == 1);
  CHECK(counts[2] == 2);
  CHECK(counts[3] == 5);
  CHECK(counts[4] == 14);

  // two props: 3 label choices per node
  std::size_t total = 0;
  enumerate_trees({"p", "q"}, 2, [&](const KripkeTree&) {
    ++total;
    return true;
  });
  CHECK(total == 3 + 2 * 9);
}

TEST_CASE("enumerate_trees stops on demand and is deterministic") {
  std::vector<std::string> first;
  enumerate_trees({"p", "q"}, 3, [&](const KripkeTree& t) {
    first.push_back(tree_to_json(t));
    return first.size() < 5;
  });
  std::vector<std::string> second;
  enumerate_trees({"p", "q"}, 3, [&](const KripkeTree& t) {
    second.push_back(tree_to_json(t));
    return second.size() < 5;
  });
  CHECK(first == second);
  CHECK(first.size() == 5);
}
