#ifndef MUTLIN_EVAL_HPP_
#define MUTLIN_EVAL_HPP_

#include <map>
#include <optional>
#include <string>

#include "mutlin/bitset.hpp"
#include "mutlin/formula.hpp"
#include "mutlin/tree.hpp"

namespace mutlin {

using NodeSet = DynBitset;
using Valuation = std::map<std::string, NodeSet>;

// Direct semantics of f on t; modalities follow the tree's form (n-ary:
// <dn> any child, <rt>/<lf> adjacent sibling; binary: first child / right
// sibling and converses). Counting atoms are global: they hold at every node
// or at none. Free variables must be bound in `val`.
NodeSet eval(Formula f, const KripkeTree& t, const Valuation& val = {});

// f holds at some node of t.
bool sat_on_tree(Formula f, const KripkeTree& t);

// Reference decision procedure: enumerate every binary tree of at most
// `max_nodes` nodes labeled over the propositions of f plus one fresh
// proposition, and return the first model found.
std::optional<KripkeTree> brute_force_sat(Formula f, int max_nodes);

// Rewrites a formula interpreted over n-ary trees into one interpreted over
// their binary encodings: <dn>f becomes "first child, then some sibling",
// <up>f becomes "some left-sibling chain, then parent"; <rt>/<lf> are the
// same relation in both forms.
Formula nary_formula_to_binary(Formula f);

// Binary trees whose root has a right sibling encode n-ary forests, not
// trees. This counting axiom rules them out: no node may lack both a parent
// and a left sibling while having a right sibling.
Formula single_tree_axiom();

}  // namespace mutlin

#endif  // MUTLIN_EVAL_HPP_
