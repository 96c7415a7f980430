#ifndef MUTLIN_TREE_HPP_
#define MUTLIN_TREE_HPP_

#include <functional>
#include <string>
#include <vector>

#include "mutlin/formula.hpp"

namespace mutlin {

// A finite labeled tree. Nodes are 0..size()-1; labels are sorted vectors of
// proposition names (non-empty for every node of a valid tree).
//
// In n-ary form the structure lives in `children` (ordered). In binary form
// it lives in `first_child`/`right_sib`: both edges are plain tree edges, so
// a binary root may carry a right sibling (such trees encode n-ary forests).
// Derived links (parent/left_sib or nary parent/sibling order) are kept in
// sync by the constructors here.
struct KripkeTree {
  enum class Form { Nary, Binary };

  Form form = Form::Nary;
  int root = 0;
  std::vector<std::vector<std::string>> labels;

  // n-ary form
  std::vector<std::vector<int>> children;

  // binary form
  std::vector<int> first_child, right_sib;

  // both forms (derived)
  std::vector<int> parent, left_sib;
  std::vector<int> next_sib;  // n-ary: following sibling, -1 if none

  int size() const { return static_cast<int>(labels.size()); }
  bool has_label(int node, const std::string& p) const;
};

// Build an n-ary tree from parent-ordered child lists. Derived links are
// computed; labels are sorted and deduplicated.
KripkeTree make_nary(int root, std::vector<std::vector<int>> children,
                     std::vector<std::vector<std::string>> labels);
// Build a binary tree from first-child/right-sibling arrays (-1 = none).
KripkeTree make_binary(int root, std::vector<int> first_child, std::vector<int> right_sib,
                       std::vector<std::vector<std::string>> labels);

// Structural validity: every node reachable from the root exactly once, links
// acyclic and mutually consistent, labels non-empty. Returns problems found.
std::vector<std::string> validate(const KripkeTree& t);

// The standard first-child/right-sibling bijection. Node ids are preserved.
// binary_to_nary requires the binary root to have no right sibling.
KripkeTree nary_to_binary(const KripkeTree& t);
KripkeTree binary_to_nary(const KripkeTree& t);

// JSON wire format:
//   {"form": "nary"|"binary",
//    "nodes": {"0": ["p1"], ...},
//    "edges": {"child": [[parent,child],...], "sibling": [[left,right],...]}}
// For binary trees "child" holds first-child edges. Serialization is
// canonical, so parse -> serialize round-trips byte for byte.
std::string tree_to_json(const KripkeTree& t);
KripkeTree tree_from_json(const std::string& text);

// Streams every binary-form tree with at most `max_nodes` nodes whose labels
// are non-empty subsets of `props`, in a fixed deterministic order. Stops
// early when the callback returns false.
void enumerate_trees(const std::vector<std::string>& props, int max_nodes,
                     const std::function<bool(const KripkeTree&)>& visit);

}  // namespace mutlin

#endif  // MUTLIN_TREE_HPP_
