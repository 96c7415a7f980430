#ifndef MUTLIN_ELIM_HPP_
#define MUTLIN_ELIM_HPP_

#include <cstdint>

#include "mutlin/formula.hpp"

namespace mutlin {

// "No up-left context": a node that is a root in binary form.
Formula root_formula();

// C_k(f): true at a node iff more than k nodes in the subtree reachable by
// down/right moves (the node itself included) satisfy f. Defined by the
// standard fixpoint recursion; the expansion grows quickly with k, so k is
// capped (throws std::invalid_argument above the cap).
Formula c_k(Formula f, std::uint64_t k, std::uint64_t cap = 4);

// Rewrites every counting atom into plain fixpoint navigation:
// #(f) > k becomes "from anywhere, walk up-left to the root and check
// C_k(f) there"; #(f) <= k becomes the NNF of the negation of that. The
// result is counting-free and equivalent over binary trees.
Formula eliminate_counting(Formula f, std::uint64_t cap = 4);

}  // namespace mutlin

#endif  // MUTLIN_ELIM_HPP_
