#ifndef MUTLIN_CTYPES_HPP_
#define MUTLIN_CTYPES_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mutlin/formula.hpp"
#include "mutlin/solver.hpp"
#include "mutlin/tree.hpp"

namespace mutlin::ctypes {

// Regular tree types with counting over n-ary trees. Expressions denote sets
// of forests; counted children need not be contiguous siblings.
//
// Concrete syntax:
//   atom     eps | $x | p[e] | p[e > k] | p[e <= k] | ( e )
//   postfix  e* | e+ | e?          (sugar: e* = let $x = e.$x + eps in $x,
//                                          e+ = e.e*,  e? = eps + e)
//   concat   e . e                 (right-associative, binds tighter than +)
//   alt      e + e
//   binder   let $x = e, $y = e, ... in e
// p[e] abbreviates p[e > 0]. A postfix + is recognized when no expression
// follows; otherwise + is the alternation.

struct TypeExpr;
using TypePtr = std::shared_ptr<const TypeExpr>;

struct TypeExpr {
  enum class Kind { Epsilon, Var, Concat, Alt, LetRec, Labeled };
  Kind kind;
  std::string name;               // Var: variable; Labeled: proposition
  TypePtr left, right;            // Concat, Alt
  std::vector<std::string> vars;  // LetRec
  std::vector<TypePtr> bodies;    // LetRec
  TypePtr child;                  // LetRec main expression; Labeled body
  bool gt = true;                 // Labeled: > vs <=
  std::uint64_t k = 0;            // Labeled bound
};

// Throws parse_error on bad syntax and on free variables.
TypePtr parse_ctype(const std::string& text);
std::string to_string(const TypePtr& e);
std::size_t type_size(const TypePtr& e);

// Direct semantics: does the (single, n-ary) tree inhabit the type?
bool member(const KripkeTree& t, const TypePtr& e);

// Does the language contain the empty forest?
bool nullable(const TypePtr& e);

// Translations into (n-ary reading) formulas; translate_type_negated is the
// safe negation that keeps counting anchors positive.
Formula translate_type(const TypePtr& e);
Formula translate_type_negated(const TypePtr& e);

struct TypeDecision {
  bool holds = false;
  std::optional<KripkeTree> counterexample;  // n-ary, validated by member
  SolverStats stats;
};

// Reasoning over single trees; emptiness additionally treats a nullable type
// as inhabited (by the empty forest, which has no tree representation).
TypeDecision type_empty(const TypePtr& e, const SolverOptions& opts = {});
TypeDecision type_contained(const TypePtr& e1, const TypePtr& e2,
                            const SolverOptions& opts = {});
TypeDecision type_equiv(const TypePtr& e1, const TypePtr& e2, const SolverOptions& opts = {});

}  // namespace mutlin::ctypes

#endif  // MUTLIN_CTYPES_HPP_
