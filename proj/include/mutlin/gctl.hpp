#ifndef MUTLIN_GCTL_HPP_
#define MUTLIN_GCTL_HPP_

#include <cstdint>
#include <memory>
#include <set>
#include <string>

#include "mutlin/formula.hpp"
#include "mutlin/tree.hpp"

namespace mutlin::gctl {

// Graded computation tree logic over finite n-ary trees: E^{>k}X counts
// children, E^{>k}G counts leaf-terminated downward paths satisfying the
// body everywhere, E^{>k} φUψ counts downward paths whose last node
// satisfies ψ and every earlier node satisfies φ.
//
// Concrete syntax (booleans as in the formula syntax):
//   f := p | T | ~f | f | f | f & f | ( f )
//      | EX{>k} f | EG{>k} f | EF{>k} f | EU{>k}(f, g)
//      | AX{<=k} f | AG{<=k} f | AU{<=k}(f, g)
// The A-forms, EF and & are sugar and are desugared while parsing:
//   EF{>k} f       = EU{>k}(T, f)
//   AX{<=k} f      = ~EX{>k} ~f
//   AG{<=k} f      = ~EU{>k}(T, ~f)
//   AU{<=k}(f, g)  = disjunction over k1+k2=k of
//                    ~(EU{>k1}(~g, ~(f | g)) | EG{>k2} ~g)
//   f & g          = ~(~f | ~g)

struct GctlFormula;
using GctlPtr = std::shared_ptr<const GctlFormula>;

struct GctlFormula {
  enum class Kind { Prop, True, Not, Or, EX, EG, EU };
  Kind kind;
  std::string name;     // Prop
  std::uint64_t k = 0;  // EX, EG, EU
  GctlPtr left, right;  // Not/EX/EG use left; EU: left=φ, right=ψ
};

// Throws parse_error on bad syntax.
GctlPtr parse_gctl(const std::string& text);
std::string to_string(const GctlPtr& f);
std::size_t gctl_size(const GctlPtr& f);

// Direct semantics: the set of nodes of the n-ary tree satisfying f.
std::set<int> eval_gctl(const GctlPtr& f, const KripkeTree& t);

// Linear embedding into the logic (n-ary reading), one fresh origin per
// graded operator occurrence.
Formula translate_gctl(const GctlPtr& f);

}  // namespace mutlin::gctl

#endif  // MUTLIN_GCTL_HPP_
