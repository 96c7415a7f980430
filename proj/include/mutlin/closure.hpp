#ifndef MUTLIN_CLOSURE_HPP_
#define MUTLIN_CLOSURE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mutlin/formula.hpp"

namespace mutlin {

// The navigation formula attached to a counting body: true at a node iff the
// body holds somewhere in the tree. Two nested fixpoints, the inner walking
// down/right, the outer up/left, so guardedness is preserved.
Formula nav_formula(Formula body);

// Fischer-Ladner closure: the least set containing f that is closed under
// negation normal form, boolean decomposition, modal bodies, one-step
// fixpoint unfolding, counting bodies and the navigation formulas of
// counting atoms. Returned in discovery order (f first).
std::vector<Formula> fl_closure(Formula f);

// One lean entry. A node of the tableau is a subset of these.
struct LeanEntry {
  enum class Type { Prop, Modal, CountAtom, CounterBit, Flag };
  Type type;
  std::string prop;        // Prop
  Modality m{};            // Modal
  Formula body;            // Modal body, or counting body (in NNF)
  bool gt = false;         // CountAtom/CounterBit/Flag: > vs <=
  std::uint64_t k = 0;     // CountAtom bound
  int atom = -1;           // CounterBit/Flag/CountAtom: owning atom index
  int bit = -1;            // CounterBit position, 0 = least significant
  bool nav = false;        // Modal entry that exists only for a navigation formula
};

std::string to_string(const LeanEntry& e);

struct CountingAtom {
  Formula body;   // NNF-normalized counting body; atom identity is (body, gt, k)
  bool gt;
  std::uint64_t k;
  Formula nav;
  std::uint64_t cap = 0;   // counter saturation ceiling, k + 1
  int entry = -1;          // lean index of the atom proposition
  std::vector<int> bits;   // lean indices, least significant first
  int flag = -1;           // lean index of the exceeded flag (> atoms only)
};

// The lean of a formula: propositions, modal subformulas, counting atoms,
// counter bits, exceeded flags, the four <m>T entries and a fresh
// proposition. Entry ordering is deterministic.
struct Lean {
  std::vector<LeanEntry> entries;
  std::vector<CountingAtom> atoms;
  std::uint64_t maxk = 0;       // global counter ceiling (size-bound bookkeeping)
  int counter_bits = 0;         // bits of the widest counter; each counter of a
                                // >k / <=k atom saturates at k+1 and uses
                                // ceil(log2(k+2)) bits
  std::string fresh;            // the extra proposition p'
  int modal_top[4] = {-1, -1, -1, -1};  // indices of <dn>T, <rt>T, <up>T, <lf>T

  std::size_t size() const { return entries.size(); }
  std::optional<int> prop_index(const std::string& name) const;
  std::optional<int> modal_index(Modality m, Formula body) const;
  // Atom lookup normalizes the body to NNF.
  std::optional<int> atom_index(Formula body, bool gt, std::uint64_t k) const;

  std::unordered_map<std::string, int> prop_idx_;
  std::unordered_map<std::uint64_t, int> modal_idx_[4];  // body id -> entry
  std::unordered_map<std::string, int> atom_idx_;        // key "(id,gt,k)"
};

// With tight_caps, each counter saturates at its own k+1 instead of the
// global maxk ceiling. Both ceilings are sound; the tight ones merge more
// tableau nodes and speed up exhaustive (unsatisfiable) searches, at the cost
// of collapsing counter histories the global ceiling would keep apart.
Lean make_lean(Formula f, bool tight_caps = false);

}  // namespace mutlin

#endif  // MUTLIN_CLOSURE_HPP_
