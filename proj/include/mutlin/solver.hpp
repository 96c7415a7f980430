#ifndef MUTLIN_SOLVER_HPP_
#define MUTLIN_SOLVER_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "mutlin/bitset.hpp"
#include "mutlin/closure.hpp"
#include "mutlin/eval.hpp"
#include "mutlin/formula.hpp"
#include "mutlin/tree.hpp"

namespace mutlin {

struct SolverOptions {
  std::uint64_t max_nodes = 2'000'000;   // distinct tableau nodes
  std::uint64_t max_iterations = 100'000;  // outer loop rounds per guess
  bool keep_internal_labels = false;     // keep p', counter bits and flags in witnesses
  bool tight_counter_caps = false;       // saturate each counter at its own k+1
};

struct SolverStats {
  std::uint64_t iterations = 0;       // rounds of the accepting (or last) guess
  std::uint64_t nodes_generated = 0;  // distinct tableau nodes over all guesses
  std::uint64_t trees_built = 0;      // distinct tree classes over all guesses
  std::uint64_t guesses_tried = 0;    // counting-atom assignments explored
  double elapsed_seconds = 0;
};

// Tableau over the lean of a formula. Nodes are interned subsets of lean
// entries; trees are binary derivation trees of node ids.
class Tableau {
 public:
  explicit Tableau(Formula input, SolverOptions opts = {});

  Formula input() const { return input_; }  // NNF of the formula given
  const Lean& lean() const { return lean_; }

  struct FLTree {
    int node;
    std::shared_ptr<const FLTree> left, right;
    int size;
  };
  using TreePtr = std::shared_ptr<const FLTree>;
  TreePtr tree(int node, TreePtr left = nullptr, TreePtr right = nullptr) const;

  // Interns a node after checking the local invariants: at least one
  // proposition, <m>f only with <m>T, not both <up>T and <lf>T, counters in
  // range, a present <=k atom forces counter <= k, an exceeded flag is set
  // iff its counter is above the bound. Returns nullopt if violated.
  std::optional<int> make_node(const DynBitset& bits);
  const DynBitset& bits(int node) const;
  std::uint64_t counter(int node, int atom) const;

  // Entailment at a node: propositions, modal entries and counting atoms by
  // membership, boolean connectives structurally, fixpoints by unfolding.
  // Throws closure_error if f needs a lean entry that does not exist.
  bool entails(int node, Formula f) const;

  // Modal consistency of a parent/child pair along m (Down or Right):
  // <m>f in parent iff child entails f, and <m~>f in child iff parent
  // entails f, over every modal entry of the lean.
  bool modal_consistent(int parent, int child, Modality m) const;

  // Counter consistency: each parent counter equals
  // min(maxk, left + right + [parent entails body]), and child flags imply
  // the parent flag.
  bool counter_consistent(int parent, int left, int right) const;  // -1 = absent child

  // The leaves of a node set: nodes without down/right entries whose
  // counters match their own entailment of each counting body.
  std::vector<TreePtr> leaves(const std::vector<int>& nodes) const;

  // Tree entailment: some node entails the input, the root has no up/left
  // entries, and the root verifies the guessed counting atoms (which are
  // read off the root's atom bits): a present >k atom needs its flag, an
  // absent >k atom needs counter <= k, an absent <=k atom needs counter > k.
  bool tree_entails(const TreePtr& t, Formula f) const;

  // One relation-building step over explicit sets, for inspection and tests:
  // every parent node from `y` consistent with a pair (or single) of trees
  // from `x` is attached; returns the grown x and y minus the used roots.
  std::pair<std::vector<TreePtr>, std::set<int>> update(const std::vector<TreePtr>& x,
                                                        const std::set<int>& y) const;

  // node ids of every tree node
  static void collect_nodes(const TreePtr& t, std::vector<int>& out);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  friend struct TableauSearch;
  Formula input_;
  SolverOptions opts_;
  Lean lean_;

  struct NodeData {
    DynBitset bits;
    std::vector<std::uint64_t> counters;
  };
  mutable std::vector<NodeData> nodes_;
  mutable std::unordered_map<DynBitset, int, DynBitsetHash> node_ids_;
  mutable std::unordered_map<std::uint64_t, char> entail_memo_;  // (node, formula) -> bool

  int intern(const DynBitset& bits) const;
  bool entails_rec(int node, Formula f) const;

  // Masks over lean entries, computed once.
  DynBitset prop_mask_, up_mask_, down_mask_, counter_mask_, flag_mask_, atom_mask_;
  DynBitset up_mask_full_, down_mask_full_;  // including navigation entries
  void build_masks();

 public:
  const DynBitset& prop_mask() const { return prop_mask_; }
  const DynBitset& down_mask_full() const { return down_mask_full_; }
  const DynBitset& up_mask_full() const { return up_mask_full_; }
};

struct SatResult {
  bool sat = false;
  Tableau::TreePtr witness;          // set when sat
  std::optional<KripkeTree> model;   // binary-form witness, user labels only
  SolverStats stats;
};

// Decides satisfiability of a closed, well-formed formula over binary trees.
// Branches over global truth assignments to the counting atoms; each branch
// runs the leaves/update loop until an accepting tree appears or no new
// trees can be built. Throws budget_error when the configured limits are
// exceeded.
SatResult satisfiable(Formula f, SolverOptions opts = {});

}  // namespace mutlin

#endif  // MUTLIN_SOLVER_HPP_
