#ifndef MUTLIN_CPATH_HPP_
#define MUTLIN_CPATH_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "mutlin/formula.hpp"
#include "mutlin/solver.hpp"
#include "mutlin/tree.hpp"

namespace mutlin::cpath {

// Counting regular path queries over n-ary trees.
//
// Concrete syntax:
//   axes        dn rt up lf dn* up*
//   step        T | axis | name | axis::name, with optional [qualifier]s
//   path        step / step / ...
//   qualifier   path | path > k | path <= k | ! q | q | q | q & q | ( q )
//   query       path | /path, combined with | & \ (left-associative)
// Stacked qualifiers step[a][b] mean step[a & b].

enum class Axis { Down, Right, Up, Left, DownStar, UpStar };

struct PathExpr;
struct Qualifier;
using PathPtr = std::shared_ptr<const PathExpr>;
using QualPtr = std::shared_ptr<const Qualifier>;

struct PathExpr {
  enum class Kind { Top, Axis, Prop, AxisProp, Compose, Qualified };
  Kind kind;
  Axis axis{};              // Axis, AxisProp
  std::string prop;         // Prop, AxisProp
  PathPtr left, right;      // Compose; Qualified uses left
  QualPtr qual;             // Qualified
};

struct Qualifier {
  enum class Kind { CountGt, Or, Not };
  Kind kind;
  PathPtr path;             // CountGt
  std::uint64_t k = 0;      // CountGt
  QualPtr left, right;      // Or (left+right), Not (left)
};

struct TopPath;
using QueryPtr = std::shared_ptr<const TopPath>;

struct TopPath {
  enum class Kind { Path, Rooted, Union, Intersection, Difference };
  Kind kind;
  PathPtr path;             // Path
  QueryPtr left, right;     // Rooted uses left
};

QueryPtr parse_cpath(const std::string& text);
std::string to_string(const QueryPtr& q);

// Relational semantics: the set of (start, selected) node pairs on an
// n-ary tree.
using QueryAnswer = std::set<std::pair<int, int>>;
QueryAnswer eval_cpath(const QueryPtr& q, const KripkeTree& t);

// The logical characterization F: nodes selected by q from a context C
// (a formula interpreted over n-ary trees), and its safe negation F'.
// Each qualified path gets a fresh origin proposition (o1, o2, ...) that is
// constrained to hold exactly once; negation never crosses that anchor.
Formula translate_query(const QueryPtr& q, Formula context = Formula::top());
Formula translate_query_negated(const QueryPtr& q, Formula context = Formula::top());

struct QueryDecision {
  bool holds = false;
  // For a negative answer: an n-ary tree exhibiting the difference, with
  // origin labels stripped, present only if it passes eval_cpath validation.
  std::optional<KripkeTree> counterexample;
  SolverStats stats;
};

QueryDecision query_empty(const QueryPtr& q, const SolverOptions& opts = {});
QueryDecision query_contained(const QueryPtr& q1, const QueryPtr& q2,
                              const SolverOptions& opts = {});
QueryDecision query_equiv(const QueryPtr& q1, const QueryPtr& q2,
                          const SolverOptions& opts = {});

}  // namespace mutlin::cpath

#endif  // MUTLIN_CPATH_HPP_
