#ifndef MUTLIN_FORMULA_HPP_
#define MUTLIN_FORMULA_HPP_

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mutlin {

// The four modalities of the binary-tree logic: first child, right sibling,
// parent (converse of first child), previous sibling. Formulas over n-ary
// trees reuse the same constructors; there `Down` reads "some child" and
// `Right`/`Left` read adjacent sibling.
enum class Modality : std::uint8_t { Down, Right, Up, Left };

Modality converse(Modality m);
const char* modality_name(Modality m);  // "dn", "rt", "up", "lf"

enum class Kind : std::uint8_t {
  Prop,
  Var,
  True,
  Not,
  Or,
  And,
  Modal,
  Mu,
  MuVec,   // simultaneous least fixpoint, used by the type frontend
  CountGt,  // #(f) > k
  CountLe,  // #(f) <= k
};

// Immutable, hash-consed formula handle. Structurally equal formulas share
// one node, so operator== is pointer identity and safe as a map key.
// A default-constructed Formula is null and only valid as a placeholder.
class Formula {
 public:
  struct Node;

  Formula() = default;

  static Formula prop(std::string name);
  static Formula var(std::string name);
  static Formula top();
  static Formula negation(Formula f);
  static Formula disj(Formula a, Formula b);
  static Formula conj(Formula a, Formula b);
  static Formula modal(Modality m, Formula f);
  static Formula mu(std::string var, Formula body);
  static Formula mu_vec(std::vector<std::string> vars, std::vector<Formula> bodies,
                        Formula main);
  static Formula count_gt(Formula f, std::uint64_t k);
  static Formula count_le(Formula f, std::uint64_t k);

  Kind kind() const;
  const std::string& name() const;      // Prop, Var, Mu binder
  Modality modality() const;            // Modal
  std::uint64_t bound() const;          // CountGt/CountLe
  std::size_t arity() const;
  Formula child(std::size_t i) const;   // Mu body is child(0); MuVec bodies then main
  std::span<const std::string> vec_vars() const;  // MuVec

  explicit operator bool() const { return n_ != nullptr; }
  bool operator==(const Formula&) const = default;
  bool operator<(const Formula& o) const { return id() < o.id(); }
  std::uint64_t id() const;  // creation-order id, stable within a run

 private:
  explicit Formula(const Node* n) : n_(n) {}
  static Formula intern(Node&& proto);
  const Node* n_ = nullptr;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const {
    return std::hash<std::uint64_t>{}(f.id());
  }
};

// ---- operations --------------------------------------------------------

// Formula size per the logic's conventions: unary connectives and fixpoints
// add 1, binary connectives add 1 plus both sides, counting adds
// ceil(log2(k+1)). Throws overflow_error if the value leaves 64 bits.
std::uint64_t formula_size(Formula f);

// Bits needed for the constant k, i.e. ceil(log2(k+1)).
std::uint64_t bits_for(std::uint64_t k);

// Upper bound on any counter value relevant to f: 0 on atoms, pass-through
// on unary connectives, sum on binary ones, max_k(body) + k + 1 on counting.
std::uint64_t max_k(Formula f);

// Negation normal form. Negations are pushed to propositions, T and <m>T;
// counting atoms dualize, fixpoints stay least fixpoints via variable
// negation. Idempotent.
Formula nnf(Formula f);

// Capture-avoiding for the closed replacements used here; bound variables
// are assumed renamed apart (the parsers guarantee this).
Formula substitute(Formula f, const std::string& var, Formula replacement);

// One unfolding step of a Mu or MuVec formula.
Formula unfold(Formula fixpoint);

std::set<std::string> free_vars(Formula f);
// All proposition names occurring anywhere in f, sorted.
std::vector<std::string> propositions(Formula f);
// A proposition name not occurring in f ("p'", "p''", ...).
std::string fresh_prop(Formula f);

struct Violation {
  std::string message;
  std::string path;  // child-index path from the root, e.g. "/0/1"
};

// Checks that f is closed up to its binders, every bound variable occurrence
// is guarded by a modality or counting operator, and no variable falls under
// both a modality and its converse within one binder.
std::vector<Violation> check_wellformed(Formula f);

std::string to_string(Formula f);

// Concrete grammar (loosest binding first):
//   f := 'mu' $x '.' f | 'let' $x '=' f {',' $y '=' g} 'in' h | or-expr
//   or-expr := and-expr {'|' and-expr}
//   and-expr := unary {'&' unary}
//   unary := '~' unary | '<dn>'|'<rt>'|'<up>'|'<lf>' unary
//          | '#' '(' f ')' ('>'|'<=') k | '(' f ')' | 'T' | prop | $x
// Binders are renamed apart after parsing.
Formula parse_formula(std::string_view text);

}  // namespace mutlin

#endif  // MUTLIN_FORMULA_HPP_
