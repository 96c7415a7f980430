#include "mutlin/formula.hpp"

#include <cctype>
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "mutlin/errors.hpp"

namespace mutlin {

Modality converse(Modality m) {
  switch (m) {
    case Modality::Down: return Modality::Up;
    case Modality::Up: return Modality::Down;
    case Modality::Right: return Modality::Left;
    case Modality::Left: return Modality::Right;
  }
  __builtin_unreachable();
}

const char* modality_name(Modality m) {
  switch (m) {
    case Modality::Down: return "dn";
    case Modality::Right: return "rt";
    case Modality::Up: return "up";
    case Modality::Left: return "lf";
  }
  __builtin_unreachable();
}

struct Formula::Node {
  Kind kind;
  Modality mod = Modality::Down;
  std::uint64_t k = 0;
  std::string name;
  std::vector<std::string> vars;   // MuVec binders
  std::vector<Formula> kids;       // MuVec: bodies..., main
  std::uint64_t id = 0;

  bool same_shape(const Node& o) const {
    return kind == o.kind && mod == o.mod && k == o.k && name == o.name &&
           vars == o.vars && kids == o.kids;
  }
  std::size_t shape_hash() const {
    std::size_t h = static_cast<std::size_t>(kind) * 1000003u;
    h ^= static_cast<std::size_t>(mod) + 0x9e3779b9 + (h << 6);
    h ^= std::hash<std::uint64_t>{}(k) + (h << 6);
    h ^= std::hash<std::string>{}(name) + (h >> 2);
    for (const auto& v : vars) h = h * 31 + std::hash<std::string>{}(v);
    for (const auto& c : kids) h = h * 37 + std::hash<std::uint64_t>{}(c.id());
    return h;
  }
};

namespace {

struct NodeHash {
  std::size_t operator()(const Formula::Node* n) const { return n->shape_hash(); }
};
struct NodeEq {
  bool operator()(const Formula::Node* a, const Formula::Node* b) const {
    return a->same_shape(*b);
  }
};

struct Interner {
  std::mutex mu;
  std::unordered_set<Formula::Node*, NodeHash, NodeEq> table;
  std::uint64_t next_id = 1;
};
Interner& interner() {
  static Interner* i = new Interner;  // leaked on purpose: formulas live forever
  return *i;
}

}  // namespace

Formula Formula::intern(Node&& proto) {
  auto& in = interner();
  std::lock_guard<std::mutex> lock(in.mu);
  auto it = in.table.find(&proto);
  if (it != in.table.end()) return Formula(*it);
  Node* n = new Node(std::move(proto));
  n->id = in.next_id++;
  in.table.insert(n);
  return Formula(n);
}

Formula Formula::prop(std::string name) {
  Node n{Kind::Prop};
  n.name = std::move(name);
  return intern(std::move(n));
}
Formula Formula::var(std::string name) {
  Node n{Kind::Var};
  n.name = std::move(name);
  return intern(std::move(n));
}
Formula Formula::top() { return intern(Node{Kind::True}); }
Formula Formula::negation(Formula f) {
  Node n{Kind::Not};
  n.kids = {f};
  return intern(std::move(n));
}
Formula Formula::disj(Formula a, Formula b) {
  Node n{Kind::Or};
  n.kids = {a, b};
  return intern(std::move(n));
}
Formula Formula::conj(Formula a, Formula b) {
  Node n{Kind::And};
  n.kids = {a, b};
  return intern(std::move(n));
}
Formula Formula::modal(Modality m, Formula f) {
  Node n{Kind::Modal};
  n.mod = m;
  n.kids = {f};
  return intern(std::move(n));
}
Formula Formula::mu(std::string var, Formula body) {
  Node n{Kind::Mu};
  n.name = std::move(var);
  n.kids = {body};
  return intern(std::move(n));
}
Formula Formula::mu_vec(std::vector<std::string> vars, std::vector<Formula> bodies,
                        Formula main) {
  Node n{Kind::MuVec};
  n.vars = std::move(vars);
  n.kids = std::move(bodies);
  n.kids.push_back(main);
  return intern(std::move(n));
}
Formula Formula::count_gt(Formula f, std::uint64_t k) {
  Node n{Kind::CountGt};
  n.k = k;
  n.kids = {f};
  return intern(std::move(n));
}
Formula Formula::count_le(Formula f, std::uint64_t k) {
  Node n{Kind::CountLe};
  n.k = k;
  n.kids = {f};
  return intern(std::move(n));
}

Kind Formula::kind() const { return n_->kind; }
const std::string& Formula::name() const { return n_->name; }
Modality Formula::modality() const { return n_->mod; }
std::uint64_t Formula::bound() const { return n_->k; }
std::size_t Formula::arity() const { return n_->kids.size(); }
Formula Formula::child(std::size_t i) const { return n_->kids[i]; }
std::span<const std::string> Formula::vec_vars() const { return n_->vars; }
std::uint64_t Formula::id() const { return n_ ? n_->id : 0; }

// ---- size / max_k -------------------------------------------------------

std::uint64_t bits_for(std::uint64_t k) {
  std::uint64_t b = 0;
  while (k) {
    ++b;
    k >>= 1;
  }
  return b;  // ceil(log2(k+1))
}

namespace {
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error("formula constant overflow");
  return r;
}
}  // namespace

std::uint64_t formula_size(Formula f) {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::Var:
    case Kind::True:
      return 1;
    case Kind::Not:
    case Kind::Modal:
    case Kind::Mu:
      return checked_add(1, formula_size(f.child(0)));
    case Kind::Or:
    case Kind::And:
      return checked_add(1, checked_add(formula_size(f.child(0)), formula_size(f.child(1))));
    case Kind::MuVec: {
      // Counted like the nested single fixpoints it abbreviates: one binder
      // per component plus all bodies.
      std::uint64_t s = f.vec_vars().size();
      for (std::size_t i = 0; i < f.arity(); ++i) s = checked_add(s, formula_size(f.child(i)));
      return s;
    }
    case Kind::CountGt:
    case Kind::CountLe:
      return checked_add(bits_for(f.bound()), formula_size(f.child(0)));
  }
  __builtin_unreachable();
}

std::uint64_t max_k(Formula f) {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::Var:
    case Kind::True:
      return 0;
    case Kind::Not:
    case Kind::Modal:
    case Kind::Mu:
      return max_k(f.child(0));
    case Kind::Or:
    case Kind::And:
      return checked_add(max_k(f.child(0)), max_k(f.child(1)));
    case Kind::MuVec: {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < f.arity(); ++i) s = checked_add(s, max_k(f.child(i)));
      return s;
    }
    case Kind::CountGt:
    case Kind::CountLe:
      return checked_add(max_k(f.child(0)), checked_add(f.bound(), 1));
  }
  __builtin_unreachable();
}

// ---- substitution / unfolding -------------------------------------------

Formula substitute(Formula f, const std::string& var, Formula replacement) {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::True:
      return f;
    case Kind::Var:
      return f.name() == var ? replacement : f;
    case Kind::Not: {
      Formula c = substitute(f.child(0), var, replacement);
      return c == f.child(0) ? f : Formula::negation(c);
    }
    case Kind::Or:
    case Kind::And: {
      Formula a = substitute(f.child(0), var, replacement);
      Formula b = substitute(f.child(1), var, replacement);
      if (a == f.child(0) && b == f.child(1)) return f;
      return f.kind() == Kind::Or ? Formula::disj(a, b) : Formula::conj(a, b);
    }
    case Kind::Modal: {
      Formula c = substitute(f.child(0), var, replacement);
      return c == f.child(0) ? f : Formula::modal(f.modality(), c);
    }
    case Kind::Mu: {
      if (f.name() == var) return f;  // shadowed
      Formula c = substitute(f.child(0), var, replacement);
      return c == f.child(0) ? f : Formula::mu(f.name(), c);
    }
    case Kind::MuVec: {
      for (const auto& v : f.vec_vars())
        if (v == var) return f;  // shadowed
      std::vector<Formula> kids;
      bool changed = false;
      for (std::size_t i = 0; i < f.arity(); ++i) {
        kids.push_back(substitute(f.child(i), var, replacement));
        changed |= kids.back() != f.child(i);
      }
      if (!changed) return f;
      Formula main = kids.back();
      kids.pop_back();
      return Formula::mu_vec({f.vec_vars().begin(), f.vec_vars().end()}, std::move(kids), main);
    }
    case Kind::CountGt:
    case Kind::CountLe: {
      Formula c = substitute(f.child(0), var, replacement);
      if (c == f.child(0)) return f;
      return f.kind() == Kind::CountGt ? Formula::count_gt(c, f.bound())
                                       : Formula::count_le(c, f.bound());
    }
  }
  __builtin_unreachable();
}

Formula unfold(Formula f) {
  if (f.kind() == Kind::Mu) return substitute(f.child(0), f.name(), f);
  if (f.kind() == Kind::MuVec) {
    auto vars = f.vec_vars();
    Formula main = f.child(f.arity() - 1);
    // The unfolding of the i-th projection is its body with every component
    // variable replaced by the corresponding projection.
    Formula target = main;
    if (main.kind() == Kind::Var) {
      for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == main.name()) {
          target = f.child(i);
          break;
        }
    }
    std::vector<Formula> bodies;
    for (std::size_t i = 0; i + 1 < f.arity(); ++i) bodies.push_back(f.child(i));
    for (std::size_t j = 0; j < vars.size(); ++j) {
      Formula proj = Formula::mu_vec({vars.begin(), vars.end()}, bodies, Formula::var(vars[j]));
      target = substitute(target, vars[j], proj);
    }
    return target;
  }
  throw eval_error("unfold expects a fixpoint formula");
}

// ---- nnf ----------------------------------------------------------------

namespace {
Formula nnf_neg(Formula f);

Formula nnf_pos(Formula f) {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::Var:
    case Kind::True:
      return f;
    case Kind::Not:
      return nnf_neg(f.child(0));
    case Kind::Or:
      return Formula::disj(nnf_pos(f.child(0)), nnf_pos(f.child(1)));
    case Kind::And:
      return Formula::conj(nnf_pos(f.child(0)), nnf_pos(f.child(1)));
    case Kind::Modal:
      return Formula::modal(f.modality(), nnf_pos(f.child(0)));
    case Kind::Mu:
      return Formula::mu(f.name(), nnf_pos(f.child(0)));
    case Kind::MuVec: {
      std::vector<Formula> kids;
      for (std::size_t i = 0; i + 1 < f.arity(); ++i) kids.push_back(nnf_pos(f.child(i)));
      return Formula::mu_vec({f.vec_vars().begin(), f.vec_vars().end()}, std::move(kids),
                             nnf_pos(f.child(f.arity() - 1)));
    }
    case Kind::CountGt:
      return Formula::count_gt(nnf_pos(f.child(0)), f.bound());
    case Kind::CountLe:
      return Formula::count_le(nnf_pos(f.child(0)), f.bound());
  }
  __builtin_unreachable();
}

Formula nnf_neg(Formula f) {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::Var:
    case Kind::True:
      return Formula::negation(f);
    case Kind::Not:
      return nnf_pos(f.child(0));
    case Kind::Or:
      return Formula::conj(nnf_neg(f.child(0)), nnf_neg(f.child(1)));
    case Kind::And:
      return Formula::disj(nnf_neg(f.child(0)), nnf_neg(f.child(1)));
    case Kind::Modal: {
      if (f.child(0).kind() == Kind::True) return Formula::negation(f);
      // ~<m>f = <m>~f | ~<m>T
      return Formula::disj(Formula::modal(f.modality(), nnf_neg(f.child(0))),
                           Formula::negation(Formula::modal(f.modality(), Formula::top())));
    }
    case Kind::Mu: {
      // ~mu x.f = mu x.~(f[x := ~x]); the double negation on x cancels.
      Formula flipped = substitute(f.child(0), f.name(), Formula::negation(Formula::var(f.name())));
      return Formula::mu(f.name(), nnf_neg(flipped));
    }
    case Kind::MuVec: {
      std::vector<Formula> kids;
      auto flip_vars = [&](Formula g) {
        for (const auto& v : f.vec_vars())
          g = substitute(g, v, Formula::negation(Formula::var(v)));
        return g;
      };
      for (std::size_t i = 0; i + 1 < f.arity(); ++i) kids.push_back(nnf_neg(flip_vars(f.child(i))));
      return Formula::mu_vec({f.vec_vars().begin(), f.vec_vars().end()}, std::move(kids),
                             nnf_neg(flip_vars(f.child(f.arity() - 1))));
    }
    case Kind::CountGt:
      return Formula::count_le(nnf_pos(f.child(0)), f.bound());
    case Kind::CountLe:
      return Formula::count_gt(nnf_pos(f.child(0)), f.bound());
  }
  __builtin_unreachable();
}
}  // namespace

Formula nnf(Formula f) { return nnf_pos(f); }

// ---- variable bookkeeping ------------------------------------------------

namespace {
void free_vars_rec(Formula f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::True:
      return;
    case Kind::Var:
      if (!bound.count(f.name())) out.insert(f.name());
      return;
    case Kind::Mu: {
      bool added = bound.insert(f.name()).second;
      free_vars_rec(f.child(0), bound, out);
      if (added) bound.erase(f.name());
      return;
    }
    case Kind::MuVec: {
      std::vector<std::string> added;
      for (const auto& v : f.vec_vars())
        if (bound.insert(v).second) added.push_back(v);
      for (std::size_t i = 0; i < f.arity(); ++i) free_vars_rec(f.child(i), bound, out);
      for (const auto& v : added) bound.erase(v);
      return;
    }
    default:
      for (std::size_t i = 0; i < f.arity(); ++i) free_vars_rec(f.child(i), bound, out);
  }
}

void props_rec(Formula f, std::set<std::string>& out) {
  if (f.kind() == Kind::Prop) {
    out.insert(f.name());
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) props_rec(f.child(i), out);
}
}  // namespace

std::set<std::string> free_vars(Formula f) {
  std::set<std::string> bound, out;
  free_vars_rec(f, bound, out);
  return out;
}

std::vector<std::string> propositions(Formula f) {
  std::set<std::string> s;
  props_rec(f, s);
  return {s.begin(), s.end()};
}

std::string fresh_prop(Formula f) {
  std::set<std::string> s;
  props_rec(f, s);
  std::string name = "p'";
  while (s.count(name)) name += "'";
  return name;
}

// ---- well-formedness -----------------------------------------------------

namespace {
struct WfBinder {
  std::string var;
  std::string path;     // where the binder sits
  bool saw_down = false, saw_up = false, saw_right = false, saw_left = false;
};

struct WfState {
  std::vector<Violation> out;
  // Active binders, innermost last. For each we track which modalities have
  // been crossed on the current descent (reset per branch via copy).
  std::vector<WfBinder*> binders;
};

struct OccCtx {
  // Modalities crossed since each active binder, plus guardedness.
  std::vector<std::uint8_t> dirs;   // bitmask per binder: 1=dn 2=up 4=rt 8=lf
  std::vector<bool> guarded;
  // Binders active when the innermost enclosing counting atom was entered;
  // counting atoms are global and must not capture outer fixpoint variables.
  std::size_t atom_binders = SIZE_MAX;
};

void wf_rec(Formula f, const std::string& path, WfState& st, OccCtx ctx) {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::True:
      return;
    case Kind::Var: {
      for (std::size_t i = st.binders.size(); i-- > 0;) {
        if (st.binders[i]->var == f.name()) {
          if (!ctx.guarded[i])
            st.out.push_back({"unguarded occurrence of variable $" + f.name(), path});
          if (ctx.atom_binders != SIZE_MAX && i < ctx.atom_binders)
            st.out.push_back({"variable $" + f.name() +
                                  " is bound outside the enclosing counting atom",
                              path});
          WfBinder* b = st.binders[i];
          b->saw_down |= (ctx.dirs[i] & 1) != 0;
          b->saw_up |= (ctx.dirs[i] & 2) != 0;
          b->saw_right |= (ctx.dirs[i] & 4) != 0;
          b->saw_left |= (ctx.dirs[i] & 8) != 0;
          return;
        }
      }
      st.out.push_back({"unbound variable $" + f.name(), path});
      return;
    }
    case Kind::Modal: {
      std::uint8_t bit = 0;
      switch (f.modality()) {
        case Modality::Down: bit = 1; break;
        case Modality::Up: bit = 2; break;
        case Modality::Right: bit = 4; break;
        case Modality::Left: bit = 8; break;
      }
      for (auto& d : ctx.dirs) d |= bit;
      for (std::size_t i = 0; i < ctx.guarded.size(); ++i) ctx.guarded[i] = true;
      wf_rec(f.child(0), path + "/0", st, ctx);
      return;
    }
    case Kind::CountGt:
    case Kind::CountLe: {
      for (std::size_t i = 0; i < ctx.guarded.size(); ++i) ctx.guarded[i] = true;
      ctx.atom_binders = std::min(ctx.atom_binders, st.binders.size());
      wf_rec(f.child(0), path + "/0", st, ctx);
      return;
    }
    case Kind::Mu: {
      WfBinder b{f.name(), path};
      st.binders.push_back(&b);
      ctx.dirs.push_back(0);
      ctx.guarded.push_back(false);
      wf_rec(f.child(0), path + "/0", st, ctx);
      ctx.dirs.pop_back();
      ctx.guarded.pop_back();
      st.binders.pop_back();
      if ((b.saw_down && b.saw_up) || (b.saw_right && b.saw_left))
        st.out.push_back(
            {"variable $" + f.name() + " occurs under a modality and its converse", path});
      return;
    }
    case Kind::MuVec: {
      std::vector<WfBinder> bs;
      bs.reserve(f.vec_vars().size());
      for (const auto& v : f.vec_vars()) bs.push_back({v, path});
      for (auto& b : bs) {
        st.binders.push_back(&b);
        ctx.dirs.push_back(0);
        ctx.guarded.push_back(false);
      }
      for (std::size_t i = 0; i + 1 < f.arity(); ++i)
        wf_rec(f.child(i), path + "/" + std::to_string(i), st, ctx);
      {
        // The main formula is not part of the recursion: occurrences there
        // unfold once into the (guarded) bodies, so they need no guard.
        OccCtx main_ctx = ctx;
        for (std::size_t i = main_ctx.guarded.size() - bs.size();
             i < main_ctx.guarded.size(); ++i)
          main_ctx.guarded[i] = true;
        wf_rec(f.child(f.arity() - 1), path + "/" + std::to_string(f.arity() - 1), st,
               main_ctx);
      }
      for (std::size_t i = 0; i < bs.size(); ++i) {
        ctx.dirs.pop_back();
        ctx.guarded.pop_back();
        st.binders.pop_back();
      }
      for (auto& b : bs)
        if ((b.saw_down && b.saw_up) || (b.saw_right && b.saw_left))
          st.out.push_back(
              {"variable $" + b.var + " occurs under a modality and its converse", path});
      return;
    }
    default:
      for (std::size_t i = 0; i < f.arity(); ++i)
        wf_rec(f.child(i), path + "/" + std::to_string(i), st, ctx);
  }
}
}  // namespace

std::vector<Violation> check_wellformed(Formula f) {
  WfState st;
  wf_rec(f, "", st, OccCtx{});
  return st.out;
}

// ---- printing ------------------------------------------------------------

namespace {
// Precedence levels: 0 = mu/let, 1 = or, 2 = and, 3 = unary/atom.
int prec_of(Formula f) {
  switch (f.kind()) {
    case Kind::Mu:
    case Kind::MuVec:
      return 0;
    case Kind::Or:
      return 1;
    case Kind::And:
      return 2;
    default:
      return 3;
  }
}

void print_rec(Formula f, int min_prec, std::string& out) {
  int p = prec_of(f);
  bool paren = p < min_prec;
  if (paren) out += "(";
  switch (f.kind()) {
    case Kind::Prop:
      out += f.name();
      break;
    case Kind::Var:
      out += "$" + f.name();
      break;
    case Kind::True:
      out += "T";
      break;
    case Kind::Not:
      out += "~";
      print_rec(f.child(0), 3, out);
      break;
    case Kind::Or:
      print_rec(f.child(0), 1, out);
      out += " | ";
      print_rec(f.child(1), 2, out);
      break;
    case Kind::And:
      print_rec(f.child(0), 2, out);
      out += " & ";
      print_rec(f.child(1), 3, out);
      break;
    case Kind::Modal:
      out += "<";
      out += modality_name(f.modality());
      out += ">";
      print_rec(f.child(0), 3, out);
      break;
    case Kind::Mu:
      out += "mu $" + f.name() + " . ";
      print_rec(f.child(0), 0, out);
      break;
    case Kind::MuVec: {
      out += "let ";
      for (std::size_t i = 0; i + 1 < f.arity(); ++i) {
        if (i) out += ", ";
        out += "$" + std::string(f.vec_vars()[i]) + " = ";
        print_rec(f.child(i), 1, out);
      }
      out += " in ";
      print_rec(f.child(f.arity() - 1), 0, out);
      break;
    }
    case Kind::CountGt:
    case Kind::CountLe:
      out += "#(";
      print_rec(f.child(0), 0, out);
      out += f.kind() == Kind::CountGt ? ") > " : ") <= ";
      out += std::to_string(f.bound());
      break;
  }
  if (paren) out += ")";
}
}  // namespace

std::string to_string(Formula f) {
  std::string out;
  print_rec(f, 0, out);
  return out;
}

// ---- parsing ---------------------------------------------------------------

namespace {
struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_word(std::string_view w) {
    skip_ws();
    if (s.substr(pos, w.size()) != w) return false;
    std::size_t end = pos + w.size();
    if (end < s.size() &&
        (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_' || s[end] == '\''))
      return false;
    pos = end;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos); }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                              s[pos] == '_' || s[pos] == '\''))
      ++pos;
    if (pos == start) fail("expected identifier");
    return std::string(s.substr(start, pos - start));
  }

  std::uint64_t number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected number");
    std::uint64_t v = 0;
    for (std::size_t i = start; i < pos; ++i) {
      if (v > (UINT64_MAX - (s[i] - '0')) / 10) throw overflow_error("constant too large");
      v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
    }
    return v;
  }

  Formula formula() {
    if (eat_word("mu")) {
      if (!eat('$')) fail("expected $variable after 'mu'");
      std::string v = ident();
      if (!eat('.')) fail("expected '.' in mu binder");
      return Formula::mu(v, formula());
    }
    if (eat_word("let")) {
      std::vector<std::string> vars;
      std::vector<Formula> bodies;
      do {
        if (!eat('$')) fail("expected $variable in let");
        vars.push_back(ident());
        if (!eat('=')) fail("expected '=' in let");
        bodies.push_back(or_expr());
      } while (eat(','));
      if (!eat_word("in")) fail("expected 'in'");
      return Formula::mu_vec(std::move(vars), std::move(bodies), formula());
    }
    return or_expr();
  }

  Formula or_expr() {
    Formula f = and_expr();
    while (eat('|')) f = Formula::disj(f, and_expr());
    return f;
  }

  Formula and_expr() {
    Formula f = unary();
    while (eat('&')) f = Formula::conj(f, unary());
    return f;
  }

  Formula unary() {
    skip_ws();
    // A binder reaches as far right as possible, even as an operand.
    if (s.substr(pos, 2) == "mu" || s.substr(pos, 3) == "let") {
      std::size_t save = pos;
      std::string w = ident();
      pos = save;
      if (w == "mu" || w == "let") return formula();
    }
    if (eat('~')) return Formula::negation(unary());
    if (eat('<')) {
      std::string m = ident();
      if (!eat('>')) fail("expected '>' closing modality");
      Modality mod;
      if (m == "dn") mod = Modality::Down;
      else if (m == "rt") mod = Modality::Right;
      else if (m == "up") mod = Modality::Up;
      else if (m == "lf") mod = Modality::Left;
      else fail("unknown modality <" + m + ">");
      return Formula::modal(mod, unary());
    }
    if (eat('#')) {
      if (!eat('(')) fail("expected '(' after '#'");
      Formula body = formula();
      if (!eat(')')) fail("expected ')' after counting body");
      skip_ws();
      if (eat('>')) return Formula::count_gt(body, number());
      if (pos + 1 < s.size() && s[pos] == '<' && s[pos + 1] == '=') {
        pos += 2;
        return Formula::count_le(body, number());
      }
      fail("expected '>' or '<=' after counting body");
    }
    if (eat('(')) {
      Formula f = formula();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    if (eat('$')) return Formula::var(ident());
    if (eat_word("T")) return Formula::top();
    skip_ws();
    if (pos < s.size() && std::islower(static_cast<unsigned char>(s[pos]))) {
      // Reserved words never reach here: mu/let/in handled above.
      std::string name = ident();
      if (name == "mu" || name == "let" || name == "in") fail("misplaced keyword '" + name + "'");
      return Formula::prop(name);
    }
    fail("expected formula");
  }
};

// Rename binders apart so substitution never captures.
Formula rename_apart(Formula f, std::map<std::string, std::string>& env,
                     std::set<std::string>& used) {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::True:
      return f;
    case Kind::Var: {
      auto it = env.find(f.name());
      return it == env.end() ? f : Formula::var(it->second);
    }
    case Kind::Mu: {
      std::string fresh = f.name();
      while (!used.insert(fresh).second) fresh += "_";
      auto saved = env.find(f.name()) == env.end() ? std::optional<std::string>{}
                                                   : std::optional<std::string>{env[f.name()]};
      env[f.name()] = fresh;
      Formula body = rename_apart(f.child(0), env, used);
      if (saved)
        env[f.name()] = *saved;
      else
        env.erase(f.name());
      return Formula::mu(fresh, body);
    }
    case Kind::MuVec: {
      std::vector<std::string> freshv;
      std::vector<std::pair<std::string, std::optional<std::string>>> saved;
      for (const auto& v : f.vec_vars()) {
        std::string fresh = v;
        while (!used.insert(fresh).second) fresh += "_";
        saved.emplace_back(v, env.count(v) ? std::optional<std::string>{env[v]}
                                           : std::optional<std::string>{});
        env[v] = fresh;
        freshv.push_back(fresh);
      }
      std::vector<Formula> kids;
      for (std::size_t i = 0; i < f.arity(); ++i)
        kids.push_back(rename_apart(f.child(i), env, used));
      for (auto& [v, old] : saved) {
        if (old)
          env[v] = *old;
        else
          env.erase(v);
      }
      Formula main = kids.back();
      kids.pop_back();
      return Formula::mu_vec(std::move(freshv), std::move(kids), main);
    }
    case Kind::Not:
      return Formula::negation(rename_apart(f.child(0), env, used));
    case Kind::Or:
      return Formula::disj(rename_apart(f.child(0), env, used),
                           rename_apart(f.child(1), env, used));
    case Kind::And:
      return Formula::conj(rename_apart(f.child(0), env, used),
                           rename_apart(f.child(1), env, used));
    case Kind::Modal:
      return Formula::modal(f.modality(), rename_apart(f.child(0), env, used));
    case Kind::CountGt:
      return Formula::count_gt(rename_apart(f.child(0), env, used), f.bound());
    case Kind::CountLe:
      return Formula::count_le(rename_apart(f.child(0), env, used), f.bound());
  }
  __builtin_unreachable();
}
}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p{text};
  Formula f = p.formula();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  std::map<std::string, std::string> env;
  std::set<std::string> used;
  return rename_apart(f, env, used);
}

}  // namespace mutlin
