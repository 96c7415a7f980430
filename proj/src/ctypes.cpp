#include "mutlin/ctypes.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "mutlin/errors.hpp"
#include "mutlin/eval.hpp"

namespace mutlin::ctypes {

namespace {

TypePtr mk(TypeExpr&& e) { return std::make_shared<const TypeExpr>(std::move(e)); }

TypePtr epsilon() { return mk({TypeExpr::Kind::Epsilon}); }
TypePtr variable(std::string x) { return mk({TypeExpr::Kind::Var, std::move(x)}); }
TypePtr concat(TypePtr a, TypePtr b) {
  return mk({TypeExpr::Kind::Concat, "", std::move(a), std::move(b)});
}
TypePtr alt(TypePtr a, TypePtr b) {
  return mk({TypeExpr::Kind::Alt, "", std::move(a), std::move(b)});
}

// ---- parsing -------------------------------------------------------------------

struct Parser {
  const std::string& s;
  std::size_t pos = 0;
  int sugar_vars = 0;  // fresh variables for desugared stars

  explicit Parser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos); }

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
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
      ++pos;
    if (pos == start) fail("expected a name");
    return s.substr(start, pos - start);
  }

  bool peek_word(const char* w) {
    skip_ws();
    std::size_t len = std::string(w).size();
    if (s.compare(pos, len, w) != 0) return false;
    char after = pos + len < s.size() ? s[pos + len] : '\0';
    return !(std::isalnum(static_cast<unsigned char>(after)) || after == '_' || after == '\'');
  }
  bool eat_word(const char* w) {
    if (!peek_word(w)) return false;
    pos += std::string(w).size();
    return true;
  }

  std::uint64_t number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected a number");
    return std::stoull(s.substr(start, pos - start));
  }

  // Does an expression start at the current position? Used to tell the
  // alternation + from the postfix +.
  bool expr_follows() {
    skip_ws();
    if (pos >= s.size()) return false;
    char c = s[pos];
    if (c == '(' || c == '$') return true;
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') return false;
    return !peek_word("in");
  }

  TypePtr expr() {
    TypePtr e = concat_expr();
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == '+') {
        std::size_t save = pos;
        ++pos;
        if (!expr_follows()) {
          pos = save;
          break;
        }
        e = alt(std::move(e), concat_expr());
      } else {
        break;
      }
    }
    return e;
  }

  TypePtr concat_expr() {
    TypePtr e = postfix();
    skip_ws();
    if (eat('.')) return concat(std::move(e), concat_expr());
    return e;
  }

  TypePtr star_of(TypePtr e) {
    std::string x = "star" + std::to_string(++sugar_vars);
    TypePtr body = alt(concat(std::move(e), variable(x)), epsilon());
    return mk({TypeExpr::Kind::LetRec, "", nullptr, nullptr, {x}, {std::move(body)},
               variable(x)});
  }

  TypePtr postfix() {
    TypePtr e = atom();
    while (true) {
      skip_ws();
      if (eat('*')) {
        e = star_of(std::move(e));
      } else if (eat('?')) {
        e = alt(epsilon(), std::move(e));
      } else if (pos < s.size() && s[pos] == '+') {
        std::size_t save = pos;
        ++pos;
        if (expr_follows()) {  // alternation, not the postfix plus
          pos = save;
          break;
        }
        e = concat(e, star_of(e));
      } else {
        break;
      }
    }
    return e;
  }

  TypePtr atom() {
    skip_ws();
    if (pos >= s.size()) fail("expected a type expression");
    if (eat('(')) {
      TypePtr e = expr();
      expect(')');
      return e;
    }
    if (eat('$')) return variable(ident());
    if (eat_word("eps")) return epsilon();
    if (peek_word("let")) return let_expr();
    if (peek_word("in")) fail("misplaced keyword 'in'");
    std::string p = ident();
    expect('[');
    TypePtr body = expr();
    bool gt = true;
    std::uint64_t k = 0;
    skip_ws();
    if (eat('>')) {
      k = number();
    } else if (pos + 1 < s.size() && s[pos] == '<' && s[pos + 1] == '=') {
      pos += 2;
      gt = false;
      k = number();
    }
    expect(']');
    return mk({TypeExpr::Kind::Labeled, std::move(p), nullptr, nullptr, {}, {},
               std::move(body), gt, k});
  }

  TypePtr let_expr() {
    eat_word("let");
    std::vector<std::string> vars;
    std::vector<TypePtr> bodies;
    do {
      expect('$');
      vars.push_back(ident());
      expect('=');
      bodies.push_back(expr());
    } while (eat(','));
    if (!eat_word("in")) fail("expected 'in'");
    TypePtr main = expr();
    return mk({TypeExpr::Kind::LetRec, "", nullptr, nullptr, std::move(vars),
               std::move(bodies), std::move(main)});
  }
};

void check_closed(const TypePtr& e, std::set<std::string>& bound) {
  switch (e->kind) {
    case TypeExpr::Kind::Epsilon:
      return;
    case TypeExpr::Kind::Var:
      if (!bound.count(e->name)) throw parse_error("free variable $" + e->name, 0);
      return;
    case TypeExpr::Kind::Concat:
    case TypeExpr::Kind::Alt:
      check_closed(e->left, bound);
      check_closed(e->right, bound);
      return;
    case TypeExpr::Kind::LetRec: {
      std::vector<std::string> fresh;
      for (const auto& v : e->vars)
        if (bound.insert(v).second) fresh.push_back(v);
      for (const auto& b : e->bodies) check_closed(b, bound);
      check_closed(e->child, bound);
      for (const auto& v : fresh) bound.erase(v);
      return;
    }
    case TypeExpr::Kind::Labeled:
      check_closed(e->child, bound);
      return;
  }
}

}  // namespace

TypePtr parse_ctype(const std::string& text) {
  Parser p(text);
  TypePtr e = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("unexpected trailing input");
  std::set<std::string> bound;
  check_closed(e, bound);
  return e;
}

namespace {

int prec_of(const TypePtr& e) {
  switch (e->kind) {
    case TypeExpr::Kind::Alt:
    case TypeExpr::Kind::LetRec:
      return 0;
    case TypeExpr::Kind::Concat:
      return 1;
    default:
      return 2;
  }
}

void print(const TypePtr& e, int min_prec, std::string& out) {
  bool paren = prec_of(e) < min_prec;
  if (paren) out += '(';
  switch (e->kind) {
    case TypeExpr::Kind::Epsilon:
      out += "eps";
      break;
    case TypeExpr::Kind::Var:
      out += '$';
      out += e->name;
      break;
    case TypeExpr::Kind::Concat:
      print(e->left, 2, out);
      out += " . ";
      print(e->right, 1, out);
      break;
    case TypeExpr::Kind::Alt:
      print(e->left, 0, out);
      out += " + ";
      print(e->right, 1, out);
      break;
    case TypeExpr::Kind::LetRec:
      out += "let ";
      for (std::size_t i = 0; i < e->vars.size(); ++i) {
        if (i) out += ", ";
        out += '$';
        out += e->vars[i];
        out += " = ";
        print(e->bodies[i], 0, out);
      }
      out += " in ";
      print(e->child, 0, out);
      break;
    case TypeExpr::Kind::Labeled:
      out += e->name;
      out += '[';
      print(e->child, 0, out);
      if (e->gt && e->k == 0) {
        ;  // p[e] abbreviates p[e > 0]
      } else if (e->gt) {
        out += " > " + std::to_string(e->k);
      } else {
        out += " <= " + std::to_string(e->k);
      }
      out += ']';
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string to_string(const TypePtr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

std::size_t type_size(const TypePtr& e) {
  switch (e->kind) {
    case TypeExpr::Kind::Epsilon:
    case TypeExpr::Kind::Var:
      return 1;
    case TypeExpr::Kind::Concat:
    case TypeExpr::Kind::Alt:
      return 1 + type_size(e->left) + type_size(e->right);
    case TypeExpr::Kind::LetRec: {
      std::size_t n = 1 + type_size(e->child);
      for (const auto& b : e->bodies) n += 1 + type_size(b);
      return n;
    }
    case TypeExpr::Kind::Labeled:
      return 1 + type_size(e->child);
  }
  __builtin_unreachable();
}

bool nullable(const TypePtr& e) {
  // Iterate the variable nullability assignment to its least fixpoint.
  std::map<std::string, bool> null_var;
  std::function<bool(const TypePtr&)> go = [&](const TypePtr& t) -> bool {
    switch (t->kind) {
      case TypeExpr::Kind::Epsilon:
        return true;
      case TypeExpr::Kind::Var: {
        auto it = null_var.find(t->name);
        return it != null_var.end() && it->second;
      }
      case TypeExpr::Kind::Concat:
        return go(t->left) && go(t->right);
      case TypeExpr::Kind::Alt:
        return go(t->left) || go(t->right);
      case TypeExpr::Kind::LetRec: {
        std::map<std::string, bool> saved;
        for (const auto& v : t->vars) {
          saved[v] = null_var.count(v) ? null_var[v] : false;
          null_var[v] = false;
        }
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t i = 0; i < t->vars.size(); ++i) {
            bool b = go(t->bodies[i]);
            if (b != null_var[t->vars[i]]) {
              null_var[t->vars[i]] = b;
              changed = true;
            }
          }
        }
        bool r = go(t->child);
        for (auto& [v, b] : saved) null_var[v] = b;
        return r;
      }
      case TypeExpr::Kind::Labeled:
        return false;
    }
    __builtin_unreachable();
  };
  return go(e);
}

// ---- direct semantics ----------------------------------------------------------

namespace {

// A forest inside the fixed tree: the contiguous child segment [i, j) of node
// n, or the whole tree when n == -1. Encoded for set storage.
using Seg = std::uint64_t;
Seg seg(int n, int i, int j) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n + 1)) << 32) |
         (static_cast<std::uint64_t>(i) << 16) | static_cast<std::uint64_t>(j);
}

struct Matcher {
  const KripkeTree& t;
  std::map<std::string, std::set<Seg>> env;

  int list_len(int n) const { return n < 0 ? 1 : static_cast<int>(t.children[n].size()); }
  int list_at(int n, int i) const { return n < 0 ? t.root : t.children[n][i]; }

  std::set<Seg> sem(const TypePtr& e) {
    std::set<Seg> out;
    switch (e->kind) {
      case TypeExpr::Kind::Epsilon:
        for (int n = -1; n < t.size(); ++n)
          for (int i = 0; i <= list_len(n); ++i) out.insert(seg(n, i, i));
        return out;
      case TypeExpr::Kind::Var: {
        auto it = env.find(e->name);
        return it == env.end() ? out : it->second;
      }
      case TypeExpr::Kind::Concat: {
        std::set<Seg> a = sem(e->left), b = sem(e->right);
        for (int n = -1; n < t.size(); ++n)
          for (int i = 0; i <= list_len(n); ++i)
            for (int m = i; m <= list_len(n); ++m) {
              if (!a.count(seg(n, i, m))) continue;
              for (int j = m; j <= list_len(n); ++j)
                if (b.count(seg(n, m, j))) out.insert(seg(n, i, j));
            }
        return out;
      }
      case TypeExpr::Kind::Alt: {
        out = sem(e->left);
        std::set<Seg> b = sem(e->right);
        out.insert(b.begin(), b.end());
        return out;
      }
      case TypeExpr::Kind::LetRec: {
        std::map<std::string, std::set<Seg>> saved;
        for (const auto& v : e->vars) {
          if (env.count(v)) saved[v] = env[v];
          env[v] = {};
        }
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t i = 0; i < e->vars.size(); ++i) {
            std::set<Seg> s = sem(e->bodies[i]);
            if (s != env[e->vars[i]]) {
              env[e->vars[i]] = std::move(s);
              changed = true;
            }
          }
        }
        out = sem(e->child);
        for (const auto& v : e->vars) env.erase(v);
        for (auto& [v, s] : saved) env[v] = std::move(s);
        return out;
      }
      case TypeExpr::Kind::Labeled: {
        std::set<Seg> body = sem(e->child);
        for (int n = -1; n < t.size(); ++n)
          for (int i = 0; i + 1 <= list_len(n); ++i) {
            int node = list_at(n, i);
            if (!t.has_label(node, e->name)) continue;
            std::uint64_t count = 0;
            for (int c = 0; c < static_cast<int>(t.children[node].size()); ++c)
              if (body.count(seg(node, c, c + 1))) ++count;
            bool ok = e->gt ? count > e->k : count <= e->k;
            if (ok) out.insert(seg(n, i, i + 1));
          }
        return out;
      }
    }
    __builtin_unreachable();
  }
};

}  // namespace

bool member(const KripkeTree& t, const TypePtr& e) {
  KripkeTree nary = t.form == KripkeTree::Form::Nary ? t : binary_to_nary(t);
  Matcher m{nary};
  return m.sem(e).count(seg(-1, 0, 1)) > 0;
}

// ---- translation ---------------------------------------------------------------

namespace {

void collect_names(const TypePtr& e, std::set<std::string>& props,
                   std::set<std::string>& vars) {
  switch (e->kind) {
    case TypeExpr::Kind::Epsilon:
      return;
    case TypeExpr::Kind::Var:
      vars.insert(e->name);
      return;
    case TypeExpr::Kind::Concat:
    case TypeExpr::Kind::Alt:
      collect_names(e->left, props, vars);
      collect_names(e->right, props, vars);
      return;
    case TypeExpr::Kind::LetRec:
      for (const auto& v : e->vars) vars.insert(v);
      for (const auto& b : e->bodies) collect_names(b, props, vars);
      collect_names(e->child, props, vars);
      return;
    case TypeExpr::Kind::Labeled:
      props.insert(e->name);
      collect_names(e->child, props, vars);
      return;
  }
}

struct TypeNames {
  std::set<std::string> taken_props, taken_vars;
  int origins = 0;
  std::vector<std::string> used_origins;

  std::string origin() {
    std::string n;
    do n = "o" + std::to_string(++origins);
    while (taken_props.count(n));
    taken_props.insert(n);
    used_origins.push_back(n);
    return n;
  }
  // The negated translation renames every type variable.
  std::string neg_var(const std::string& v) {
    std::string n = v + "'";
    while (taken_vars.count(n)) n += '\'';
    return n;
  }
};

Formula nominal_for(const std::string& o) {
  Formula op = Formula::prop(o);
  return Formula::conj(Formula::count_le(op, 1), Formula::count_gt(op, 0));
}

Formula anchor_for(const std::string& o) {
  return Formula::conj(nominal_for(o), Formula::prop(o));
}

Formula f_type(const TypePtr& e, TypeNames& names);

// Does the language contain a nonempty forest? Dual of nullable.
bool has_nonempty(const TypePtr& e, std::map<std::string, bool>& env) {
  switch (e->kind) {
    case TypeExpr::Kind::Epsilon:
      return false;
    case TypeExpr::Kind::Var: {
      // A variable bound outside the expression under scrutiny is unknown;
      // assume nonempty so no simplification applies.
      auto it = env.find(e->name);
      return it == env.end() || it->second;
    }
    case TypeExpr::Kind::Concat:
    case TypeExpr::Kind::Alt:
      return has_nonempty(e->left, env) || has_nonempty(e->right, env);
    case TypeExpr::Kind::LetRec: {
      std::map<std::string, bool> saved;
      for (const auto& v : e->vars) {
        if (env.count(v)) saved[v] = env[v];
        env[v] = false;
      }
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t i = 0; i < e->vars.size(); ++i) {
          bool b = has_nonempty(e->bodies[i], env);
          if (b != env[e->vars[i]]) {
            env[e->vars[i]] = b;
            changed = true;
          }
        }
      }
      bool r = has_nonempty(e->child, env);
      for (const auto& v : e->vars) env.erase(v);
      for (auto& [v, b] : saved) env[v] = b;
      return r;
    }
    case TypeExpr::Kind::Labeled:
      return true;
  }
  __builtin_unreachable();
}

bool empty_only(const TypePtr& e) {
  std::map<std::string, bool> env;
  return !has_nonempty(e, env);
}

// The counting clause: this node carries p and the (unique) origin o, and the
// number of its children satisfying F(body) meets the bound. The nominal is
// asserted at the top level too — inside the counting body alone it would be
// vacuous under a <= bound.
Formula f_labeled(const TypePtr& e, TypeNames& names, bool complemented) {
  // A body denoting only empty forests never matches a child, so the count
  // is constantly zero and no origin is needed. This keeps the common
  // "any p-labeled tree" pattern (p[eps <= k]) usable inside counted bodies,
  // where a nested origin nominal would wrongly cap the match count at one.
  if (empty_only(e->child)) {
    bool zero_ok = !e->gt;  // a zero count satisfies <= k and fails > k
    if (!complemented)
      return zero_ok ? Formula::prop(e->name) : Formula::negation(Formula::top());
    return zero_ok ? Formula::negation(Formula::prop(e->name)) : Formula::top();
  }
  std::string o = names.origin();
  Formula counted =
      Formula::conj(f_type(e->child, names), Formula::modal(Modality::Up, anchor_for(o)));
  bool gt = complemented ? !e->gt : e->gt;
  Formula atom = gt ? Formula::count_gt(std::move(counted), e->k)
                    : Formula::count_le(std::move(counted), e->k);
  Formula anchored = Formula::conj(Formula::conj(Formula::prop(o), nominal_for(o)),
                                   std::move(atom));
  if (complemented)
    return Formula::disj(Formula::negation(Formula::prop(e->name)), std::move(anchored));
  return Formula::conj(Formula::prop(e->name), std::move(anchored));
}

Formula f_type(const TypePtr& e, TypeNames& names) {
  switch (e->kind) {
    case TypeExpr::Kind::Epsilon:
      return Formula::negation(Formula::top());
    case TypeExpr::Kind::Var:
      return Formula::var(e->name);
    case TypeExpr::Kind::Concat:
      return Formula::conj(f_type(e->left, names),
                           Formula::modal(Modality::Right, f_type(e->right, names)));
    case TypeExpr::Kind::Alt:
      return Formula::disj(f_type(e->left, names), f_type(e->right, names));
    case TypeExpr::Kind::LetRec: {
      std::vector<Formula> bodies;
      for (const auto& b : e->bodies) bodies.push_back(f_type(b, names));
      return Formula::mu_vec(e->vars, std::move(bodies), f_type(e->child, names));
    }
    case TypeExpr::Kind::Labeled:
      return f_labeled(e, names, false);
  }
  __builtin_unreachable();
}

// Safe negation: structural recursion that keeps counting anchors positive,
// complementing only the bound of each counting atom. Fixpoint negation uses
// renamed variables (finite trees have unique guarded fixpoints).
Formula f_type_neg(const TypePtr& e, TypeNames& names,
                   std::map<std::string, std::string>& ren) {
  switch (e->kind) {
    case TypeExpr::Kind::Epsilon:
      return Formula::top();
    case TypeExpr::Kind::Var:
      return Formula::var(ren.at(e->name));
    case TypeExpr::Kind::Concat:
      return Formula::disj(
          Formula::disj(f_type_neg(e->left, names, ren),
                        Formula::modal(Modality::Right, f_type_neg(e->right, names, ren))),
          Formula::negation(Formula::modal(Modality::Right, Formula::top())));
    case TypeExpr::Kind::Alt:
      return Formula::conj(f_type_neg(e->left, names, ren),
                           f_type_neg(e->right, names, ren));
    case TypeExpr::Kind::LetRec: {
      std::vector<std::string> nvars;
      for (const auto& v : e->vars) {
        std::string nv = names.neg_var(v);
        ren[v] = nv;
        nvars.push_back(std::move(nv));
      }
      std::vector<Formula> bodies;
      for (const auto& b : e->bodies) bodies.push_back(f_type_neg(b, names, ren));
      Formula main = f_type_neg(e->child, names, ren);
      for (const auto& v : e->vars) ren.erase(v);
      return Formula::mu_vec(std::move(nvars), std::move(bodies), std::move(main));
    }
    case TypeExpr::Kind::Labeled:
      return f_labeled(e, names, true);
  }
  __builtin_unreachable();
}

TypeNames make_names(std::initializer_list<TypePtr> exprs) {
  TypeNames names;
  for (const auto& e : exprs) collect_names(e, names.taken_props, names.taken_vars);
  return names;
}

}  // namespace

Formula translate_type(const TypePtr& e) {
  TypeNames names = make_names({e});
  return f_type(e, names);
}

Formula translate_type_negated(const TypePtr& e) {
  TypeNames names = make_names({e});
  std::map<std::string, std::string> ren;
  return f_type_neg(e, names, ren);
}

// ---- reasoning -----------------------------------------------------------------

namespace {

Formula root_context() {
  return Formula::conj(Formula::negation(Formula::modal(Modality::Up, Formula::top())),
                       Formula::negation(Formula::modal(Modality::Left, Formula::top())));
}

SatResult solve(Formula f, const SolverOptions& opts) {
  Formula g = Formula::conj(
      nary_formula_to_binary(Formula::conj(std::move(f), root_context())),
      single_tree_axiom());
  SolverOptions o = opts;
  o.tight_counter_caps = true;
  return satisfiable(g, o);
}

std::optional<KripkeTree> extract(const SatResult& r, const TypeNames& names) {
  if (!r.model) return std::nullopt;
  std::string blank = "p'";
  std::set<std::string> drop(names.used_origins.begin(), names.used_origins.end());
  while (drop.count(blank)) blank += '\'';
  KripkeTree t = *r.model;
  for (auto& ls : t.labels) {
    std::erase_if(ls, [&](const std::string& p) { return drop.count(p) > 0; });
    if (ls.empty()) ls.push_back(blank);
  }
  return binary_to_nary(t);
}

}  // namespace

TypeDecision type_empty(const TypePtr& e, const SolverOptions& opts) {
  TypeDecision d;
  if (nullable(e)) {
    // The empty forest inhabits the type; it has no tree counterexample.
    d.holds = false;
    return d;
  }
  TypeNames names = make_names({e});
  SatResult r = solve(f_type(e, names), opts);
  d.holds = !r.sat;
  d.stats = r.stats;
  if (r.sat) {
    auto ce = extract(r, names);
    if (ce && member(*ce, e)) d.counterexample = std::move(ce);
  }
  return d;
}

TypeDecision type_contained(const TypePtr& e1, const TypePtr& e2, const SolverOptions& opts) {
  TypeDecision d;
  if (nullable(e1) && !nullable(e2)) {
    // The empty forest separates them; it has no tree representation.
    d.holds = false;
    return d;
  }
  TypeNames names = make_names({e1, e2});
  std::map<std::string, std::string> ren;
  Formula f = Formula::conj(f_type(e1, names), f_type_neg(e2, names, ren));
  SatResult r = solve(std::move(f), opts);
  d.holds = !r.sat;
  d.stats = r.stats;
  if (r.sat) {
    auto ce = extract(r, names);
    if (ce && member(*ce, e1) && !member(*ce, e2)) d.counterexample = std::move(ce);
  }
  return d;
}

TypeDecision type_equiv(const TypePtr& e1, const TypePtr& e2, const SolverOptions& opts) {
  TypeDecision d = type_contained(e1, e2, opts);
  if (!d.holds) return d;
  TypeDecision back = type_contained(e2, e1, opts);
  back.stats.iterations += d.stats.iterations;
  back.stats.nodes_generated += d.stats.nodes_generated;
  back.stats.trees_built += d.stats.trees_built;
  back.stats.guesses_tried += d.stats.guesses_tried;
  back.stats.elapsed_seconds += d.stats.elapsed_seconds;
  return back;
}

}  // namespace mutlin::ctypes
