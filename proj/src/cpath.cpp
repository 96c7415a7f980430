#include "mutlin/cpath.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <vector>

#include "mutlin/errors.hpp"
#include "mutlin/eval.hpp"

namespace mutlin::cpath {

namespace {

PathPtr mk_path(PathExpr e) { return std::make_shared<const PathExpr>(std::move(e)); }
QualPtr mk_qual(Qualifier q) { return std::make_shared<const Qualifier>(std::move(q)); }
QueryPtr mk_top(TopPath t) { return std::make_shared<const TopPath>(std::move(t)); }

QualPtr qual_not(QualPtr q) {
  return mk_qual({Qualifier::Kind::Not, nullptr, 0, std::move(q), nullptr});
}
QualPtr qual_or(QualPtr a, QualPtr b) {
  return mk_qual({Qualifier::Kind::Or, nullptr, 0, std::move(a), std::move(b)});
}
QualPtr qual_and(QualPtr a, QualPtr b) {
  return qual_not(qual_or(qual_not(std::move(a)), qual_not(std::move(b))));
}

// ---- parser --------------------------------------------------------------------

struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, pos); }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                              s[pos] == '_' || s[pos] == '\''))
      ++pos;
    if (pos == start) fail("expected name");
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

  QueryPtr query() {
    QueryPtr q = qterm();
    while (true) {
      skip_ws();
      if (eat('|'))
        q = mk_top({TopPath::Kind::Union, nullptr, q, qterm()});
      else if (eat('&'))
        q = mk_top({TopPath::Kind::Intersection, nullptr, q, qterm()});
      else if (eat('\\'))
        q = mk_top({TopPath::Kind::Difference, nullptr, q, qterm()});
      else
        return q;
    }
  }

  QueryPtr qterm() {
    skip_ws();
    if (eat('/')) return mk_top({TopPath::Kind::Rooted, nullptr, qterm(), nullptr});
    if (eat('(')) {
      QueryPtr q = query();
      if (!eat(')')) fail("expected ')'");
      return q;
    }
    return mk_top({TopPath::Kind::Path, path(), nullptr, nullptr});
  }

  PathPtr path() {
    PathPtr p = step();
    while (true) {
      skip_ws();
      // '/' continues the composition only when a step follows.
      if (pos < s.size() && s[pos] == '/') {
        ++pos;
        p = mk_path({PathExpr::Kind::Compose, {}, "", p, step(), nullptr});
      } else {
        return p;
      }
    }
  }

  PathPtr step() {
    PathPtr p = atom();
    while (peek('[')) {
      eat('[');
      QualPtr b = qual_or_expr();
      if (!eat(']')) fail("expected ']'");
      if (p->kind == PathExpr::Kind::Qualified)
        p = mk_path({PathExpr::Kind::Qualified, {}, "", p->left, nullptr,
                     qual_and(p->qual, b)});
      else
        p = mk_path({PathExpr::Kind::Qualified, {}, "", p, nullptr, std::move(b)});
    }
    return p;
  }

  PathPtr atom() {
    skip_ws();
    std::size_t start = pos;
    std::string name = ident();
    if (name == "T") return mk_path({PathExpr::Kind::Top});
    std::optional<Axis> ax;
    if (name == "dn") ax = eat('*') ? Axis::DownStar : Axis::Down;
    else if (name == "up") ax = eat('*') ? Axis::UpStar : Axis::Up;
    else if (name == "rt") ax = Axis::Right;
    else if (name == "lf") ax = Axis::Left;
    if (!ax) return mk_path({PathExpr::Kind::Prop, {}, std::move(name)});
    skip_ws();
    if (pos + 1 < s.size() && s[pos] == ':' && s[pos + 1] == ':') {
      pos += 2;
      std::string p = ident();
      if (p == "T" || p == "dn" || p == "rt" || p == "up" || p == "lf")
        fail("reserved word used as proposition");
      return mk_path({PathExpr::Kind::AxisProp, *ax, std::move(p)});
    }
    (void)start;
    return mk_path({PathExpr::Kind::Axis, *ax});
  }

  QualPtr qual_or_expr() {
    QualPtr q = qual_and_expr();
    while (eat('|')) q = qual_or(q, qual_and_expr());
    return q;
  }
  QualPtr qual_and_expr() {
    QualPtr q = qual_unary();
    while (eat('&')) q = qual_and(q, qual_unary());
    return q;
  }
  QualPtr qual_unary() {
    skip_ws();
    if (eat('!')) return qual_not(qual_unary());
    if (eat('(')) {
      QualPtr q = qual_or_expr();
      if (!eat(')')) fail("expected ')'");
      return q;
    }
    PathPtr p = path();
    skip_ws();
    if (pos + 1 < s.size() && s[pos] == '<' && s[pos + 1] == '=') {
      pos += 2;
      return qual_not(mk_qual({Qualifier::Kind::CountGt, std::move(p), number()}));
    }
    if (eat('>')) return mk_qual({Qualifier::Kind::CountGt, std::move(p), number()});
    return mk_qual({Qualifier::Kind::CountGt, std::move(p), 0});
  }
};

// ---- printer -------------------------------------------------------------------

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::Down: return "dn";
    case Axis::Right: return "rt";
    case Axis::Up: return "up";
    case Axis::Left: return "lf";
    case Axis::DownStar: return "dn*";
    case Axis::UpStar: return "up*";
  }
  return "?";
}

void print_path(const PathPtr& p, std::string& out);

void print_qual(const QualPtr& q, std::string& out, bool parens) {
  switch (q->kind) {
    case Qualifier::Kind::CountGt:
      print_path(q->path, out);
      out += " > " + std::to_string(q->k);
      return;
    case Qualifier::Kind::Or:
      if (parens) out += '(';
      print_qual(q->left, out, false);
      out += " | ";
      print_qual(q->right, out, true);
      if (parens) out += ')';
      return;
    case Qualifier::Kind::Not:
      out += '!';
      print_qual(q->left, out, true);
      return;
  }
}

void print_path(const PathPtr& p, std::string& out) {
  switch (p->kind) {
    case PathExpr::Kind::Top:
      out += 'T';
      return;
    case PathExpr::Kind::Axis:
      out += axis_name(p->axis);
      return;
    case PathExpr::Kind::Prop:
      out += p->prop;
      return;
    case PathExpr::Kind::AxisProp:
      out += axis_name(p->axis);
      out += "::";
      out += p->prop;
      return;
    case PathExpr::Kind::Compose:
      print_path(p->left, out);
      out += '/';
      print_path(p->right, out);
      return;
    case PathExpr::Kind::Qualified:
      print_path(p->left, out);
      out += '[';
      print_qual(p->qual, out, false);
      out += ']';
      return;
  }
}

void print_top(const QueryPtr& q, std::string& out, bool parens) {
  switch (q->kind) {
    case TopPath::Kind::Path:
      print_path(q->path, out);
      return;
    case TopPath::Kind::Rooted:
      out += '/';
      print_top(q->left, out, true);
      return;
    case TopPath::Kind::Union:
    case TopPath::Kind::Intersection:
    case TopPath::Kind::Difference: {
      if (parens) out += '(';
      print_top(q->left, out, false);
      out += q->kind == TopPath::Kind::Union        ? " | "
             : q->kind == TopPath::Kind::Intersection ? " & "
                                                      : " \\ ";
      print_top(q->right, out, true);
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

QueryPtr parse_cpath(const std::string& text) {
  Parser p{text};
  QueryPtr q = p.query();
  p.skip_ws();
  if (p.pos != p.s.size()) p.fail("unexpected trailing input");
  return q;
}

std::string to_string(const QueryPtr& q) {
  std::string out;
  print_top(q, out, false);
  return out;
}

// ---- relational semantics ------------------------------------------------------

namespace {

using Rel = QueryAnswer;

Rel axis_rel(Axis a, const KripkeTree& t) {
  Rel r;
  int n = t.size();
  switch (a) {
    case Axis::Down:
      for (int i = 0; i < n; ++i)
        for (int c : t.children[i]) r.emplace(i, c);
      break;
    case Axis::Right:
      for (int i = 0; i < n; ++i)
        if (t.next_sib[i] >= 0) r.emplace(i, t.next_sib[i]);
      break;
    case Axis::Up:
      for (int i = 0; i < n; ++i)
        if (t.parent[i] >= 0) r.emplace(i, t.parent[i]);
      break;
    case Axis::Left:
      for (int i = 0; i < n; ++i)
        if (t.left_sib[i] >= 0) r.emplace(i, t.left_sib[i]);
      break;
    case Axis::DownStar:
      for (int i = 0; i < n; ++i) {
        std::vector<int> stack(t.children[i].begin(), t.children[i].end());
        while (!stack.empty()) {
          int c = stack.back();
          stack.pop_back();
          r.emplace(i, c);
          stack.insert(stack.end(), t.children[c].begin(), t.children[c].end());
        }
      }
      break;
    case Axis::UpStar:
      for (int i = 0; i < n; ++i)
        for (int a2 = t.parent[i]; a2 >= 0; a2 = t.parent[a2]) r.emplace(i, a2);
      break;
  }
  return r;
}

Rel rel_path(const PathPtr& p, const KripkeTree& t);

std::set<int> qual_set(const QualPtr& q, const KripkeTree& t) {
  std::set<int> r;
  switch (q->kind) {
    case Qualifier::Kind::CountGt: {
      Rel rel = rel_path(q->path, t);
      std::map<int, std::uint64_t> counts;
      for (const auto& [a, b] : rel) ++counts[a];
      for (const auto& [n, c] : counts)
        if (c > q->k) r.insert(n);
      return r;
    }
    case Qualifier::Kind::Or: {
      r = qual_set(q->left, t);
      auto rr = qual_set(q->right, t);
      r.insert(rr.begin(), rr.end());
      return r;
    }
    case Qualifier::Kind::Not: {
      auto inner = qual_set(q->left, t);
      for (int i = 0; i < t.size(); ++i)
        if (!inner.count(i)) r.insert(i);
      return r;
    }
  }
  return r;
}

Rel rel_path(const PathPtr& p, const KripkeTree& t) {
  switch (p->kind) {
    case PathExpr::Kind::Top: {
      Rel r;
      for (int i = 0; i < t.size(); ++i)
        for (int j = 0; j < t.size(); ++j) r.emplace(i, j);
      return r;
    }
    case PathExpr::Kind::Axis:
      return axis_rel(p->axis, t);
    case PathExpr::Kind::Prop: {
      Rel r;
      for (int i = 0; i < t.size(); ++i)
        if (t.has_label(i, p->prop)) r.emplace(i, i);
      return r;
    }
    case PathExpr::Kind::AxisProp: {
      Rel r;
      for (const auto& [a, b] : axis_rel(p->axis, t))
        if (t.has_label(b, p->prop)) r.emplace(a, b);
      return r;
    }
    case PathExpr::Kind::Compose: {
      Rel l = rel_path(p->left, t), rr = rel_path(p->right, t), r;
      for (const auto& [a, b] : l)
        for (const auto& [c, d] : rr)
          if (b == c) r.emplace(a, d);
      return r;
    }
    case PathExpr::Kind::Qualified: {
      Rel inner = rel_path(p->left, t), r;
      std::set<int> ok = qual_set(p->qual, t);
      for (const auto& [a, b] : inner)
        if (ok.count(b)) r.emplace(a, b);
      return r;
    }
  }
  return {};
}

Rel rel_top(const QueryPtr& q, const KripkeTree& t) {
  switch (q->kind) {
    case TopPath::Kind::Path:
      return rel_path(q->path, t);
    case TopPath::Kind::Rooted: {
      Rel r;
      for (const auto& [a, b] : rel_top(q->left, t))
        if (a == t.root) r.emplace(a, b);
      return r;
    }
    case TopPath::Kind::Union: {
      Rel r = rel_top(q->left, t), rr = rel_top(q->right, t);
      r.insert(rr.begin(), rr.end());
      return r;
    }
    case TopPath::Kind::Intersection: {
      Rel l = rel_top(q->left, t), rr = rel_top(q->right, t), r;
      std::set_intersection(l.begin(), l.end(), rr.begin(), rr.end(),
                            std::inserter(r, r.end()));
      return r;
    }
    case TopPath::Kind::Difference: {
      Rel l = rel_top(q->left, t), rr = rel_top(q->right, t), r;
      std::set_difference(l.begin(), l.end(), rr.begin(), rr.end(),
                          std::inserter(r, r.end()));
      return r;
    }
  }
  return {};
}

}  // namespace

QueryAnswer eval_cpath(const QueryPtr& q, const KripkeTree& t) {
  if (t.form != KripkeTree::Form::Nary)
    throw std::invalid_argument("eval_cpath expects an n-ary tree");
  return rel_top(q, t);
}

// ---- translation ---------------------------------------------------------------

namespace {

void collect_props(const QueryPtr& q, std::set<std::string>& out);

void collect_props_path(const PathPtr& p, std::set<std::string>& out) {
  switch (p->kind) {
    case PathExpr::Kind::Prop:
    case PathExpr::Kind::AxisProp:
      out.insert(p->prop);
      return;
    case PathExpr::Kind::Compose:
      collect_props_path(p->left, out);
      collect_props_path(p->right, out);
      return;
    case PathExpr::Kind::Qualified: {
      collect_props_path(p->left, out);
      std::vector<QualPtr> stack{p->qual};
      while (!stack.empty()) {
        QualPtr q = stack.back();
        stack.pop_back();
        if (q->kind == Qualifier::Kind::CountGt) collect_props_path(q->path, out);
        if (q->left) stack.push_back(q->left);
        if (q->right) stack.push_back(q->right);
      }
      return;
    }
    default:
      return;
  }
}

void collect_props(const QueryPtr& q, std::set<std::string>& out) {
  if (q->path) collect_props_path(q->path, out);
  if (q->left) collect_props(q->left, out);
  if (q->right) collect_props(q->right, out);
}

// Allocates origin propositions and fixpoint variables that cannot collide
// with the user's names.
struct Names {
  std::set<std::string> taken;
  int origins = 0, vars = 0;
  std::vector<std::string> used_origins;

  std::string origin() {
    std::string n;
    do n = "o" + std::to_string(++origins);
    while (taken.count(n));
    taken.insert(n);
    used_origins.push_back(n);
    return n;
  }
  std::string var() { return "x" + std::to_string(++vars); }
};

Formula root_context() {
  return Formula::conj(Formula::negation(Formula::modal(Modality::Up, Formula::top())),
                       Formula::negation(Formula::modal(Modality::Left, Formula::top())));
}

// C is reachable from here by any sequence of moves: first ascend, then
// descend. Split into two fixpoints so no variable sits under converse
// modalities.
Formula anywhere(Formula c, Names& names) {
  std::string x2 = names.var();
  Formula inner = Formula::mu(
      x2, Formula::disj(Formula::disj(c, Formula::modal(Modality::Down, Formula::var(x2))),
                        Formula::modal(Modality::Right, Formula::var(x2))));
  std::string x1 = names.var();
  return Formula::mu(
      x1, Formula::disj(Formula::disj(inner, Formula::modal(Modality::Up, Formula::var(x1))),
                        Formula::modal(Modality::Left, Formula::var(x1))));
}

Formula f_path(const PathPtr& p, Formula c, Names& names);
Formula f_path_neg(const PathPtr& p, Formula c, Names& names);

Formula f_axis(Axis a, Formula c, Names& names) {
  switch (a) {
    case Axis::Down:
      return Formula::modal(Modality::Up, c);
    case Axis::Right:
      return Formula::modal(Modality::Left, c);
    case Axis::Up:
      return Formula::modal(Modality::Down, c);
    case Axis::Left:
      return Formula::modal(Modality::Right, c);
    case Axis::DownStar: {
      std::string x = names.var();
      return Formula::mu(x, Formula::modal(Modality::Up, Formula::disj(c, Formula::var(x))));
    }
    case Axis::UpStar: {
      std::string x = names.var();
      return Formula::mu(x, Formula::modal(Modality::Down, Formula::disj(c, Formula::var(x))));
    }
  }
  __builtin_unreachable();
}

// The global part of the anchor: o labels exactly one node.
Formula nominal_for(const std::string& o) {
  Formula op = Formula::prop(o);
  return Formula::conj(Formula::count_le(op, 1), Formula::count_gt(op, 0));
}

Formula anchor_for(const std::string& o) {
  return Formula::conj(nominal_for(o), Formula::prop(o));
}

Formula f_qual(const QualPtr& q, const Formula& c, Names& names);

Formula f_qual_neg(const QualPtr& q, const Formula& c, Names& names) {
  switch (q->kind) {
    case Qualifier::Kind::CountGt:
      return Formula::count_le(f_path(q->path, c, names), q->k);
    case Qualifier::Kind::Or:
      return Formula::conj(f_qual_neg(q->left, c, names), f_qual_neg(q->right, c, names));
    case Qualifier::Kind::Not:
      return f_qual(q->left, c, names);
  }
  __builtin_unreachable();
}

Formula f_qual(const QualPtr& q, const Formula& c, Names& names) {
  switch (q->kind) {
    case Qualifier::Kind::CountGt:
      return Formula::count_gt(f_path(q->path, c, names), q->k);
    case Qualifier::Kind::Or:
      return Formula::disj(f_qual(q->left, c, names), f_qual(q->right, c, names));
    case Qualifier::Kind::Not:
      return f_qual_neg(q->left, c, names);
  }
  __builtin_unreachable();
}

Formula f_path(const PathPtr& p, Formula c, Names& names) {
  switch (p->kind) {
    case PathExpr::Kind::Top:
      return anywhere(std::move(c), names);
    case PathExpr::Kind::Axis:
      return f_axis(p->axis, std::move(c), names);
    case PathExpr::Kind::Prop:
      return Formula::conj(Formula::prop(p->prop), std::move(c));
    case PathExpr::Kind::AxisProp:
      return Formula::conj(f_axis(p->axis, std::move(c), names), Formula::prop(p->prop));
    case PathExpr::Kind::Compose:
      return f_path(p->right, f_path(p->left, std::move(c), names), names);
    case PathExpr::Kind::Qualified: {
      std::string o = names.origin();
      Formula anchored = f_qual(p->qual, anchor_for(o), names);
      // The nominal must be asserted here too: under a <=k qualifier the
      // counting atom alone would be vacuously true in models where o labels
      // zero or several nodes.
      return Formula::conj(Formula::conj(f_path(p->left, std::move(c), names),
                                         Formula::conj(Formula::prop(o), nominal_for(o))),
                           anchored);
    }
  }
  __builtin_unreachable();
}

Formula f_path_neg(const PathPtr& p, Formula c, Names& names) {
  switch (p->kind) {
    case PathExpr::Kind::Compose:
      return f_path_neg(p->right, f_path(p->left, std::move(c), names), names);
    case PathExpr::Kind::Qualified: {
      std::string o = names.origin();
      Formula anchored = f_qual_neg(p->qual, anchor_for(o), names);
      return Formula::disj(f_path_neg(p->left, std::move(c), names),
                           Formula::conj(Formula::conj(Formula::prop(o), nominal_for(o)),
                                         anchored));
    }
    default:
      // Step cases carry no origin of their own, so plain negation is safe.
      return nnf(Formula::negation(f_path(p, std::move(c), names)));
  }
}

Formula f_top_neg(const QueryPtr& q, Formula c, Names& names);

Formula f_top_full(const QueryPtr& q, Formula c, Names& names) {
  if (q->kind == TopPath::Kind::Difference) {
    Formula pos = f_top_full(q->left, c, names);
    Formula neg = f_top_neg(q->right, c, names);
    return Formula::conj(std::move(pos), std::move(neg));
  }
  if (q->kind == TopPath::Kind::Union)
    return Formula::disj(f_top_full(q->left, c, names), f_top_full(q->right, c, names));
  if (q->kind == TopPath::Kind::Intersection)
    return Formula::conj(f_top_full(q->left, c, names), f_top_full(q->right, c, names));
  if (q->kind == TopPath::Kind::Rooted)
    return f_top_full(q->left, Formula::conj(std::move(c), root_context()), names);
  return f_path(q->path, std::move(c), names);
}

Formula f_top_neg(const QueryPtr& q, Formula c, Names& names) {
  switch (q->kind) {
    case TopPath::Kind::Path:
      return f_path_neg(q->path, std::move(c), names);
    case TopPath::Kind::Rooted:
      return f_top_neg(q->left, Formula::conj(std::move(c), root_context()), names);
    case TopPath::Kind::Union:
      return Formula::conj(f_top_neg(q->left, c, names), f_top_neg(q->right, c, names));
    case TopPath::Kind::Intersection:
      return Formula::disj(f_top_neg(q->left, c, names), f_top_neg(q->right, c, names));
    case TopPath::Kind::Difference:
      return Formula::disj(f_top_neg(q->left, c, names), f_top_full(q->right, c, names));
  }
  __builtin_unreachable();
}

Names make_names(std::initializer_list<QueryPtr> qs, const Formula& context) {
  Names names;
  for (const auto& q : qs) collect_props(q, names.taken);
  for (const auto& p : propositions(context)) names.taken.insert(p);
  return names;
}

}  // namespace

Formula translate_query(const QueryPtr& q, Formula context) {
  Names names = make_names({q}, context);
  return f_top_full(q, std::move(context), names);
}

Formula translate_query_negated(const QueryPtr& q, Formula context) {
  Names names = make_names({q}, context);
  return f_top_neg(q, std::move(context), names);
}

// ---- reasoning -----------------------------------------------------------------

namespace {

// Solve an n-ary-reading formula over single-tree binary encodings.
SatResult solve_nary(Formula f, const SolverOptions& opts) {
  Formula g = Formula::conj(nary_formula_to_binary(std::move(f)), single_tree_axiom());
  SolverOptions o = opts;
  o.tight_counter_caps = true;
  return satisfiable(g, o);
}

// Strip origin labels; a node left without labels gets a fresh placeholder.
KripkeTree strip_labels(KripkeTree t, const std::set<std::string>& drop) {
  std::string blank = "p'";
  while (drop.count(blank)) blank += '\'';
  for (auto& ls : t.labels) {
    std::erase_if(ls, [&](const std::string& p) { return drop.count(p) > 0; });
    if (ls.empty()) ls.push_back(blank);
  }
  return t;
}

std::optional<KripkeTree> extract(const SatResult& r, const Names& names) {
  if (!r.model) return std::nullopt;
  std::set<std::string> drop(names.used_origins.begin(), names.used_origins.end());
  return binary_to_nary(strip_labels(*r.model, drop));
}

}  // namespace

QueryDecision query_empty(const QueryPtr& q, const SolverOptions& opts) {
  Names names = make_names({q}, Formula::top());
  Formula f = f_top_full(q, Formula::top(), names);
  SatResult r = solve_nary(std::move(f), opts);
  QueryDecision d;
  d.holds = !r.sat;
  d.stats = r.stats;
  if (r.sat) {
    auto ce = extract(r, names);
    if (ce && !eval_cpath(q, *ce).empty()) d.counterexample = std::move(ce);
  }
  return d;
}

QueryDecision query_contained(const QueryPtr& q1, const QueryPtr& q2,
                              const SolverOptions& opts) {
  Names names = make_names({q1, q2}, Formula::top());
  Formula f = Formula::conj(f_top_full(q1, Formula::top(), names),
                            f_top_neg(q2, Formula::top(), names));
  SatResult r = solve_nary(std::move(f), opts);
  QueryDecision d;
  d.holds = !r.sat;
  d.stats = r.stats;
  if (r.sat) {
    auto ce = extract(r, names);
    if (ce) {
      auto a = eval_cpath(q1, *ce), b = eval_cpath(q2, *ce);
      if (!std::includes(b.begin(), b.end(), a.begin(), a.end()))
        d.counterexample = std::move(ce);
    }
  }
  return d;
}

QueryDecision query_equiv(const QueryPtr& q1, const QueryPtr& q2, const SolverOptions& opts) {
  QueryDecision d = query_contained(q1, q2, opts);
  if (!d.holds) return d;
  QueryDecision back = query_contained(q2, q1, opts);
  back.stats.iterations += d.stats.iterations;
  back.stats.nodes_generated += d.stats.nodes_generated;
  back.stats.trees_built += d.stats.trees_built;
  back.stats.guesses_tried += d.stats.guesses_tried;
  back.stats.elapsed_seconds += d.stats.elapsed_seconds;
  return back;
}

}  // namespace mutlin::cpath
