#include "mutlin/gctl.hpp"

#include <cctype>
#include <vector>

#include "mutlin/errors.hpp"

namespace mutlin::gctl {

namespace {

GctlPtr mk(GctlFormula&& f) { return std::make_shared<const GctlFormula>(std::move(f)); }

GctlPtr prop(std::string p) { return mk({GctlFormula::Kind::Prop, std::move(p)}); }
GctlPtr truth() { return mk({GctlFormula::Kind::True}); }
GctlPtr neg(GctlPtr f) { return mk({GctlFormula::Kind::Not, "", 0, std::move(f)}); }
GctlPtr disj(GctlPtr a, GctlPtr b) {
  return mk({GctlFormula::Kind::Or, "", 0, std::move(a), std::move(b)});
}
GctlPtr graded(GctlFormula::Kind kind, std::uint64_t k, GctlPtr l, GctlPtr r = nullptr) {
  return mk({kind, "", k, std::move(l), std::move(r)});
}

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

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

  std::uint64_t number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected a number");
    return std::stoull(s.substr(start, pos - start));
  }

  // {>k} for E-operators, {<=k} for A-operators.
  std::uint64_t bound(bool gt) {
    expect('{');
    skip_ws();
    if (gt) {
      expect('>');
    } else {
      if (pos + 1 >= s.size() || s[pos] != '<' || s[pos + 1] != '=') fail("expected '<='");
      pos += 2;
    }
    std::uint64_t k = number();
    expect('}');
    return k;
  }

  GctlPtr or_expr() {
    GctlPtr f = and_expr();
    while (eat('|')) f = disj(std::move(f), and_expr());
    return f;
  }

  GctlPtr and_expr() {
    GctlPtr f = unary();
    while (eat('&')) f = neg(disj(neg(std::move(f)), neg(unary())));
    return f;
  }

  GctlPtr pair(std::uint64_t k, GctlFormula::Kind kind) {
    expect('(');
    GctlPtr a = or_expr();
    expect(',');
    GctlPtr b = or_expr();
    expect(')');
    return graded(kind, k, std::move(a), std::move(b));
  }

  GctlPtr unary() {
    skip_ws();
    if (eat('~')) return neg(unary());
    if (eat('(')) {
      GctlPtr f = or_expr();
      expect(')');
      return f;
    }
    if (pos >= s.size()) fail("expected a formula");
    std::size_t save = pos;
    std::string w = ident();
    if (w == "T") return truth();
    if (w == "EX" || w == "EG") {
      std::uint64_t k = bound(true);  // read the bound before the operand
      return graded(w == "EX" ? GctlFormula::Kind::EX : GctlFormula::Kind::EG, k, unary());
    }
    if (w == "EF") {
      std::uint64_t k = bound(true);
      return graded(GctlFormula::Kind::EU, k, truth(), unary());
    }
    if (w == "EU") {
      std::uint64_t k = bound(true);
      return pair(k, GctlFormula::Kind::EU);
    }
    if (w == "AX") {
      std::uint64_t k = bound(false);
      return neg(graded(GctlFormula::Kind::EX, k, neg(unary())));
    }
    if (w == "AG") {
      std::uint64_t k = bound(false);
      return neg(graded(GctlFormula::Kind::EU, k, truth(), neg(unary())));
    }
    if (w == "AU") {
      std::uint64_t k = bound(false);
      expect('(');
      GctlPtr f = or_expr();
      expect(',');
      GctlPtr g = or_expr();
      expect(')');
      // A^{<=k} fUg = \/_{k1+k2=k} ~(E^{>k1}[~g U ~(f|g)] | E^{>k2}G ~g)
      GctlPtr out;
      for (std::uint64_t k1 = 0; k1 <= k; ++k1) {
        GctlPtr term = neg(disj(
            graded(GctlFormula::Kind::EU, k1, neg(g), neg(disj(f, g))),
            graded(GctlFormula::Kind::EG, k - k1, neg(g))));
        out = out ? disj(std::move(out), std::move(term)) : std::move(term);
      }
      return out;
    }
    pos = save;
    return prop(ident());
  }
};

}  // namespace

GctlPtr parse_gctl(const std::string& text) {
  Parser p(text);
  GctlPtr f = p.or_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("unexpected trailing input");
  return f;
}

namespace {

void print(const GctlPtr& f, bool parens_or, std::string& out) {
  switch (f->kind) {
    case GctlFormula::Kind::Prop:
      out += f->name;
      return;
    case GctlFormula::Kind::True:
      out += 'T';
      return;
    case GctlFormula::Kind::Not:
      out += '~';
      print(f->left, true, out);
      return;
    case GctlFormula::Kind::Or:
      if (parens_or) out += '(';
      print(f->left, false, out);
      out += " | ";
      print(f->right, false, out);
      if (parens_or) out += ')';
      return;
    case GctlFormula::Kind::EX:
    case GctlFormula::Kind::EG:
      out += f->kind == GctlFormula::Kind::EX ? "EX{>" : "EG{>";
      out += std::to_string(f->k);
      out += "} ";
      print(f->left, true, out);
      return;
    case GctlFormula::Kind::EU:
      out += "EU{>" + std::to_string(f->k) + "}(";
      print(f->left, false, out);
      out += ", ";
      print(f->right, false, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const GctlPtr& f) {
  std::string out;
  print(f, false, out);
  return out;
}

std::size_t gctl_size(const GctlPtr& f) {
  switch (f->kind) {
    case GctlFormula::Kind::Prop:
    case GctlFormula::Kind::True:
      return 1;
    case GctlFormula::Kind::Not:
    case GctlFormula::Kind::EX:
    case GctlFormula::Kind::EG:
      return 1 + gctl_size(f->left);
    case GctlFormula::Kind::Or:
    case GctlFormula::Kind::EU:
      return 1 + gctl_size(f->left) + gctl_size(f->right);
  }
  __builtin_unreachable();
}

// ---- direct semantics ----------------------------------------------------------

namespace {

// Count, saturating at cap, of leaf-terminated downward paths from n lying
// entirely inside `ok`.
std::uint64_t g_paths(const KripkeTree& t, int n, const std::vector<bool>& ok,
                      std::uint64_t cap) {
  if (!ok[n]) return 0;
  if (t.children[n].empty()) return 1;
  std::uint64_t total = 0;
  for (int c : t.children[n]) {
    total += g_paths(t, c, ok, cap);
    if (total >= cap) return cap;
  }
  return total;
}

// Count, saturating at cap, of downward paths from n whose last node is in
// `fin` and all earlier nodes are in `mid`. Paths are distinguished by their
// last node, so this is a sum over descendants-or-self.
std::uint64_t u_paths(const KripkeTree& t, int n, const std::vector<bool>& mid,
                      const std::vector<bool>& fin, std::uint64_t cap) {
  std::uint64_t total = fin[n] ? 1 : 0;
  if (mid[n])
    for (int c : t.children[n]) {
      total += u_paths(t, c, mid, fin, cap);
      if (total >= cap) return cap;
    }
  return total;
}

std::vector<bool> eval_rec(const GctlPtr& f, const KripkeTree& t) {
  int n = t.size();
  std::vector<bool> out(n, false);
  switch (f->kind) {
    case GctlFormula::Kind::Prop:
      for (int i = 0; i < n; ++i) out[i] = t.has_label(i, f->name);
      return out;
    case GctlFormula::Kind::True:
      out.assign(n, true);
      return out;
    case GctlFormula::Kind::Not: {
      out = eval_rec(f->left, t);
      out.flip();
      return out;
    }
    case GctlFormula::Kind::Or: {
      out = eval_rec(f->left, t);
      std::vector<bool> r = eval_rec(f->right, t);
      for (int i = 0; i < n; ++i) out[i] = out[i] || r[i];
      return out;
    }
    case GctlFormula::Kind::EX: {
      std::vector<bool> s = eval_rec(f->left, t);
      for (int i = 0; i < n; ++i) {
        std::uint64_t c = 0;
        for (int ch : t.children[i]) c += s[ch] ? 1 : 0;
        out[i] = c > f->k;
      }
      return out;
    }
    case GctlFormula::Kind::EG: {
      std::vector<bool> s = eval_rec(f->left, t);
      for (int i = 0; i < n; ++i) out[i] = g_paths(t, i, s, f->k + 1) > f->k;
      return out;
    }
    case GctlFormula::Kind::EU: {
      std::vector<bool> mid = eval_rec(f->left, t);
      std::vector<bool> fin = eval_rec(f->right, t);
      for (int i = 0; i < n; ++i) out[i] = u_paths(t, i, mid, fin, f->k + 1) > f->k;
      return out;
    }
  }
  __builtin_unreachable();
}

}  // namespace

std::set<int> eval_gctl(const GctlPtr& f, const KripkeTree& t) {
  if (t.form != KripkeTree::Form::Nary) throw eval_error("eval_gctl needs an n-ary tree");
  std::vector<bool> v = eval_rec(f, t);
  std::set<int> out;
  for (int i = 0; i < t.size(); ++i)
    if (v[i]) out.insert(i);
  return out;
}

// ---- embedding -----------------------------------------------------------------

namespace {

void collect_props(const GctlPtr& f, std::set<std::string>& props) {
  switch (f->kind) {
    case GctlFormula::Kind::Prop:
      props.insert(f->name);
      return;
    case GctlFormula::Kind::True:
      return;
    case GctlFormula::Kind::Not:
    case GctlFormula::Kind::EX:
    case GctlFormula::Kind::EG:
      collect_props(f->left, props);
      return;
    case GctlFormula::Kind::Or:
    case GctlFormula::Kind::EU:
      collect_props(f->left, props);
      collect_props(f->right, props);
      return;
  }
}

struct Origins {
  std::set<std::string> taken;
  int next = 0;
  int vars = 0;

  std::string origin() {
    std::string n;
    do n = "o" + std::to_string(++next);
    while (taken.count(n));
    taken.insert(n);
    return n;
  }
  std::string var() { return "g" + std::to_string(++vars); }
};

Formula nominal_for(const std::string& o) {
  Formula op = Formula::prop(o);
  return Formula::conj(Formula::count_le(op, 1), Formula::count_gt(op, 0));
}

Formula f_gctl(const GctlPtr& f, Origins& names) {
  switch (f->kind) {
    case GctlFormula::Kind::Prop:
      return Formula::prop(f->name);
    case GctlFormula::Kind::True:
      return Formula::top();
    case GctlFormula::Kind::Not:
      return Formula::negation(f_gctl(f->left, names));
    case GctlFormula::Kind::Or:
      return Formula::disj(f_gctl(f->left, names), f_gctl(f->right, names));
    case GctlFormula::Kind::EX: {
      // o & nominal & #(F(φ) & <up>[o & o=1]) > k. The nominal is asserted
      // at the top as well: under negation the atom flips to <= k, which a
      // doubly-labeled origin would satisfy vacuously.
      std::string o = names.origin();
      Formula anchor = Formula::conj(nominal_for(o), Formula::prop(o));
      Formula body =
          Formula::conj(f_gctl(f->left, names), Formula::modal(Modality::Up, anchor));
      return Formula::conj(
          Formula::conj(Formula::prop(o), nominal_for(o)),
          Formula::count_gt(std::move(body), f->k));
    }
    case GctlFormula::Kind::EG: {
      // counted: leaves below o whose whole path up to o satisfies φ
      std::string o = names.origin();
      Formula anchor = Formula::conj(nominal_for(o), Formula::prop(o));
      std::string x = names.var();
      Formula walk = Formula::mu(
          x, Formula::conj(f_gctl(f->left, names),
                           Formula::disj(Formula::modal(Modality::Up, Formula::var(x)),
                                         anchor)));
      Formula body = Formula::conj(
          Formula::negation(Formula::modal(Modality::Down, Formula::top())),
          std::move(walk));
      return Formula::conj(
          Formula::conj(Formula::prop(o), nominal_for(o)),
          Formula::count_gt(std::move(body), f->k));
    }
    case GctlFormula::Kind::EU: {
      // counted: nodes satisfying ψ that are o itself, or whose strict
      // ancestors up to and including o satisfy φ
      std::string o = names.origin();
      Formula anchor = Formula::conj(nominal_for(o), Formula::prop(o));
      std::string x = names.var();
      Formula climb = Formula::mu(
          x, Formula::conj(f_gctl(f->left, names),
                           Formula::disj(Formula::modal(Modality::Up, Formula::var(x)),
                                         anchor)));
      Formula body = Formula::conj(
          f_gctl(f->right, names),
          Formula::disj(Formula::prop(o), Formula::modal(Modality::Up, std::move(climb))));
      return Formula::conj(
          Formula::conj(Formula::prop(o), nominal_for(o)),
          Formula::count_gt(std::move(body), f->k));
    }
  }
  __builtin_unreachable();
}

}  // namespace

Formula translate_gctl(const GctlPtr& f) {
  Origins names;
  collect_props(f, names.taken);
  return f_gctl(f, names);
}

}  // namespace mutlin::gctl
