#include "mutlin/eval.hpp"

#include "mutlin/errors.hpp"

namespace mutlin {

namespace {

// Nodes having an m-successor inside `s`.
NodeSet modal_pre(const KripkeTree& t, Modality m, const NodeSet& s) {
  int n = t.size();
  NodeSet r(n);
  switch (m) {
    case Modality::Down:
      if (t.form == KripkeTree::Form::Nary) {
        for (int v = 0; v < n; ++v)
          for (int c : t.children[v])
            if (s.test(c)) {
              r.set(v);
              break;
            }
      } else {
        for (int v = 0; v < n; ++v)
          if (t.first_child[v] >= 0 && s.test(t.first_child[v])) r.set(v);
      }
      break;
    case Modality::Right: {
      const std::vector<int>& next =
          t.form == KripkeTree::Form::Nary ? t.next_sib : t.right_sib;
      for (int v = 0; v < n; ++v)
        if (next[v] >= 0 && s.test(next[v])) r.set(v);
      break;
    }
    case Modality::Up:
      for (int v = 0; v < n; ++v)
        if (t.parent[v] >= 0 && s.test(t.parent[v])) r.set(v);
      break;
    case Modality::Left:
      for (int v = 0; v < n; ++v)
        if (t.left_sib[v] >= 0 && s.test(t.left_sib[v])) r.set(v);
      break;
  }
  return r;
}

NodeSet eval_rec(Formula f, const KripkeTree& t, Valuation& val) {
  int n = t.size();
  switch (f.kind()) {
    case Kind::True: {
      NodeSet r(n);
      for (int v = 0; v < n; ++v) r.set(v);
      return r;
    }
    case Kind::Prop: {
      NodeSet r(n);
      for (int v = 0; v < n; ++v)
        if (t.has_label(v, f.name())) r.set(v);
      return r;
    }
    case Kind::Var: {
      auto it = val.find(f.name());
      if (it == val.end()) throw eval_error("free variable $" + f.name() + " in eval");
      return it->second;
    }
    case Kind::Not:
      return ~eval_rec(f.child(0), t, val);
    case Kind::Or:
      return eval_rec(f.child(0), t, val) | eval_rec(f.child(1), t, val);
    case Kind::And:
      return eval_rec(f.child(0), t, val) & eval_rec(f.child(1), t, val);
    case Kind::Modal:
      return modal_pre(t, f.modality(), eval_rec(f.child(0), t, val));
    case Kind::Mu: {
      NodeSet cur(n);
      for (int i = 0; i <= n + 1; ++i) {
        auto saved = val.find(f.name()) != val.end() ? std::optional<NodeSet>(val[f.name()])
                                                     : std::nullopt;
        val[f.name()] = cur;
        NodeSet next = eval_rec(f.child(0), t, val);
        if (saved)
          val[f.name()] = *saved;
        else
          val.erase(f.name());
        if (next == cur) break;
        cur = next;
      }
      return cur;
    }
    case Kind::MuVec: {
      auto vars = f.vec_vars();
      std::size_t m = vars.size();
      std::vector<NodeSet> cur(m, NodeSet(n));
      for (int i = 0; i <= static_cast<int>(m) * (n + 1) + 1; ++i) {
        std::vector<std::optional<NodeSet>> saved(m);
        for (std::size_t j = 0; j < m; ++j) {
          if (val.count(vars[j])) saved[j] = val[vars[j]];
          val[vars[j]] = cur[j];
        }
        std::vector<NodeSet> next(m, NodeSet(n));
        for (std::size_t j = 0; j < m; ++j) next[j] = eval_rec(f.child(j), t, val);
        for (std::size_t j = 0; j < m; ++j) {
          if (saved[j])
            val[vars[j]] = *saved[j];
          else
            val.erase(vars[j]);
        }
        if (next == cur) break;
        cur = next;
      }
      // Evaluate the main formula under the fixpoint.
      std::vector<std::optional<NodeSet>> saved(m);
      for (std::size_t j = 0; j < m; ++j) {
        if (val.count(vars[j])) saved[j] = val[vars[j]];
        val[vars[j]] = cur[j];
      }
      NodeSet r = eval_rec(f.child(f.arity() - 1), t, val);
      for (std::size_t j = 0; j < m; ++j) {
        if (saved[j])
          val[vars[j]] = *saved[j];
        else
          val.erase(vars[j]);
      }
      return r;
    }
    case Kind::CountGt:
    case Kind::CountLe: {
      std::size_t c = eval_rec(f.child(0), t, val).count();
      bool holds = f.kind() == Kind::CountGt ? c > f.bound() : c <= f.bound();
      NodeSet r(n);
      if (holds)
        for (int v = 0; v < n; ++v) r.set(v);
      return r;
    }
  }
  __builtin_unreachable();
}

}  // namespace

NodeSet eval(Formula f, const KripkeTree& t, const Valuation& val) {
  Valuation v = val;
  return eval_rec(f, t, v);
}

bool sat_on_tree(Formula f, const KripkeTree& t) { return !eval(f, t).none(); }

std::optional<KripkeTree> brute_force_sat(Formula f, int max_nodes) {
  std::vector<std::string> props = propositions(f);
  props.push_back(fresh_prop(f));
  std::optional<KripkeTree> found;
  enumerate_trees(props, max_nodes, [&](const KripkeTree& t) {
    if (sat_on_tree(f, t)) {
      found = t;
      return false;
    }
    return true;
  });
  return found;
}

Formula nary_formula_to_binary(Formula f) {
  switch (f.kind()) {
    case Kind::Prop:
    case Kind::Var:
    case Kind::True:
      return f;
    case Kind::Not:
      return Formula::negation(nary_formula_to_binary(f.child(0)));
    case Kind::Or:
      return Formula::disj(nary_formula_to_binary(f.child(0)),
                           nary_formula_to_binary(f.child(1)));
    case Kind::And:
      return Formula::conj(nary_formula_to_binary(f.child(0)),
                           nary_formula_to_binary(f.child(1)));
    case Kind::Modal: {
      Formula body = nary_formula_to_binary(f.child(0));
      std::set<std::string> fv = free_vars(body);
      std::string x = "b";
      while (fv.count(x)) x += "_";
      switch (f.modality()) {
        case Modality::Down:
          // any child = first child, then zero or more right siblings
          return Formula::modal(
              Modality::Down,
              Formula::mu(x, Formula::disj(body, Formula::modal(Modality::Right,
                                                                Formula::var(x)))));
        case Modality::Up:
          // parent = walk left to the first sibling, then up
          return Formula::mu(
              x, Formula::disj(Formula::modal(Modality::Up, body),
                               Formula::modal(Modality::Left, Formula::var(x))));
        case Modality::Right:
        case Modality::Left:
          // adjacent siblings are the same relation in both forms
          return Formula::modal(f.modality(), body);
      }
      __builtin_unreachable();
    }
    case Kind::Mu:
      return Formula::mu(f.name(), nary_formula_to_binary(f.child(0)));
    case Kind::MuVec: {
      std::vector<Formula> kids;
      for (std::size_t i = 0; i + 1 < f.arity(); ++i)
        kids.push_back(nary_formula_to_binary(f.child(i)));
      return Formula::mu_vec({f.vec_vars().begin(), f.vec_vars().end()}, std::move(kids),
                             nary_formula_to_binary(f.child(f.arity() - 1)));
    }
    case Kind::CountGt:
      return Formula::count_gt(nary_formula_to_binary(f.child(0)), f.bound());
    case Kind::CountLe:
      return Formula::count_le(nary_formula_to_binary(f.child(0)), f.bound());
  }
  __builtin_unreachable();
}

}  // namespace mutlin

namespace mutlin {

Formula single_tree_axiom() {
  Formula root_with_sib =
      Formula::conj(Formula::conj(Formula::negation(Formula::modal(Modality::Up, Formula::top())),
                                  Formula::negation(Formula::modal(Modality::Left, Formula::top()))),
                    Formula::modal(Modality::Right, Formula::top()));
  return Formula::count_le(root_with_sib, 0);
}

}  // namespace mutlin
