#include "mutlin/closure.hpp"

#include <algorithm>
#include <unordered_set>

#include "mutlin/errors.hpp"

namespace mutlin {

Formula nav_formula(Formula body) {
  auto fv = free_vars(body);
  std::string x1 = "nav", x2 = "nav_in";
  while (fv.count(x1)) x1 += "_";
  while (fv.count(x2) || x2 == x1) x2 += "_";
  Formula inner = Formula::mu(
      x2, Formula::disj(Formula::disj(body, Formula::modal(Modality::Down, Formula::var(x2))),
                        Formula::modal(Modality::Right, Formula::var(x2))));
  return Formula::mu(
      x1, Formula::disj(Formula::disj(inner, Formula::modal(Modality::Up, Formula::var(x1))),
                        Formula::modal(Modality::Left, Formula::var(x1))));
}

namespace {

struct ClosureState {
  std::vector<Formula> members;
  std::unordered_set<std::uint64_t> seen;
  std::vector<CountingAtom> atoms;         // body/gt/k/nav filled
  std::unordered_set<std::string> atom_keys;
  std::unordered_set<std::uint64_t> unfolded;  // fixpoints already unfolded once

  static std::string atom_key(Formula body, bool gt, std::uint64_t k) {
    return std::to_string(body.id()) + (gt ? ">" : "<") + std::to_string(k);
  }

  bool add(Formula f) {
    if (!f) return false;
    if (!seen.insert(f.id()).second) return false;
    members.push_back(f);
    return true;
  }

  // Expand everything currently reachable; newly found counting atoms are
  // recorded but their navigation formulas are not injected here.
  void saturate() {
    for (std::size_t i = 0; i < members.size(); ++i) {
      Formula g = members[i];
      add(nnf(g));
      switch (g.kind()) {
        case Kind::Or:
        case Kind::And:
          add(g.child(0));
          add(g.child(1));
          break;
        case Kind::Modal:
          add(g.child(0));
          break;
        case Kind::Mu:
        case Kind::MuVec:
          if (unfolded.insert(g.id()).second) add(unfold(g));
          break;
        case Kind::CountGt:
        case Kind::CountLe: {
          add(g.child(0));
          Formula canon = nnf(g.child(0));
          add(canon);
          bool gt = g.kind() == Kind::CountGt;
          if (atom_keys.insert(atom_key(canon, gt, g.bound())).second) {
            CountingAtom a;
            a.body = canon;
            a.gt = gt;
            a.k = g.bound();
            a.nav = nav_formula(canon);
            atoms.push_back(a);
          }
          break;
        }
        default:
          break;
      }
    }
  }
};

}  // namespace

namespace {
ClosureState compute_closure(Formula f, std::unordered_set<std::uint64_t>* user_reachable) {
  ClosureState st;
  st.add(f);
  st.saturate();
  if (user_reachable) *user_reachable = st.seen;
  // Navigation formulas join the closure and are expanded in turn. Counting
  // atoms inside navigation bodies were already discovered above, so this
  // loop converges after injecting each atom's navigation formula once.
  std::size_t injected = 0;
  while (injected < st.atoms.size()) {
    st.add(st.atoms[injected].nav);
    ++injected;
    st.saturate();
  }
  return st;
}
}  // namespace

std::vector<Formula> fl_closure(Formula f) { return compute_closure(f, nullptr).members; }

std::optional<int> Lean::prop_index(const std::string& name) const {
  auto it = prop_idx_.find(name);
  if (it == prop_idx_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Lean::modal_index(Modality m, Formula body) const {
  const auto& idx = modal_idx_[static_cast<int>(m)];
  auto it = idx.find(body.id());
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Lean::atom_index(Formula body, bool gt, std::uint64_t k) const {
  Formula canon = nnf(body);
  auto it = atom_idx_.find(ClosureState::atom_key(canon, gt, k));
  if (it == atom_idx_.end()) return std::nullopt;
  return it->second;
}

std::string to_string(const LeanEntry& e) {
  switch (e.type) {
    case LeanEntry::Type::Prop:
      return e.prop;
    case LeanEntry::Type::Modal:
      return "<" + std::string(modality_name(e.m)) + ">" + to_string(e.body);
    case LeanEntry::Type::CountAtom:
      return "#(" + to_string(e.body) + (e.gt ? ") > " : ") <= ") + std::to_string(e.k);
    case LeanEntry::Type::CounterBit:
      return "c" + std::to_string(e.atom) + "[" + std::to_string(e.bit) + "]";
    case LeanEntry::Type::Flag:
      return "flag" + std::to_string(e.atom);
  }
  __builtin_unreachable();
}

Lean make_lean(Formula f, bool tight_caps) {
  std::unordered_set<std::uint64_t> user;
  ClosureState st = compute_closure(f, &user);

  Lean lean;
  lean.maxk = max_k(nnf(f));
  lean.counter_bits = 0;
  lean.fresh = fresh_prop(f);

  auto push = [&](LeanEntry e) {
    lean.entries.push_back(std::move(e));
    return static_cast<int>(lean.entries.size()) - 1;
  };

  for (const auto& p : propositions(f)) {
    LeanEntry e{LeanEntry::Type::Prop};
    e.prop = p;
    lean.prop_idx_[p] = push(std::move(e));
  }

  for (const auto& g : st.members) {
    if (g.kind() != Kind::Modal) continue;
    int mi = static_cast<int>(g.modality());
    if (lean.modal_idx_[mi].count(g.child(0).id())) continue;
    LeanEntry e{LeanEntry::Type::Modal};
    e.m = g.modality();
    e.body = g.child(0);
    e.nav = !user.count(g.id());
    int idx = push(std::move(e));
    lean.modal_idx_[mi][g.child(0).id()] = idx;
    if (g.child(0).kind() == Kind::True) lean.modal_top[mi] = idx;
  }

  lean.atoms = st.atoms;
  for (std::size_t a = 0; a < lean.atoms.size(); ++a) {
    auto& atom = lean.atoms[a];
    LeanEntry e{LeanEntry::Type::CountAtom};
    e.body = atom.body;
    e.gt = atom.gt;
    e.k = atom.k;
    e.atom = static_cast<int>(a);
    atom.entry = push(std::move(e));
    lean.atom_idx_[ClosureState::atom_key(atom.body, atom.gt, atom.k)] = atom.entry;
  }
  for (std::size_t a = 0; a < lean.atoms.size(); ++a) {
    auto& atom = lean.atoms[a];
    atom.cap = tight_caps ? atom.k + 1 : lean.maxk;
    int nbits = static_cast<int>(bits_for(atom.cap));
    lean.counter_bits = std::max(lean.counter_bits, nbits);
    for (int b = 0; b < nbits; ++b) {
      LeanEntry e{LeanEntry::Type::CounterBit};
      e.body = atom.body;
      e.gt = atom.gt;
      e.k = atom.k;
      e.atom = static_cast<int>(a);
      e.bit = b;
      atom.bits.push_back(push(std::move(e)));
    }
  }
  for (std::size_t a = 0; a < lean.atoms.size(); ++a) {
    auto& atom = lean.atoms[a];
    if (!atom.gt) continue;
    LeanEntry e{LeanEntry::Type::Flag};
    e.body = atom.body;
    e.gt = true;
    e.k = atom.k;
    e.atom = static_cast<int>(a);
    atom.flag = push(std::move(e));
  }

  for (int m = 0; m < 4; ++m) {
    if (lean.modal_top[m] >= 0) continue;
    LeanEntry e{LeanEntry::Type::Modal};
    e.m = static_cast<Modality>(m);
    e.body = Formula::top();
    int idx = push(std::move(e));
    lean.modal_idx_[m][Formula::top().id()] = idx;
    lean.modal_top[m] = idx;
  }

  LeanEntry e{LeanEntry::Type::Prop};
  e.prop = lean.fresh;
  lean.prop_idx_[lean.fresh] = push(std::move(e));

  return lean;
}

}  // namespace mutlin
