#include "mutlin/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "mutlin/errors.hpp"

namespace mutlin {

// ---- Tableau basics --------------------------------------------------------

Tableau::Tableau(Formula input, SolverOptions opts)
    : input_(nnf(input)), opts_(opts),
      lean_(make_lean(input_, opts.tight_counter_caps)) {
  build_masks();
}

void Tableau::build_masks() {
  std::size_t n = lean_.size();
  prop_mask_ = up_mask_ = down_mask_ = counter_mask_ = flag_mask_ = atom_mask_ =
      up_mask_full_ = down_mask_full_ = DynBitset(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = lean_.entries[i];
    switch (e.type) {
      case LeanEntry::Type::Prop:
        prop_mask_.set(i);
        break;
      case LeanEntry::Type::Modal: {
        bool down = e.m == Modality::Down || e.m == Modality::Right;
        (down ? down_mask_full_ : up_mask_full_).set(i);
        if (!e.nav) (down ? down_mask_ : up_mask_).set(i);
        break;
      }
      case LeanEntry::Type::CountAtom:
        atom_mask_.set(i);
        break;
      case LeanEntry::Type::CounterBit:
        counter_mask_.set(i);
        break;
      case LeanEntry::Type::Flag:
        flag_mask_.set(i);
        break;
    }
  }
}

Tableau::TreePtr Tableau::tree(int node, TreePtr left, TreePtr right) const {
  auto t = std::make_shared<FLTree>();
  t->node = node;
  t->left = std::move(left);
  t->right = std::move(right);
  t->size = 1 + (t->left ? t->left->size : 0) + (t->right ? t->right->size : 0);
  return t;
}

int Tableau::intern(const DynBitset& bits) const {
  auto it = node_ids_.find(bits);
  if (it != node_ids_.end()) return it->second;
  if (nodes_.size() >= opts_.max_nodes)
    throw budget_error("tableau node budget exceeded (" + std::to_string(opts_.max_nodes) + ")");
  NodeData d;
  d.bits = bits;
  d.counters.assign(lean_.atoms.size(), 0);
  for (std::size_t a = 0; a < lean_.atoms.size(); ++a)
    for (std::size_t b = 0; b < lean_.atoms[a].bits.size(); ++b)
      if (bits.test(lean_.atoms[a].bits[b])) d.counters[a] |= std::uint64_t{1} << b;
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(d));
  node_ids_.emplace(bits, id);
  return id;
}

const DynBitset& Tableau::bits(int node) const { return nodes_[node].bits; }
std::uint64_t Tableau::counter(int node, int atom) const { return nodes_[node].counters[atom]; }

std::optional<int> Tableau::make_node(const DynBitset& bits) {
  if (bits.size() != lean_.size()) return std::nullopt;
  if (!bits.intersects(prop_mask_)) return std::nullopt;
  // <m>f requires <m>T; never both <up>T and <lf>T.
  for (std::size_t i = 0; i < lean_.size(); ++i) {
    const auto& e = lean_.entries[i];
    if (e.type == LeanEntry::Type::Modal && bits.test(i) &&
        !bits.test(lean_.modal_top[static_cast<int>(e.m)]))
      return std::nullopt;
  }
  if (bits.test(lean_.modal_top[static_cast<int>(Modality::Up)]) &&
      bits.test(lean_.modal_top[static_cast<int>(Modality::Left)]))
    return std::nullopt;
  for (const auto& atom : lean_.atoms) {
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < atom.bits.size(); ++b)
      if (bits.test(atom.bits[b])) v |= std::uint64_t{1} << b;
    if (v > atom.cap) return std::nullopt;
    if (!atom.gt && bits.test(atom.entry) && v > atom.k) return std::nullopt;
    if (atom.gt && bits.test(atom.flag) != (v > atom.k)) return std::nullopt;
  }
  return intern(bits);
}

// ---- entailment -------------------------------------------------------------

namespace {
bool entails_bits(const DynBitset& bits, const Lean& lean, Formula f,
                  std::unordered_map<std::uint64_t, char>& memo) {
  switch (f.kind()) {
    case Kind::True:
      return true;
    case Kind::Prop: {
      auto i = lean.prop_index(f.name());
      if (!i) throw closure_error("proposition " + f.name() + " not in lean");
      return bits.test(*i);
    }
    case Kind::Var:
      throw closure_error("open formula in entailment");
    case Kind::Not: {
      Formula g = f.child(0);
      if (g.kind() == Kind::True) return false;
      if (g.kind() == Kind::Prop || (g.kind() == Kind::Modal && g.child(0).kind() == Kind::True))
        return !entails_bits(bits, lean, g, memo);
      return entails_bits(bits, lean, nnf(f), memo);
    }
    default:
      break;
  }
  auto key = f.id();
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  bool r = false;
  switch (f.kind()) {
    case Kind::Or:
      r = entails_bits(bits, lean, f.child(0), memo) || entails_bits(bits, lean, f.child(1), memo);
      break;
    case Kind::And:
      r = entails_bits(bits, lean, f.child(0), memo) && entails_bits(bits, lean, f.child(1), memo);
      break;
    case Kind::Modal: {
      auto i = lean.modal_index(f.modality(), f.child(0));
      if (!i) throw closure_error("modal subformula not in lean: " + to_string(f));
      r = bits.test(*i);
      break;
    }
    case Kind::Mu:
    case Kind::MuVec:
      r = entails_bits(bits, lean, unfold(f), memo);
      break;
    case Kind::CountGt:
    case Kind::CountLe: {
      auto i = lean.atom_index(f.child(0), f.kind() == Kind::CountGt, f.bound());
      if (!i) throw closure_error("counting atom not in lean: " + to_string(f));
      r = bits.test(*i);
      break;
    }
    default:
      break;
  }
  memo.emplace(key, r);
  return r;
}
}  // namespace

bool Tableau::entails_rec(int node, Formula f) const {
  std::unordered_map<std::uint64_t, char> local;
  return entails_bits(nodes_[node].bits, lean_, f, local);
}

bool Tableau::entails(int node, Formula f) const {
  std::uint64_t key = (static_cast<std::uint64_t>(node) << 40) ^ f.id();
  auto it = entail_memo_.find(key);
  if (it != entail_memo_.end()) return it->second;
  bool r = entails_rec(node, f);
  entail_memo_.emplace(key, r);
  return r;
}

// ---- local consistency -------------------------------------------------------

bool Tableau::modal_consistent(int parent, int child, Modality m) const {
  if (m != Modality::Down && m != Modality::Right)
    throw std::invalid_argument("modal_consistent expects Down or Right");
  Modality back = converse(m);
  for (std::size_t i = 0; i < lean_.size(); ++i) {
    const auto& e = lean_.entries[i];
    if (e.type != LeanEntry::Type::Modal || e.nav) continue;
    if (e.m == m) {
      if (nodes_[parent].bits.test(i) != entails(child, e.body)) return false;
    } else if (e.m == back) {
      if (nodes_[child].bits.test(i) != entails(parent, e.body)) return false;
    }
  }
  return true;
}

namespace {
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r) || r > cap) return cap;
  return r;
}
}  // namespace

bool Tableau::counter_consistent(int parent, int left, int right) const {
  for (std::size_t a = 0; a < lean_.atoms.size(); ++a) {
    const auto& atom = lean_.atoms[a];
    std::uint64_t sum = left >= 0 ? nodes_[left].counters[a] : 0;
    sum = sat_add(sum, right >= 0 ? nodes_[right].counters[a] : 0, atom.cap);
    sum = sat_add(sum, entails(parent, atom.body) ? 1 : 0, atom.cap);
    if (nodes_[parent].counters[a] != sum) return false;
    if (atom.gt) {
      bool child_flag = (left >= 0 && nodes_[left].bits.test(atom.flag)) ||
                        (right >= 0 && nodes_[right].bits.test(atom.flag));
      if (child_flag && !nodes_[parent].bits.test(atom.flag)) return false;
    }
  }
  return true;
}

std::vector<Tableau::TreePtr> Tableau::leaves(const std::vector<int>& nodes) const {
  std::vector<TreePtr> out;
  for (int n : nodes) {
    if (nodes_[n].bits.intersects(down_mask_full_)) continue;
    bool ok = true;
    for (std::size_t a = 0; a < lean_.atoms.size() && ok; ++a)
      ok = nodes_[n].counters[a] == (entails(n, lean_.atoms[a].body) ? 1u : 0u);
    if (ok) out.push_back(tree(n));
  }
  return out;
}

void Tableau::collect_nodes(const TreePtr& t, std::vector<int>& out) {
  if (!t) return;
  out.push_back(t->node);
  collect_nodes(t->left, out);
  collect_nodes(t->right, out);
}

bool Tableau::tree_entails(const TreePtr& t, Formula f) const {
  std::vector<int> ns;
  collect_nodes(t, ns);
  bool some = false;
  for (int n : ns)
    if (entails(n, f)) {
      some = true;
      break;
    }
  if (!some) return false;
  int root = t->node;
  if (nodes_[root].bits.intersects(up_mask_full_)) return false;
  // Verify the guessed counting atoms against the root's totals.
  for (std::size_t a = 0; a < lean_.atoms.size(); ++a) {
    const auto& atom = lean_.atoms[a];
    bool present = nodes_[root].bits.test(atom.entry);
    std::uint64_t v = nodes_[root].counters[a];
    if (atom.gt) {
      if (present != (v > atom.k)) return false;
    } else {
      if (present != (v <= atom.k)) return false;
    }
  }
  return true;
}

// ---- spec-level update --------------------------------------------------------

namespace {
DynBitset modality_mask(const Lean& lean, Modality m) {
  DynBitset r(lean.size());
  for (std::size_t i = 0; i < lean.size(); ++i)
    if (lean.entries[i].type == LeanEntry::Type::Modal && lean.entries[i].m == m) r.set(i);
  return r;
}
}  // namespace

std::pair<std::vector<Tableau::TreePtr>, std::set<int>> Tableau::update(
    const std::vector<TreePtr>& x, const std::set<int>& y) const {
  DynBitset down_m = modality_mask(lean_, Modality::Down);
  DynBitset right_m = modality_mask(lean_, Modality::Right);
  DynBitset up_m = modality_mask(lean_, Modality::Up);
  DynBitset left_m = modality_mask(lean_, Modality::Left);

  auto sat_somewhere = [&](const TreePtr& t) {
    std::vector<int> ns;
    collect_nodes(t, ns);
    for (int n : ns)
      if (entails(n, input_)) return true;
    return false;
  };

  std::set<std::pair<int, bool>> have;
  std::vector<TreePtr> out = x;
  for (const auto& t : x) have.emplace(t->node, sat_somewhere(t));

  std::set<int> used;
  std::vector<const TreePtr*> pool;
  for (const auto& t : x) pool.push_back(&t);

  auto attach = [&](const TreePtr* l, const TreePtr* r) {
    for (int n : y) {
      if (l) {
        if (nodes_[l->get()->node].bits.intersects(left_m)) return;  // can't be a first child
        if (!modal_consistent(n, (*l)->node, Modality::Down)) continue;
      } else if (nodes_[n].bits.intersects(down_m)) {
        continue;
      }
      if (r) {
        if (nodes_[r->get()->node].bits.intersects(up_m)) return;  // can't be a sibling
        if (!modal_consistent(n, (*r)->node, Modality::Right)) continue;
      } else if (nodes_[n].bits.intersects(right_m)) {
        continue;
      }
      if (!counter_consistent(n, l ? (*l)->node : -1, r ? (*r)->node : -1)) continue;
      TreePtr t = tree(n, l ? *l : nullptr, r ? *r : nullptr);
      auto key = std::make_pair(n, sat_somewhere(t));
      if (have.insert(key).second) {
        out.push_back(t);
        used.insert(n);
      }
    }
  };

  for (const auto* a : pool) {
    attach(a, nullptr);
    attach(nullptr, a);
    for (const auto* b : pool) attach(a, b);
  }

  std::set<int> y2 = y;
  for (int n : used) y2.erase(n);
  return {out, y2};
}

// ---- search -------------------------------------------------------------------

namespace {

struct Profile {
  DynBitset pat[4];  // per modality: entry bits implied by / required of a neighbor
  std::vector<std::uint8_t> atom_e;
  bool sat = false;
};

struct SigKey {
  DynBitset merged;
  std::vector<std::uint64_t> sums;
  bool has_l = false, has_r = false;
  bool operator==(const SigKey&) const = default;
};
struct SigHash {
  std::size_t operator()(const SigKey& k) const {
    std::size_t h = k.merged.hash() ^ (k.has_l ? 0x9e37 : 0) ^ (k.has_r ? 0x79b9 : 0);
    for (auto s : k.sums) h = h * 0x100000001b3ull + s;
    return h;
  }
};

}  // namespace

struct TableauSearch {
  Tableau& tb;
  const Lean& lean;
  const SolverOptions& opts;
  SolverStats stats;

  // modal entries (excluding navigation-only ones) per modality
  std::vector<std::pair<int, Formula>> entries[4];
  DynBitset emask[4];       // positions of those entries
  std::vector<DynBitset> combos;  // free assignments: props and up/left entries
  DynBitset guess_bits;     // current counting-atom assignment, over lean positions
  DynBitset root_bad;       // any up/left modal entry, navigation included

  std::unordered_map<DynBitset, Profile, DynBitsetHash> prof_cache;

  struct Class {
    int root;
    bool flag;
    Tableau::TreePtr t;
  };
  std::vector<Class> classes;
  std::unordered_map<std::uint64_t, int> class_ids;  // root*2+flag -> index
  std::vector<int> frontier;
  std::vector<int> left_ok;   // classes whose root can attach as a first child
  std::vector<int> right_ok;  // classes whose root can attach as a sibling

  // Everything candidates() needs from a child node is interned once per node
  // into a half-signature: the entry bits it forces on a parent plus its
  // counters. Pairings then probe an integer-keyed cache instead of rehashing
  // bitsets. Half ids are guess-independent; the pair cache is not.
  struct Half {
    DynBitset contrib;
    std::vector<std::uint64_t> sums;
  };
  std::vector<Half> halves_;
  std::unordered_map<SigKey, int, SigHash> half_ids_;
  std::vector<int> lhalf_of_, rhalf_of_;  // node id -> half id, -1 unknown
  std::unordered_map<std::uint64_t, std::vector<int>> sig_cache;  // (lid, rid)

  explicit TableauSearch(Tableau& t) : tb(t), lean(t.lean_), opts(t.opts_) {
    for (std::size_t i = 0; i < lean.size(); ++i) {
      const auto& e = lean.entries[i];
      if (e.type != LeanEntry::Type::Modal || e.nav) continue;
      entries[static_cast<int>(e.m)].emplace_back(static_cast<int>(i), e.body);
    }
    for (int m = 0; m < 4; ++m) {
      emask[m] = DynBitset(lean.size());
      for (auto& [i, b] : entries[m]) emask[m].set(i);
    }
    root_bad = modality_mask(lean, Modality::Up) | modality_mask(lean, Modality::Left);
    build_combos();
  }

  void build_combos() {
    std::vector<int> props, ups;
    for (std::size_t i = 0; i < lean.size(); ++i)
      if (lean.entries[i].type == LeanEntry::Type::Prop) props.push_back(static_cast<int>(i));
    int up_top = lean.modal_top[static_cast<int>(Modality::Up)];
    int lf_top = lean.modal_top[static_cast<int>(Modality::Left)];
    for (auto& [i, b] : entries[static_cast<int>(Modality::Up)]) ups.push_back(i);
    for (auto& [i, b] : entries[static_cast<int>(Modality::Left)]) ups.push_back(i);
    if (props.size() > 16 || ups.size() > 22 || props.size() + ups.size() > 24)
      throw budget_error("lean too wide for explicit node enumeration");

    std::vector<DynBitset> upsets;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << ups.size()); ++m) {
      DynBitset u(lean.size());
      for (std::size_t j = 0; j < ups.size(); ++j)
        if (m & (std::uint64_t{1} << j)) u.set(ups[j]);
      bool any_up = false, any_lf = false;
      for (auto& [i, b] : entries[static_cast<int>(Modality::Up)])
        if (u.test(i)) any_up = true;
      for (auto& [i, b] : entries[static_cast<int>(Modality::Left)])
        if (u.test(i)) any_lf = true;
      if (any_up && !u.test(up_top)) continue;
      if (any_lf && !u.test(lf_top)) continue;
      if (u.test(up_top) && u.test(lf_top)) continue;
      upsets.push_back(std::move(u));
    }
    // The fresh filler proposition is unconstrained by the input, so fixing a
    // canonical assignment (present exactly when no real proposition is) keeps
    // satisfiability intact and halves the node space.
    int fresh = *lean.prop_index(lean.fresh);
    std::vector<int> real;
    for (int p : props)
      if (p != fresh) real.push_back(p);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << real.size()); ++m) {
      DynBitset p(lean.size());
      for (std::size_t j = 0; j < real.size(); ++j)
        if (m & (std::uint64_t{1} << j)) p.set(real[j]);
      if (m == 0) p.set(fresh);
      for (const auto& u : upsets) combos.push_back(p | u);
    }
  }

  const Profile& profile_of(const DynBitset& core) {
    auto it = prof_cache.find(core);
    if (it != prof_cache.end()) return it->second;
    Profile p;
    std::unordered_map<std::uint64_t, char> memo;
    for (int m = 0; m < 4; ++m) {
      p.pat[m] = DynBitset(lean.size());
      for (auto& [i, body] : entries[m])
        if (entails_bits(core, lean, body, memo)) p.pat[m].set(i);
    }
    p.atom_e.resize(lean.atoms.size());
    for (std::size_t a = 0; a < lean.atoms.size(); ++a)
      p.atom_e[a] = entails_bits(core, lean, lean.atoms[a].body, memo) ? 1 : 0;
    p.sat = entails_bits(core, lean, tb.input_, memo);
    return prof_cache.emplace(core, std::move(p)).first->second;
  }

  DynBitset core_of(int node) const {
    return tb.nodes_[node].bits - (tb.counter_mask_ | tb.flag_mask_);
  }

  int intern_half(SigKey&& k) {
    auto it = half_ids_.find(k);
    if (it != half_ids_.end()) return it->second;
    int id = static_cast<int>(halves_.size());
    halves_.push_back({k.merged, k.sums});
    half_ids_.emplace(std::move(k), id);
    return id;
  }

  int half_of(int node, bool as_left) {
    auto& cache = as_left ? lhalf_of_ : rhalf_of_;
    if (static_cast<std::size_t>(node) >= cache.size()) cache.resize(node + 1, -1);
    if (cache[node] >= 0) return cache[node];
    Modality down = as_left ? Modality::Down : Modality::Right;
    Modality up = as_left ? Modality::Up : Modality::Left;
    SigKey k;
    k.merged = profile_of(core_of(node)).pat[static_cast<int>(down)] |
               (tb.nodes_[node].bits & emask[static_cast<int>(up)]);
    k.sums = tb.nodes_[node].counters;
    k.has_l = as_left;
    return cache[node] = intern_half(std::move(k));
  }

  // All parent nodes consistent with the given children (-1 = absent).
  const std::vector<int>& candidates(int c1, int c2) {
    int lid = c1 >= 0 ? half_of(c1, true) : -1;
    int rid = c2 >= 0 ? half_of(c2, false) : -1;
    std::uint64_t pkey = (static_cast<std::uint64_t>(lid + 1) << 32) |
                         static_cast<std::uint64_t>(static_cast<std::uint32_t>(rid + 1));
    auto it = sig_cache.find(pkey);
    if (it != sig_cache.end()) return it->second;

    DynBitset merged(lean.size());
    std::vector<std::uint64_t> sums(lean.atoms.size(), 0);
    if (lid >= 0) {
      merged |= halves_[lid].contrib;
      sums = halves_[lid].sums;
    }
    if (rid >= 0) {
      merged |= halves_[rid].contrib;
      for (std::size_t a = 0; a < lean.atoms.size(); ++a)
        sums[a] = sat_add(sums[a], halves_[rid].sums[a], lean.atoms[a].cap);
    }
    bool has_l = c1 >= 0, has_r = c2 >= 0;

    DynBitset downs = merged & (emask[static_cast<int>(Modality::Down)] |
                                emask[static_cast<int>(Modality::Right)]);
    DynBitset requp = merged & emask[static_cast<int>(Modality::Up)];
    DynBitset reqleft = merged & emask[static_cast<int>(Modality::Left)];

    std::vector<int> out;
    for (const auto& combo : combos) {
      DynBitset core = downs | combo | guess_bits;
      const Profile& p = profile_of(core);
      if (has_l && !(p.pat[static_cast<int>(Modality::Up)] == requp)) continue;
      if (has_r && !(p.pat[static_cast<int>(Modality::Left)] == reqleft)) continue;
      bool ok = true;
      DynBitset bits = core;
      for (std::size_t a = 0; a < lean.atoms.size() && ok; ++a) {
        const auto& atom = lean.atoms[a];
        std::uint64_t v = sat_add(sums[a], p.atom_e[a], atom.cap);
        // Counters only grow toward the root, so a count already past k is
        // fatal whenever the guess says the final count stays at or below k.
        if (!atom.gt && guess_bits.test(atom.entry) && v > atom.k) ok = false;
        if (atom.gt && !guess_bits.test(atom.entry) && v > atom.k) ok = false;
        for (std::size_t b = 0; b < atom.bits.size(); ++b)
          if (v & (std::uint64_t{1} << b)) bits.set(atom.bits[b]);
        if (atom.gt && v > atom.k) bits.set(atom.flag);
      }
      if (!ok) continue;
      out.push_back(tb.intern(bits));
    }
    return sig_cache.emplace(pkey, std::move(out)).first->second;
  }

  // li/ri index `classes` (-1 = absent child); the tree is only materialized
  // when the class is new or shrinks, which avoids allocations for the vast
  // majority of pairings that rediscover an existing class.
  bool add_class(int root, bool flag, int li, int ri) {
    std::uint64_t key = static_cast<std::uint64_t>(root) * 2 + (flag ? 1 : 0);
    std::uint64_t size = 1 + (li >= 0 ? classes[li].t->size : 0) +
                         (ri >= 0 ? classes[ri].t->size : 0);
    auto it = class_ids.find(key);
    if (it != class_ids.end() && classes[it->second].t->size <= size) return false;
    Tableau::TreePtr t = tb.tree(root, li >= 0 ? classes[li].t : nullptr,
                                 ri >= 0 ? classes[ri].t : nullptr);
    if (it != class_ids.end()) {
      classes[it->second].t = std::move(t);
      return false;
    }
    class_ids.emplace(key, static_cast<int>(classes.size()));
    classes.push_back({root, flag, std::move(t)});
    if (left_attachable(root)) left_ok.push_back(static_cast<int>(classes.size()) - 1);
    if (right_attachable(root)) right_ok.push_back(static_cast<int>(classes.size()) - 1);
    return true;
  }

  // Acceptance over current classes; returns the largest accepted tree, i.e.
  // the most recently completed stage of the bottom-up construction.
  Tableau::TreePtr accepted() {
    Tableau::TreePtr best;
    for (const auto& c : classes) {
      if (!c.flag) continue;
      const auto& bits = tb.nodes_[c.root].bits;
      if (bits.intersects(root_bad)) continue;
      bool ok = true;
      for (std::size_t a = 0; a < lean.atoms.size() && ok; ++a) {
        const auto& atom = lean.atoms[a];
        bool present = guess_bits.test(atom.entry);
        std::uint64_t v = tb.nodes_[c.root].counters[a];
        ok = atom.gt ? present == (v > atom.k) : present == (v <= atom.k);
      }
      if (!ok) continue;
      if (!best || c.t->size > best->size) best = c.t;
    }
    return best;
  }

  bool left_attachable(int node) const {
    const auto& b = tb.nodes_[node].bits;
    return b.test(lean.modal_top[static_cast<int>(Modality::Up)]) &&
           !b.intersects(emask[static_cast<int>(Modality::Left)]);
  }
  bool right_attachable(int node) const {
    const auto& b = tb.nodes_[node].bits;
    return b.test(lean.modal_top[static_cast<int>(Modality::Left)]) &&
           !b.intersects(emask[static_cast<int>(Modality::Up)]);
  }

  std::vector<signed char> node_sat_;  // per node id: -1 unknown, else 0/1

  bool node_sat(int node) {
    if (static_cast<std::size_t>(node) >= node_sat_.size())
      node_sat_.resize(node + 1, -1);
    if (node_sat_[node] < 0)
      node_sat_[node] = profile_of(core_of(node)).sat ? 1 : 0;
    return node_sat_[node] != 0;
  }

  void try_parents(int li, int ri) {
    int lroot = li >= 0 ? classes[li].root : -1;
    int rroot = ri >= 0 ? classes[ri].root : -1;
    if (li >= 0 && !left_attachable(lroot)) return;
    if (ri >= 0 && !right_attachable(rroot)) return;
    bool cflag = (li >= 0 && classes[li].flag) || (ri >= 0 && classes[ri].flag);
    for (int p : candidates(lroot, rroot)) {
      bool flag = cflag || node_sat(p);
      add_class(p, flag, li, ri);
    }
  }

  // Runs the loop for the current guess_bits. Returns the witness, if any.
  Tableau::TreePtr run_guess() {
    classes.clear();
    class_ids.clear();
    frontier.clear();
    left_ok.clear();
    right_ok.clear();
    sig_cache.clear();
    ++stats.guesses_tried;

    for (int leaf : candidates(-1, -1)) {
      bool flag = node_sat(leaf);
      if (add_class(leaf, flag, -1, -1))
        frontier.push_back(static_cast<int>(classes.size()) - 1);
    }
    stats.trees_built += frontier.size();

    std::uint64_t round = 0;
    while (true) {
      if (++round > opts.max_iterations)
        throw budget_error("iteration budget exceeded");
      stats.iterations = round;
      if (std::getenv("MUTLIN_TRACE"))
        std::fprintf(stderr, "[trace] round=%llu classes=%zu frontier=%zu nodes=%zu\n",
                     (unsigned long long)round, classes.size(), frontier.size(),
                     tb.nodes_.size());
      if (auto w = accepted()) return w;
      if (frontier.empty()) return nullptr;

      std::size_t lsnap = left_ok.size(), rsnap = right_ok.size();
      std::size_t next_start = classes.size();
      for (int a : frontier) {
        try_parents(a, -1);
        try_parents(-1, a);
        if (left_attachable(classes[a].root))
          for (std::size_t b = 0; b < rsnap; ++b) try_parents(a, right_ok[b]);
        if (right_attachable(classes[a].root))
          for (std::size_t b = 0; b < lsnap; ++b) try_parents(left_ok[b], a);
      }
      frontier.clear();
      for (std::size_t i = next_start; i < classes.size(); ++i)
        frontier.push_back(static_cast<int>(i));
      stats.trees_built += frontier.size();
    }
  }
};

// ---- guess enumeration and driver ---------------------------------------------

namespace {

// Could f be entailed somewhere under this assignment of counting atoms?
// Boolean abstraction only: modalities and fixpoints are assumed possible.
bool possibly_sat(Formula f, const Lean& lean, const DynBitset& guess) {
  switch (f.kind()) {
    case Kind::CountGt:
    case Kind::CountLe: {
      auto i = lean.atom_index(f.child(0), f.kind() == Kind::CountGt, f.bound());
      return i ? guess.test(*i) : true;
    }
    case Kind::And:
      return possibly_sat(f.child(0), lean, guess) && possibly_sat(f.child(1), lean, guess);
    case Kind::Or:
      return possibly_sat(f.child(0), lean, guess) || possibly_sat(f.child(1), lean, guess);
    case Kind::Mu:
      return possibly_sat(f.child(0), lean, guess);
    case Kind::MuVec:
      return possibly_sat(f.child(f.arity() - 1), lean, guess);
    default:
      return true;
  }
}

// Guessed constraints on the final count per distinct body must admit a value.
bool guess_feasible(const Lean& lean, const DynBitset& guess) {
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> range;  // body -> [lo, hi]
  for (const auto& atom : lean.atoms) {
    auto& [lo, hi] = range.try_emplace(atom.body.id(), 0, lean.maxk).first->second;
    bool present = guess.test(atom.entry);
    if (atom.gt == present) {
      // count must exceed k
      if (atom.k + 1 > lo) lo = atom.k + 1;
    } else {
      if (atom.k < hi) hi = atom.k;
    }
    if (lo > hi) return false;
  }
  return true;
}

KripkeTree witness_to_kripke(const Tableau& tb, const Tableau::TreePtr& w, bool verbose) {
  const Lean& lean = tb.lean();
  std::vector<int> order;
  Tableau::collect_nodes(w, order);
  std::vector<int> id_of_pos;  // preorder position -> new id (identity here)
  std::vector<int> fc, rs;
  std::vector<std::vector<std::string>> labels;
  int n = static_cast<int>(order.size());
  fc.assign(n, -1);
  rs.assign(n, -1);
  labels.resize(n);
  // Re-walk to wire links with preorder ids.
  int next = 0;
  std::function<int(const Tableau::TreePtr&)> walk = [&](const Tableau::TreePtr& t) -> int {
    int me = next++;
    const auto& bits = tb.bits(t->node);
    for (std::size_t i = 0; i < lean.size(); ++i) {
      if (!bits.test(i)) continue;
      const auto& e = lean.entries[i];
      if (e.type == LeanEntry::Type::Prop) {
        if (!verbose && e.prop == lean.fresh) continue;
        labels[me].push_back(e.prop);
      } else if (verbose) {
        labels[me].push_back(to_string(e));
      }
    }
    if (labels[me].empty()) labels[me].push_back(lean.fresh);
    if (t->left) fc[me] = walk(t->left);
    if (t->right) rs[me] = walk(t->right);
    return me;
  };
  walk(w);
  (void)id_of_pos;
  return make_binary(0, std::move(fc), std::move(rs), std::move(labels));
}

}  // namespace

SatResult satisfiable(Formula f, SolverOptions opts) {
  auto violations = check_wellformed(f);
  if (!violations.empty())
    throw std::invalid_argument("ill-formed formula: " + violations.front().message + " at " +
                                violations.front().path);
  auto start = std::chrono::steady_clock::now();

  Tableau tb(f, opts);
  TableauSearch search(tb);
  const Lean& lean = tb.lean();

  std::size_t natoms = lean.atoms.size();
  if (natoms > 20) throw budget_error("too many counting atoms");

  // All-true first, then by number of falsified atoms.
  std::vector<std::uint64_t> masks;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << natoms); ++m) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [&](std::uint64_t a, std::uint64_t b) {
    int za = static_cast<int>(natoms) - __builtin_popcountll(a);
    int zb = static_cast<int>(natoms) - __builtin_popcountll(b);
    return za != zb ? za < zb : a > b;
  });

  SatResult res;
  for (std::uint64_t mask : masks) {
    DynBitset guess(lean.size());
    for (std::size_t a = 0; a < natoms; ++a)
      if (mask & (std::uint64_t{1} << a)) guess.set(lean.atoms[a].entry);
    if (!guess_feasible(lean, guess)) continue;
    if (!possibly_sat(tb.input(), lean, guess)) continue;
    search.guess_bits = guess;
    auto w = search.run_guess();
    if (w) {
      res.sat = true;
      res.witness = w;
      res.model = witness_to_kripke(tb, w, opts.keep_internal_labels);
      break;
    }
  }
  res.stats = search.stats;
  res.stats.nodes_generated = tb.node_count();
  res.stats.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace mutlin
