#include "mutlin/tree.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "mutlin/errors.hpp"

namespace mutlin {

bool KripkeTree::has_label(int node, const std::string& p) const {
  const auto& l = labels[node];
  return std::binary_search(l.begin(), l.end(), p);
}

namespace {
void normalize_labels(std::vector<std::vector<std::string>>& labels) {
  for (auto& l : labels) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
}
}  // namespace

KripkeTree make_nary(int root, std::vector<std::vector<int>> children,
                     std::vector<std::vector<std::string>> labels) {
  KripkeTree t;
  t.form = KripkeTree::Form::Nary;
  t.root = root;
  t.labels = std::move(labels);
  normalize_labels(t.labels);
  t.children = std::move(children);
  int n = t.size();
  t.parent.assign(n, -1);
  t.left_sib.assign(n, -1);
  t.next_sib.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    const auto& cs = t.children[v];
    for (std::size_t i = 0; i < cs.size(); ++i) {
      t.parent[cs[i]] = v;
      if (i > 0) {
        t.left_sib[cs[i]] = cs[i - 1];
        t.next_sib[cs[i - 1]] = cs[i];
      }
    }
  }
  return t;
}

KripkeTree make_binary(int root, std::vector<int> first_child, std::vector<int> right_sib,
                       std::vector<std::vector<std::string>> labels) {
  KripkeTree t;
  t.form = KripkeTree::Form::Binary;
  t.root = root;
  t.labels = std::move(labels);
  normalize_labels(t.labels);
  t.first_child = std::move(first_child);
  t.right_sib = std::move(right_sib);
  int n = t.size();
  t.parent.assign(n, -1);
  t.left_sib.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (t.first_child[v] >= 0) t.parent[t.first_child[v]] = v;
    if (t.right_sib[v] >= 0) t.left_sib[t.right_sib[v]] = v;
  }
  return t;
}

std::vector<std::string> validate(const KripkeTree& t) {
  std::vector<std::string> problems;
  int n = t.size();
  if (n == 0) return {"tree has no nodes"};
  if (t.root < 0 || t.root >= n) return {"root out of range"};
  for (int v = 0; v < n; ++v)
    if (t.labels[v].empty()) problems.push_back("node " + std::to_string(v) + " has no label");

  std::vector<int> indeg(n, 0);
  auto edge = [&](int from, int to, const char* what) {
    if (to < 0) return;
    if (to >= n) {
      problems.push_back(std::string(what) + " target out of range");
      return;
    }
    ++indeg[to];
  };
  if (t.form == KripkeTree::Form::Nary) {
    if (static_cast<int>(t.children.size()) != n) return {"children array size mismatch"};
    for (int v = 0; v < n; ++v)
      for (int c : t.children[v]) edge(v, c, "child");
  } else {
    if (static_cast<int>(t.first_child.size()) != n || static_cast<int>(t.right_sib.size()) != n)
      return {"link array size mismatch"};
    for (int v = 0; v < n; ++v) {
      edge(v, t.first_child[v], "first-child");
      edge(v, t.right_sib[v], "right-sibling");
    }
  }
  if (indeg[t.root] != 0) problems.push_back("root has an incoming edge");
  for (int v = 0; v < n; ++v)
    if (v != t.root && indeg[v] != 1)
      problems.push_back("node " + std::to_string(v) + " has in-degree " + std::to_string(indeg[v]));

  // Reachability (also detects cycles given the in-degree checks).
  std::vector<bool> seen(n, false);
  std::vector<int> stack{t.root};
  seen[t.root] = true;
  int reached = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++reached;
    auto visit = [&](int c) {
      if (c >= 0 && c < n && !seen[c]) {
        seen[c] = true;
        stack.push_back(c);
      }
    };
    if (t.form == KripkeTree::Form::Nary)
      for (int c : t.children[v]) visit(c);
    else {
      visit(t.first_child[v]);
      visit(t.right_sib[v]);
    }
  }
  if (reached != n) problems.push_back("not all nodes reachable from root");
  return problems;
}

KripkeTree nary_to_binary(const KripkeTree& t) {
  if (t.form != KripkeTree::Form::Nary) throw eval_error("nary_to_binary expects an n-ary tree");
  int n = t.size();
  std::vector<int> fc(n, -1), rs(n, -1);
  for (int v = 0; v < n; ++v) {
    const auto& cs = t.children[v];
    if (!cs.empty()) fc[v] = cs[0];
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) rs[cs[i]] = cs[i + 1];
  }
  return make_binary(t.root, std::move(fc), std::move(rs), t.labels);
}

KripkeTree binary_to_nary(const KripkeTree& t) {
  if (t.form != KripkeTree::Form::Binary) throw eval_error("binary_to_nary expects a binary tree");
  if (t.right_sib[t.root] >= 0)
    throw eval_error("binary root has a right sibling; this encodes a forest, not a tree");
  int n = t.size();
  std::vector<std::vector<int>> children(n);
  for (int v = 0; v < n; ++v) {
    for (int c = t.first_child[v]; c >= 0; c = t.right_sib[c]) children[v].push_back(c);
  }
  return make_nary(t.root, std::move(children), t.labels);
}

// ---- JSON -----------------------------------------------------------------

std::string tree_to_json(const KripkeTree& t) {
  nlohmann::ordered_json j;
  j["form"] = t.form == KripkeTree::Form::Nary ? "nary" : "binary";
  nlohmann::ordered_json nodes(nlohmann::json::value_t::object);
  for (int v = 0; v < t.size(); ++v) nodes[std::to_string(v)] = t.labels[v];
  j["nodes"] = std::move(nodes);
  nlohmann::ordered_json child = nlohmann::json::array(), sib = nlohmann::json::array();
  if (t.form == KripkeTree::Form::Nary) {
    for (int v = 0; v < t.size(); ++v) {
      for (int c : t.children[v]) child.push_back({v, c});
      for (int c : t.children[v])
        if (t.next_sib[c] >= 0) sib.push_back({c, t.next_sib[c]});
    }
  } else {
    for (int v = 0; v < t.size(); ++v) {
      if (t.first_child[v] >= 0) child.push_back({v, t.first_child[v]});
      if (t.right_sib[v] >= 0) sib.push_back({v, t.right_sib[v]});
    }
  }
  j["edges"]["child"] = std::move(child);
  j["edges"]["sibling"] = std::move(sib);
  j["root"] = t.root;
  return j.dump(2) + "\n";
}

KripkeTree tree_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("bad tree JSON: ") + e.what(), 0);
  }
  auto need = [&](const char* key) {
    if (!j.contains(key)) throw parse_error(std::string("tree JSON missing '") + key + "'", 0);
  };
  need("form");
  need("nodes");
  need("edges");
  std::string form = j["form"];
  int n = static_cast<int>(j["nodes"].size());
  std::vector<std::vector<std::string>> labels(n);
  for (auto& [key, val] : j["nodes"].items()) {
    int id = std::stoi(key);
    if (id < 0 || id >= n) throw parse_error("node ids must be 0..n-1", 0);
    labels[id] = val.get<std::vector<std::string>>();
  }
  int root = j.value("root", 0);
  auto pairs = [&](const char* key) {
    std::vector<std::pair<int, int>> out;
    if (j["edges"].contains(key))
      for (auto& e : j["edges"][key]) out.emplace_back(e[0].get<int>(), e[1].get<int>());
    return out;
  };
  auto check_id = [&](int v) {
    if (v < 0 || v >= n) throw parse_error("edge endpoint out of range", 0);
  };
  if (form == "nary") {
    std::vector<std::vector<int>> children(n);
    for (auto [p, c] : pairs("child")) {
      check_id(p);
      check_id(c);
      children[p].push_back(c);
    }
    // Sibling edges define the order within each child list.
    auto sibs = pairs("sibling");
    std::vector<int> next(n, -1), prev(n, -1);
    for (auto [l, r] : sibs) {
      check_id(l);
      check_id(r);
      next[l] = r;
      prev[r] = l;
    }
    for (auto& cs : children) {
      if (cs.size() < 2) continue;
      std::set<int> members(cs.begin(), cs.end());
      int head = -1;
      for (int c : cs)
        if (prev[c] < 0 || !members.count(prev[c])) head = c;
      std::vector<int> ordered;
      for (int c = head; c >= 0 && members.count(c) && ordered.size() < cs.size();
           c = next[c])
        ordered.push_back(c);
      if (ordered.size() != cs.size())
        throw parse_error("sibling edges do not order the child list", 0);
      cs = ordered;
    }
    return make_nary(root, std::move(children), std::move(labels));
  }
  if (form == "binary") {
    std::vector<int> fc(n, -1), rs(n, -1);
    for (auto [p, c] : pairs("child")) {
      check_id(p);
      check_id(c);
      fc[p] = c;
    }
    for (auto [l, r] : pairs("sibling")) {
      check_id(l);
      check_id(r);
      rs[l] = r;
    }
    return make_binary(root, std::move(fc), std::move(rs), std::move(labels));
  }
  throw parse_error("form must be 'nary' or 'binary'", 0);
}

// ---- enumeration ------------------------------------------------------------

namespace {
// All binary tree shapes on nodes {base..base+n-1} in preorder: node `base`
// is the (sub)root, then its first-child subtree, then its right-sibling
// subtree. Returns (first_child, right_sib) pairs relative to absolute ids.
struct Shape {
  std::vector<int> fc, rs;
};

std::vector<Shape> shapes(int n) {
  static std::vector<std::vector<Shape>> memo;  // memo[n] for base 0
  if (static_cast<int>(memo.size()) > n && n >= 0 && !memo[n].empty()) return memo[n];
  if (n == 0) return {Shape{{}, {}}};
  std::vector<Shape> out;
  for (int l = 0; l <= n - 1; ++l) {
    int r = n - 1 - l;
    for (const auto& ls : shapes(l)) {
      for (const auto& rsh : shapes(r)) {
        Shape s;
        s.fc.assign(n, -1);
        s.rs.assign(n, -1);
        if (l > 0) s.fc[0] = 1;
        if (r > 0) s.rs[0] = 1 + l;
        for (int i = 0; i < l; ++i) {
          s.fc[1 + i] = ls.fc[i] < 0 ? -1 : 1 + ls.fc[i];
          s.rs[1 + i] = ls.rs[i] < 0 ? -1 : 1 + ls.rs[i];
        }
        for (int i = 0; i < r; ++i) {
          s.fc[1 + l + i] = rsh.fc[i] < 0 ? -1 : 1 + l + rsh.fc[i];
          s.rs[1 + l + i] = rsh.rs[i] < 0 ? -1 : 1 + l + rsh.rs[i];
        }
        out.push_back(std::move(s));
      }
    }
  }
  if (static_cast<int>(memo.size()) <= n) memo.resize(n + 1);
  memo[n] = out;
  return out;
}
}  // namespace

void enumerate_trees(const std::vector<std::string>& props, int max_nodes,
                     const std::function<bool(const KripkeTree&)>& visit) {
  std::vector<std::string> sorted = props;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::size_t nlabels = (std::size_t{1} << sorted.size()) - 1;  // non-empty subsets
  if (sorted.empty()) return;
  for (int n = 1; n <= max_nodes; ++n) {
    for (const auto& sh : shapes(n)) {
      // Odometer over label assignments; combo[v] in [1, 2^|props|).
      std::vector<std::size_t> combo(n, 1);
      while (true) {
        std::vector<std::vector<std::string>> labels(n);
        for (int v = 0; v < n; ++v)
          for (std::size_t b = 0; b < sorted.size(); ++b)
            if (combo[v] & (std::size_t{1} << b)) labels[v].push_back(sorted[b]);
        if (!visit(make_binary(0, sh.fc, sh.rs, std::move(labels)))) return;
        int pos = n - 1;
        while (pos >= 0 && combo[pos] == nlabels) combo[pos--] = 1;
        if (pos < 0) break;
        ++combo[pos];
      }
    }
  }
}

}  // namespace mutlin
