#include "gpl/operad.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "gpl/error.hpp"

namespace gpl {

namespace {

using ChildLists = std::vector<std::vector<int>>;  // by label-1

std::vector<std::pair<int, int>> corners(const ChildLists& ch, int root) {
  std::vector<std::pair<int, int>> out;
  std::function<void(int)> visit = [&](int v) {
    const auto& kids = ch[static_cast<std::size_t>(v - 1)];
    for (std::size_t g = 0; g <= kids.size(); ++g) {
      out.emplace_back(v, static_cast<int>(g));
      if (g < kids.size()) visit(kids[g]);
    }
  };
  visit(root);
  return out;
}

/// Every way to graft `items` (in order) onto the corners of the host tree rooted at `root`.
std::vector<ChildLists> insert_ordered(const ChildLists& ch, int root, const std::vector<int>& items) {
  const auto cs = corners(ch, root);
  std::vector<ChildLists> out;
  std::vector<std::size_t> choice(items.size(), 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t lo) {
    if (k == items.size()) {
      ChildLists res = ch;
      // Items grouped by corner, kept in order.
      std::map<std::pair<int, int>, std::vector<int>> at;
      for (std::size_t j = 0; j < items.size(); ++j) at[cs[choice[j]]].push_back(items[j]);
      for (std::size_t v = 0; v < ch.size(); ++v) {
        const int label = static_cast<int>(v) + 1;
        bool touched = false;
        for (std::size_t g = 0; g <= ch[v].size(); ++g)
          if (at.count({label, static_cast<int>(g)})) touched = true;
        if (!touched) continue;
        std::vector<int> merged;
        for (std::size_t g = 0; g <= ch[v].size(); ++g) {
          const auto it = at.find({label, static_cast<int>(g)});
          if (it != at.end()) merged.insert(merged.end(), it->second.begin(), it->second.end());
          if (g < ch[v].size()) merged.push_back(ch[v][g]);
        }
        res[v] = std::move(merged);
      }
      out.push_back(std::move(res));
      return;
    }
    for (std::size_t c = lo; c < cs.size(); ++c) {
      choice[k] = c;
      rec(k + 1, c);
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace

LabeledTree unit_tree() { return LabeledTree{{0}}; }

LabeledTree chain2(int root) {
  if (root == 1) return LabeledTree{{0, 1}};
  return LabeledTree{{2, 0}};
}

std::vector<LabeledTree> partial_compose(const LabeledTree& s, int i, const LabeledTree& t) {
  const int p = s.size(), q = t.size();
  if (i < 1 || i > p) raise(Errc::BadIndex, "composition index " + std::to_string(i));
  const int n = p + q - 1;
  auto map_s = [&](int j) { return j < i ? j : j + q - 1; };
  auto map_t = [&](int k) { return k + i - 1; };
  std::vector<int> base(static_cast<std::size_t>(n), 0);
  std::vector<int> reattach;  // new labels of the children of i
  for (int j = 1; j <= p; ++j) {
    if (j == i) continue;
    const int par = s.parent[static_cast<std::size_t>(j - 1)];
    if (par == i) reattach.push_back(map_s(j));
    else base[static_cast<std::size_t>(map_s(j) - 1)] = par == 0 ? 0 : map_s(par);
  }
  const int above = s.parent[static_cast<std::size_t>(i - 1)];
  for (int k = 1; k <= q; ++k) {
    const int par = t.parent[static_cast<std::size_t>(k - 1)];
    base[static_cast<std::size_t>(map_t(k) - 1)] = par == 0 ? (above == 0 ? 0 : map_s(above)) : map_t(par);
  }
  std::vector<LabeledTree> out;
  std::vector<int> choice(reattach.size(), 1);
  std::function<void(std::size_t)> rec = [&](std::size_t c) {
    if (c == reattach.size()) {
      LabeledTree r{base};
      for (std::size_t j = 0; j < reattach.size(); ++j)
        r.parent[static_cast<std::size_t>(reattach[j] - 1)] = map_t(choice[j]);
      out.push_back(std::move(r));
      return;
    }
    for (int k = 1; k <= q; ++k) {
      choice[c] = k;
      rec(c + 1);
    }
  };
  rec(0);
  return out;
}

PreLieElement partial_compose(const PreLieElement& s, int i, const PreLieElement& t) {
  if (!(s.ring() == t.ring())) raise(Errc::RingMismatch, "operad elements over different rings");
  if (i < 1 || i > s.arity()) raise(Errc::BadIndex, "composition index " + std::to_string(i));
  PreLieElement out(s.ring(), s.arity() + t.arity() - 1);
  for (const auto& [a, ca] : s.terms())
    for (const auto& [b, cb] : t.terms())
      for (auto& tree : partial_compose(a, i, b)) out.add(std::move(tree), ca * cb);
  return out;
}

LabeledTree sigma_action(const Permutation& sigma, const LabeledTree& t) {
  if (sigma.size() != t.size()) raise(Errc::SizeMismatch, "permutation size differs from arity");
  LabeledTree r{std::vector<int>(t.parent.size(), 0)};
  for (int j = 1; j <= t.size(); ++j) {
    const int par = t.parent[static_cast<std::size_t>(j - 1)];
    r.parent[static_cast<std::size_t>(sigma(j) - 1)] = par == 0 ? 0 : sigma(par);
  }
  return r;
}

PreLieElement sigma_action(const Permutation& sigma, const PreLieElement& x) {
  if (sigma.size() != x.arity()) raise(Errc::SizeMismatch, "permutation size differs from arity");
  PreLieElement out(x.ring(), x.arity());
  for (const auto& [t, c] : x.terms()) out.add(sigma_action(sigma, t), c);
  return out;
}

BraceElement symmetrize(const LabeledTree& t, const Ring& ring) {
  const auto ch = t.children();
  BraceElement out(ring, t.size());
  PlanarTree current{t.root(), ch};
  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    if (v == ch.size()) {
      out.add(current, Scalar::one(ring));
      return;
    }
    auto& kids = current.children[v];
    std::sort(kids.begin(), kids.end());
    do {
      rec(v + 1);
    } while (std::next_permutation(kids.begin(), kids.end()));
  };
  rec(0);
  return out;
}

BraceElement symmetrize(const PreLieElement& x) {
  BraceElement out(x.ring(), x.arity());
  for (const auto& [t, c] : x.terms()) out += symmetrize(t, x.ring()).scaled(c);
  return out;
}

std::vector<PlanarTree> partial_compose(const PlanarTree& s, int i, const PlanarTree& t) {
  const int p = s.size(), q = t.size();
  if (i < 1 || i > p) raise(Errc::BadIndex, "composition index " + std::to_string(i));
  const int n = p + q - 1;
  auto map_s = [&](int j) { return j < i ? j : j + q - 1; };
  auto map_t = [&](int k) { return k + i - 1; };
  ChildLists ch(static_cast<std::size_t>(n));
  for (int j = 1; j <= p; ++j) {
    if (j == i) continue;
    for (int c : s.children[static_cast<std::size_t>(j - 1)])
      ch[static_cast<std::size_t>(map_s(j) - 1)].push_back(c == i ? map_t(t.root) : map_s(c));
  }
  for (int k = 1; k <= q; ++k)
    for (int c : t.children[static_cast<std::size_t>(k - 1)]) ch[static_cast<std::size_t>(map_t(k) - 1)].push_back(map_t(c));
  std::vector<int> items;
  for (int c : s.children[static_cast<std::size_t>(i - 1)]) items.push_back(map_s(c));
  const int root = s.root == i ? map_t(t.root) : map_s(s.root);
  std::vector<PlanarTree> out;
  for (auto& lists : insert_ordered(ch, map_t(t.root), items)) out.push_back(PlanarTree{root, std::move(lists)});
  return out;
}

BraceElement partial_compose(const BraceElement& s, int i, const BraceElement& t) {
  if (i < 1 || i > s.arity()) raise(Errc::BadIndex, "composition index " + std::to_string(i));
  BraceElement out(s.ring(), s.arity() + t.arity() - 1);
  for (const auto& [a, ca] : s.terms())
    for (const auto& [b, cb] : t.terms())
      for (auto& tree : partial_compose(a, i, b)) out.add(std::move(tree), ca * cb);
  return out;
}

PlanarTree sigma_action(const Permutation& sigma, const PlanarTree& t) {
  if (sigma.size() != t.size()) raise(Errc::SizeMismatch, "permutation size differs from arity");
  PlanarTree r{sigma(t.root), ChildLists(t.children.size())};
  for (int j = 1; j <= t.size(); ++j)
    for (int c : t.children[static_cast<std::size_t>(j - 1)]) r.children[static_cast<std::size_t>(sigma(j) - 1)].push_back(sigma(c));
  return r;
}

std::vector<PlanarTree> brace_compose(const PlanarTree& f, const std::vector<PlanarTree>& args) {
  ChildLists ch = f.children;
  std::vector<int> items;
  int offset = f.size();
  for (const auto& g : args) {
    for (const auto& kids : g.children) {
      std::vector<int> shifted;
      for (int c : kids) shifted.push_back(c + offset);
      ch.push_back(std::move(shifted));
    }
    items.push_back(g.root + offset);
    offset += g.size();
  }
  std::vector<PlanarTree> out;
  for (auto& lists : insert_ordered(ch, f.root, items)) out.push_back(PlanarTree{f.root, std::move(lists)});
  return out;
}

BraceElement brace_compose(const BraceElement& f, const std::vector<BraceElement>& args) {
  int arity = f.arity();
  for (const auto& g : args) arity += g.arity();
  BraceElement out(f.ring(), arity);
  std::vector<std::pair<PlanarTree, Scalar>> chosen;
  std::function<void(std::size_t, const Scalar&)> rec = [&](std::size_t k, const Scalar& coef) {
    if (k == args.size()) {
      for (const auto& [a, ca] : f.terms()) {
        std::vector<PlanarTree> trees;
        for (const auto& c : chosen) trees.push_back(c.first);
        for (auto& tree : brace_compose(a, trees)) out.add(std::move(tree), ca * coef);
      }
      return;
    }
    for (const auto& [b, cb] : args[k].terms()) {
      chosen.emplace_back(b, cb);
      rec(k + 1, coef * cb);
      chosen.pop_back();
    }
  };
  rec(0, Scalar::one(f.ring()));
  return out;
}

}  // namespace gpl
