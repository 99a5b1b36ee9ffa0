#include "gpl/tree.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "gpl/error.hpp"

namespace gpl {

namespace {

bool code_less(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct Built {
  std::vector<int> code;
  std::vector<int> order;
  std::uint64_t aut = 1;
  bool degenerate = false;
  int degree = 0;
};

struct Builder {
  const std::vector<std::vector<int>>& children;
  const std::vector<GeneratorId>& decorations;
  std::span<const int> degrees;
  const std::vector<char>* keep = nullptr;

  Built build(int v) const {
    std::vector<Built> kids;
    for (int c : children[static_cast<std::size_t>(v)])
      if (!keep || (*keep)[static_cast<std::size_t>(c)]) kids.push_back(build(c));
    std::stable_sort(kids.begin(), kids.end(), [](const Built& a, const Built& b) { return code_less(a.code, b.code); });
    Built out;
    const GeneratorId g = decorations[static_cast<std::size_t>(v)];
    out.code = {g, static_cast<int>(kids.size())};
    out.order = {v};
    if (!degrees.empty()) {
      if (g < 0 || static_cast<std::size_t>(g) >= degrees.size())
        raise(Errc::UnknownGenerator, "generator id " + std::to_string(g));
      out.degree = degrees[static_cast<std::size_t>(g)];
    }
    std::size_t run = 0;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      out.code.insert(out.code.end(), kids[i].code.begin(), kids[i].code.end());
      out.order.insert(out.order.end(), kids[i].order.begin(), kids[i].order.end());
      out.aut *= kids[i].aut;
      out.degenerate = out.degenerate || kids[i].degenerate;
      out.degree += kids[i].degree;
      run = (i > 0 && kids[i].code == kids[i - 1].code) ? run + 1 : 1;
      out.aut *= run;
      if (run >= 2 && (kids[i].degree & 1)) out.degenerate = true;
    }
    return out;
  }
};

std::vector<std::vector<int>> children_of(const std::vector<int>& parents, int& root) {
  const auto n = parents.size();
  std::vector<std::vector<int>> ch(n);
  root = -1;
  for (std::size_t v = 0; v < n; ++v) {
    const int p = parents[v];
    if (p < 0) {
      if (root >= 0) raise(Errc::BadVertex, "more than one root");
      root = static_cast<int>(v);
    } else {
      if (static_cast<std::size_t>(p) >= n) raise(Errc::BadVertex, "parent out of range");
      ch[static_cast<std::size_t>(p)].push_back(static_cast<int>(v));
    }
  }
  if (root < 0 && n > 0) raise(Errc::BadVertex, "no root");
  return ch;
}

}  // namespace

DecoratedTree DecoratedTree::vertex(GeneratorId g) {
  DecoratedTree t;
  t.code_ = {g, 0};
  return t;
}

DecoratedTree DecoratedTree::from_parents(const std::vector<int>& parents, const std::vector<GeneratorId>& decorations) {
  return canonicalize(parents, decorations, {}).tree;
}

DecoratedTree DecoratedTree::from_code(std::vector<int> code) {
  DecoratedTree t;
  t.code_ = std::move(code);
  return t;
}

std::vector<int> DecoratedTree::parents() const {
  std::vector<int> parent(static_cast<std::size_t>(size()), -1);
  std::vector<int> stack;  // vertices still expecting children
  std::vector<int> remaining;
  for (int v = 0; v < size(); ++v) {
    while (!stack.empty() && remaining.back() == 0) {
      stack.pop_back();
      remaining.pop_back();
    }
    if (!stack.empty()) {
      parent[static_cast<std::size_t>(v)] = stack.back();
      --remaining.back();
    }
    stack.push_back(v);
    remaining.push_back(child_count(v));
  }
  return parent;
}

std::vector<std::vector<int>> DecoratedTree::children() const {
  std::vector<std::vector<int>> ch(static_cast<std::size_t>(size()));
  const auto parent = parents();
  for (int v = 1; v < size(); ++v) ch[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])].push_back(v);
  return ch;
}

std::vector<GeneratorId> DecoratedTree::decorations() const {
  std::vector<GeneratorId> d;
  for (int v = 0; v < size(); ++v) d.push_back(generator(v));
  return d;
}

int DecoratedTree::depth() const {
  const auto parent = parents();
  std::vector<int> level(parent.size(), 1);
  int best = 0;
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (parent[v] >= 0) level[v] = level[static_cast<std::size_t>(parent[v])] + 1;
    best = std::max(best, level[v]);
  }
  return best;
}

DecoratedTree DecoratedTree::subtree(int v) const {
  if (v < 0 || v >= size()) raise(Errc::BadVertex, "vertex " + std::to_string(v));
  int end = v, pending = 1;
  while (pending > 0) {
    pending += child_count(end) - 1;
    ++end;
  }
  DecoratedTree t;
  t.code_.assign(code_.begin() + 2 * v, code_.begin() + 2 * end);
  return t;
}

int DecoratedTree::degree(std::span<const int> generator_degrees) const {
  int d = 0;
  for (int v = 0; v < size(); ++v) {
    const auto g = static_cast<std::size_t>(generator(v));
    if (g >= generator_degrees.size()) raise(Errc::UnknownGenerator, "generator id " + std::to_string(g));
    d += generator_degrees[g];
  }
  return d;
}

std::strong_ordering operator<=>(const DecoratedTree& a, const DecoratedTree& b) {
  if (a.code_.size() != b.code_.size()) return a.code_.size() <=> b.code_.size();
  return a.code_ <=> b.code_;
}

std::size_t TreeCodeHash::operator()(const DecoratedTree& t) const {
  std::size_t h = 1469598103934665603ull;
  for (int x : t.code()) h = (h ^ static_cast<std::size_t>(x + 0x9e37)) * 1099511628211ull;
  return h;
}

Canonical canonicalize(const std::vector<int>& parents, const std::vector<GeneratorId>& decorations,
                       std::span<const int> generator_degrees) {
  if (parents.size() != decorations.size()) raise(Errc::SizeMismatch, "parents and decorations differ in length");
  Canonical c;
  if (parents.empty()) return c;
  int root = -1;
  const auto ch = children_of(parents, root);
  Builder b{ch, decorations, generator_degrees};
  Built built = b.build(root);
  if (built.order.size() != parents.size()) raise(Errc::BadVertex, "parent map has a cycle");
  c.tree = DecoratedTree::from_code(std::move(built.code));
  c.automorphism_order = built.aut;
  c.sign_degenerate = built.degenerate;
  return c;
}

Canonical canonicalize(const DecoratedTree& t, std::span<const int> generator_degrees) {
  return canonicalize(t.parents(), t.decorations(), generator_degrees);
}

std::vector<int> canonical_order(const std::vector<int>& parents, const std::vector<GeneratorId>& decorations,
                                 const std::vector<int>& vertices) {
  std::vector<char> keep(parents.size(), 0);
  for (int v : vertices) keep[static_cast<std::size_t>(v)] = 1;
  int root = -1;
  for (int v : vertices) {
    const int p = parents[static_cast<std::size_t>(v)];
    if (p < 0 || !keep[static_cast<std::size_t>(p)]) root = v;
  }
  int ignored = -1;
  const auto ch = children_of(parents, ignored);
  Builder b{ch, decorations, {}, &keep};
  return b.build(root).order;
}

DecoratedTree graft(const DecoratedTree& host, int vertex, const DecoratedTree& subtree) {
  if (vertex < 0 || vertex >= host.size()) raise(Errc::BadVertex, "vertex " + std::to_string(vertex));
  auto parents = host.parents();
  auto decorations = host.decorations();
  const int offset = host.size();
  const auto sub_parents = subtree.parents();
  for (int v = 0; v < subtree.size(); ++v) {
    const int p = sub_parents[static_cast<std::size_t>(v)];
    parents.push_back(p < 0 ? vertex : p + offset);
    decorations.push_back(subtree.generator(v));
  }
  return DecoratedTree::from_parents(parents, decorations);
}

std::vector<std::vector<DecoratedTree>> enumerate_unlabeled(int max_vertices) {
  std::vector<std::vector<DecoratedTree>> by_size(static_cast<std::size_t>(std::max(max_vertices, 0)) + 1);
  if (max_vertices < 1) return by_size;
  by_size[1] = {DecoratedTree::vertex(0)};
  std::vector<DecoratedTree> pool = by_size[1];  // all trees found so far, by increasing size
  for (int n = 2; n <= max_vertices; ++n) {
    std::vector<DecoratedTree> found;
    // Children are chosen as a nonincreasing sequence of pool indices with sizes summing to n-1.
    std::vector<int> chosen;
    std::function<void(int, std::size_t)> extend = [&](int left, std::size_t max_index) {
      if (left == 0) {
        std::vector<int> parents{-1};
        std::vector<GeneratorId> decorations{0};
        for (int idx : chosen) {
          const auto& sub = pool[static_cast<std::size_t>(idx)];
          const int offset = static_cast<int>(parents.size());
          const auto sp = sub.parents();
          for (std::size_t v = 0; v < sp.size(); ++v) {
            parents.push_back(sp[v] < 0 ? 0 : sp[v] + offset);
            decorations.push_back(0);
          }
        }
        found.push_back(DecoratedTree::from_parents(parents, decorations));
        return;
      }
      for (std::size_t i = max_index + 1; i-- > 0;) {
        if (pool[i].size() > left) continue;
        chosen.push_back(static_cast<int>(i));
        extend(left - pool[i].size(), i);
        chosen.pop_back();
      }
    };
    extend(n - 1, pool.size() - 1);
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    by_size[static_cast<std::size_t>(n)] = found;
    pool.insert(pool.end(), found.begin(), found.end());
  }
  return by_size;
}

int LabeledTree::root() const {
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (parent[i] == 0) return static_cast<int>(i) + 1;
  return 0;
}

std::vector<std::vector<int>> LabeledTree::children() const {
  std::vector<std::vector<int>> ch(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (parent[i] > 0) ch[static_cast<std::size_t>(parent[i] - 1)].push_back(static_cast<int>(i) + 1);
  return ch;
}

namespace {

std::string render_labeled(int v, const std::vector<std::vector<int>>& ch) {
  std::string s = std::to_string(v);
  const auto& kids = ch[static_cast<std::size_t>(v - 1)];
  if (kids.empty()) return s;
  s += "[";
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) s += ",";
    s += render_labeled(kids[i], ch);
  }
  return s + "]";
}

}  // namespace

std::string LabeledTree::to_string() const { return parent.empty() ? "" : render_labeled(root(), children()); }

std::string PlanarTree::to_string() const { return children.empty() ? "" : render_labeled(root, children); }

std::vector<LabeledTree> enumerate_labeled(int n) {
  if (n < 1 || n > kLabeledCap) raise(Errc::CapExceeded, "labeled enumeration supports 1.." + std::to_string(kLabeledCap));
  std::vector<LabeledTree> out;
  std::vector<int> parent(static_cast<std::size_t>(n), 0);
  // Odometer over all maps vertex -> {0..n}; keep those with exactly one root and no cycle.
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == parent.size()) {
      int roots = 0;
      for (int p : parent) roots += p == 0;
      if (roots != 1) return;
      for (std::size_t v = 0; v < parent.size(); ++v) {
        int cur = static_cast<int>(v) + 1, steps = 0;
        while (cur != 0 && steps <= n) {
          cur = parent[static_cast<std::size_t>(cur - 1)];
          ++steps;
        }
        if (cur != 0) return;
      }
      out.push_back(LabeledTree{parent});
      return;
    }
    for (int p = 0; p <= n; ++p) {
      if (p == static_cast<int>(i) + 1) continue;
      parent[i] = p;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

std::string to_text(const DecoratedTree& t, const std::function<std::string(GeneratorId)>& name) {
  if (t.empty()) return "";
  const auto ch = t.children();
  std::function<std::string(int)> render = [&](int v) {
    std::string s = name(t.generator(v));
    const auto& kids = ch[static_cast<std::size_t>(v)];
    if (kids.empty()) return s;
    s += "[";
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) s += ",";
      s += render(kids[i]);
    }
    return s + "]";
  };
  return render(0);
}

namespace {

struct TreeParser {
  const std::string& src;
  const std::function<GeneratorId(const std::string&)>& lookup;
  std::size_t pos = 0;
  std::vector<int> parents;
  std::vector<GeneratorId> decorations;

  void skip() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) const { raise(Errc::SyntaxError, msg + " at column " + std::to_string(pos + 1)); }

  void node(int parent) {
    skip();
    const std::size_t start = pos;
    while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) ++pos;
    if (start == pos) fail("expected a generator name");
    const std::string name = src.substr(start, pos - start);
    const GeneratorId g = lookup(name);
    if (g < 0) raise(Errc::UnknownGenerator, name);
    const int me = static_cast<int>(parents.size());
    parents.push_back(parent);
    decorations.push_back(g);
    skip();
    if (pos < src.size() && src[pos] == '[') {
      ++pos;
      for (;;) {
        node(me);
        skip();
        if (pos < src.size() && src[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < src.size() && src[pos] == ']') {
          ++pos;
          break;
        }
        fail("expected ',' or ']'");
      }
    }
  }
};

}  // namespace

DecoratedTree parse_tree(const std::string& text, const std::function<GeneratorId(const std::string&)>& lookup) {
  TreeParser p{text, lookup, 0, {}, {}};
  p.node(-1);
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return DecoratedTree::from_parents(p.parents, p.decorations);
}

}  // namespace gpl
