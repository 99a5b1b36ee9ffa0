#include "gpl/algebra.hpp"

#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "gpl/error.hpp"

namespace gpl {

/// Memo tables for basis-level braces and differentials, keyed by flattened codes.
class BraceCache {
 public:
  using BraceValue = std::shared_ptr<const std::vector<std::pair<DecoratedTree, long long>>>;
  using DiffValue = std::shared_ptr<const std::vector<std::pair<DecoratedTree, Scalar>>>;

  BraceValue brace(const std::vector<int>& key, const std::function<BraceValue()>& compute) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = braces_.find(key); it != braces_.end()) return it->second;
    }
    auto value = compute();
    std::lock_guard lock(mutex_);
    return braces_.emplace(key, std::move(value)).first->second;
  }
  DiffValue diff(const DecoratedTree& t, const std::function<DiffValue()>& compute) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = diffs_.find(t); it != diffs_.end()) return it->second;
    }
    auto value = compute();
    std::lock_guard lock(mutex_);
    return diffs_.emplace(t, std::move(value)).first->second;
  }

 private:
  struct CodeHash {
    std::size_t operator()(const std::vector<int>& v) const {
      std::size_t h = v.size();
      for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x + 7);
      return h;
    }
  };
  std::mutex mutex_;
  std::unordered_map<std::vector<int>, BraceValue, CodeHash> braces_;
  std::map<DecoratedTree, DiffValue> diffs_;
};

// ---------------------------------------------------------------- spec

AlgebraSpec::AlgebraSpec(Ring ring, std::vector<Generator> generators, int weight_cap,
                         std::map<GeneratorId, LinearTerms> differential)
    : ring_(std::move(ring)),
      generators_(std::move(generators)),
      weight_cap_(weight_cap),
      differential_(std::move(differential)),
      cache_(std::make_unique<BraceCache>()) {
  if (weight_cap_ < 1) raise(Errc::ConfigError, "weight cap must be at least 1");
  std::set<std::string> names;
  for (const auto& g : generators_) {
    if (g.name.empty()) raise(Errc::ConfigError, "empty generator name");
    if (!names.insert(g.name).second) raise(Errc::ConfigError, "duplicate generator " + g.name);
    degrees_.push_back(g.degree);
    sign_degrees_.push_back(signed_ring() ? g.degree : 0);
  }
  const int n = static_cast<int>(generators_.size());
  for (auto& [g, image] : differential_) {
    if (g < 0 || g >= n) raise(Errc::UnknownGenerator, "differential of unknown generator");
    LinearTerms cleaned;
    for (const auto& [h, c] : image) {
      if (h < 0 || h >= n) raise(Errc::UnknownGenerator, "differential image uses unknown generator");
      if (!(c.ring() == ring_)) raise(Errc::RingMismatch, "differential coefficient over another ring");
      if (c.is_zero()) continue;
      if (degrees_[static_cast<std::size_t>(h)] != degrees_[static_cast<std::size_t>(g)] + 1)
        raise(Errc::NotAComplexSpec, "d(" + generators_[static_cast<std::size_t>(g)].name + ") has a term of the wrong degree");
      cleaned.emplace_back(h, c);
    }
    image = std::move(cleaned);
  }
  // d^2 = 0 on generators.
  for (const auto& [g, image] : differential_) {
    std::map<GeneratorId, Scalar> dd;
    for (const auto& [h, c] : image)
      for (const auto& [k, e] : this->differential(h)) {
        auto [it, fresh] = dd.try_emplace(k, c * e);
        if (!fresh) it->second += c * e;
      }
    for (const auto& [k, c] : dd)
      if (!c.is_zero()) raise(Errc::NotAComplexSpec, "d^2 is nonzero on " + generators_[static_cast<std::size_t>(g)].name);
  }
}

AlgebraSpec::~AlgebraSpec() = default;

std::shared_ptr<const AlgebraSpec> AlgebraSpec::make(Ring ring, std::vector<Generator> generators, int weight_cap,
                                                     std::map<GeneratorId, LinearTerms> differential) {
  return std::make_shared<const AlgebraSpec>(std::move(ring), std::move(generators), weight_cap, std::move(differential));
}

std::shared_ptr<const AlgebraSpec> AlgebraSpec::from_json(const nlohmann::json& j) {
  try {
    const Ring ring = Ring::from_json(j.at("ring"));
    std::vector<Generator> gens;
    for (const auto& g : j.at("generators")) gens.push_back({g.at("name").get<std::string>(), g.value("degree", 0)});
    auto lookup = [&](const std::string& name) {
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i].name == name) return static_cast<GeneratorId>(i);
      raise(Errc::UnknownGenerator, name);
    };
    std::map<GeneratorId, LinearTerms> d;
    if (j.contains("differential")) {
      for (const auto& [name, image] : j.at("differential").items()) {
        LinearTerms terms;
        for (const auto& term : image) {
          const auto& c = term.at(1);
          const std::string text = c.is_string() ? c.get<std::string>() : c.dump();
          terms.emplace_back(lookup(term.at(0).get<std::string>()), parse_scalar(text, ring));
        }
        d[lookup(name)] = std::move(terms);
      }
    }
    return make(ring, std::move(gens), j.value("weight_cap", 6), std::move(d));
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::ConfigError, std::string("algebra spec: ") + e.what());
  }
}

nlohmann::json AlgebraSpec::to_json() const {
  nlohmann::json j;
  j["ring"] = ring_.to_json();
  j["generators"] = nlohmann::json::array();
  for (const auto& g : generators_) j["generators"].push_back({{"name", g.name}, {"degree", g.degree}});
  nlohmann::json d = nlohmann::json::object();
  for (const auto& [g, image] : differential_) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [h, c] : image) terms.push_back({generators_[static_cast<std::size_t>(h)].name, c.to_string()});
    d[generators_[static_cast<std::size_t>(g)].name] = terms;
  }
  j["differential"] = d;
  j["weight_cap"] = weight_cap_;
  return j;
}

GeneratorId AlgebraSpec::find(const std::string& name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i].name == name) return static_cast<GeneratorId>(i);
  return -1;
}

GeneratorId AlgebraSpec::id(const std::string& name) const {
  const GeneratorId g = find(name);
  if (g < 0) raise(Errc::UnknownGenerator, name);
  return g;
}

const LinearTerms& AlgebraSpec::differential(GeneratorId g) const {
  static const LinearTerms none;
  const auto it = differential_.find(g);
  return it == differential_.end() ? none : it->second;
}

bool AlgebraSpec::same_as(const AlgebraSpec& other) const {
  if (this == &other) return true;
  if (!(ring_ == other.ring_) || weight_cap_ != other.weight_cap_ || generators_.size() != other.generators_.size())
    return false;
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i].name != other.generators_[i].name || generators_[i].degree != other.generators_[i].degree)
      return false;
  return true;
}

// ---------------------------------------------------------------- elements

AlgebraElement::AlgebraElement(SpecPtr spec) : spec_(std::move(spec)), unit_(Scalar::zero(spec_->ring())) {}

AlgebraElement AlgebraElement::one(SpecPtr spec) {
  AlgebraElement e(std::move(spec));
  e.unit_ = Scalar::one(e.ring());
  return e;
}

AlgebraElement AlgebraElement::generator(SpecPtr spec, GeneratorId g) {
  if (g < 0 || g >= static_cast<int>(spec->generators().size())) raise(Errc::UnknownGenerator, "generator id");
  AlgebraElement e(std::move(spec));
  e.add_canonical(DecoratedTree::vertex(g), Scalar::one(e.ring()));
  return e;
}

AlgebraElement AlgebraElement::generator(SpecPtr spec, const std::string& name) {
  const GeneratorId g = spec->id(name);
  return generator(std::move(spec), g);
}

AlgebraElement AlgebraElement::basis(SpecPtr spec, const DecoratedTree& tree, const Scalar& coefficient) {
  const auto canon = canonicalize(tree, spec->degrees());
  AlgebraElement e(std::move(spec));
  if (!(coefficient.ring() == e.ring())) raise(Errc::RingMismatch, "coefficient over another ring");
  const bool degenerate = e.spec_->signed_ring() && canon.sign_degenerate;
  if (!degenerate) e.add_canonical(canon.tree, coefficient);
  return e;
}

AlgebraElement AlgebraElement::parse_tree(SpecPtr spec, const std::string& text) {
  const auto tree = gpl::parse_tree(text, [&](const std::string& name) { return spec->find(name); });
  auto one = Scalar::one(spec->ring());
  return basis(std::move(spec), tree, one);
}

void AlgebraElement::add_canonical(const DecoratedTree& tree, const Scalar& coefficient) {
  if (tree.empty()) raise(Errc::BadVertex, "empty tree class");
  if (tree.size() > spec_->weight_cap() || coefficient.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(tree, coefficient);
  if (!fresh) {
    it->second += coefficient;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void AlgebraElement::add_unit(const Scalar& coefficient) { unit_ += coefficient; }

namespace {

void require_same_spec(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.spec() != b.spec() && !a.spec()->same_as(*b.spec())) raise(Errc::RingMismatch, "elements of different algebras");
}

}  // namespace

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& b) {
  require_same_spec(*this, b);
  unit_ += b.unit_;
  for (const auto& [t, c] : b.terms_) add_canonical(t, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& b) { return *this += -b; }

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement out(spec_);
  out.unit_ = -unit_;
  for (const auto& [t, c] : terms_) out.terms_.emplace(t, -c);
  return out;
}

AlgebraElement AlgebraElement::scaled(const Scalar& s) const {
  AlgebraElement out(spec_);
  out.unit_ = unit_ * s;
  for (const auto& [t, c] : terms_) out.add_canonical(t, c * s);
  return out;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
  return (a.spec_ == b.spec_ || a.spec_->same_as(*b.spec_)) && a.unit_ == b.unit_ && a.terms_ == b.terms_;
}

std::optional<int> AlgebraElement::degree() const {
  std::optional<int> deg;
  if (!unit_.is_zero()) deg = 0;
  for (const auto& [t, c] : terms_) {
    const int d = t.degree(spec_->degrees());
    if (deg && *deg != d) return std::nullopt;
    deg = d;
  }
  return deg;
}

std::optional<int> AlgebraElement::weight() const {
  if (!unit_.is_zero()) return 0;
  std::optional<int> w;
  for (const auto& [t, c] : terms_) w = w ? std::min(*w, t.size()) : t.size();
  return w;
}

AlgebraElement AlgebraElement::degree_part(int degree) const {
  AlgebraElement out(spec_);
  if (degree == 0) out.unit_ = unit_;
  for (const auto& [t, c] : terms_)
    if (t.degree(spec_->degrees()) == degree) out.terms_.emplace(t, c);
  return out;
}

AlgebraElement AlgebraElement::weight_part(int weight) const {
  AlgebraElement out(spec_);
  if (weight == 0) out.unit_ = unit_;
  for (const auto& [t, c] : terms_)
    if (t.size() == weight) out.terms_.emplace(t, c);
  return out;
}

AlgebraElement AlgebraElement::truncated(int cap) const {
  AlgebraElement out(spec_);
  out.unit_ = unit_;
  for (const auto& [t, c] : terms_)
    if (t.size() <= cap) out.terms_.emplace(t, c);
  return out;
}

AlgebraElement AlgebraElement::without_unit() const {
  AlgebraElement out(*this);
  out.unit_ = Scalar::zero(ring());
  return out;
}

std::string AlgebraElement::to_string() const {
  auto name = [&](GeneratorId g) { return spec_->generators()[static_cast<std::size_t>(g)].name; };
  std::vector<std::string> parts;
  auto coef = [](const Scalar& c) {
    const std::string s = c.to_string();
    if (s == "1") return std::string();
    if (s == "-1") return std::string("-");
    return (c.is_compound() ? "(" + s + ")" : s) + "*";
  };
  if (!unit_.is_zero()) parts.push_back(unit_.is_compound() ? "(" + unit_.to_string() + ")" : unit_.to_string());
  for (const auto& [t, c] : terms_) parts.push_back(coef(c) + to_text(t, name));
  if (parts.empty()) return "0";
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += " + " + parts[i];
  return out;
}

nlohmann::json AlgebraElement::to_json() const {
  auto name = [&](GeneratorId g) { return spec_->generators()[static_cast<std::size_t>(g)].name; };
  nlohmann::json j;
  j["unit"] = unit_.to_string();
  j["terms"] = nlohmann::json::array();
  for (const auto& [t, c] : terms_) j["terms"].push_back({to_text(t, name), c.to_string()});
  return j;
}

// ---------------------------------------------------------------- basis braces

namespace {

int inversion_parity(const std::vector<int>& order, const std::vector<char>& odd) {
  int parity = 0;
  for (std::size_t a = 0; a < order.size(); ++a) {
    if (!odd[static_cast<std::size_t>(order[a])]) continue;
    for (std::size_t b = a + 1; b < order.size(); ++b)
      if (odd[static_cast<std::size_t>(order[b])] && order[a] > order[b]) parity ^= 1;
  }
  return parity;
}

/// Signed number of ways to see T as s with typed subtrees cut off: antichains of
/// non-root vertices, each typed by an isomorphic argument with the prescribed fiber sizes.
long long cut_count(const DecoratedTree& t, const DecoratedTree& s, const std::vector<std::pair<DecoratedTree, int>>& args,
                    const std::vector<int>& sign_degrees) {
  const int n = t.size();
  const auto parents = t.parents();
  const auto decorations = t.decorations();
  std::vector<char> odd(static_cast<std::size_t>(n));
  std::vector<int> extent(static_cast<std::size_t>(n));  // one past the last descendant in preorder
  std::vector<std::vector<int>> types(static_cast<std::size_t>(n));
  for (int v = n - 1; v >= 0; --v) {
    odd[static_cast<std::size_t>(v)] = sign_degrees[static_cast<std::size_t>(decorations[static_cast<std::size_t>(v)])] & 1;
    extent[static_cast<std::size_t>(v)] = v + t.subtree(v).size();
  }
  for (int v = 1; v < n; ++v) {
    const auto sub = t.subtree(v);
    for (std::size_t i = 0; i < args.size(); ++i)
      if (args[i].first == sub) types[static_cast<std::size_t>(v)].push_back(static_cast<int>(i));
  }
  int total_cuts = 0;
  for (const auto& a : args) total_cuts += a.second;

  long long count = 0;
  std::vector<int> chosen;
  std::vector<int> assigned;
  std::vector<int> fiber(args.size(), 0);
  std::vector<int> root_order;

  std::function<void()> assign = [&]() {
    const std::size_t k = assigned.size();
    if (k == chosen.size()) {
      std::vector<int> order = root_order;
      for (std::size_t i = 0; i < args.size(); ++i)
        for (std::size_t j = 0; j < chosen.size(); ++j)
          if (assigned[j] == static_cast<int>(i))
            for (int v = chosen[j]; v < extent[static_cast<std::size_t>(chosen[j])]; ++v) order.push_back(v);
      count += inversion_parity(order, odd) ? -1 : 1;
      return;
    }
    for (int i : types[static_cast<std::size_t>(chosen[k])]) {
      if (fiber[static_cast<std::size_t>(i)] == args[static_cast<std::size_t>(i)].second) continue;
      ++fiber[static_cast<std::size_t>(i)];
      assigned.push_back(i);
      assign();
      assigned.pop_back();
      --fiber[static_cast<std::size_t>(i)];
    }
  };

  std::function<void(int)> choose = [&](int lo) {
    if (static_cast<int>(chosen.size()) == total_cuts) {
      std::vector<char> removed(static_cast<std::size_t>(n), 0);
      for (int c : chosen)
        for (int v = c; v < extent[static_cast<std::size_t>(c)]; ++v) removed[static_cast<std::size_t>(v)] = 1;
      std::vector<int> rest;
      for (int v = 0; v < n; ++v)
        if (!removed[static_cast<std::size_t>(v)]) rest.push_back(v);
      if (static_cast<int>(rest.size()) != s.size()) return;
      root_order = canonical_order(parents, decorations, rest);
      // Code of the remainder in its canonical order.
      std::vector<int> position(static_cast<std::size_t>(n), -1);
      for (std::size_t i = 0; i < root_order.size(); ++i) position[static_cast<std::size_t>(root_order[i])] = static_cast<int>(i);
      std::vector<int> code(2 * rest.size(), 0);
      for (int v : rest) {
        code[static_cast<std::size_t>(2 * position[static_cast<std::size_t>(v)])] = decorations[static_cast<std::size_t>(v)];
        const int p = parents[static_cast<std::size_t>(v)];
        if (p >= 0 && !removed[static_cast<std::size_t>(p)]) ++code[static_cast<std::size_t>(2 * position[static_cast<std::size_t>(p)] + 1)];
      }
      if (code != s.code()) return;
      assign();
      return;
    }
    for (int v = lo; v < n; ++v) {
      if (types[static_cast<std::size_t>(v)].empty()) continue;
      chosen.push_back(v);
      choose(extent[static_cast<std::size_t>(v)]);
      chosen.pop_back();
    }
  };
  choose(1);
  return count;
}

}  // namespace

std::vector<std::pair<DecoratedTree, long long>> basis_brace(const DecoratedTree& s,
                                                             const std::vector<std::pair<DecoratedTree, int>>& args,
                                                             const std::vector<int>& sign_degrees, int cap) {
  int size = s.size();
  for (const auto& [t, r] : args) {
    if (r < 0) raise(Errc::BadIndex, "negative weight");
    size += r * t.size();
  }
  if (size > cap) return {};
  std::vector<std::pair<DecoratedTree, int>> live;
  for (const auto& a : args)
    if (a.second > 0) live.push_back(a);
  if (live.empty()) return {{s, 1}};

  // Candidate classes: graft each argument copy onto a vertex of s, one multiset per slot.
  const auto s_parents = s.parents();
  const auto s_decorations = s.decorations();
  std::map<DecoratedTree, bool> candidates;  // class -> sign degenerate
  std::vector<std::vector<int>> spots(live.size());
  std::function<void(std::size_t, int)> pick = [&](std::size_t i, int lo) {
    if (i == live.size()) {
      auto parents = s_parents;
      auto decorations = s_decorations;
      for (std::size_t a = 0; a < live.size(); ++a) {
        const auto sub_parents = live[a].first.parents();
        for (int host : spots[a]) {
          const int offset = static_cast<int>(parents.size());
          for (int v = 0; v < live[a].first.size(); ++v) {
            const int p = sub_parents[static_cast<std::size_t>(v)];
            parents.push_back(p < 0 ? host : p + offset);
            decorations.push_back(live[a].first.generator(v));
          }
        }
      }
      const auto canon = canonicalize(parents, decorations, sign_degrees);
      candidates.emplace(canon.tree, canon.sign_degenerate);
      return;
    }
    if (static_cast<int>(spots[i].size()) == live[i].second) {
      pick(i + 1, 0);
      return;
    }
    for (int v = lo; v < s.size(); ++v) {
      spots[i].push_back(v);
      pick(i, v);
      spots[i].pop_back();
    }
  };
  pick(0, 0);

  std::vector<std::pair<DecoratedTree, long long>> out;
  for (const auto& [t, degenerate] : candidates) {
    const long long c = cut_count(t, s, live, sign_degrees);
    if (degenerate) {
      if (c != 0) raise(Errc::InternalInvariant, "degenerate class with nonzero structure constant");
      continue;
    }
    if (c != 0) out.emplace_back(t, c);
  }
  return out;
}

namespace {

BraceCache::BraceValue cached_basis_brace(const AlgebraSpec& spec, const DecoratedTree& s,
                                          const std::vector<std::pair<DecoratedTree, int>>& args) {
  std::vector<int> key = s.code();
  for (const auto& [t, r] : args) {
    key.push_back(-1);
    key.push_back(r);
    key.insert(key.end(), t.code().begin(), t.code().end());
  }
  return spec.cache().brace(key, [&] {
    return std::make_shared<const std::vector<std::pair<DecoratedTree, long long>>>(
        basis_brace(s, args, spec.sign_degrees(), spec.weight_cap()));
  });
}

}  // namespace

AlgebraElement weighted_brace(const AlgebraElement& x, const std::vector<BraceArg>& args) {
  const AlgebraSpec& spec = *x.spec();
  const Ring& ring = spec.ring();
  std::vector<const BraceArg*> live;
  for (const auto& a : args) {
    require_same_spec(x, a.y);
    if (a.r < 0) raise(Errc::BadIndex, "negative weight");
    if (a.r == 0) continue;
    if (!a.y.unit().is_zero()) raise(Errc::UnitArgument, "the unit cannot be a brace argument");
    if (spec.signed_ring() && a.r >= 2)
      for (const auto& [t, c] : a.y.terms())
        if (t.degree(spec.degrees()) % 2 != 0)
          raise(Errc::OddWeightViolation, "odd element with weight " + std::to_string(a.r));
    live.push_back(&a);
  }
  if (live.empty()) return x;

  AlgebraElement out(x.spec());
  // The unit only acts in the head slot: 1{} = 1, 1{y}_1 = y, 1{...} = 0 otherwise.
  if (!x.unit().is_zero() && live.size() == 1 && live[0]->r == 1) out += live[0]->y.scaled(x.unit());

  std::vector<std::vector<std::pair<DecoratedTree, Scalar>>> supports;
  for (const auto* a : live) supports.emplace_back(a->y.terms().begin(), a->y.terms().end());

  for (const auto& [s, cs] : x.terms()) {
    std::vector<std::pair<DecoratedTree, int>> basis_args;
    // Split each slot's weight over the terms of its argument, pruning by the weight cap.
    std::function<void(std::size_t, std::size_t, int, int, const Scalar&)> split =
        [&](std::size_t i, std::size_t j, int left, int weight, const Scalar& coef) {
          if (i == live.size()) {
            for (const auto& [t, n] : *cached_basis_brace(spec, s, basis_args))
              out.add_canonical(t, coef * Scalar::from_integer(n, ring));
            return;
          }
          const auto& support = supports[i];
          if (left == 0) {
            split(i + 1, 0, i + 1 < live.size() ? live[i + 1]->r : 0, weight, coef);
            return;
          }
          if (j == support.size()) return;
          const auto& [t, c] = support[j];
          // Terms are ordered by size, so nothing further fits either.
          if (weight + t.size() > spec.weight_cap()) return;
          split(i, j + 1, left, weight, coef);
          Scalar power = coef;
          for (int k = 1; k <= left; ++k) {
            if (weight + k * t.size() > spec.weight_cap()) break;
            power = power * c;
            basis_args.emplace_back(t, k);
            split(i, j + 1, left - k, weight + k * t.size(), power);
            basis_args.pop_back();
          }
        };
    split(0, 0, live[0]->r, s.size(), cs);
  }
  return out;
}

AlgebraElement star(const AlgebraElement& x, const AlgebraElement& y) { return weighted_brace(x, {{y, 1}}); }

// ---------------------------------------------------------------- differential

namespace {

BraceCache::DiffValue basis_differential(const AlgebraSpec& spec, const DecoratedTree& t) {
  const Ring& ring = spec.ring();
  const auto& sdeg = spec.sign_degrees();
  const int n = static_cast<int>(spec.generators().size());
  // Which generators hit h under d, with coefficients.
  std::vector<std::vector<std::pair<GeneratorId, Scalar>>> preimages(static_cast<std::size_t>(n));
  for (GeneratorId g = 0; g < n; ++g)
    for (const auto& [h, c] : spec.differential(g)) preimages[static_cast<std::size_t>(h)].emplace_back(g, c);

  const auto parents = t.parents();
  const auto decorations = t.decorations();
  std::map<DecoratedTree, bool> targets;
  for (int w = 0; w < t.size(); ++w)
    for (const auto& [h, c] : spec.differential(decorations[static_cast<std::size_t>(w)])) {
      auto decs = decorations;
      decs[static_cast<std::size_t>(w)] = h;
      const auto canon = canonicalize(parents, decs, sdeg);
      targets.emplace(canon.tree, canon.sign_degenerate);
    }

  auto out = std::make_shared<std::vector<std::pair<DecoratedTree, Scalar>>>();
  std::vector<int> all(static_cast<std::size_t>(t.size()));
  for (int v = 0; v < t.size(); ++v) all[static_cast<std::size_t>(v)] = v;
  for (const auto& [target, degenerate] : targets) {
    // Coefficient of the canonical tensor of target: vertices w whose decoration comes from d.
    const auto tp = target.parents();
    const auto td = target.decorations();
    Scalar coef = Scalar::zero(ring);
    int before = 0;  // degree sum of vertices before w
    for (int w = 0; w < target.size(); ++w) {
      for (const auto& [g, c] : preimages[static_cast<std::size_t>(td[static_cast<std::size_t>(w)])]) {
        auto decs = td;
        decs[static_cast<std::size_t>(w)] = g;
        if (canonicalize(tp, decs, sdeg).tree != t) continue;
        const auto order = canonical_order(tp, decs, all);
        std::vector<int> position(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) position[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
        std::vector<char> odd(order.size());
        for (std::size_t v = 0; v < order.size(); ++v) odd[position[v]] = sdeg[static_cast<std::size_t>(decs[v])] & 1;
        const int parity = (before & 1) ^ inversion_parity(position, odd);
        coef += parity ? -c : c;
      }
      before += sdeg[static_cast<std::size_t>(td[static_cast<std::size_t>(w)])];
    }
    if (degenerate) {
      if (!coef.is_zero()) raise(Errc::InternalInvariant, "degenerate class in a differential");
      continue;
    }
    if (!coef.is_zero()) out->emplace_back(target, coef);
  }
  return out;
}

}  // namespace

AlgebraElement differentiate(const AlgebraElement& x) {
  const AlgebraSpec& spec = *x.spec();
  AlgebraElement out(x.spec());
  if (!spec.has_differential()) return out;
  for (const auto& [t, c] : x.terms())
    for (const auto& [target, coef] : *spec.cache().diff(t, [&] { return basis_differential(spec, t); }))
      out.add_canonical(target, c * coef);
  return out;
}

AlgebraElement change_ring(const AlgebraElement& x, const SpecPtr& target) {
  const auto& src = x.spec()->generators();
  const auto& dst = target->generators();
  if (src.size() != dst.size()) raise(Errc::RingMismatch, "different generators");
  for (std::size_t i = 0; i < src.size(); ++i)
    if (src[i].name != dst[i].name || src[i].degree != dst[i].degree) raise(Errc::RingMismatch, "different generators");
  AlgebraElement out(target);
  out.add_unit(change_ring(x.unit(), target->ring()));
  for (const auto& [t, c] : x.terms()) out += AlgebraElement::basis(target, t, change_ring(c, target->ring()));
  return out;
}

}  // namespace gpl
