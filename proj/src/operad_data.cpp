#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "gpl/convolution.hpp"
#include "gpl/error.hpp"

namespace gpl {

namespace {

constexpr int kMaxCap = 6;

std::int64_t md(std::int64_t v, std::int64_t p) {
  v %= p;
  return v < 0 ? v + p : v;
}

Permutation transposition(int n, int i) {
  auto v = Permutation::identity(n).images();
  std::swap(v[static_cast<std::size_t>(i - 1)], v[static_cast<std::size_t>(i)]);
  return Permutation(std::move(v));
}

std::vector<Profile> compositions(int n, int k) {
  std::vector<Profile> out;
  Profile cur;
  std::function<void(int)> rec = [&](int left) {
    if (static_cast<int>(cur.size()) == k) {
      if (left == 0) out.push_back(cur);
      return;
    }
    const int slots = k - static_cast<int>(cur.size());
    for (int i = 1; i <= left - (slots - 1); ++i) {
      cur.push_back(i);
      rec(left - i);
      cur.pop_back();
    }
  };
  if (k >= 1 && n >= k) rec(n);
  return out;
}

int total(const Profile& p) { return std::accumulate(p.begin(), p.end(), 0); }

/// Mixed-radix index of (x, ys) with x most significant.
std::size_t radix(int x, const std::vector<int>& ys, const std::vector<int>& dys) {
  std::size_t idx = static_cast<std::size_t>(x);
  for (std::size_t j = 0; j < ys.size(); ++j) idx = idx * static_cast<std::size_t>(dys[j]) + static_cast<std::size_t>(ys[j]);
  return idx;
}

/// Calls body(x, ys) for every basis tuple of the profile.
void for_each_tuple(int dx, const std::vector<int>& dys, const std::function<void(int, const std::vector<int>&)>& body) {
  if (dx == 0) return;
  for (int d : dys)
    if (d == 0) return;
  std::vector<int> ys(dys.size(), 0);
  for (int x = 0; x < dx; ++x) {
    std::fill(ys.begin(), ys.end(), 0);
    for (;;) {
      body(x, ys);
      std::size_t j = ys.size();
      while (j > 0) {
        --j;
        if (++ys[j] < dys[j]) break;
        ys[j] = 0;
        if (j == 0) {
          j = ys.size() + 1;
          break;
        }
      }
      if (ys.empty() || j == ys.size() + 1) break;
    }
  }
}

ModVector dense(const SparseVector& s, int dim, std::int64_t p) {
  ModVector v(static_cast<std::size_t>(dim), 0);
  for (const auto& [i, c] : s) v[static_cast<std::size_t>(i)] = md(v[static_cast<std::size_t>(i)] + c, p);
  return v;
}

SparseVector sparse(const ModVector& v) {
  SparseVector s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.emplace_back(static_cast<int>(i), v[i]);
  return s;
}

ModVector unit_vector(int dim, int i) {
  ModVector v(static_cast<std::size_t>(dim), 0);
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

void axpy(ModVector& acc, std::int64_t a, const ModVector& v, std::int64_t p) {
  if (a == 0) return;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) acc[i] = md(acc[i] + a * v[i], p);
}

void axpy(ModVector& acc, std::int64_t a, const SparseVector& v, std::int64_t p) {
  if (a == 0) return;
  for (const auto& [i, c] : v) acc[static_cast<std::size_t>(i)] = md(acc[static_cast<std::size_t>(i)] + a * c, p);
}

std::string profile_string(const Profile& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

ModMatrix kron(const ModMatrix& a, const ModMatrix& b) {
  ModMatrix out(a.prime(), a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (a.at(i, j) == 0) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          if (b.at(k, l)) out.set(i * b.rows() + k, j * b.cols() + l, a.at(i, j) * b.at(k, l));
    }
  return out;
}

ModMatrix transpose(const ModMatrix& a) {
  ModMatrix t(a.prime(), a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t.set(j, i, a.at(i, j));
  return t;
}

/// (-1)^{sum_{i<j} |u_i||u_j|}: pairing of a dual tensor with a tensor.
int pairing_sign(const std::vector<int>& degrees) {
  int odd = 0, parity = 0;
  for (int d : degrees) {
    if (d & 1) {
      parity ^= odd & 1;
      ++odd;
    }
  }
  return parity ? -1 : 1;
}

bool is_pointed_shuffle(const Permutation& w, const Profile& profile) {
  const auto all = pointed_shuffles(profile);
  return std::binary_search(all.begin(), all.end(), w);
}

}  // namespace

// ---------------------------------------------------------------- SymmetricSequence

SymmetricSequence::SymmetricSequence(std::int64_t p, std::vector<Component> components)
    : p_(p), components_(std::move(components)) {
  if (p_ < 2) raise(Errc::InvalidRing, "symmetric sequences need a prime field");
  if (components_.empty()) raise(Errc::CapExceeded, "arity cap must be at least 1");
  if (cap() > kMaxCap) raise(Errc::CapExceeded, "arity cap " + std::to_string(cap()) + " above " + std::to_string(kMaxCap));
  for (int n = 1; n <= cap(); ++n) {
    auto& c = components_[static_cast<std::size_t>(n - 1)];
    const int d = static_cast<int>(c.names.size());
    const std::string where = "arity " + std::to_string(n);
    if (static_cast<int>(c.degrees.size()) != d) raise(Errc::SizeMismatch, where + ": degrees and names differ in length");
    if (static_cast<int>(c.transpositions.size()) != n - 1) raise(Errc::SizeMismatch, where + ": need n-1 transposition matrices");
    for (const auto& t : c.transpositions)
      if (t.rows() != d || t.cols() != d || t.prime() != p_) raise(Errc::SizeMismatch, where + ": transposition matrix shape");
    ModMatrix dm = c.differential.value_or(ModMatrix(p_, d, d));
    if (dm.rows() != d || dm.cols() != d || dm.prime() != p_) raise(Errc::SizeMismatch, where + ": differential shape");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (dm.at(i, j) && c.degrees[static_cast<std::size_t>(i)] != c.degrees[static_cast<std::size_t>(j)] + 1)
          raise(Errc::NotAComplex, where + ": differential does not raise degree by one");
    if (!(dm * dm).is_zero()) raise(Errc::NotAComplex, where + ": d^2 != 0");
    for (const auto& t : c.transpositions) {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          if (t.at(i, j) && c.degrees[static_cast<std::size_t>(i)] != c.degrees[static_cast<std::size_t>(j)])
            raise(Errc::NotEquivariant, where + ": action does not preserve degree");
      if (!(t * dm == dm * t)) raise(Errc::NotEquivariant, where + ": d does not commute with the action");
    }
    differentials_.push_back(std::move(dm));

    // Breadth-first over the Cayley graph; every edge must agree with the generator matrices.
    std::map<Permutation, ModMatrix> acts;
    std::deque<Permutation> queue;
    acts.emplace(Permutation::identity(n), ModMatrix::identity(p_, d));
    queue.push_back(Permutation::identity(n));
    while (!queue.empty()) {
      const Permutation sigma = queue.front();
      queue.pop_front();
      const ModMatrix here = acts.at(sigma);
      for (int i = 1; i < n; ++i) {
        const Permutation tau = transposition(n, i) * sigma;
        ModMatrix m = c.transpositions[static_cast<std::size_t>(i - 1)] * here;
        auto it = acts.find(tau);
        if (it == acts.end()) {
          acts.emplace(tau, std::move(m));
          queue.push_back(tau);
        } else if (!(it->second == m)) {
          raise(Errc::NotEquivariant, where + ": transposition matrices violate the relations of Sigma_n");
        }
      }
    }
    actions_.push_back(std::move(acts));
  }
}

const SymmetricSequence::Component& SymmetricSequence::component(int n) const {
  if (n < 1 || n > cap()) raise(Errc::CapExceeded, "arity " + std::to_string(n) + " outside 1.." + std::to_string(cap()));
  return components_[static_cast<std::size_t>(n - 1)];
}

int SymmetricSequence::dim(int n) const { return static_cast<int>(component(n).names.size()); }

const ModMatrix& SymmetricSequence::action(int n, const Permutation& sigma) const {
  component(n);
  if (sigma.size() != n) raise(Errc::SizeMismatch, "permutation size differs from arity");
  return actions_[static_cast<std::size_t>(n - 1)].at(sigma);
}

bool SymmetricSequence::has_differential() const {
  return std::any_of(differentials_.begin(), differentials_.end(), [](const ModMatrix& m) { return !m.is_zero(); });
}

SymmetricSequence::Component SymmetricSequence::trivial(std::int64_t p, int n, const std::string& name, int degree, bool sign) {
  Component c{{name}, {degree}, {}, std::nullopt};
  for (int i = 1; i < n; ++i) {
    ModMatrix t(p, 1, 1);
    t.set(0, 0, sign ? p - 1 : 1);
    c.transpositions.push_back(t);
  }
  return c;
}

SymmetricSequence::Component SymmetricSequence::regular(std::int64_t p, int n, const std::string& prefix, int degree) {
  const auto perms = all_permutations(n);
  std::map<Permutation, int> index;
  Component c;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    index[perms[i]] = static_cast<int>(i);
    std::string name = prefix;
    for (int v : perms[i].images()) name += std::to_string(v);
    c.names.push_back(name);
    c.degrees.push_back(degree);
  }
  for (int i = 1; i < n; ++i) {
    ModMatrix t(p, static_cast<int>(perms.size()), static_cast<int>(perms.size()));
    for (std::size_t j = 0; j < perms.size(); ++j) t.set(index.at(transposition(n, i) * perms[j]), static_cast<int>(j), 1);
    c.transpositions.push_back(std::move(t));
  }
  return c;
}

SymmetricSequence::Component SymmetricSequence::sum(std::int64_t p, int n, const std::vector<Component>& parts) {
  Component c;
  int d = 0;
  for (const auto& part : parts) d += static_cast<int>(part.names.size());
  c.transpositions.assign(static_cast<std::size_t>(std::max(0, n - 1)), ModMatrix(p, d, d));
  ModMatrix dm(p, d, d);
  bool any_d = false;
  int off = 0;
  for (const auto& part : parts) {
    const int pd = static_cast<int>(part.names.size());
    c.names.insert(c.names.end(), part.names.begin(), part.names.end());
    c.degrees.insert(c.degrees.end(), part.degrees.begin(), part.degrees.end());
    for (int i = 0; i + 1 < n; ++i)
      for (int a = 0; a < pd; ++a)
        for (int b = 0; b < pd; ++b) c.transpositions[static_cast<std::size_t>(i)].set(off + a, off + b, part.transpositions[static_cast<std::size_t>(i)].at(a, b));
    if (part.differential) {
      any_d = true;
      for (int a = 0; a < pd; ++a)
        for (int b = 0; b < pd; ++b) dm.set(off + a, off + b, part.differential->at(a, b));
    }
    off += pd;
  }
  if (any_d) c.differential = dm;
  return c;
}

std::vector<CompositeBasis> compose_product(const SymmetricSequence& m, const SymmetricSequence& n, int arity) {
  if (arity > n.cap()) raise(Errc::CapExceeded, "arity " + std::to_string(arity) + " past the cap");
  std::vector<CompositeBasis> out;
  for (int k = 1; k <= std::min(arity, m.cap()); ++k)
    for (const auto& prof : compositions(arity, k)) {
      std::vector<int> dys;
      for (int i : prof) dys.push_back(n.dim(i));
      const auto shuffles = pointed_shuffles(prof);
      for_each_tuple(m.dim(k), dys, [&](int x, const std::vector<int>& ys) {
        int deg = m.degree(k, x);
        for (std::size_t j = 0; j < ys.size(); ++j) deg += n.degree(prof[j], ys[j]);
        for (const auto& w : shuffles) out.push_back({prof, x, ys, w, deg});
      });
    }
  return out;
}

// ---------------------------------------------------------------- OperadData

namespace {

void require_unit_arity(const SymmetricSequence& s, const char* what) {
  if (s.dim(1) != 1 || s.degree(1, 0) != 0) raise(Errc::SizeMismatch, std::string(what) + " needs arity 1 equal to the ground field");
}

/// All (k, profile) with k <= cap and total <= cap.
std::vector<Profile> all_profiles(int cap) {
  std::vector<Profile> out;
  for (int n = 1; n <= cap; ++n)
    for (int k = 1; k <= n; ++k)
      for (auto& p : compositions(n, k)) out.push_back(std::move(p));
  return out;
}

}  // namespace

OperadData::OperadData(SymmetricSequence seq, std::map<Profile, std::vector<SparseVector>> composition)
    : seq_(std::move(seq)), table_(std::move(composition)) {
  require_unit_arity(seq_, "an operad");
  const std::int64_t p = prime();
  for (auto& [prof, cols] : table_) {
    const int k = static_cast<int>(prof.size());
    if (k < 1 || total(prof) > cap() || *std::min_element(prof.begin(), prof.end()) < 1)
      raise(Errc::CapExceeded, "composition profile " + profile_string(prof) + " outside the cap");
    std::size_t expected = static_cast<std::size_t>(seq_.dim(k));
    for (int i : prof) expected *= static_cast<std::size_t>(seq_.dim(i));
    if (cols.size() != expected) raise(Errc::SizeMismatch, "composition " + profile_string(prof) + ": wrong number of columns");
    const int target = seq_.dim(total(prof));
    for (auto& col : cols) {
      for (const auto& [i, c] : col)
        if (i < 0 || i >= target) raise(Errc::BadIndex, "composition " + profile_string(prof) + ": row out of range");
      col = sparse(dense(col, target, p));
    }
  }
  for (int n = 1; n <= cap(); ++n) {
    const Profile outer{n};
    if (!table_.count(outer)) {
      std::vector<SparseVector> cols;
      for (int y = 0; y < seq_.dim(n); ++y) cols.push_back({{y, 1}});
      table_[outer] = std::move(cols);
    }
    const Profile ones(static_cast<std::size_t>(n), 1);
    if (!table_.count(ones)) {
      std::vector<SparseVector> cols;
      for (int x = 0; x < seq_.dim(n); ++x) cols.push_back({{x, 1}});
      table_[ones] = std::move(cols);
    }
  }
}

SparseVector OperadData::compose(const Profile& profile, int x, const std::vector<int>& ys) const {
  auto it = table_.find(profile);
  if (it == table_.end()) return {};
  std::vector<int> dys;
  for (int i : profile) dys.push_back(seq_.dim(i));
  return it->second[radix(x, ys, dys)];
}

namespace {

/// gamma(x; y_1..y_k) extended multilinearly to dense vectors.
ModVector compose_dense(const OperadData& op, const Profile& prof, const ModVector& x, const std::vector<ModVector>& ys) {
  const std::int64_t p = op.prime();
  ModVector out(static_cast<std::size_t>(op.sequence().dim(total(prof))), 0);
  std::vector<int> idx(ys.size());
  std::function<void(std::size_t, std::int64_t, int)> rec = [&](std::size_t j, std::int64_t coef, int xi) {
    if (j == ys.size()) {
      axpy(out, coef, op.compose(prof, xi, idx), p);
      return;
    }
    for (std::size_t b = 0; b < ys[j].size(); ++b) {
      if (ys[j][b] == 0) continue;
      idx[j] = static_cast<int>(b);
      rec(j + 1, md(coef * ys[j][b], p), xi);
    }
  };
  for (std::size_t a = 0; a < x.size(); ++a)
    if (x[a]) rec(0, x[a], static_cast<int>(a));
  return out;
}

[[noreturn]] void operad_failure(Errc code, const std::string& axiom, const Profile& prof) {
  raise(code, axiom + " fails on profile " + profile_string(prof));
}

}  // namespace

void OperadData::validate() const {
  const std::int64_t p = prime();
  const auto& s = seq_;
  auto neg = [&](const ModVector& v) {
    ModVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = md(-v[i], p);
    return out;
  };
  for (const auto& prof : all_profiles(cap())) {
    const int k = static_cast<int>(prof.size()), n = total(prof);
    std::vector<int> dys;
    for (int i : prof) dys.push_back(s.dim(i));
    std::vector<int> off(prof.size(), 0);
    for (std::size_t j = 1; j < prof.size(); ++j) off[j] = off[j - 1] + prof[j - 1];

    for_each_tuple(s.dim(k), dys, [&](int x, const std::vector<int>& ys) {
      const ModVector base = dense(compose(prof, x, ys), s.dim(n), p);
      std::vector<ModVector> yv;
      std::vector<int> ydeg;
      for (std::size_t j = 0; j < ys.size(); ++j) {
        yv.push_back(unit_vector(dys[j], ys[j]));
        ydeg.push_back(s.degree(prof[j], ys[j]));
      }
      const ModVector xv = unit_vector(s.dim(k), x);

      // Units.
      if (k == 1 && x == 0 && !(base == yv[0])) operad_failure(Errc::InternalInvariant, "left unit", prof);
      if (k == n && !(base == xv)) operad_failure(Errc::InternalInvariant, "right unit", prof);

      // Equivariance in the inputs of each y_j.
      for (std::size_t j = 0; j < ys.size(); ++j)
        for (int i = 1; i < prof[j]; ++i) {
          auto moved = yv;
          moved[j] = s.action(prof[j], transposition(prof[j], i)).apply(yv[j]);
          std::vector<Permutation> blocks;
          for (std::size_t l = 0; l < prof.size(); ++l)
            blocks.push_back(l == j ? transposition(prof[l], i) : Permutation::identity(prof[l]));
          if (!(compose_dense(*this, prof, xv, moved) == s.action(n, block_sum(blocks)).apply(base)))
            operad_failure(Errc::NotEquivariant, "equivariance in the inner inputs", prof);
        }

      // Equivariance in the outer inputs.
      for (const auto& nu : all_permutations(k)) {
        if (nu.is_identity()) continue;
        Profile pr;
        std::vector<int> yr;
        for (int j = 1; j <= k; ++j) {
          pr.push_back(prof[static_cast<std::size_t>(nu(j) - 1)]);
          yr.push_back(ys[static_cast<std::size_t>(nu(j) - 1)]);
        }
        std::vector<int> beta(static_cast<std::size_t>(n));
        int pos = 0;
        for (int j = 1; j <= k; ++j) {
          const auto src = static_cast<std::size_t>(nu(j) - 1);
          for (int b = 1; b <= prof[src]; ++b) beta[static_cast<std::size_t>(pos++)] = off[src] + b;
        }
        ModVector rhs = s.action(n, Permutation(beta)).apply(dense(compose(pr, x, yr), s.dim(n), p));
        if (koszul_sign(nu.inverse(), ydeg) < 0) rhs = neg(rhs);
        if (!(compose_dense(*this, prof, s.action(k, nu).apply(xv), yv) == rhs))
          operad_failure(Errc::NotEquivariant, "equivariance in the outer inputs", prof);
      }

      // Compatibility with d.
      if (s.has_differential()) {
        const ModVector lhs = s.differential(n).apply(base);
        ModVector rhs = compose_dense(*this, prof, s.differential(k).apply(xv), yv);
        int passed = s.degree(k, x);
        for (std::size_t j = 0; j < ys.size(); ++j) {
          auto moved = yv;
          moved[j] = s.differential(prof[j]).apply(yv[j]);
          axpy(rhs, (passed & 1) ? p - 1 : 1, compose_dense(*this, prof, xv, moved), p);
          passed += ydeg[j];
        }
        if (!(lhs == rhs)) operad_failure(Errc::NotAComplex, "compatibility with the differential", prof);
      }

      // Associativity against every second level within the cap.
      for (int extra = n; extra <= cap(); ++extra)
        for (const auto& zprof : compositions(extra, n)) {
          std::vector<int> dzs;
          for (int z : zprof) dzs.push_back(s.dim(z));
          if (std::find(dzs.begin(), dzs.end(), 0) != dzs.end()) continue;
          // Inner profiles: z's grouped by the arity of each y.
          std::vector<Profile> inner(prof.size());
          Profile outer_after;
          int zi = 0;
          for (std::size_t j = 0; j < prof.size(); ++j) {
            for (int c = 0; c < prof[j]; ++c) inner[j].push_back(zprof[static_cast<std::size_t>(zi++)]);
            outer_after.push_back(total(inner[j]));
          }
          for_each_tuple(1, dzs, [&](int, const std::vector<int>& zs) {
            std::vector<ModVector> zv;
            for (std::size_t t = 0; t < zs.size(); ++t) zv.push_back(unit_vector(dzs[t], zs[t]));
            const ModVector lhs = compose_dense(*this, zprof, base, zv);
            std::vector<ModVector> inner_v;
            std::vector<int> tokens{s.degree(k, x)}, slots{0};
            std::vector<int> y_slot(prof.size()), z_slot(zs.size());
            int slot = 1, t = 0;
            for (std::size_t j = 0; j < prof.size(); ++j) {
              std::vector<ModVector> block(zv.begin() + t, zv.begin() + t + prof[j]);
              inner_v.push_back(compose_dense(*this, inner[j], yv[j], block));
              y_slot[j] = slot++;
              for (int c = 0; c < prof[j]; ++c) z_slot[static_cast<std::size_t>(t + c)] = slot++;
              t += prof[j];
            }
            std::vector<int> images, degs;
            images.push_back(1);
            degs.push_back(s.degree(k, x));
            for (std::size_t j = 0; j < prof.size(); ++j) {
              images.push_back(y_slot[j] + 1);
              degs.push_back(ydeg[j]);
            }
            for (std::size_t c = 0; c < zs.size(); ++c) {
              images.push_back(z_slot[c] + 1);
              degs.push_back(s.degree(zprof[c], zs[c]));
            }
            ModVector rhs = compose_dense(*this, outer_after, xv, inner_v);
            if (koszul_sign(Permutation(images), degs) < 0) rhs = neg(rhs);
            if (!(lhs == rhs)) operad_failure(Errc::InternalInvariant, "associativity", prof);
          });
        }
    });
  }
}

// ---------------------------------------------------------------- CooperadData

namespace {

bool is_left_counit(const CoTerm& t) { return t.profile.size() == 1; }
bool is_right_counit(const CoTerm& t) {
  return std::all_of(t.profile.begin(), t.profile.end(), [](int i) { return i == 1; });
}

using TermKey = std::tuple<Profile, int, std::vector<int>, Permutation>;

}  // namespace

CooperadData::CooperadData(SymmetricSequence seq, std::vector<std::vector<std::vector<CoTerm>>> decomposition)
    : seq_(std::move(seq)), delta_(std::move(decomposition)) {
  require_unit_arity(seq_, "a cooperad");
  const std::int64_t p = prime();
  delta_.resize(static_cast<std::size_t>(cap()));
  for (int n = 1; n <= cap(); ++n) {
    auto& per = delta_[static_cast<std::size_t>(n - 1)];
    if (per.size() > static_cast<std::size_t>(seq_.dim(n))) raise(Errc::SizeMismatch, "decomposition of a missing basis vector");
    per.resize(static_cast<std::size_t>(seq_.dim(n)));
    for (int c = 0; c < seq_.dim(n); ++c) {
      std::map<TermKey, std::int64_t> merged;
      for (const auto& t : per[static_cast<std::size_t>(c)]) {
        const int k = static_cast<int>(t.profile.size());
        if (k < 1 || total(t.profile) != n || t.ys.size() != t.profile.size())
          raise(Errc::ArityMismatch, "decomposition term of the wrong arity in arity " + std::to_string(n));
        if (t.x < 0 || t.x >= seq_.dim(k)) raise(Errc::BadIndex, "decomposition term: x out of range");
        for (std::size_t j = 0; j < t.ys.size(); ++j)
          if (t.ys[j] < 0 || t.ys[j] >= seq_.dim(t.profile[j])) raise(Errc::BadIndex, "decomposition term: y out of range");
        if (!is_pointed_shuffle(t.shuffle, t.profile)) raise(Errc::BadIndex, "decomposition term: not a pointed shuffle");
        auto& v = merged[{t.profile, t.x, t.ys, t.shuffle}];
        v = md(v + t.coefficient, p);
      }
      const TermKey left{Profile{n}, 0, {c}, Permutation::identity(n)};
      const TermKey right{Profile(static_cast<std::size_t>(n), 1), c, std::vector<int>(static_cast<std::size_t>(n), 0), Permutation::identity(n)};
      if (!merged.count(left)) merged[left] = 1;
      if (!merged.count(right)) merged[right] = 1;
      std::vector<CoTerm> terms;
      for (const auto& [key, v] : merged)
        if (v != 0) terms.push_back({v, std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key)});
      per[static_cast<std::size_t>(c)] = std::move(terms);
    }
  }
}

const std::vector<CoTerm>& CooperadData::decompose(int n, int c) const {
  if (n < 1 || n > cap()) raise(Errc::CapExceeded, "arity " + std::to_string(n) + " past the cap");
  if (c < 0 || c >= seq_.dim(n)) raise(Errc::BadIndex, "basis index out of range");
  return delta_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(c)];
}

std::vector<CoTerm> CooperadData::infinitesimal_decompose(int n, int c, int k) const {
  if (k < 0) raise(Errc::BadIndex, "negative k");
  std::vector<CoTerm> out;
  for (const auto& t : decompose(n, c)) {
    if (n == 1) continue;  // the reduced part starts in arity 2
    if (k == 0) {
      if (is_left_counit(t) || is_right_counit(t)) out.push_back(t);
      continue;
    }
    if (t.profile.size() < 2) continue;
    const auto big = std::count_if(t.profile.begin(), t.profile.end(), [](int i) { return i >= 2; });
    if (big == k) out.push_back(t);
  }
  return out;
}

bool CooperadData::primitive() const {
  for (const auto& per : delta_)
    for (const auto& terms : per)
      for (const auto& t : terms)
        if (!is_left_counit(t) && !is_right_counit(t)) return false;
  return true;
}

void CooperadData::validate() const {
  const std::int64_t p = prime();
  for (int n = 1; n <= cap(); ++n) {
    const int d = seq_.dim(n);
    // Counit: exactly 1 (x) c and c (x) (1..1).
    for (int c = 0; c < d; ++c)
      for (const auto& t : decompose(n, c)) {
        if (is_left_counit(t) && !(t.x == 0 && t.ys[0] == c && t.coefficient == 1))
          raise(Errc::InternalInvariant, "left counit fails in arity " + std::to_string(n));
        if (is_right_counit(t) && n > 1 && !(t.x == c && t.coefficient == 1))
          raise(Errc::InternalInvariant, "right counit fails in arity " + std::to_string(n));
      }
    // Delta(c) at (x, y, omega) equals Delta(omega^{-1} c) at (x, y, id).
    std::map<TermKey, ModVector> rows;
    std::set<std::tuple<Profile, int, std::vector<int>>> bases;
    for (int c = 0; c < d; ++c)
      for (const auto& t : decompose(n, c)) {
        auto& row = rows[{t.profile, t.x, t.ys, t.shuffle}];
        if (row.empty()) row.assign(static_cast<std::size_t>(d), 0);
        row[static_cast<std::size_t>(c)] = t.coefficient;
        bases.insert({t.profile, t.x, t.ys});
      }
    for (const auto& [prof, x, ys] : bases) {
      const TermKey id_key{prof, x, ys, Permutation::identity(n)};
      const ModVector zero(static_cast<std::size_t>(d), 0);
      const ModVector& id_row = rows.count(id_key) ? rows.at(id_key) : zero;
      for (const auto& w : pointed_shuffles(prof)) {
        const TermKey key{prof, x, ys, w};
        const ModVector& row = rows.count(key) ? rows.at(key) : zero;
        const ModMatrix& inv = seq_.action(n, w.inverse());
        for (int c = 0; c < d; ++c) {
          std::int64_t expect = 0;
          for (int c2 = 0; c2 < d; ++c2) expect = md(expect + inv.at(c2, c) * id_row[static_cast<std::size_t>(c2)], p);
          if (expect != row[static_cast<std::size_t>(c)])
            raise(Errc::NotEquivariant, "decomposition is not equivariant on profile " + profile_string(prof));
        }
      }
    }
  }
  dual_operad(*this).validate();
}

// ---------------------------------------------------------------- duality

namespace {

SymmetricSequence dual_sequence(const SymmetricSequence& s) {
  const std::int64_t p = s.prime();
  std::vector<SymmetricSequence::Component> comps;
  for (int n = 1; n <= s.cap(); ++n) {
    const auto& c = s.component(n);
    SymmetricSequence::Component out;
    for (std::size_t i = 0; i < c.names.size(); ++i) {
      out.names.push_back(c.names[i] + "*");
      out.degrees.push_back(-c.degrees[i]);
    }
    for (const auto& t : c.transpositions) out.transpositions.push_back(transpose(t));
    if (s.has_differential()) {
      // (d phi)(v) = -(-1)^{|phi|} phi(d v)
      const ModMatrix& dm = s.differential(n);
      ModMatrix dd(p, dm.rows(), dm.cols());
      for (int a = 0; a < dm.rows(); ++a)
        for (int b = 0; b < dm.cols(); ++b) {
          if (!dm.at(a, b)) continue;
          const bool odd_phi = (out.degrees[static_cast<std::size_t>(a)] & 1) != 0;
          dd.set(b, a, odd_phi ? dm.at(a, b) : p - dm.at(a, b));
        }
      out.differential = dd;
    }
    comps.push_back(std::move(out));
  }
  return SymmetricSequence(p, std::move(comps));
}

std::vector<int> tuple_degrees(const SymmetricSequence& s, const Profile& prof, int x, const std::vector<int>& ys) {
  std::vector<int> degs{s.degree(static_cast<int>(prof.size()), x)};
  for (std::size_t j = 0; j < ys.size(); ++j) degs.push_back(s.degree(prof[j], ys[j]));
  return degs;
}

}  // namespace

CooperadData dual_cooperad(const OperadData& op) {
  const auto& s = op.sequence();
  const std::int64_t p = op.prime();
  std::vector<std::vector<std::vector<CoTerm>>> delta(static_cast<std::size_t>(op.cap()));
  for (int n = 1; n <= op.cap(); ++n) delta[static_cast<std::size_t>(n - 1)].resize(static_cast<std::size_t>(s.dim(n)));
  for (const auto& prof : all_profiles(op.cap())) {
    const int n = total(prof);
    std::vector<int> dys;
    for (int i : prof) dys.push_back(s.dim(i));
    const auto shuffles = pointed_shuffles(prof);
    for_each_tuple(s.dim(static_cast<int>(prof.size())), dys, [&](int x, const std::vector<int>& ys) {
      const int sign = pairing_sign(tuple_degrees(s, prof, x, ys));
      const ModVector g = dense(op.compose(prof, x, ys), s.dim(n), p);
      for (const auto& w : shuffles) {
        const ModVector v = s.action(n, w).apply(g);
        for (std::size_t a = 0; a < v.size(); ++a)
          if (v[a]) delta[static_cast<std::size_t>(n - 1)][a].push_back({md(sign * v[a], p), prof, x, ys, w});
      }
    });
  }
  return CooperadData(dual_sequence(s), std::move(delta));
}

OperadData dual_operad(const CooperadData& co) {
  const auto& s = co.sequence();
  const std::int64_t p = co.prime();
  std::map<Profile, std::vector<SparseVector>> table;
  std::map<Profile, std::vector<ModVector>> dense_table;
  for (const auto& prof : all_profiles(co.cap())) {
    std::size_t size = static_cast<std::size_t>(s.dim(static_cast<int>(prof.size())));
    for (int i : prof) size *= static_cast<std::size_t>(s.dim(i));
    dense_table[prof].assign(size, ModVector(static_cast<std::size_t>(s.dim(total(prof))), 0));
  }
  for (int n = 1; n <= co.cap(); ++n)
    for (int c = 0; c < s.dim(n); ++c)
      for (const auto& t : co.decompose(n, c)) {
        if (!t.shuffle.is_identity()) continue;
        std::vector<int> dys;
        for (int i : t.profile) dys.push_back(s.dim(i));
        const int sign = pairing_sign(tuple_degrees(s, t.profile, t.x, t.ys));
        auto& col = dense_table[t.profile][radix(t.x, t.ys, dys)];
        col[static_cast<std::size_t>(c)] = md(col[static_cast<std::size_t>(c)] + sign * t.coefficient, p);
      }
  for (auto& [prof, cols] : dense_table) {
    auto& out = table[prof];
    for (const auto& col : cols) out.push_back(sparse(col));
  }
  return OperadData(dual_sequence(s), std::move(table));
}

// ---------------------------------------------------------------- built-ins

CommutativeAlgebra CommutativeAlgebra::exterior(std::int64_t p, int g) {
  if (g < 0 || g > 4) raise(Errc::CapExceeded, "exterior algebra on 0..4 generators");
  std::vector<unsigned> subsets;
  for (unsigned m = 0; m < (1u << g); ++m) subsets.push_back(m);
  std::stable_sort(subsets.begin(), subsets.end(), [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });
  std::map<unsigned, int> index;
  CommutativeAlgebra a;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    index[subsets[i]] = static_cast<int>(i);
    std::string name;
    for (int b = 0; b < g; ++b)
      if (subsets[i] >> b & 1u) name += "e" + std::to_string(b + 1);
    a.names.push_back(name.empty() ? "1" : name);
    a.degrees.push_back(std::popcount(subsets[i]));
  }
  const std::size_t d = subsets.size();
  a.product.assign(d, std::vector<SparseVector>(d));
  a.differential.assign(d, {});
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const unsigned s = subsets[i], t = subsets[j];
      if (s & t) continue;
      // Sign of sorting the concatenation: pairs (u in s, v in t) with u > v.
      int swaps = 0;
      for (int u = 0; u < g; ++u)
        if (s >> u & 1u)
          for (int v = 0; v < u; ++v)
            if (t >> v & 1u) ++swaps;
      a.product[i][j] = {{index.at(s | t), (swaps & 1) ? p - 1 : 1}};
    }
  return a;
}

CommutativeAlgebra CommutativeAlgebra::square_zero(std::int64_t p, std::vector<int> v_degrees, std::vector<SparseVector> v_differential) {
  const std::size_t m = v_degrees.size();
  if (v_differential.size() != m) raise(Errc::SizeMismatch, "one differential column per vector");
  CommutativeAlgebra a;
  a.names.push_back("1");
  a.degrees.push_back(0);
  for (std::size_t i = 0; i < m; ++i) {
    a.names.push_back("v" + std::to_string(i + 1));
    a.degrees.push_back(v_degrees[i]);
  }
  a.product.assign(m + 1, std::vector<SparseVector>(m + 1));
  for (std::size_t i = 0; i <= m; ++i) {
    a.product[0][i] = {{static_cast<int>(i), 1}};
    a.product[i][0] = {{static_cast<int>(i), 1}};
  }
  a.differential.assign(m + 1, {});
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& [j, c] : v_differential[i]) a.differential[i + 1].emplace_back(j + 1, md(c, p));
  return a;
}

OperadData associative_operad(std::int64_t p, int cap) {
  std::vector<SymmetricSequence::Component> comps;
  std::vector<std::map<Permutation, int>> index(static_cast<std::size_t>(cap + 1));
  for (int n = 1; n <= cap; ++n) {
    comps.push_back(SymmetricSequence::regular(p, n, "x", 0));
    const auto perms = all_permutations(n);
    for (std::size_t i = 0; i < perms.size(); ++i) index[static_cast<std::size_t>(n)][perms[i]] = static_cast<int>(i);
  }
  SymmetricSequence seq(p, std::move(comps));
  std::map<Profile, std::vector<SparseVector>> table;
  for (const auto& prof : all_profiles(cap)) {
    const int k = static_cast<int>(prof.size()), n = total(prof);
    std::vector<std::vector<Permutation>> perms;
    std::vector<int> dys, off(prof.size(), 0);
    for (std::size_t j = 0; j < prof.size(); ++j) {
      perms.push_back(all_permutations(prof[j]));
      dys.push_back(static_cast<int>(perms.back().size()));
      if (j) off[j] = off[j - 1] + prof[j - 1];
    }
    const auto outer = all_permutations(k);
    auto& cols = table[prof];
    for_each_tuple(static_cast<int>(outer.size()), dys, [&](int x, const std::vector<int>& ys) {
      // Substitute word y_j, shifted into block j, for the letter j of the word x.
      std::vector<int> word;
      for (int a = 1; a <= k; ++a) {
        const auto j = static_cast<std::size_t>(outer[static_cast<std::size_t>(x)](a) - 1);
        for (int v : perms[j][static_cast<std::size_t>(ys[j])].images()) word.push_back(off[j] + v);
      }
      cols.push_back({{index[static_cast<std::size_t>(n)].at(Permutation(word)), 1}});
    });
  }
  return OperadData(std::move(seq), std::move(table));
}

OperadData commutative_operad(std::int64_t p, int cap) {
  CommutativeAlgebra ground;
  ground.names = {"1"};
  ground.degrees = {0};
  ground.product = {{{{0, 1}}}};
  ground.differential = {{}};
  return commutative_operad(p, cap, ground);
}

OperadData unit_operad(std::int64_t p, int cap) {
  std::vector<SymmetricSequence::Component> comps;
  comps.push_back(SymmetricSequence::trivial(p, 1, "1", 0));
  for (int n = 2; n <= cap; ++n) {
    SymmetricSequence::Component c;
    c.transpositions.assign(static_cast<std::size_t>(n - 1), ModMatrix(p, 0, 0));
    comps.push_back(std::move(c));
  }
  return OperadData(SymmetricSequence(p, std::move(comps)), {});
}

OperadData commutative_operad(std::int64_t p, int cap, const CommutativeAlgebra& a) {
  const int d = static_cast<int>(a.names.size());
  std::vector<SymmetricSequence::Component> comps;
  ModMatrix dm(p, d, d);
  bool any = false;
  for (int i = 0; i < d; ++i)
    for (const auto& [j, c] : a.differential[static_cast<std::size_t>(i)]) {
      dm.add(j, i, c);
      any = true;
    }
  for (int n = 1; n <= cap; ++n) {
    SymmetricSequence::Component c{a.names, a.degrees, {}, std::nullopt};
    for (int i = 1; i < n; ++i) c.transpositions.push_back(ModMatrix::identity(p, d));
    if (any) c.differential = dm;
    comps.push_back(std::move(c));
  }
  if (cap >= 1 && d != 1) {
    // Arity 1 must be the ground field: keep only the unit there.
    comps[0] = SymmetricSequence::trivial(p, 1, a.names[0], 0);
  }
  SymmetricSequence seq(p, std::move(comps));
  auto multiply = [&](const ModVector& u, int b) {
    ModVector out(static_cast<std::size_t>(d), 0);
    for (int i = 0; i < d; ++i)
      if (u[static_cast<std::size_t>(i)]) axpy(out, u[static_cast<std::size_t>(i)], a.product[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)], p);
    return out;
  };
  std::map<Profile, std::vector<SparseVector>> table;
  for (const auto& prof : all_profiles(cap)) {
    const int k = static_cast<int>(prof.size());
    std::vector<int> dys;
    for (int i : prof) dys.push_back(seq.dim(i));
    auto& cols = table[prof];
    for_each_tuple(seq.dim(k), dys, [&](int x, const std::vector<int>& ys) {
      ModVector acc = unit_vector(d, x);
      for (int y : ys) acc = multiply(acc, y);
      if (total(prof) == 1) acc.resize(1);
      cols.push_back(sparse(acc));
    });
  }
  return OperadData(std::move(seq), std::move(table));
}

OperadData hadamard(const OperadData& a, const OperadData& b) {
  if (a.prime() != b.prime()) raise(Errc::RingMismatch, "Hadamard product over different fields");
  if (a.cap() != b.cap()) raise(Errc::CapExceeded, "Hadamard product of different caps");
  const std::int64_t p = a.prime();
  const auto &sa = a.sequence(), &sb = b.sequence();
  std::vector<SymmetricSequence::Component> comps;
  for (int n = 1; n <= a.cap(); ++n) {
    SymmetricSequence::Component c;
    const int da = sa.dim(n), db = sb.dim(n);
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < db; ++j) {
        c.names.push_back(sa.name(n, i) + "|" + sb.name(n, j));
        c.degrees.push_back(sa.degree(n, i) + sb.degree(n, j));
      }
    for (int i = 1; i < n; ++i) {
      const auto t = transposition(n, i);
      c.transpositions.push_back(kron(sa.action(n, t), sb.action(n, t)));
    }
    if (sa.has_differential() || sb.has_differential()) {
      ModMatrix dm = kron(sa.differential(n), ModMatrix::identity(p, db));
      ModMatrix right = kron(ModMatrix::identity(p, da), sb.differential(n));
      for (int r = 0; r < dm.rows(); ++r)
        for (int col = 0; col < dm.cols(); ++col)
          if (right.at(r, col)) dm.add(r, col, (sa.degree(n, col / db) & 1) ? p - right.at(r, col) : right.at(r, col));
      c.differential = dm;
    }
    comps.push_back(std::move(c));
  }
  SymmetricSequence seq(p, std::move(comps));
  std::map<Profile, std::vector<SparseVector>> table;
  for (const auto& prof : all_profiles(a.cap())) {
    const int k = static_cast<int>(prof.size()), n = total(prof);
    std::vector<int> dys;
    for (int i : prof) dys.push_back(seq.dim(i));
    auto& cols = table[prof];
    for_each_tuple(seq.dim(k), dys, [&](int x, const std::vector<int>& ys) {
      const int db_k = sb.dim(k);
      const int xa = x / db_k, xb = x % db_k;
      std::vector<int> ya, yb;
      int parity = 0, passed = sb.degree(k, xb);
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const int dbj = sb.dim(prof[j]);
        ya.push_back(ys[j] / dbj);
        yb.push_back(ys[j] % dbj);
        // p_j moves left past q and q_1..q_{j-1}.
        parity ^= (sa.degree(prof[j], ya.back()) & passed) & 1;
        passed += sb.degree(prof[j], yb.back());
      }
      const SparseVector ga = a.compose(prof, xa, ya), gb = b.compose(prof, xb, yb);
      ModVector out(static_cast<std::size_t>(seq.dim(n)), 0);
      const int dbn = sb.dim(n);
      for (const auto& [i, u] : ga)
        for (const auto& [j, v] : gb) out[static_cast<std::size_t>(i * dbn + j)] = md(out[static_cast<std::size_t>(i * dbn + j)] + (parity ? -1 : 1) * u * v, p);
      cols.push_back(sparse(out));
    });
  }
  return OperadData(std::move(seq), std::move(table));
}

CooperadData primitive_cooperad(SymmetricSequence seq) {
  const int cap = seq.cap();
  return CooperadData(std::move(seq), std::vector<std::vector<std::vector<CoTerm>>>(static_cast<std::size_t>(cap)));
}

CooperadData primitive_family(std::int64_t p, int cap, unsigned variant) {
  std::vector<SymmetricSequence::Component> comps;
  comps.push_back(SymmetricSequence::trivial(p, 1, "1", 0));
  for (int n = 2; n <= cap; ++n) {
    auto c = SymmetricSequence::sum(p, n,
                                    {SymmetricSequence::trivial(p, n, "t" + std::to_string(n), -1),
                                     SymmetricSequence::trivial(p, n, "s" + std::to_string(n), -1, true),
                                     SymmetricSequence::trivial(p, n, "u" + std::to_string(n), 0)});
    if (variant >> (n - 2) & 1u) {
      ModMatrix dm(p, 3, 3);
      dm.set(2, 0, 1);
      c.differential = dm;
    }
    comps.push_back(std::move(c));
  }
  return primitive_cooperad(SymmetricSequence(p, std::move(comps)));
}

namespace {

std::optional<int> suffix_number(const std::string& name, const std::string& prefix, const std::string& suffix = "") {
  if (name.size() <= prefix.size() + suffix.size() || name.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  if (!suffix.empty() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) return std::nullopt;
  const std::string digits = name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) return std::nullopt;
  return std::stoi(digits);
}

}  // namespace

OperadPtr operad_by_name(const std::string& name, std::int64_t p, int cap) {
  if (name == "as") return std::make_shared<const OperadData>(associative_operad(p, cap));
  if (name == "com") return std::make_shared<const OperadData>(commutative_operad(p, cap));
  if (name == "unit") return std::make_shared<const OperadData>(unit_operad(p, cap));
  if (name == "com_square_zero")
    return std::make_shared<const OperadData>(commutative_operad(p, cap, CommutativeAlgebra::square_zero(p, {0, 1}, {{{1, 1}}, {}})));
  if (auto g = suffix_number(name, "com_exterior"))
    return std::make_shared<const OperadData>(commutative_operad(p, cap, CommutativeAlgebra::exterior(p, *g)));
  if (auto g = suffix_number(name, "as_exterior"))
    return std::make_shared<const OperadData>(hadamard(associative_operad(p, cap), commutative_operad(p, cap, CommutativeAlgebra::exterior(p, *g))));
  raise(Errc::ConfigError, "unknown operad '" + name + "'");
}

CooperadPtr cooperad_by_name(const std::string& name, std::int64_t p, int cap) {
  if (name == "primitive") return std::make_shared<const CooperadData>(primitive_family(p, cap, 0));
  if (auto v = suffix_number(name, "primitive")) return std::make_shared<const CooperadData>(primitive_family(p, cap, static_cast<unsigned>(*v)));
  const std::string tail = "_dual";
  if (name.size() > tail.size() && name.compare(name.size() - tail.size(), tail.size(), tail) == 0)
    return std::make_shared<const CooperadData>(dual_cooperad(*operad_by_name(name.substr(0, name.size() - tail.size()), p, cap)));
  raise(Errc::ConfigError, "unknown cooperad '" + name + "'");
}

// ---------------------------------------------------------------- JSON

namespace {

ModMatrix matrix_from_json(const nlohmann::json& rows, int r, int c, std::int64_t p, const std::string& what) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != r) raise(Errc::ConfigError, what + ": expected " + std::to_string(r) + " rows");
  ModMatrix m(p, r, c);
  for (int i = 0; i < r; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != c) raise(Errc::ConfigError, what + ": expected " + std::to_string(c) + " columns");
    for (int j = 0; j < c; ++j) {
      if (!row[static_cast<std::size_t>(j)].is_number_integer()) raise(Errc::ConfigError, what + ": entries must be integers");
      m.set(i, j, md(row[static_cast<std::size_t>(j)].get<std::int64_t>(), p));
    }
  }
  return m;
}

SymmetricSequence sequence_from_json(const nlohmann::json& j, std::int64_t& p) {
  try {
    p = j.at("prime").get<std::int64_t>();
    const int cap = j.at("arity_cap").get<int>();
    if (cap < 1 || cap > kMaxCap) raise(Errc::CapExceeded, "arity_cap outside 1.." + std::to_string(kMaxCap));
    std::vector<std::optional<SymmetricSequence::Component>> comps(static_cast<std::size_t>(cap));
    for (const auto& cj : j.at("components")) {
      const int n = cj.at("arity").get<int>();
      if (n < 1 || n > cap) raise(Errc::CapExceeded, "component arity past the cap");
      SymmetricSequence::Component c;
      for (const auto& b : cj.at("basis")) {
        c.names.push_back(b.at("name").get<std::string>());
        c.degrees.push_back(b.value("degree", 0));
      }
      const int d = static_cast<int>(c.names.size());
      const auto action = cj.value("action", nlohmann::json::array());
      if (static_cast<int>(action.size()) != n - 1) raise(Errc::ConfigError, "arity " + std::to_string(n) + ": need n-1 action matrices");
      for (const auto& m : action) c.transpositions.push_back(matrix_from_json(m, d, d, p, "action"));
      if (cj.contains("differential")) c.differential = matrix_from_json(cj.at("differential"), d, d, p, "differential");
      comps[static_cast<std::size_t>(n - 1)] = std::move(c);
    }
    std::vector<SymmetricSequence::Component> out;
    for (int n = 1; n <= cap; ++n) {
      if (comps[static_cast<std::size_t>(n - 1)]) {
        out.push_back(std::move(*comps[static_cast<std::size_t>(n - 1)]));
      } else if (n == 1) {
        out.push_back(SymmetricSequence::trivial(p, 1, "1", 0));
      } else {
        SymmetricSequence::Component c;
        c.transpositions.assign(static_cast<std::size_t>(n - 1), ModMatrix(p, 0, 0));
        out.push_back(std::move(c));
      }
    }
    return SymmetricSequence(p, std::move(out));
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::ConfigError, std::string("symmetric sequence: ") + e.what());
  }
}

Profile profile_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[1].is_array()) raise(Errc::ConfigError, "profile must be [k, [i_1, ..., i_k]]");
  Profile prof = j[1].get<Profile>();
  if (static_cast<int>(prof.size()) != j[0].get<int>()) raise(Errc::ConfigError, "profile length differs from k");
  return prof;
}

}  // namespace

OperadPtr operad_from_json(const nlohmann::json& j) {
  std::int64_t p = 2;
  SymmetricSequence seq = sequence_from_json(j, p);
  std::map<Profile, std::vector<SparseVector>> table;
  try {
    for (const auto& entry : j.value("composition", nlohmann::json::array())) {
      const Profile prof = profile_from_json(entry.at("profile"));
      if (total(prof) > seq.cap()) raise(Errc::CapExceeded, "composition profile past the cap");
      int cols = seq.dim(static_cast<int>(prof.size()));
      for (int i : prof) cols *= seq.dim(i);
      const ModMatrix m = matrix_from_json(entry.at("matrix"), seq.dim(total(prof)), cols, p, "composition");
      auto& out = table[prof];
      for (int c = 0; c < cols; ++c) {
        SparseVector col;
        for (int r = 0; r < m.rows(); ++r)
          if (m.at(r, c)) col.emplace_back(r, m.at(r, c));
        out.push_back(std::move(col));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::ConfigError, std::string("operad: ") + e.what());
  }
  auto op = std::make_shared<const OperadData>(std::move(seq), std::move(table));
  op->validate();
  return op;
}

CooperadPtr cooperad_from_json(const nlohmann::json& j) {
  std::int64_t p = 2;
  SymmetricSequence seq = sequence_from_json(j, p);
  std::vector<std::vector<std::vector<CoTerm>>> delta(static_cast<std::size_t>(seq.cap()));
  for (int n = 1; n <= seq.cap(); ++n) delta[static_cast<std::size_t>(n - 1)].resize(static_cast<std::size_t>(seq.dim(n)));
  try {
    if (!j.value("primitive", false))
      for (const auto& entry : j.value("decomposition", nlohmann::json::array())) {
        const Profile prof = profile_from_json(entry.at("profile"));
        const int n = total(prof);
        if (n > seq.cap()) raise(Errc::CapExceeded, "decomposition profile past the cap");
        const auto shuffles = pointed_shuffles(prof);
        std::vector<int> dys;
        for (int i : prof) dys.push_back(seq.dim(i));
        int rows = seq.dim(static_cast<int>(prof.size()));
        for (int d : dys) rows *= d;
        rows *= static_cast<int>(shuffles.size());
        const ModMatrix m = matrix_from_json(entry.at("matrix"), rows, seq.dim(n), p, "decomposition");
        int r = 0;
        for_each_tuple(seq.dim(static_cast<int>(prof.size())), dys, [&](int x, const std::vector<int>& ys) {
          for (const auto& w : shuffles) {
            for (int c = 0; c < seq.dim(n); ++c)
              if (m.at(r, c)) delta[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(c)].push_back({m.at(r, c), prof, x, ys, w});
            ++r;
          }
        });
      }
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::ConfigError, std::string("cooperad: ") + e.what());
  }
  auto co = std::make_shared<const CooperadData>(std::move(seq), std::move(delta));
  co->validate();
  return co;
}

}  // namespace gpl
