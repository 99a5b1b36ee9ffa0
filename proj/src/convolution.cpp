#include <algorithm>
#include <functional>
#include <string>

#include "gpl/convolution.hpp"
#include "gpl/error.hpp"
#include "gpl/parallel.hpp"

namespace gpl {

namespace {

// Slices above this many matrix entries are refused rather than eliminated densely.
constexpr std::size_t kSliceBudget = std::size_t{1} << 16;

std::int64_t md(std::int64_t v, std::int64_t p) {
  v %= p;
  return v < 0 ? v + p : v;
}

Permutation transposition(int n, int i) {
  auto v = Permutation::identity(n).images();
  std::swap(v[static_cast<std::size_t>(i - 1)], v[static_cast<std::size_t>(i)]);
  return Permutation(std::move(v));
}


ModMatrix sub(const ModMatrix& a, const ModMatrix& b) {
  ModMatrix out = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (b.at(i, j)) out.add(i, j, a.prime() - b.at(i, j));
  return out;
}

void add_into(ModMatrix& a, const ModMatrix& b, std::int64_t s = 1) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (b.at(i, j)) a.add(i, j, s * b.at(i, j));
}

/// Sparse row echelon form over F_p; each stored row has leading coefficient 1.
class SparseEchelon {
 public:
  explicit SparseEchelon(std::int64_t p) : p_(p) {}

  void insert(SparseVector row) {
    while (!row.empty()) {
      auto it = rows_.find(row.front().first);
      if (it == rows_.end()) {
        const std::int64_t inv = mod_inverse(row.front().second, p_);
        for (auto& [c, v] : row) v = v * inv % p_;
        rows_.emplace(row.front().first, std::move(row));
        return;
      }
      row = combine(row, it->second, p_ - row.front().second);
    }
  }

  std::vector<int> free_columns(int cols) const {
    std::vector<int> out;
    for (int c = 0; c < cols; ++c)
      if (!rows_.count(c)) out.push_back(c);
    return out;
  }

  /// Kernel vector with 1 at the free column f and 0 at every other free column.
  SparseVector kernel_vector(int f, int cols) const {
    ModVector v(static_cast<std::size_t>(cols), 0);
    v[static_cast<std::size_t>(f)] = 1;
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
      std::int64_t s = 0;
      for (std::size_t i = 1; i < it->second.size(); ++i)
        s = (s + it->second[i].second * v[static_cast<std::size_t>(it->second[i].first)]) % p_;
      v[static_cast<std::size_t>(it->first)] = md(-s, p_);
    }
    SparseVector out;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i]) out.emplace_back(static_cast<int>(i), v[i]);
    return out;
  }

 private:
  static SparseVector combine(const SparseVector& a, const SparseVector& b, std::int64_t s, std::int64_t p) {
    SparseVector out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.emplace_back(b[j].first, s * b[j].second % p);
        ++j;
      } else {
        const std::int64_t v = (a[i].second + s * b[j].second) % p;
        if (v) out.emplace_back(a[i].first, v);
        ++i;
        ++j;
      }
    }
    return out;
  }
  SparseVector combine(const SparseVector& a, const SparseVector& b, std::int64_t s) const { return combine(a, b, s, p_); }

  std::int64_t p_;
  std::map<int, SparseVector> rows_;
};

}  // namespace

struct Convolution::Core {
  struct Slice {
    int arity = 0, degree = 0;
    std::vector<std::pair<int, int>> entries;  // (row in P, column in C)
    std::vector<int> free;                     // entry positions read as coordinates
    std::vector<SparseVector> kernel;          // over entries
    int offset = 0;                            // first basis index
  };

  CooperadPtr co;
  OperadPtr op;
  std::int64_t p = 2;
  int cap = 1;
  std::vector<Slice> slices;
  std::vector<std::pair<int, int>> locate;  // basis index -> (slice, position)
  std::vector<std::vector<std::vector<CoTerm>>> id_terms;  // identity-shuffle terms per (n, c)

  const SymmetricSequence& P() const { return op->sequence(); }
  const SymmetricSequence& C() const { return co->sequence(); }

  HomElement zero() const {
    HomElement h;
    for (int n = 1; n <= cap; ++n) h.parts.emplace_back(p, P().dim(n), C().dim(n));
    return h;
  }

  int entry_degree(int n, int a, int b) const { return P().degree(n, a) - C().degree(n, b); }

  ModMatrix basis_part(int i) const {
    const auto& [s, j] = locate[static_cast<std::size_t>(i)];
    const Slice& sl = slices[static_cast<std::size_t>(s)];
    ModMatrix m(p, P().dim(sl.arity), C().dim(sl.arity));
    for (const auto& [e, c] : sl.kernel[static_cast<std::size_t>(j)]) {
      const auto& [a, b] = sl.entries[static_cast<std::size_t>(e)];
      m.set(a, b, c);
    }
    return m;
  }

  int arity_of(int i) const { return slices[static_cast<std::size_t>(locate[static_cast<std::size_t>(i)].first)].arity; }

  /// Coordinates of an invariant arity-n matrix, slice by slice.
  SparseColumn coordinates(int n, const ModMatrix& f) const {
    SparseColumn out;
    for (const auto& sl : slices) {
      if (sl.arity != n) continue;
      for (std::size_t j = 0; j < sl.free.size(); ++j) {
        const auto& [a, b] = sl.entries[static_cast<std::size_t>(sl.free[j])];
        if (f.at(a, b)) out.emplace_back(sl.offset + static_cast<int>(j), f.at(a, b));
      }
    }
    return out;
  }

  bool invariant(int n, const ModMatrix& f) const {
    for (int i = 1; i < n; ++i) {
      const auto t = transposition(n, i);
      if (!(P().action(n, t) * f == f * C().action(n, t))) return false;
    }
    return true;
  }

  HomElement differential(const HomElement& f) const {
    HomElement out = zero();
    for (int n = 1; n <= cap; ++n) {
      const ModMatrix& F = f.at(n);
      ModMatrix twisted = F;
      for (int a = 0; a < F.rows(); ++a)
        for (int b = 0; b < F.cols(); ++b)
          if (F.at(a, b) && (entry_degree(n, a, b) & 1)) twisted.set(a, b, p - F.at(a, b));
      out.at(n) = sub(P().differential(n) * F, twisted * C().differential(n));
    }
    return out;
  }

  /// gamma(head(x); tail_j(y_j)) on one identity-shuffle term, with the Koszul signs of the maps
  /// passing x and the earlier y's. tail[j] == nullptr means the unit on C(1).
  void evaluate_term(const CoTerm& t, const ModMatrix& head, const std::vector<const ModMatrix*>& tail, std::int64_t coef,
                     ModVector& out) const {
    const int k = static_cast<int>(t.profile.size());
    std::vector<int> bs(t.ys.size());
    std::function<void(std::size_t, std::int64_t, int, int)> rec = [&](std::size_t j, std::int64_t c, int parity, int passed) {
      if (j == t.ys.size()) {
        const std::int64_t s = parity ? p - c : c;
        for (int a = 0; a < head.rows(); ++a) {
          const std::int64_t h = head.at(a, t.x);
          if (!h) continue;
          for (const auto& [r, v] : op->compose(t.profile, a, bs))
            out[static_cast<std::size_t>(r)] = md(out[static_cast<std::size_t>(r)] + s * h % p * v, p);
        }
        return;
      }
      const int arity = t.profile[j], y = t.ys[j];
      const int next = passed + C().degree(arity, y);
      if (tail[j] == nullptr) {
        bs[j] = 0;
        rec(j + 1, c, parity, next);
        return;
      }
      const ModMatrix& g = *tail[j];
      for (int b = 0; b < g.rows(); ++b) {
        const std::int64_t v = g.at(b, y);
        if (!v) continue;
        bs[j] = b;
        rec(j + 1, c * v % p, parity ^ (entry_degree(arity, b, y) & passed & 1), next);
      }
    };
    rec(0, md(coef, p), 0, C().degree(k, t.x));
  }

  /// Delta, then head on x and g on every y, then gamma and the shuffle; only terms accepted by pick.
  HomElement evaluate(const HomElement& head, const HomElement& g, const std::function<bool(const CoTerm&)>& pick) const {
    HomElement out = zero();
    for (int n = 1; n <= cap; ++n) {
      ModMatrix& res = out.at(n);
      const int dp = P().dim(n);
      std::map<Permutation, std::vector<SparseVector>> columns;  // sparse rho_P(omega), built on demand
      ModVector v(static_cast<std::size_t>(dp), 0);
      for (int c = 0; c < C().dim(n); ++c) {
        for (const auto& t : co->decompose(n, c)) {
          if (!pick(t)) continue;
          std::vector<const ModMatrix*> tail;
          for (int i : t.profile) tail.push_back(&g.at(i));
          std::fill(v.begin(), v.end(), 0);
          evaluate_term(t, head.at(static_cast<int>(t.profile.size())), tail, t.coefficient, v);
          if (t.shuffle.is_identity()) {
            for (int a = 0; a < dp; ++a)
              if (v[static_cast<std::size_t>(a)]) res.add(a, c, v[static_cast<std::size_t>(a)]);
            continue;
          }
          auto it = columns.find(t.shuffle);
          if (it == columns.end()) {
            const ModMatrix& rho = P().action(n, t.shuffle);
            std::vector<SparseVector> cols(static_cast<std::size_t>(dp));
            for (int a = 0; a < dp; ++a)
              for (int r = 0; r < dp; ++r)
                if (rho.at(r, a)) cols[static_cast<std::size_t>(a)].emplace_back(r, rho.at(r, a));
            it = columns.emplace(t.shuffle, std::move(cols)).first;
          }
          for (int a = 0; a < dp; ++a) {
            const std::int64_t x = v[static_cast<std::size_t>(a)];
            if (!x) continue;
            for (const auto& [r, w] : it->second[static_cast<std::size_t>(a)]) res.add(r, c, x * w % p);
          }
        }
      }
    }
    return out;
  }

  SparseColumn basis_brace(int head, const std::vector<std::pair<int, int>>& args) const {
    std::vector<int> tokens, reps;
    for (const auto& [j, r] : args) {
      if (r <= 0) continue;
      reps.push_back(r);
      for (int i = 0; i < r; ++i) tokens.push_back(j);
    }
    if (tokens.empty()) return coordinates(arity_of(head), basis_part(head));
    const int k = arity_of(head);
    const int r = static_cast<int>(tokens.size());
    if (r > k) return {};
    int n = k;
    std::vector<int> degrees;
    for (int t : tokens) {
      n += arity_of(t) - 1;
      degrees.push_back(slices[static_cast<std::size_t>(locate[static_cast<std::size_t>(t)].first)].degree);
    }
    if (n > cap) return {};
    const ModMatrix f = basis_part(head);
    std::map<int, ModMatrix> hom;
    for (int t : tokens)
      if (!hom.count(t)) hom.emplace(t, basis_part(t));

    std::map<Profile, ModMatrix> by_profile;
    for (const auto& sigma : shuffles(reps)) {
      const int sign = koszul_sign(sigma, degrees);
      std::vector<int> arranged(static_cast<std::size_t>(r));
      for (int i = 1; i <= r; ++i) arranged[static_cast<std::size_t>(sigma(i) - 1)] = tokens[static_cast<std::size_t>(i - 1)];
      // Choose the r positions among the k inputs of the head.
      std::vector<int> pick(static_cast<std::size_t>(k), 0);
      std::fill(pick.end() - r, pick.end(), 1);
      do {
        Profile prof(static_cast<std::size_t>(k), 1);
        std::vector<const ModMatrix*> tail(static_cast<std::size_t>(k), nullptr);
        int m = 0;
        for (int i = 0; i < k; ++i)
          if (pick[static_cast<std::size_t>(i)]) {
            const int tok = arranged[static_cast<std::size_t>(m++)];
            prof[static_cast<std::size_t>(i)] = arity_of(tok);
            tail[static_cast<std::size_t>(i)] = &hom.at(tok);
          }
        auto it = by_profile.find(prof);
        if (it == by_profile.end()) it = by_profile.emplace(prof, ModMatrix(p, P().dim(n), C().dim(n))).first;
        for (int c = 0; c < C().dim(n); ++c) {
          ModVector v(static_cast<std::size_t>(P().dim(n)), 0);
          for (const auto& t : id_terms[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(c)])
            if (t.profile == prof) evaluate_term(t, f, tail, sign > 0 ? t.coefficient : -t.coefficient, v);
          for (std::size_t a = 0; a < v.size(); ++a)
            if (v[a]) it->second.add(static_cast<int>(a), c, v[a]);
        }
      } while (std::next_permutation(pick.begin(), pick.end()));
    }
    ModMatrix result(p, P().dim(n), C().dim(n));
    for (const auto& [prof, g] : by_profile) {
      if (g.is_zero()) continue;
      for (const auto& w : pointed_shuffles(prof)) add_into(result, P().action(n, w) * g * C().action(n, w.inverse()));
    }
    return coordinates(n, result);
  }
};

Convolution::Convolution(CooperadPtr c, OperadPtr p) {
  if (!c || !p) raise(Errc::ConfigError, "missing cooperad or operad");
  if (c->prime() != p->prime()) raise(Errc::RingMismatch, "cooperad and operad over different fields");
  if (c->cap() != p->cap()) raise(Errc::CapExceeded, "cooperad and operad with different arity caps");
  auto core = std::make_shared<Core>();
  core->co = std::move(c);
  core->op = std::move(p);
  core->p = core->op->prime();
  core->cap = core->op->cap();
  const auto& P = core->P();
  const auto& C = core->C();
  const std::int64_t q = core->p;

  core->id_terms.resize(static_cast<std::size_t>(core->cap));
  for (int n = 1; n <= core->cap; ++n)
    for (int b = 0; b < C.dim(n); ++b) {
      std::vector<CoTerm> ts;
      for (const auto& t : core->co->decompose(n, b))
        if (t.shuffle.is_identity()) ts.push_back(t);
      core->id_terms[static_cast<std::size_t>(n - 1)].push_back(std::move(ts));
    }

  for (int n = 2; n <= core->cap; ++n) {
    std::map<int, std::vector<std::pair<int, int>>> by_degree;
    for (int a = 0; a < P.dim(n); ++a)
      for (int b = 0; b < C.dim(n); ++b) by_degree[core->entry_degree(n, a, b)].emplace_back(a, b);
    for (auto& [k, entries] : by_degree) {
      if (entries.size() > kSliceBudget)
        raise(Errc::BudgetExceeded, "arity " + std::to_string(n) + " has " + std::to_string(entries.size()) +
                                        " entries in degree " + std::to_string(k) + ", above " + std::to_string(kSliceBudget));
      Core::Slice sl;
      sl.arity = n;
      sl.degree = k;
      sl.entries = std::move(entries);
      core->slices.push_back(std::move(sl));
    }
  }

  parallel_for(core->slices.size(), [&](std::size_t s) {
    auto& sl = core->slices[s];
    const int n = sl.arity;
    const int e = static_cast<int>(sl.entries.size());
    std::map<std::pair<int, int>, int> pos;
    for (int i = 0; i < e; ++i) pos[sl.entries[static_cast<std::size_t>(i)]] = i;
    // Row (i, a, b): (rho_P(s_i) F - F rho_C(s_i))(a, b) = 0.
    SparseEchelon ech(q);
    for (int i = 1; i < n; ++i) {
      const auto t = transposition(n, i);
      const ModMatrix& rp = P.action(n, t);
      const ModMatrix& rc = C.action(n, t);
      for (const auto& [a, b] : sl.entries) {
        std::map<int, std::int64_t> row;
        for (int a2 = 0; a2 < P.dim(n); ++a2)
          if (rp.at(a, a2))
            if (auto it = pos.find({a2, b}); it != pos.end()) row[it->second] += rp.at(a, a2);
        for (int b2 = 0; b2 < C.dim(n); ++b2)
          if (rc.at(b2, b))
            if (auto it = pos.find({a, b2}); it != pos.end()) row[it->second] += q - rc.at(b2, b);
        SparseVector sv;
        for (const auto& [c, v] : row)
          if (md(v, q)) sv.emplace_back(c, md(v, q));
        ech.insert(std::move(sv));
      }
    }
    sl.free = ech.free_columns(e);
    for (int f : sl.free) sl.kernel.push_back(ech.kernel_vector(f, e));
    if (sl.kernel.size() != sl.free.size()) raise(Errc::InternalInvariant, "kernel basis does not match free columns");
  });

  std::vector<BasisVector> basis;
  for (std::size_t s = 0; s < core->slices.size(); ++s) {
    auto& sl = core->slices[s];
    sl.offset = static_cast<int>(basis.size());
    for (std::size_t j = 0; j < sl.kernel.size(); ++j) {
      basis.push_back({"h" + std::to_string(sl.arity) + "^" + std::to_string(sl.degree) + "_" + std::to_string(j), sl.degree, sl.arity - 1});
      core->locate.emplace_back(static_cast<int>(s), static_cast<int>(j));
    }
  }

  std::vector<SparseColumn> diff(basis.size());
  parallel_for(basis.size(), [&](std::size_t i) {
    HomElement h = core->zero();
    const int n = core->arity_of(static_cast<int>(i));
    h.at(n) = core->basis_part(static_cast<int>(i));
    diff[i] = core->coordinates(n, core->differential(h).at(n));
  });

  core_ = core;
  std::shared_ptr<const Core> shared = core;
  algebra_ = std::make_shared<const FiniteAlgebra>(
      q, std::move(basis), std::move(diff),
      [shared](int head, const std::vector<std::pair<int, int>>& args) { return shared->basis_brace(head, args); });
}

const CooperadData& Convolution::cooperad() const { return *core_->co; }
const OperadData& Convolution::operad() const { return *core_->op; }

HomElement Convolution::zero() const { return core_->zero(); }

HomElement Convolution::unit() const {
  HomElement h = zero();
  h.at(1).set(0, 0, 1);
  return h;
}

HomElement Convolution::add(const HomElement& a, const HomElement& b) const {
  HomElement out = a;
  for (int n = 1; n <= cap(); ++n) add_into(out.at(n), b.at(n));
  return out;
}

HomElement Convolution::scale(const HomElement& a, std::int64_t s) const {
  HomElement out = zero();
  for (int n = 1; n <= cap(); ++n) add_into(out.at(n), a.at(n), md(s, prime()));
  return out;
}

HomElement Convolution::to_hom(const FiniteElement& x) const {
  if (x.algebra() != algebra_) raise(Errc::ModelMismatch, "element of another algebra");
  if (x.ring().is_local()) raise(Errc::WrongRingKind, "only F_p coefficients map to Hom");
  HomElement out = zero();
  for (int i = 0; i < algebra_->dim(); ++i) {
    const auto c = x.coefficient(i).residue();
    if (c) add_into(out.at(core_->arity_of(i)), core_->basis_part(i), c);
  }
  return out;
}

bool Convolution::is_equivariant(const HomElement& f) const {
  for (int n = 1; n <= cap(); ++n)
    if (!core_->invariant(n, f.at(n))) return false;
  return true;
}

FiniteElement Convolution::to_element(const HomElement& f) const {
  if (static_cast<int>(f.parts.size()) != cap()) raise(Errc::SizeMismatch, "one part per arity expected");
  if (!f.at(1).is_zero()) raise(Errc::ArityMismatch, "the reduced convolution algebra has nothing in arity 1");
  if (!is_equivariant(f)) raise(Errc::NotEquivariant, "map is not Sigma-equivariant");
  const FiniteModel m = model();
  FiniteElement out = m.zero();
  for (int n = 2; n <= cap(); ++n)
    for (const auto& [i, c] : core_->coordinates(n, f.at(n))) out.add(i, Scalar::from_integer(static_cast<long long>(c), m.ring()));
  if (!(to_hom(out) == f)) raise(Errc::InternalInvariant, "invariant map not recovered from its coordinates");
  return out;
}

std::optional<int> Convolution::degree(const HomElement& f) const {
  std::optional<int> deg;
  for (int n = 1; n <= cap(); ++n) {
    const ModMatrix& F = f.at(n);
    for (int a = 0; a < F.rows(); ++a)
      for (int b = 0; b < F.cols(); ++b) {
        if (!F.at(a, b)) continue;
        const int k = core_->entry_degree(n, a, b);
        if (deg && *deg != k) return std::nullopt;
        deg = k;
      }
  }
  return deg;
}

HomElement Convolution::differential(const HomElement& f) const { return core_->differential(f); }

HomElement Convolution::hom_brace(const HomElement& f, const std::vector<std::pair<HomElement, int>>& args) const {
  const FiniteModel m = model();
  std::vector<std::pair<FiniteElement, int>> elems;
  for (const auto& [g, r] : args) elems.emplace_back(to_element(g), r);
  return to_hom(m.brace(to_element(f), elems));
}

HomElement Convolution::hom_brace_one_input(const HomElement& f, const HomElement& g, int k) const {
  if (k < 0) raise(Errc::BadIndex, "negative brace weight");
  if (k == 0) return f;
  return core_->evaluate(f, add(unit(), g), [k](const CoTerm& t) {
    if (t.profile.size() < 2) return false;
    return std::count_if(t.profile.begin(), t.profile.end(), [](int i) { return i >= 2; }) == k;
  });
}

namespace {

void require_unital(const HomElement& g, const char* what) {
  const ModMatrix& u = g.at(1);
  if (u.rows() != 1 || u.cols() != 1 || u.at(0, 0) != 1) raise(Errc::NotUnital, std::string(what) + " must be 1 on C(1)");
}

std::optional<int> first_nonzero(const HomElement& h) {
  for (std::size_t n = 0; n < h.parts.size(); ++n)
    if (!h.parts[n].is_zero()) return static_cast<int>(n + 1);
  return std::nullopt;
}

}  // namespace

HomElement Convolution::composite(const HomElement& a, const HomElement& g) const {
  require_unital(g, "second argument");
  return core_->evaluate(a, g, [](const CoTerm&) { return true; });
}

HomElement Convolution::circ_full(const HomElement& f, const HomElement& g) const {
  require_unital(f, "first argument");
  return composite(f, g);
}

McCertificate Convolution::mc_certificate(const HomElement& alpha) const {
  const auto d = degree(alpha);
  if (first_nonzero(alpha) && d != 1) raise(Errc::DegreeError, "Maurer-Cartan candidate must have degree 1");
  if (!alpha.at(1).is_zero()) raise(Errc::ArityMismatch, "Maurer-Cartan candidate must vanish on C(1)");
  McCertificate out;
  out.residual = add(differential(alpha), hom_brace_one_input(alpha, alpha, 1));
  out.first_failing_arity = first_nonzero(out.residual);
  out.certified = !out.first_failing_arity;
  return out;
}

HomotopyCertificate Convolution::homotopy_certificate(const HomElement& alpha, const HomElement& beta, const HomElement& lambda) const {
  if (!mc_certificate(alpha).certified) raise(Errc::NotMaurerCartan, "alpha is not Maurer-Cartan");
  if (!mc_certificate(beta).certified) raise(Errc::NotMaurerCartan, "beta is not Maurer-Cartan");
  if (first_nonzero(lambda) && degree(lambda) != 0) raise(Errc::DegreeError, "homotopy must have degree 0");
  if (!lambda.at(1).is_zero()) raise(Errc::ArityMismatch, "homotopy must vanish on C(1)");
  HomotopyCertificate out;
  HomElement r = differential(lambda);
  r = add(r, scale(alpha, -1));
  r = add(r, scale(hom_brace_one_input(lambda, alpha, 1), -1));
  r = add(r, composite(beta, add(unit(), lambda)));
  out.residual = std::move(r);
  out.first_failing_arity = first_nonzero(out.residual);
  out.holds = !out.first_failing_arity;
  return out;
}

nlohmann::json Pi0Report::to_json() const {
  nlohmann::json j = groupoid.to_json();
  j["arity_cap"] = arity_cap;
  j["cofibrancy_asserted"] = cofibrancy_asserted;
  return j;
}

Pi0Report Convolution::pi0(const DeligneOptions& options, bool cofibrancy_asserted) const {
  return {deligne_enumerate(model(), options), cap(), cofibrancy_asserted};
}

HomElement Convolution::random_element(std::mt19937_64& rng, int degree) const {
  const FiniteModel m = model();
  FiniteElement x = m.zero();
  std::uniform_int_distribution<std::int64_t> coin(0, prime() - 1);
  for (int i : algebra_->indices_of_degree(degree)) x.add(i, Scalar::from_integer(static_cast<long long>(coin(rng)), m.ring()));
  return to_hom(x);
}

SparseColumn Convolution::basis_brace(int head, const std::vector<std::pair<int, int>>& args) const {
  if (head < 0 || head >= algebra_->dim()) raise(Errc::BadIndex, "basis index out of range");
  for (const auto& [j, r] : args)
    if (j < 0 || j >= algebra_->dim() || r < 0) raise(Errc::BadIndex, "brace argument out of range");
  return core_->basis_brace(head, args);
}

}  // namespace gpl
