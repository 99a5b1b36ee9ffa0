#include "gpl/linalg.hpp"

#include <utility>

#include "gpl/error.hpp"

namespace gpl {

namespace {

std::int64_t reduce(std::int64_t v, std::int64_t p) {
  v %= p;
  return v < 0 ? v + p : v;
}

}  // namespace

ModMatrix::ModMatrix(std::int64_t p, int rows, int cols) : p_(p), rows_(rows), cols_(cols) {
  if (p < 2) raise(Errc::NotFiniteField, "modulus " + std::to_string(p));
  if (rows < 0 || cols < 0) raise(Errc::SizeMismatch, "negative matrix shape");
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
}

ModMatrix ModMatrix::identity(std::int64_t p, int n) {
  ModMatrix m(p, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

void ModMatrix::set(int i, int j, std::int64_t v) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) raise(Errc::BadIndex, "matrix entry out of range");
  data_[index(i, j)] = reduce(v, p_);
}

ModVector ModMatrix::apply(const ModVector& v) const {
  if (static_cast<int>(v.size()) != cols_) raise(Errc::SizeMismatch, "vector length");
  ModVector out(static_cast<std::size_t>(rows_), 0);
  for (int i = 0; i < rows_; ++i) {
    std::int64_t s = 0;
    for (int j = 0; j < cols_; ++j) s = (s + at(i, j) * reduce(v[static_cast<std::size_t>(j)], p_)) % p_;
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

ModMatrix ModMatrix::operator*(const ModMatrix& b) const {
  if (cols_ != b.rows_ || p_ != b.p_) raise(Errc::SizeMismatch, "matrix product shapes");
  ModMatrix out(p_, rows_, b.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const std::int64_t a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < b.cols_; ++j) out.data_[out.index(i, j)] = (out.data_[out.index(i, j)] + a * b.at(k, j)) % p_;
    }
  return out;
}

bool ModMatrix::is_zero() const {
  for (auto v : data_)
    if (v != 0) return false;
  return true;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
  a = reduce(a, p);
  if (a == 0) raise(Errc::NotInvertible, "zero has no inverse");
  std::int64_t t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) raise(Errc::NotInvertible, "not a unit mod " + std::to_string(p));
  return reduce(t, p);
}

std::vector<int> row_reduce(ModMatrix& m) {
  const std::int64_t p = m.prime();
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int found = -1;
    for (int i = row; i < m.rows(); ++i)
      if (m.at(i, col) != 0) {
        found = i;
        break;
      }
    if (found < 0) continue;
    if (found != row)
      for (int j = 0; j < m.cols(); ++j) {
        const auto a = m.at(row, j);
        m.set(row, j, m.at(found, j));
        m.set(found, j, a);
      }
    const std::int64_t inv = mod_inverse(m.at(row, col), p);
    for (int j = 0; j < m.cols(); ++j) m.set(row, j, m.at(row, j) * inv);
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      const std::int64_t f = m.at(i, col);
      for (int j = 0; j < m.cols(); ++j) m.set(i, j, m.at(i, j) - f * m.at(row, j));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(ModMatrix m) { return static_cast<int>(row_reduce(m).size()); }

std::vector<ModVector> kernel_basis(const ModMatrix& m) {
  ModMatrix r = m;
  const auto pivots = row_reduce(r);
  std::vector<char> is_pivot(static_cast<std::size_t>(m.cols()), 0);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = 1;
  std::vector<ModVector> basis;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    ModVector v(static_cast<std::size_t>(m.cols()), 0);
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i)
      v[static_cast<std::size_t>(pivots[i])] = reduce(-r.at(static_cast<int>(i), free), m.prime());
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<ModVector> solve(const ModMatrix& m, const ModVector& b) {
  if (static_cast<int>(b.size()) != m.rows()) raise(Errc::SizeMismatch, "right-hand side length");
  ModMatrix aug(m.prime(), m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug.set(i, j, m.at(i, j));
    aug.set(i, m.cols(), b[static_cast<std::size_t>(i)]);
  }
  const auto pivots = row_reduce(aug);
  ModVector x(static_cast<std::size_t>(m.cols()), 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == m.cols()) return std::nullopt;
    x[static_cast<std::size_t>(pivots[i])] = aug.at(static_cast<int>(i), m.cols());
  }
  return x;
}

// ---------------------------------------------------------------- complexes

int CochainComplex::dim(int k) const {
  const auto it = dims.find(k);
  return it == dims.end() ? 0 : it->second;
}

ModMatrix CochainComplex::differential(int k) const {
  const auto it = d.find(k);
  if (it != d.end()) return it->second;
  return ModMatrix(p, dim(k + 1), dim(k));
}

void CochainComplex::validate() const {
  for (const auto& [k, m] : d) {
    if (m.prime() != p) raise(Errc::NotAComplex, "differential over another field");
    if (m.rows() != dim(k + 1) || m.cols() != dim(k)) raise(Errc::NotAComplex, "differential shape in degree " + std::to_string(k));
  }
  for (const auto& [k, m] : d)
    if (!(differential(k + 1) * m).is_zero()) raise(Errc::NotAComplex, "d^2 != 0 in degree " + std::to_string(k));
}

int CochainComplex::cohomology_dim(int k) const {
  return dim(k) - rank(differential(k)) - rank(differential(k - 1));
}

bool CochainComplex::is_coboundary(int k, const ModVector& z) const {
  return solve(differential(k - 1), z).has_value();
}

std::vector<ModVector> CochainComplex::cohomology_basis(int k) const {
  // Extend a basis of the coboundaries by cocycles, keeping those that raise the rank.
  const ModMatrix incoming = differential(k - 1);
  std::vector<ModVector> spanning;
  for (int j = 0; j < incoming.cols(); ++j) {
    ModVector col(static_cast<std::size_t>(incoming.rows()));
    for (int i = 0; i < incoming.rows(); ++i) col[static_cast<std::size_t>(i)] = incoming.at(i, j);
    spanning.push_back(std::move(col));
  }
  auto rank_of = [&](const std::vector<ModVector>& vs) {
    ModMatrix m(p, static_cast<int>(vs.size()), dim(k));
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (int j = 0; j < dim(k); ++j) m.set(static_cast<int>(i), j, vs[i][static_cast<std::size_t>(j)]);
    return rank(m);
  };
  int current = rank_of(spanning);
  std::vector<ModVector> basis;
  for (const auto& z : kernel_basis(differential(k))) {
    spanning.push_back(z);
    const int next = rank_of(spanning);
    if (next > current) {
      basis.push_back(z);
      current = next;
    } else {
      spanning.pop_back();
    }
  }
  return basis;
}

ModVector CochainComplex::class_of(int k, const ModVector& z) const {
  for (auto v : differential(k).apply(z))
    if (v != 0) raise(Errc::NotAComplex, "class of a non-cocycle");
  // Solve z = sum c_i h_i + d(w) for the coefficients c_i.
  const auto basis = cohomology_basis(k);
  const ModMatrix incoming = differential(k - 1);
  ModMatrix m(p, dim(k), static_cast<int>(basis.size()) + incoming.cols());
  for (int i = 0; i < dim(k); ++i) {
    for (std::size_t b = 0; b < basis.size(); ++b) m.set(i, static_cast<int>(b), basis[b][static_cast<std::size_t>(i)]);
    for (int j = 0; j < incoming.cols(); ++j) m.set(i, static_cast<int>(basis.size()) + j, incoming.at(i, j));
  }
  const auto x = solve(m, z);
  if (!x) raise(Errc::InternalInvariant, "cocycle outside the span of cohomology representatives and coboundaries");
  return ModVector(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(basis.size()));
}

ModMatrix induced_map(const CochainComplex& source, const CochainComplex& target, const std::map<int, ModMatrix>& f, int k) {
  auto component = [&](int j) {
    const auto it = f.find(j);
    return it != f.end() ? it->second : ModMatrix(source.p, target.dim(j), source.dim(j));
  };
  for (int j : {k - 1, k})
    if (!(target.differential(j) * component(j) == component(j + 1) * source.differential(j)))
      raise(Errc::NotAComplex, "map does not commute with the differentials in degree " + std::to_string(j));
  const auto src = source.cohomology_basis(k);
  const auto tgt_dim = static_cast<int>(target.cohomology_basis(k).size());
  ModMatrix out(source.p, tgt_dim, static_cast<int>(src.size()));
  for (std::size_t c = 0; c < src.size(); ++c) {
    const auto image = target.class_of(k, component(k).apply(src[c]));
    for (int r = 0; r < tgt_dim; ++r) out.set(r, static_cast<int>(c), image[static_cast<std::size_t>(r)]);
  }
  return out;
}

}  // namespace gpl
