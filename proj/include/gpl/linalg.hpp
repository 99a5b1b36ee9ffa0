#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace gpl {

using ModVector = std::vector<std::int64_t>;

/// Dense matrix over F_p, entries kept in [0, p).
class ModMatrix {
 public:
  ModMatrix(std::int64_t p, int rows, int cols);
  static ModMatrix identity(std::int64_t p, int n);

  std::int64_t prime() const { return p_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t at(int i, int j) const { return data_[index(i, j)]; }
  void set(int i, int j, std::int64_t v);
  void add(int i, int j, std::int64_t v) { set(i, j, at(i, j) + v); }

  ModVector apply(const ModVector& v) const;
  ModMatrix operator*(const ModMatrix& b) const;
  bool is_zero() const;
  friend bool operator==(const ModMatrix&, const ModMatrix&) = default;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j); }
  std::int64_t p_;
  int rows_, cols_;
  std::vector<std::int64_t> data_;
};

std::int64_t mod_inverse(std::int64_t a, std::int64_t p);

/// Reduced row echelon form; returns pivot columns.
std::vector<int> row_reduce(ModMatrix& m);
int rank(ModMatrix m);
/// Basis of {v : m v = 0}.
std::vector<ModVector> kernel_basis(const ModMatrix& m);
/// Some x with m x = b, if one exists.
std::optional<ModVector> solve(const ModMatrix& m, const ModVector& b);

/// Finite cochain complex over F_p: d[k] maps degree k to degree k+1 (rows = dim k+1).
struct CochainComplex {
  std::int64_t p = 2;
  std::map<int, int> dims;
  std::map<int, ModMatrix> d;

  int dim(int k) const;
  /// Differential out of degree k, zero matrix when absent.
  ModMatrix differential(int k) const;
  /// NotAComplex unless shapes agree and d^2 = 0.
  void validate() const;
  int cohomology_dim(int k) const;
  /// z must be a cocycle; true when z lies in the image of d[k-1].
  bool is_coboundary(int k, const ModVector& z) const;
  /// Coordinates of the class of cocycle z in the basis returned by cohomology_basis(k).
  ModVector class_of(int k, const ModVector& z) const;
  /// Cocycles whose classes form a basis of H^k.
  std::vector<ModVector> cohomology_basis(int k) const;
};

/// Matrix of H^k(f) for a chain map f: source -> target (f[k] maps degree k), in the cohomology_basis
/// of both sides. NotAComplex if f does not commute with d.
ModMatrix induced_map(const CochainComplex& source, const CochainComplex& target, const std::map<int, ModMatrix>& f, int k);

}  // namespace gpl
