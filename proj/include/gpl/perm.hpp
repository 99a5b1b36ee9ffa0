#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gpl {

/// Element of the symmetric group in one-line notation, 1-based: i maps to images[i-1].
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i - 1)]; }
  const std::vector<int>& images() const { return images_; }

  /// (this * other)(i) = this(other(i)).
  Permutation operator*(const Permutation& other) const;
  Permutation inverse() const;
  bool is_identity() const;
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// Direct sum acting blockwise on consecutive slots.
Permutation block_sum(const std::vector<Permutation>& parts);

/// All permutations of size n in lexicographic order.
std::vector<Permutation> all_permutations(int n);

/// Sh(r_1,...,r_n): order-preserving on each block, lexicographic order.
std::vector<Permutation> shuffles(const std::vector<int>& blocks);

/// Sh*(r_1,...,r_n): shuffles whose block leaders have increasing images.
std::vector<Permutation> pointed_shuffles(const std::vector<int>& blocks);

/// (-1)^k where k counts pairs i<j with p(i)>p(j) and both slots of odd degree.
int koszul_sign(const Permutation& p, const std::vector<int>& degrees);

/// Degrees after moving the element in slot i to slot p(i).
std::vector<int> permute_degrees(const Permutation& p, const std::vector<int>& degrees);

struct BlockFactorization {
  Permutation shuffle;
  std::vector<Permutation> blocks;
};

/// Unique sigma = shuffle * (tau_1 (+) ... (+) tau_n) with shuffle in Sh(blocks).
BlockFactorization factor_by_blocks(const Permutation& sigma, const std::vector<int>& blocks);

/// Multinomial coefficient (sum r_i)! / prod r_i!.
std::uint64_t multinomial(const std::vector<int>& blocks);

}  // namespace gpl
