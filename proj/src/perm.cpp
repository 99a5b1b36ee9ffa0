#include "gpl/perm.hpp"

#include <algorithm>
#include <numeric>

#include "gpl/error.hpp"

namespace gpl {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size() + 1, false);
  for (int v : images_) {
    if (v < 1 || v > size() || seen[static_cast<std::size_t>(v)])
      raise(Errc::SizeMismatch, "not a permutation: " + to_string());
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  Permutation p;
  p.images_ = std::move(v);
  return p;
}

Permutation Permutation::operator*(const Permutation& other) const {
  if (size() != other.size()) raise(Errc::SizeMismatch, "composing permutations of different sizes");
  Permutation p;
  p.images_.resize(images_.size());
  for (int i = 1; i <= size(); ++i) p.images_[static_cast<std::size_t>(i - 1)] = (*this)(other(i));
  return p;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.images_.resize(images_.size());
  for (int i = 1; i <= size(); ++i) p.images_[static_cast<std::size_t>((*this)(i) - 1)] = i;
  return p;
}

bool Permutation::is_identity() const {
  for (int i = 1; i <= size(); ++i)
    if ((*this)(i) != i) return false;
  return true;
}

std::string Permutation::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) s += " ";
    s += std::to_string(images_[i]);
  }
  return s + ")";
}

Permutation block_sum(const std::vector<Permutation>& parts) {
  std::vector<int> images;
  int offset = 0;
  for (const auto& p : parts) {
    for (int v : p.images()) images.push_back(v + offset);
    offset += p.size();
  }
  return Permutation(std::move(images));
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

namespace {

// Each word assigns a block to every target position; the k-th slot of block b
// goes to the k-th position carrying b.
std::vector<Permutation> shuffles_impl(const std::vector<int>& blocks, bool pointed) {
  std::vector<int> word;
  for (std::size_t b = 0; b < blocks.size(); ++b) word.insert(word.end(), static_cast<std::size_t>(blocks[b]), static_cast<int>(b));
  std::vector<int> start(blocks.size(), 0);
  for (std::size_t b = 1; b < blocks.size(); ++b) start[b] = start[b - 1] + blocks[b - 1];
  std::vector<Permutation> out;
  do {
    if (pointed) {
      std::vector<bool> seen(blocks.size(), false);
      int next = 0;
      bool ok = true;
      for (int b : word) {
        if (seen[static_cast<std::size_t>(b)]) continue;
        if (b != next) {
          ok = false;
          break;
        }
        seen[static_cast<std::size_t>(b)] = true;
        ++next;
      }
      if (!ok) continue;
    }
    std::vector<int> images(word.size());
    std::vector<int> used(blocks.size(), 0);
    for (std::size_t pos = 0; pos < word.size(); ++pos) {
      const auto b = static_cast<std::size_t>(word[pos]);
      images[static_cast<std::size_t>(start[b] + used[b]++)] = static_cast<int>(pos) + 1;
    }
    out.emplace_back(std::move(images));
  } while (std::next_permutation(word.begin(), word.end()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Permutation> shuffles(const std::vector<int>& blocks) {
  for (int r : blocks)
    if (r < 0) raise(Errc::SizeMismatch, "negative block size");
  return shuffles_impl(blocks, false);
}

std::vector<Permutation> pointed_shuffles(const std::vector<int>& blocks) {
  for (int r : blocks)
    if (r < 1) raise(Errc::EmptyBlock, "pointed shuffles need nonempty blocks");
  return shuffles_impl(blocks, true);
}

int koszul_sign(const Permutation& p, const std::vector<int>& degrees) {
  if (static_cast<int>(degrees.size()) != p.size()) raise(Errc::SizeMismatch, "degree sequence length");
  int parity = 0;
  for (int i = 1; i <= p.size(); ++i) {
    if ((degrees[static_cast<std::size_t>(i - 1)] & 1) == 0) continue;
    for (int j = i + 1; j <= p.size(); ++j)
      if ((degrees[static_cast<std::size_t>(j - 1)] & 1) && p(i) > p(j)) parity ^= 1;
  }
  return parity ? -1 : 1;
}

std::vector<int> permute_degrees(const Permutation& p, const std::vector<int>& degrees) {
  if (static_cast<int>(degrees.size()) != p.size()) raise(Errc::SizeMismatch, "degree sequence length");
  std::vector<int> out(degrees.size());
  for (int i = 1; i <= p.size(); ++i) out[static_cast<std::size_t>(p(i) - 1)] = degrees[static_cast<std::size_t>(i - 1)];
  return out;
}

BlockFactorization factor_by_blocks(const Permutation& sigma, const std::vector<int>& blocks) {
  int total = 0;
  for (int r : blocks) {
    if (r < 0) raise(Errc::SizeMismatch, "negative block size");
    total += r;
  }
  if (total != sigma.size()) raise(Errc::SizeMismatch, "blocks do not cover the permutation");
  std::vector<int> sh(static_cast<std::size_t>(total));
  BlockFactorization f;
  int offset = 0;
  for (int r : blocks) {
    std::vector<int> images;
    for (int k = 1; k <= r; ++k) images.push_back(sigma(offset + k));
    std::vector<int> sorted = images;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> tau;
    for (int k = 0; k < r; ++k) {
      sh[static_cast<std::size_t>(offset + k)] = sorted[static_cast<std::size_t>(k)];
      tau.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), images[static_cast<std::size_t>(k)]) - sorted.begin()) + 1);
    }
    f.blocks.emplace_back(std::move(tau));
    offset += r;
  }
  f.shuffle = Permutation(std::move(sh));
  return f;
}

std::uint64_t multinomial(const std::vector<int>& blocks) {
  std::uint64_t result = 1;
  int n = 0;
  for (int r : blocks) {
    for (int k = 1; k <= r; ++k) {
      ++n;
      result = result * static_cast<std::uint64_t>(n) / static_cast<std::uint64_t>(k);
    }
  }
  return result;
}

}  // namespace gpl
