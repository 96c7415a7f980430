#ifndef MUTLIN_BITSET_HPP_
#define MUTLIN_BITSET_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mutlin {

// Fixed-width dynamic bitset. std::vector<bool> is unusable as a hash key and
// std::bitset needs a compile-time width, so we roll a small word-based one.
class DynBitset {
 public:
  DynBitset() = default;
  explicit DynBitset(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  void set(std::size_t i, bool v = true) {
    if (v)
      w_[i >> 6] |= (std::uint64_t{1} << (i & 63));
    else
      w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  bool test(std::size_t i) const {
    return (w_[i >> 6] >> (i & 63)) & 1;
  }

  void reset() {
    for (auto& w : w_) w = 0;
  }

  bool none() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  DynBitset& operator|=(const DynBitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  DynBitset& operator&=(const DynBitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  DynBitset& operator-=(const DynBitset& o) {  // set difference
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  friend DynBitset operator|(DynBitset a, const DynBitset& b) { return a |= b; }
  friend DynBitset operator&(DynBitset a, const DynBitset& b) { return a &= b; }
  friend DynBitset operator-(DynBitset a, const DynBitset& b) { return a -= b; }

  DynBitset operator~() const {
    DynBitset r(n_);
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
    r.trim();
    return r;
  }

  bool intersects(const DynBitset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  bool subset_of(const DynBitset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  // *this restricted to `mask` equals `o` restricted to `mask`.
  bool equal_under(const DynBitset& mask, const DynBitset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if ((w_[i] ^ o.w_[i]) & mask.w_[i]) return false;
    return true;
  }

  bool operator==(const DynBitset& o) const = default;

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ull ^ n_;
    for (auto w : w_) h = (h ^ w) * 0x100000001b3ull;
    return h;
  }

  // Iterate over set bit positions.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t w = w_[i];
      while (w) {
        unsigned b = static_cast<unsigned>(__builtin_ctzll(w));
        f(i * 64 + b);
        w &= w - 1;
      }
    }
  }

 private:
  void trim() {
    if (n_ & 63) w_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
  }
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

struct DynBitsetHash {
  std::size_t operator()(const DynBitset& b) const { return b.hash(); }
};

}  // namespace mutlin

#endif  // MUTLIN_BITSET_HPP_
