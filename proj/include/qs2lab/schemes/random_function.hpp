#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "qs2lab/core/error.hpp"
#include "qs2lab/core/rng.hpp"

namespace qs2lab::schemes {

// Desk-scale stand-in for a random oracle or PRF: each input's output is an
// independent hash of (seed, input), which is the same as a lazily tabulated
// uniformly random table drawn from a seeded stream, without the table.
class SeededFunction {
 public:
  SeededFunction() = default;
  SeededFunction(std::uint64_t seed, unsigned in_bits, unsigned out_bits)
      : seed_(seed), in_bits_(in_bits), out_bits_(out_bits) {}

  Word operator()(Word x) const {
    return splitmix64(derive_seed(seed_, x & low_mask(in_bits_))) & low_mask(out_bits_);
  }

  unsigned in_bits() const noexcept { return in_bits_; }
  unsigned out_bits() const noexcept { return out_bits_; }

 private:
  std::uint64_t seed_ = 0;
  unsigned in_bits_ = 0;
  unsigned out_bits_ = 0;
};

// A random function whose outputs are exactly balanced: the low out_bits of a
// seeded random permutation of the input space. Every output value has
// 2^(in - out) preimages, so G(r) for uniform r is exactly uniform even on a
// 64-element domain, where an unconstrained random table is visibly biased.
class BalancedFunction {
 public:
  BalancedFunction() = default;
  BalancedFunction(std::uint64_t seed, unsigned in_bits, unsigned out_bits)
      : in_bits_(in_bits), out_bits_(out_bits) {
    if (out_bits > in_bits) fail(Errc::WidthMismatch, "balanced function cannot widen its input");
    auto t = std::make_shared<std::vector<Word>>(dimension_of(in_bits));
    for (Word i = 0; i < t->size(); ++i) (*t)[i] = i;
    Rng rng(seed);
    for (Word i = t->size(); i > 1; --i) std::swap((*t)[i - 1], (*t)[uniform_below(rng, i)]);
    table_ = std::move(t);
  }

  Word operator()(Word x) const { return (*table_)[x & low_mask(in_bits_)] & low_mask(out_bits_); }

  unsigned in_bits() const noexcept { return in_bits_; }
  unsigned out_bits() const noexcept { return out_bits_; }

 private:
  std::shared_ptr<const std::vector<Word>> table_;
  unsigned in_bits_ = 0;
  unsigned out_bits_ = 0;
};

// A keyed family of uniformly random permutations of {0,1}^width. Tables are
// drawn on first use by Fisher-Yates from a stream derived from (seed, key) and
// memoized; lookups after that are lock-free reads of an immutable table.
class PermutationFamily {
 public:
  struct Table {
    std::vector<Word> forward;
    std::vector<Word> inverse;
  };

  PermutationFamily(std::uint64_t seed, unsigned width) : seed_(seed), width_(width) {}

  unsigned width() const noexcept { return width_; }

  Word forward(Word key, Word x) const { return table(key).forward[x & low_mask(width_)]; }
  Word inverse(Word key, Word y) const { return table(key).inverse[y & low_mask(width_)]; }

  const Table& table(Word key) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->tables.find(key);
    if (it != cache_->tables.end()) return *it->second;
    auto t = std::make_shared<Table>(draw(key));
    const Table& ref = *t;
    cache_->tables.emplace(key, std::move(t));
    return ref;
  }

 private:
  Table draw(Word key) const {
    const Word dim = dimension_of(width_);
    Table t;
    t.forward.resize(dim);
    for (Word i = 0; i < dim; ++i) t.forward[i] = i;
    Rng rng(derive_seed(seed_, key));
    for (Word i = dim; i > 1; --i) {
      const Word j = uniform_below(rng, i);
      std::swap(t.forward[i - 1], t.forward[j]);
    }
    t.inverse.resize(dim);
    for (Word i = 0; i < dim; ++i) t.inverse[t.forward[i]] = i;
    return t;
  }

  struct Cache {
    std::mutex mutex;
    std::map<Word, std::shared_ptr<const Table>> tables;
  };

  std::uint64_t seed_;
  unsigned width_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

}  // namespace qs2lab::schemes
