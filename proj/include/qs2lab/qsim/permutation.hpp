#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qs2lab/qsim/layout.hpp"

namespace qs2lab::qsim {

inline constexpr unsigned kMaterializeCap = 16;

// A reversible classical map on basis indices, i.e. the unitary that permutes
// computational basis states. Input and output layouts have equal total width
// but may name the bits differently (a type-2 operator turns a message register
// into part of a ciphertext register).
class BasisPermutation {
 public:
  using Map = std::function<Word(Word)>;

  BasisPermutation(RegisterLayout input, RegisterLayout output, Map forward, Map inverse)
      : input_(std::move(input)), output_(std::move(output)),
        forward_(std::move(forward)), inverse_(std::move(inverse)) {
    if (input_.total_width() != output_.total_width()) {
      fail(Errc::LayoutMismatch, "permutation layouts differ in width: " + input_.to_string() + " vs " +
                                     output_.to_string());
    }
  }

  BasisPermutation(RegisterLayout layout, Map forward, Map inverse)
      : BasisPermutation(layout, layout, std::move(forward), std::move(inverse)) {}

  static BasisPermutation identity(const RegisterLayout& layout) {
    return BasisPermutation(layout, [](Word i) { return i; }, [](Word i) { return i; });
  }

  // An involutive map (its own inverse), e.g. every XOR-into-register operator.
  static BasisPermutation involution(const RegisterLayout& layout, Map map) {
    Map copy = map;
    return BasisPermutation(layout, std::move(map), std::move(copy));
  }

  const RegisterLayout& input_layout() const noexcept { return input_; }
  const RegisterLayout& output_layout() const noexcept { return output_; }
  unsigned width() const noexcept { return input_.total_width(); }

  Word operator()(Word index) const {
    if (table_) return (*table_)[index];
    return forward_(index);
  }
  Word inverse(Word index) const {
    if (inverse_table_) return (*inverse_table_)[index];
    return inverse_(index);
  }

  // `next` after `this`; next's input layout must match this output layout
  // bit-for-bit in width. Register names may differ: the wiring between the two
  // stages is pure relabeling and costs nothing at apply time.
  BasisPermutation then(const BasisPermutation& next) const {
    if (next.input_.total_width() != output_.total_width()) {
      fail(Errc::LayoutMismatch, "cannot compose " + output_.to_string() + " into " + next.input_.to_string());
    }
    auto f1 = forward_, f2 = next.forward_, i1 = inverse_, i2 = next.inverse_;
    return BasisPermutation(
        input_, next.output_, [f1, f2](Word i) { return f2(f1(i)); }, [i1, i2](Word i) { return i1(i2(i)); });
  }

  BasisPermutation relabel(RegisterLayout input, RegisterLayout output) const {
    return BasisPermutation(std::move(input), std::move(output), forward_, inverse_);
  }

  // Restricts the map to the slice where `name` holds `value`. The register must
  // sit at the same bit position in both layouts and be preserved by the map;
  // this is how a classically chosen randomness register is factored out.
  BasisPermutation fix_register(const std::string& name, Word value) const {
    const unsigned shift = input_.shift_of(name);
    const unsigned w = input_.width_of(name);
    if (!output_.contains(name) || output_.shift_of(name) != shift || output_.width_of(name) != w) {
      fail(Errc::LayoutMismatch, "register '" + name + "' is not preserved in place by this permutation");
    }
    if (value > low_mask(w)) fail(Errc::WidthMismatch, "value does not fit register '" + name + "'");
    const Word lo_mask = low_mask(shift);
    auto expand = [=](Word i) { return ((i >> shift) << (shift + w)) | (value << shift) | (i & lo_mask); };
    auto squeeze = [=](Word i) {
      if (((i >> shift) & low_mask(w)) != value) {
        fail(Errc::LayoutMismatch, "permutation does not preserve register '" + name + "'");
      }
      return ((i >> (shift + w)) << shift) | (i & lo_mask);
    };
    auto f = forward_, inv = inverse_;
    return BasisPermutation(
        input_.without({name}), output_.without({name}), [=](Word i) { return squeeze(f(expand(i))); },
        [=](Word i) { return squeeze(inv(expand(i))); });
  }

  // Tabulates the map (and its inverse) when the width allows.
  BasisPermutation materialize() const {
    if (width() > kMaterializeCap) {
      fail(Errc::CapExceeded, "cannot materialize a permutation of width " + std::to_string(width()));
    }
    BasisPermutation copy = *this;
    const Word dim = input_.dimension();
    auto fwd = std::make_shared<std::vector<Word>>(dim);
    auto inv = std::make_shared<std::vector<Word>>(dim);
    for (Word i = 0; i < dim; ++i) (*fwd)[i] = forward_(i);
    for (Word i = 0; i < dim; ++i) (*inv)[i] = inverse_(i);
    copy.table_ = std::move(fwd);
    copy.inverse_table_ = std::move(inv);
    return copy;
  }

  bool is_materialized() const noexcept { return table_ != nullptr; }

  // Exhaustive bijectivity check: every image is in range, hit once, and the
  // declared inverse undoes it. Returns the first offending index, if any.
  std::optional<Word> find_bijection_violation() const {
    if (width() > kMaterializeCap) {
      fail(Errc::CapExceeded, "exhaustive bijection check limited to width " + std::to_string(kMaterializeCap));
    }
    const Word dim = input_.dimension();
    std::vector<bool> hit(dim, false);
    for (Word i = 0; i < dim; ++i) {
      const Word y = (*this)(i);
      if (y >= dim || hit[y] || inverse(y) != i) return i;
      hit[y] = true;
    }
    return std::nullopt;
  }

  // Spot check for widths beyond the exhaustive cap.
  template <class IndexRange>
  std::optional<Word> find_inverse_violation(const IndexRange& indices) const {
    const Word dim = input_.dimension();
    for (Word i : indices) {
      const Word y = (*this)(i);
      if (y >= dim || inverse(y) != i) return i;
    }
    return std::nullopt;
  }

 private:
  RegisterLayout input_;
  RegisterLayout output_;
  Map forward_;
  Map inverse_;
  std::shared_ptr<const std::vector<Word>> table_;
  std::shared_ptr<const std::vector<Word>> inverse_table_;
};

}  // namespace qs2lab::qsim
