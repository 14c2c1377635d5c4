#pragma once

#include <algorithm>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qs2lab/core/bits.hpp"
#include "qs2lab/core/error.hpp"

namespace qs2lab::qsim {

struct Register {
  std::string name;
  unsigned width = 0;

  friend bool operator==(const Register&, const Register&) = default;
};

// Ordered named bit-registers packed big-endian: the first declared register
// occupies the most significant bits of a basis index.
class RegisterLayout {
 public:
  RegisterLayout() = default;
  RegisterLayout(std::initializer_list<Register> regs) : RegisterLayout(std::vector<Register>(regs)) {}
  explicit RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
    for (std::size_t i = 0; i < regs_.size(); ++i) {
      if (regs_[i].width == 0) {
        fail(Errc::WidthMismatch, "register '" + regs_[i].name + "' has zero width");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (regs_[j].name == regs_[i].name) {
          fail(Errc::DuplicateRegister, "register '" + regs_[i].name + "' declared twice");
        }
      }
      total_ += regs_[i].width;
    }
    if (total_ > kMaxWordBits) {
      fail(Errc::WidthOverflow, "layout width " + std::to_string(total_) + " exceeds word capacity");
    }
  }

  // Builds a layout, silently dropping zero-width registers. Used by operator
  // builders where, e.g., a scheme without ciphertext expansion has no ancilla.
  static RegisterLayout compact(std::vector<Register> regs) {
    std::erase_if(regs, [](const Register& r) { return r.width == 0; });
    return RegisterLayout(std::move(regs));
  }

  unsigned total_width() const noexcept { return total_; }
  Word dimension() const noexcept { return dimension_of(total_); }
  const std::vector<Register>& registers() const noexcept { return regs_; }
  std::size_t size() const noexcept { return regs_.size(); }
  bool empty() const noexcept { return regs_.empty(); }

  bool contains(std::string_view name) const {
    return std::any_of(regs_.begin(), regs_.end(), [&](const Register& r) { return r.name == name; });
  }

  std::size_t position(std::string_view name) const {
    for (std::size_t i = 0; i < regs_.size(); ++i) {
      if (regs_[i].name == name) return i;
    }
    fail(Errc::UnknownRegister, "no register named '" + std::string(name) + "'");
  }

  unsigned width_of(std::string_view name) const { return regs_[position(name)].width; }

  // Bit offset of the register's least significant bit within a basis index.
  unsigned shift_of(std::string_view name) const {
    const std::size_t pos = position(name);
    unsigned shift = 0;
    for (std::size_t i = pos + 1; i < regs_.size(); ++i) shift += regs_[i].width;
    return shift;
  }

  Word mask_of(std::string_view name) const { return low_mask(width_of(name)) << shift_of(name); }

  Word extract(Word index, std::string_view name) const {
    return (index >> shift_of(name)) & low_mask(width_of(name));
  }

  Word insert(Word index, std::string_view name, Word value) const {
    const unsigned w = width_of(name);
    if (value > low_mask(w)) {
      fail(Errc::WidthMismatch, "value does not fit register '" + std::string(name) + "'");
    }
    const unsigned s = shift_of(name);
    return (index & ~(low_mask(w) << s)) | (value << s);
  }

  // Packs a full assignment; every register must be assigned.
  Word pack(const std::map<std::string, Word>& values) const {
    for (const auto& [name, _] : values) position(name);
    Word index = 0;
    for (const auto& r : regs_) {
      auto it = values.find(r.name);
      if (it == values.end()) {
        fail(Errc::UnknownRegister, "register '" + r.name + "' not assigned");
      }
      if (it->second > low_mask(r.width)) {
        fail(Errc::WidthMismatch, "value does not fit register '" + r.name + "'");
      }
      index = (index << r.width) | it->second;
    }
    return index;
  }

  // Layout restricted to `names`, keeping declaration order.
  RegisterLayout subset(const std::vector<std::string>& names) const {
    for (const auto& n : names) position(n);
    std::vector<Register> kept;
    for (const auto& r : regs_) {
      if (std::find(names.begin(), names.end(), r.name) != names.end()) kept.push_back(r);
    }
    return RegisterLayout(std::move(kept));
  }

  RegisterLayout without(const std::vector<std::string>& names) const {
    for (const auto& n : names) position(n);
    std::vector<Register> kept;
    for (const auto& r : regs_) {
      if (std::find(names.begin(), names.end(), r.name) == names.end()) kept.push_back(r);
    }
    return RegisterLayout(std::move(kept));
  }

  RegisterLayout append(const RegisterLayout& other) const {
    std::vector<Register> all = regs_;
    all.insert(all.end(), other.regs_.begin(), other.regs_.end());
    return RegisterLayout(std::move(all));
  }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < regs_.size(); ++i) {
      if (i) out += ", ";
      out += regs_[i].name + ":" + std::to_string(regs_[i].width);
    }
    return out + "}";
  }

  friend bool operator==(const RegisterLayout& a, const RegisterLayout& b) { return a.regs_ == b.regs_; }

 private:
  std::vector<Register> regs_;
  unsigned total_ = 0;
};

}  // namespace qs2lab::qsim
