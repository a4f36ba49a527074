#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shorcert/error.hpp"

namespace shorcert {

/// A bijection on {0, ..., 2^width - 1}, applied to a work register by the
/// simulator as an index remapping.
class PermutationTable {
 public:
  PermutationTable(unsigned width, std::vector<std::uint32_t> mapping,
                   std::uint64_t multiplier = 0, std::uint64_t modulus = 0)
      : width_(width),
        mapping_(std::move(mapping)),
        multiplier_(multiplier),
        modulus_(modulus) {
    detail::require(width_ >= 1 && width_ <= 31, ErrorKind::capacity,
                    "permutation width must be in [1, 31]");
    detail::require(mapping_.size() == (std::size_t{1} << width_),
                    ErrorKind::invalid_argument,
                    "permutation mapping size must be 2^width");
    std::vector<bool> seen(mapping_.size(), false);
    for (auto image : mapping_) {
      detail::require(image < mapping_.size() && !seen[image],
                      ErrorKind::invalid_argument,
                      "permutation mapping is not a bijection");
      seen[image] = true;
    }
  }

  unsigned width() const noexcept { return width_; }
  std::size_t size() const noexcept { return mapping_.size(); }
  std::uint32_t operator()(std::uint32_t x) const { return mapping_.at(x); }
  const std::vector<std::uint32_t>& mapping() const noexcept { return mapping_; }

  // Provenance for serialization; zero when the table is not a modular
  // multiplication.
  std::uint64_t multiplier() const noexcept { return multiplier_; }
  std::uint64_t modulus() const noexcept { return modulus_; }

  PermutationTable inverse() const {
    std::vector<std::uint32_t> inv(mapping_.size());
    for (std::uint32_t x = 0; x < mapping_.size(); ++x) inv[mapping_[x]] = x;
    return PermutationTable(width_, std::move(inv));
  }

  bool is_identity() const {
    for (std::uint32_t x = 0; x < mapping_.size(); ++x)
      if (mapping_[x] != x) return false;
    return true;
  }

  friend bool operator==(const PermutationTable& a, const PermutationTable& b) {
    return a.width_ == b.width_ && a.mapping_ == b.mapping_;
  }

 private:
  unsigned width_;
  std::vector<std::uint32_t> mapping_;
  std::uint64_t multiplier_;
  std::uint64_t modulus_;
};

}  // namespace shorcert
