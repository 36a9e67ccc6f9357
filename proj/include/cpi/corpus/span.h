#pragma once

#include <cstddef>

namespace cpi::corpus {

// Inclusive token index range [first, last].
struct TokenSpan {
  std::size_t first = 0;
  std::size_t last = 0;

  bool contains(std::size_t i) const { return i >= first && i <= last; }
  bool operator==(const TokenSpan&) const = default;
};

}  // namespace cpi::corpus
