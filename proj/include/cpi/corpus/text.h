#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace cpi::corpus {

inline constexpr std::string_view kChemicalMask = "@CHEMICAL$";
inline constexpr std::string_view kGeneMask = "@GENE$";

// Word-level piece of a text with its byte range.
struct TextPiece {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  bool space_before = false;
};

// Splits on whitespace and isolates each ASCII punctuation character.
// Entity masks (@CHEMICAL$, @GENE$, @CHEM-GENE$, @DRUG$, @DRUG-DRUG$) are
// kept whole. Offsets are relative to `text` plus `base`.
std::vector<TextPiece> pre_tokenize(std::string_view text, std::size_t base = 0);

bool is_entity_mask(std::string_view piece);

// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

// Byte offset of each code point in `text`, plus text.size() at the end.
std::vector<std::size_t> code_point_offsets(std::string_view text);

}  // namespace cpi::corpus
