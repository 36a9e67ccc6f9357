#include "cpi/corpus/text.h"

#include <array>

namespace cpi::corpus {

namespace {

constexpr std::array<std::string_view, 5> kMasks = {
    "@CHEMICAL$", "@GENE$", "@CHEM-GENE$", "@DRUG$", "@DRUG-DRUG$"};

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_punct(unsigned char c) {
  return c < 128 && ((c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
                     (c >= '[' && c <= '`') || (c >= '{' && c <= '~'));
}

}  // namespace

bool is_entity_mask(std::string_view piece) {
  for (auto mask : kMasks) {
    if (piece == mask) return true;
  }
  return false;
}

std::vector<TextPiece> pre_tokenize(std::string_view text, std::size_t base) {
  std::vector<TextPiece> out;
  std::size_t i = 0;
  bool space = false;
  auto emit = [&](std::size_t begin, std::size_t end) {
    out.push_back({std::string(text.substr(begin, end - begin)), base + begin, base + end, space});
    space = false;
  };
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space(c)) {
      space = true;
      ++i;
      continue;
    }
    if (c == '@') {
      bool matched = false;
      for (auto mask : kMasks) {
        if (text.substr(i, mask.size()) == mask) {
          emit(i, i + mask.size());
          i += mask.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    if (is_punct(c)) {
      emit(i, i + 1);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size()) {
      const auto d = static_cast<unsigned char>(text[j]);
      if (is_space(d) || is_punct(d)) break;
      ++j;
    }
    emit(i, j);
    i = j;
  }
  if (!out.empty()) out.front().space_before = false;
  return out;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    if (is_space(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ch);
  }
  return out;
}

std::vector<std::size_t> code_point_offsets(std::string_view text) {
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < text.size(); ++i) {
    // Continuation bytes are 10xxxxxx.
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) offsets.push_back(i);
  }
  offsets.push_back(text.size());
  return offsets;
}

}  // namespace cpi::corpus
