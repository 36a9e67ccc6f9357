#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cpi/corpus/document.h"

namespace cpi::corpus {

// Subword inventory. Ids are dense from 0: the six special tokens first,
// then the knowledge-base tag tokens, then learned pieces. Continuation
// pieces carry a "##" prefix.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kSeqStart = 2;
  static constexpr int kSeqEnd = 3;
  static constexpr int kChemMask = 4;
  static constexpr int kGeneMask = 5;
  static constexpr std::array<std::string_view, 6> kSpecials = {
      "[PAD]", "[UNK]", "[CLS]", "[SEP]", "@CHEMICAL$", "@GENE$"};
  // Retrieved knowledge tags are emitted as single tokens.
  static constexpr std::array<std::string_view, 3> kTagTokens = {"CPR:4", "CPR:5", "CPR:6"};
  static constexpr std::size_t kReserved = kSpecials.size() + kTagTokens.size();

  Vocab();
  explicit Vocab(std::vector<std::string> pieces);

  int size() const { return static_cast<int>(pieces_.size()); }
  bool contains(std::string_view piece) const;
  // kUnk when absent.
  int id(std::string_view piece) const;
  const std::string& piece(int id) const { return pieces_.at(id); }
  const std::vector<std::string>& pieces() const { return pieces_; }

  // One piece per line in id order.
  std::string serialize() const;
  static Vocab deserialize(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Vocab load(const std::filesystem::path& path);
  // FNV-1a of serialize(), hex.
  std::string fingerprint() const;

 private:
  std::vector<std::string> pieces_;
  std::unordered_map<std::string, int> index_;
};

// Learns a greedy-longest-match inventory from word statistics. Every
// character of a word seen at least `min_freq` times is included (word
// initial and "##" continuation forms) so such words never map to [UNK];
// the remaining budget goes to whole words and word substrings ranked by
// corpus frequency, then length, then lexicographically. Throws on an
// empty corpus or max_size <= kReserved.
Vocab build_vocab(std::span<const std::string> texts, std::size_t max_size, std::size_t min_freq);
// Uses every document title and sentence.
Vocab build_vocab(std::span<const AnnotatedDocument> docs, std::size_t max_size,
                  std::size_t min_freq);

struct Token {
  int id = Vocab::kUnk;
  std::string piece;
  bool space_before = false;
};

// Greedy longest-match segmentation. Entity masks are emitted atomically;
// a word that cannot be covered by vocabulary pieces becomes one [UNK].
std::vector<Token> tokenize(std::string_view text, const Vocab& vocab);
// Segments a single pre-tokenized word.
std::vector<Token> tokenize_word(std::string_view word, const Vocab& vocab);
std::vector<int> token_ids(std::span<const Token> tokens);

// Joins pieces, dropping "##" markers and restoring single spaces.
std::string detokenize(std::span<const Token> tokens);

}  // namespace cpi::corpus
