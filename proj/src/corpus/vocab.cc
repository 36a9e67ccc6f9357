#include "cpi/corpus/vocab.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cpi/corpus/text.h"

namespace cpi::corpus {

namespace {

constexpr std::string_view kContinuation = "##";
constexpr std::size_t kMaxWordBytes = 100;

std::vector<std::string> reserved_pieces() {
  std::vector<std::string> out;
  for (auto s : Vocab::kSpecials) out.emplace_back(s);
  for (auto s : Vocab::kTagTokens) out.emplace_back(s);
  return out;
}

struct Candidate {
  std::string piece;
  std::size_t count = 0;
};

}  // namespace

Vocab::Vocab() : Vocab(reserved_pieces()) {}

Vocab::Vocab(std::vector<std::string> pieces) : pieces_(std::move(pieces)) {
  const auto reserved = reserved_pieces();
  if (pieces_.size() < reserved.size() ||
      !std::equal(reserved.begin(), reserved.end(), pieces_.begin())) {
    throw ValidationError("vocab: reserved tokens missing or out of order");
  }
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!index_.emplace(pieces_[i], static_cast<int>(i)).second) {
      throw ValidationError("vocab: duplicate piece '" + pieces_[i] + "'");
    }
  }
}

bool Vocab::contains(std::string_view piece) const {
  return index_.find(std::string(piece)) != index_.end();
}

int Vocab::id(std::string_view piece) const {
  auto it = index_.find(std::string(piece));
  return it == index_.end() ? kUnk : it->second;
}

std::string Vocab::serialize() const {
  std::string out;
  for (const auto& p : pieces_) out += p + "\n";
  return out;
}

Vocab Vocab::deserialize(std::string_view text) {
  std::vector<std::string> pieces;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) pieces.push_back(line);
  return Vocab(std::move(pieces));
}

void Vocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write vocab " + path.string());
  out << serialize();
}

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open vocab " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return deserialize(buffer.str());
}

std::string Vocab::fingerprint() const { return hex64(fnv1a64(serialize())); }

Vocab build_vocab(std::span<const std::string> texts, std::size_t max_size, std::size_t min_freq) {
  if (max_size <= Vocab::kReserved) {
    throw ValidationError("vocab: max_size must exceed the " + std::to_string(Vocab::kReserved) +
                          " reserved tokens");
  }
  std::map<std::string, std::size_t> word_counts;
  for (const auto& text : texts) {
    for (auto& piece : pre_tokenize(text)) {
      if (is_entity_mask(piece.text) || piece.text.size() > kMaxWordBytes) continue;
      ++word_counts[piece.text];
    }
  }
  std::erase_if(word_counts, [&](const auto& kv) { return kv.second < min_freq; });
  if (word_counts.empty()) throw ValidationError("vocab: corpus has no words to learn from");

  std::map<std::string, std::size_t> char_counts;
  std::map<std::string, std::size_t> piece_counts;
  for (const auto& [word, count] : word_counts) {
    const auto cps = code_point_offsets(word);
    const std::size_t n = cps.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string ch = word.substr(cps[i], cps[i + 1] - cps[i]);
      char_counts[i == 0 ? ch : std::string(kContinuation) + ch] += count;
    }
    // Every multi-character substring a greedy left-to-right match can use.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 2; j <= n; ++j) {
        const std::string sub = word.substr(cps[i], cps[j] - cps[i]);
        piece_counts[i == 0 ? sub : std::string(kContinuation) + sub] += count;
      }
    }
  }

  auto ranked = [](const std::map<std::string, std::size_t>& counts) {
    std::vector<Candidate> out;
    for (const auto& [piece, count] : counts) out.push_back({piece, count});
    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
      if (a.count != b.count) return a.count > b.count;
      if (a.piece.size() != b.piece.size()) return a.piece.size() > b.piece.size();
      return a.piece < b.piece;
    });
    return out;
  };

  std::vector<std::string> pieces = reserved_pieces();
  std::set<std::string> present(pieces.begin(), pieces.end());
  auto take = [&](const std::vector<Candidate>& candidates) {
    for (const auto& c : candidates) {
      if (pieces.size() >= max_size) return;
      if (present.insert(c.piece).second) pieces.push_back(c.piece);
    }
  };
  take(ranked(char_counts));
  take(ranked(piece_counts));
  return Vocab(std::move(pieces));
}

Vocab build_vocab(std::span<const AnnotatedDocument> docs, std::size_t max_size,
                  std::size_t min_freq) {
  std::vector<std::string> texts;
  for (const auto& doc : docs) {
    if (!doc.title.empty()) texts.push_back(doc.title);
    for (const auto& s : doc.sentences) texts.push_back(s.text);
  }
  return build_vocab(texts, max_size, min_freq);
}

std::vector<Token> tokenize_word(std::string_view word, const Vocab& vocab) {
  if (word == kChemicalMask) return {{Vocab::kChemMask, std::string(word), false}};
  if (word == kGeneMask) return {{Vocab::kGeneMask, std::string(word), false}};
  if (word.size() > kMaxWordBytes) return {{Vocab::kUnk, "[UNK]", false}};

  const auto cps = code_point_offsets(word);
  const std::size_t n = cps.size() - 1;
  std::vector<Token> out;
  std::size_t start = 0;
  while (start < n) {
    int found = -1;
    std::size_t end = n;
    std::string candidate;
    for (; end > start; --end) {
      candidate = std::string(word.substr(cps[start], cps[end] - cps[start]));
      if (start > 0) candidate = std::string(kContinuation) + candidate;
      if (vocab.contains(candidate)) {
        found = vocab.id(candidate);
        break;
      }
    }
    if (found < 0) return {{Vocab::kUnk, "[UNK]", false}};
    out.push_back({found, std::move(candidate), false});
    start = end;
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text, const Vocab& vocab) {
  std::vector<Token> out;
  for (const auto& piece : pre_tokenize(text)) {
    auto tokens = tokenize_word(piece.text, vocab);
    tokens.front().space_before = piece.space_before;
    std::move(tokens.begin(), tokens.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<int> token_ids(std::span<const Token> tokens) {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(t.id);
  return ids;
}

std::string detokenize(std::span<const Token> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (t.piece.starts_with(kContinuation) && t.piece.size() > kContinuation.size()) {
      out += t.piece.substr(kContinuation.size());
      continue;
    }
    if (t.space_before && !out.empty()) out += ' ';
    out += t.piece;
  }
  return out;
}

}  // namespace cpi::corpus
