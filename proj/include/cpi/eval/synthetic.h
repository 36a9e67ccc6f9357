#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <tuple>
#include <vector>

#include "cpi/corpus/document.h"

namespace cpi::eval {

struct SyntheticSpec {
  std::size_t n_docs = 200;
  // Chance that a sentence gets a third chemical (and, independently, a
  // third protein) instead of two.
  double third_entity_prob = 0.1;
  // Chance that an adjacent chemical-protein pair is joined by a trigger.
  double trigger_prob = 0.75;
  // Fraction of positive pairs written to the knowledge base.
  double kb_coverage = 0.3;
};

struct KbRow {
  std::string chemical;
  std::string protein;
  std::string tag;
};

struct SyntheticCorpus {
  std::vector<corpus::AnnotatedDocument> train;
  std::vector<corpus::AnnotatedDocument> dev;
  std::vector<corpus::AnnotatedDocument> test;
  std::vector<KbRow> kb;
};

// One-sentence documents mixing 2-3 chemicals and 2-3 proteins. Adjacent
// chemical-protein mentions are usually joined by a trigger verb that fixes
// the pair's CPR label; every other pair is unrelated. Titles mention a
// word tied to the document's first relation. Documents are split 70/15/15
// in generation order. Throws ValidationError if n_docs < 50.
SyntheticCorpus make_synthetic_corpus(std::uint64_t seed, const SyntheticSpec& spec = {});

// Label a pair gets from a trigger word within two tokens of both mentions,
// "False" without one. Positions index the sentence's pre-tokenized words.
std::string trigger_oracle(const std::vector<std::string>& words, std::size_t chem_pos,
                           std::size_t prot_pos);

// train.jsonl, dev.jsonl, test.jsonl and kb.tsv under `dir`.
void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

}  // namespace cpi::eval
