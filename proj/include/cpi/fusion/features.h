#pragma once

#include <span>
#include <string>
#include <vector>

#include "cpi/corpus/document.h"
#include "cpi/corpus/instance.h"
#include "cpi/corpus/vocab.h"
#include "cpi/fusion/model.h"
#include "cpi/kb/knowledge_base.h"

namespace cpi::fusion {

// One model-ready training or evaluation item.
struct Example {
  std::string instance_id;
  ModelInput input;
  Label gold = 0;
  corpus::InstanceKind kind = corpus::InstanceKind::kNormal;
};

// [CLS] pieces [SEP]; an empty sequence yields the bare delimiters.
std::vector<int> encode_words(std::span<const std::string> words, const corpus::Vocab& vocab);
std::vector<int> encode_text(std::string_view text, const corpus::Vocab& vocab);

// Word-level instance tokens to encoder ids, with target spans moved onto
// the encoded positions. Throws ValidationError if a target is missing.
ModelInput featurize(const corpus::Instance& instance, const corpus::Vocab& vocab,
                     std::string_view title = {},
                     std::span<const std::string> knowledge = {});

// Instances of every document with their titles and knowledge sequences.
std::vector<Example> prepare_examples(std::span<const corpus::AnnotatedDocument> docs,
                                      const LabelSet& labels, const kb::KnowledgeBase& kb,
                                      const corpus::Vocab& vocab);
// Pre-masked instances without document context.
std::vector<Example> prepare_examples(std::span<const corpus::Instance> instances,
                                      const corpus::Vocab& vocab);

}  // namespace cpi::fusion
