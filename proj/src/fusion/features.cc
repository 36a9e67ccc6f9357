#include "cpi/fusion/features.h"

#include "cpi/corpus/text.h"
#include "cpi/kb/knowledge_sequence.h"

namespace cpi::fusion {

using corpus::Vocab;

std::vector<int> encode_words(std::span<const std::string> words, const Vocab& vocab) {
  std::vector<int> ids{Vocab::kSeqStart};
  for (const auto& w : words) {
    for (const auto& t : corpus::tokenize_word(w, vocab)) ids.push_back(t.id);
  }
  ids.push_back(Vocab::kSeqEnd);
  return ids;
}

std::vector<int> encode_text(std::string_view text, const Vocab& vocab) {
  std::vector<int> ids{Vocab::kSeqStart};
  for (const auto& t : corpus::tokenize(text, vocab)) ids.push_back(t.id);
  ids.push_back(Vocab::kSeqEnd);
  return ids;
}

ModelInput featurize(const corpus::Instance& instance, const Vocab& vocab, std::string_view title,
                     std::span<const std::string> knowledge) {
  if (!instance.target1 || !instance.target2) {
    throw ValidationError("instance " + instance.instance_id + ": missing target span");
  }
  if (instance.tokens.empty()) throw ValidationError("instance " + instance.instance_id + ": empty");
  ModelInput input;
  input.instance_ids.push_back(Vocab::kSeqStart);
  // first[w] / last[w]: encoded positions of word w's pieces.
  std::vector<std::size_t> first(instance.tokens.size()), last(instance.tokens.size());
  for (std::size_t w = 0; w < instance.tokens.size(); ++w) {
    first[w] = input.instance_ids.size();
    for (const auto& t : corpus::tokenize_word(instance.tokens[w], vocab)) {
      input.instance_ids.push_back(t.id);
    }
    last[w] = input.instance_ids.size() - 1;
  }
  input.instance_ids.push_back(Vocab::kSeqEnd);
  auto move_span = [&](corpus::TokenSpan s) {
    if (s.last >= instance.tokens.size() || s.first > s.last) {
      throw ValidationError("instance " + instance.instance_id + ": target span out of range");
    }
    return corpus::TokenSpan{first[s.first], last[s.last]};
  };
  input.target1 = move_span(*instance.target1);
  input.target2 = move_span(*instance.target2);
  input.title_ids = encode_text(title, vocab);
  input.knowledge_ids = encode_words(knowledge, vocab);
  return input;
}

std::vector<Example> prepare_examples(std::span<const corpus::AnnotatedDocument> docs,
                                      const LabelSet& labels, const kb::KnowledgeBase& kb,
                                      const Vocab& vocab) {
  std::vector<Example> out;
  for (const auto& doc : docs) {
    for (const auto& inst : corpus::generate_instances(doc, labels)) {
      const auto know = kb::build_knowledge_sequence(inst, doc, kb).tokens();
      out.push_back({inst.instance_id, featurize(inst, vocab, doc.title, know), inst.label, inst.kind});
    }
  }
  return out;
}

std::vector<Example> prepare_examples(std::span<const corpus::Instance> instances,
                                      const Vocab& vocab) {
  std::vector<Example> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    out.push_back({inst.instance_id, featurize(inst, vocab), inst.label, inst.kind});
  }
  return out;
}

}  // namespace cpi::fusion
