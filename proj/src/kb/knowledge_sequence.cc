#include "cpi/kb/knowledge_sequence.h"

#include "cpi/corpus/text.h"
#include "cpi/kb/dependency_path.h"

namespace cpi::kb {

std::vector<std::string> KnowledgeSequence::tokens() const {
  std::vector<std::string> out = tags;
  out.insert(out.end(), sdp_tokens.begin(), sdp_tokens.end());
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> project_edges(const corpus::Instance& instance,
                                                               const corpus::AnnotatedDocument& doc) {
  const auto edges = doc.sentence_edges(instance.sentence_index);
  if (edges.empty() || instance.token_offsets.size() != instance.tokens.size()) return {};
  const auto words = corpus::pre_tokenize(doc.sentences.at(instance.sentence_index).text);

  // First instance token overlapping each sentence word.
  std::vector<std::size_t> word_to_token(words.size(), 0);
  std::size_t t = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    while (t + 1 < instance.token_offsets.size() &&
           instance.token_offsets[t].second <= words[w].begin) {
      ++t;
    }
    word_to_token[w] = t;
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [head, dep] : edges) {
    const std::size_t a = word_to_token.at(head);
    const std::size_t b = word_to_token.at(dep);
    if (a != b) out.emplace_back(a, b);
  }
  return out;
}

KnowledgeSequence build_knowledge_sequence(const corpus::Instance& instance,
                                           const corpus::AnnotatedDocument& doc,
                                           const KnowledgeBase& kb) {
  KnowledgeSequence k;
  const auto* chem = doc.find_entity(instance.chem_id);
  const auto* prot = doc.find_entity(instance.prot_id);
  if (chem && prot) k.tags = lookup_cpr_tags(chem->surface, prot->surface, kb);
  if (instance.target1 && instance.target2) {
    const auto edges = project_edges(instance, doc);
    if (!edges.empty()) {
      for (std::size_t i : shortest_dependency_path(edges, instance.target1->first,
                                                    instance.target2->first)) {
        if (i < instance.tokens.size()) k.sdp_tokens.push_back(instance.tokens[i]);
      }
    }
  }
  return k;
}

}  // namespace cpi::kb
