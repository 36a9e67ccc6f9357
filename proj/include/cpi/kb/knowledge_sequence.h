#pragma once

#include <string>
#include <vector>

#include "cpi/corpus/document.h"
#include "cpi/corpus/instance.h"
#include "cpi/kb/knowledge_base.h"

namespace cpi::kb {

// Retrieved tags followed by the tokens on the shortest dependency path
// between the two target masks.
struct KnowledgeSequence {
  std::vector<std::string> tags;
  std::vector<std::string> sdp_tokens;

  std::vector<std::string> tokens() const;
  bool empty() const { return tags.empty() && sdp_tokens.empty(); }
};

// Dependency edges of the instance's sentence re-indexed onto the
// instance's tokens: words inside a masked mention map to its mask token.
std::vector<std::pair<std::size_t, std::size_t>> project_edges(const corpus::Instance& instance,
                                                               const corpus::AnnotatedDocument& doc);

// Path endpoints are the two mask tokens; SDP tokens use the instance's
// (masked) surface forms.
KnowledgeSequence build_knowledge_sequence(const corpus::Instance& instance,
                                           const corpus::AnnotatedDocument& doc,
                                           const KnowledgeBase& kb);

}  // namespace cpi::kb
