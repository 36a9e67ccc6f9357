#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpi/corpus/document.h"
#include "cpi/corpus/span.h"
#include "cpi/labels.h"

namespace cpi::corpus {

enum class InstanceKind { kOverlapping, kNormal };

std::string_view to_string(InstanceKind kind);
InstanceKind parse_instance_kind(std::string_view text);

// One masked candidate pair. Tokens are word-level pieces; the target
// chemical and protein mentions are each collapsed into one mask token.
struct Instance {
  std::string instance_id;
  std::string doc_id;
  std::vector<std::string> tokens;
  std::optional<TokenSpan> target1;  // chemical mask
  std::optional<TokenSpan> target2;  // protein mask
  Label label = 0;
  InstanceKind kind = InstanceKind::kNormal;

  // Provenance, empty for instances read from pre-masked text.
  std::size_t sentence_index = 0;
  std::string chem_id;
  std::string prot_id;
  // Byte range of each token in the source sentence.
  std::vector<std::pair<std::size_t, std::size_t>> token_offsets;

  std::string text() const;
};

// One instance per (chemical, protein) mention pair sharing a sentence.
// Gold labels outside `labels` (e.g. unevaluated CPR groups) are ignored;
// a pair with more than one distinct evaluated gold label is dropped with a
// warning. Throws ValidationError if the two target mentions overlap.
std::vector<Instance> generate_instances(const AnnotatedDocument& doc, const LabelSet& labels);
std::vector<Instance> generate_instances(const std::vector<AnnotatedDocument>& docs,
                                         const LabelSet& labels);

}  // namespace cpi::corpus
