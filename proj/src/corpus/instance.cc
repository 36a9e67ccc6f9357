#include "cpi/corpus/instance.h"

#include <map>
#include <set>

#include <spdlog/spdlog.h>

#include "cpi/corpus/text.h"

namespace cpi::corpus {

std::string_view to_string(InstanceKind kind) {
  return kind == InstanceKind::kOverlapping ? "overlapping" : "normal";
}

InstanceKind parse_instance_kind(std::string_view text) {
  if (text == "overlapping") return InstanceKind::kOverlapping;
  if (text == "normal") return InstanceKind::kNormal;
  throw Error("unknown instance kind '" + std::string(text) + "'");
}

std::string Instance::text() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

namespace {

// Word pieces of `text` with the two target mentions replaced by masks.
void mask_sentence(const std::string& text, const EntityMention& chem, const EntityMention& prot,
                   Instance& inst) {
  const bool chem_first = chem.start < prot.start;
  const EntityMention& a = chem_first ? chem : prot;
  const EntityMention& b = chem_first ? prot : chem;
  auto append_text = [&](std::size_t begin, std::size_t end) {
    if (begin >= end) return;
    for (auto& piece : pre_tokenize(std::string_view(text).substr(begin, end - begin), begin)) {
      inst.tokens.push_back(std::move(piece.text));
      inst.token_offsets.emplace_back(piece.begin, piece.end);
    }
  };
  auto append_mask = [&](const EntityMention& m) {
    const bool is_chem = &m == &chem;
    const TokenSpan span{inst.tokens.size(), inst.tokens.size()};
    (is_chem ? inst.target1 : inst.target2) = span;
    inst.tokens.emplace_back(is_chem ? kChemicalMask : kGeneMask);
    inst.token_offsets.emplace_back(m.start, m.end);
  };
  append_text(0, a.start);
  append_mask(a);
  append_text(a.end, b.start);
  append_mask(b);
  append_text(b.end, text.size());
}

}  // namespace

std::vector<Instance> generate_instances(const AnnotatedDocument& doc, const LabelSet& labels) {
  std::map<std::pair<std::string_view, std::string_view>, std::set<Label>> gold;
  for (const auto& r : doc.relations) {
    auto& set = gold[{r.chem_id, r.prot_id}];
    if (auto label = labels.find(r.label)) {
      if (labels.is_positive(*label)) set.insert(*label);
    }
  }

  std::vector<Instance> out;
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    std::vector<const EntityMention*> chems, prots;
    for (const auto& e : doc.entities) {
      if (e.sentence_index != s) continue;
      (e.kind == EntityKind::kChemical ? chems : prots).push_back(&e);
    }
    const InstanceKind kind =
        chems.size() * prots.size() == 1 ? InstanceKind::kNormal : InstanceKind::kOverlapping;
    for (const auto* chem : chems) {
      for (const auto* prot : prots) {
        if (chem->start < prot->end && prot->start < chem->end) {
          throw ValidationError("document " + doc.doc_id + ": entities " + chem->entity_id +
                                " and " + prot->entity_id + " overlap in sentence " +
                                std::to_string(s));
        }
        Label label = labels.negative();
        if (auto it = gold.find({chem->entity_id, prot->entity_id}); it != gold.end()) {
          if (it->second.size() > 1) {
            spdlog::warn("{}: pair ({}, {}) has {} distinct gold labels; instance dropped",
                         doc.doc_id, chem->entity_id, prot->entity_id, it->second.size());
            continue;
          }
          if (!it->second.empty()) label = *it->second.begin();
        }
        Instance inst;
        inst.instance_id = doc.doc_id + "." + chem->entity_id + "." + prot->entity_id;
        inst.doc_id = doc.doc_id;
        inst.label = label;
        inst.kind = kind;
        inst.sentence_index = s;
        inst.chem_id = chem->entity_id;
        inst.prot_id = prot->entity_id;
        mask_sentence(doc.sentences[s].text, *chem, *prot, inst);
        out.push_back(std::move(inst));
      }
    }
  }
  return out;
}

std::vector<Instance> generate_instances(const std::vector<AnnotatedDocument>& docs,
                                         const LabelSet& labels) {
  std::vector<Instance> out;
  for (const auto& doc : docs) {
    auto part = generate_instances(doc, labels);
    std::move(part.begin(), part.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace cpi::corpus
