#include "cpi/corpus/blue_tsv.h"

#include <fstream>
#include <map>

#include "cpi/corpus/text.h"

namespace cpi::corpus {

namespace {

Label map_label(const std::string& raw, const LabelSet& labels, TaskMode task) {
  if (auto direct = labels.find(raw)) return *direct;
  if (task == TaskMode::kCpi) {
    if (raw == "false") return labels.negative();
  } else {
    static const std::map<std::string, std::string> kDdi = {
        {"DDI-advise", "Advice"}, {"DDI-effect", "Effect"}, {"DDI-mechanism", "Mechanism"},
        {"DDI-int", "Int"},       {"DDI-false", "False"}};
    if (auto it = kDdi.find(raw); it != kDdi.end()) return labels.at(it->second);
  }
  throw ValidationError("unknown label '" + raw + "'");
}

void locate_targets(Instance& inst, TaskMode task) {
  for (std::size_t i = 0; i < inst.tokens.size(); ++i) {
    const auto& t = inst.tokens[i];
    const TokenSpan here{i, i};
    if (t == "@CHEM-GENE$" || t == "@DRUG-DRUG$") {
      inst.target1 = here;
      inst.target2 = here;
    } else if (task == TaskMode::kCpi) {
      if (t == kChemicalMask && !inst.target1) inst.target1 = here;
      if (t == kGeneMask && !inst.target2) inst.target2 = here;
    } else if (t == "@DRUG$") {
      (!inst.target1 ? inst.target1 : inst.target2) = here;
    }
  }
}

}  // namespace

bool same_source_sentence(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::size_t n = a.size(), m = b.size();
  // reach[(i * (m + 1) + j) * 3 + mode]: a[i:] aligns with b[j:].
  // mode 1: a[i] is a mask that already absorbed at least one token of b;
  // mode 2: the same with the roles swapped.
  std::vector<char> reach((n + 1) * (m + 1) * 3, 0);
  auto at = [&](std::size_t i, std::size_t j, int mode) -> char& {
    return reach[(i * (m + 1) + j) * 3 + mode];
  };
  auto mask_a = [&](std::size_t i) { return i < n && is_entity_mask(a[i]); };
  auto mask_b = [&](std::size_t j) { return j < m && is_entity_mask(b[j]); };
  for (std::size_t i = n + 1; i-- > 0;) {
    for (std::size_t j = m + 1; j-- > 0;) {
      if (i < n) {
        at(i, j, 1) = at(i + 1, j, 0) || (j < m && !mask_b(j) && at(i, j + 1, 1));
      }
      if (j < m) {
        at(i, j, 2) = at(i, j + 1, 0) || (i < n && !mask_a(i) && at(i + 1, j, 2));
      }
      char& free = at(i, j, 0);
      if (i == n && j == m) {
        free = 1;
      } else if (i < n && j < m) {
        if (mask_a(i) && mask_b(j)) free = at(i + 1, j + 1, 0);
        else if (mask_a(i)) free = at(i, j + 1, 1);
        else if (mask_b(j)) free = at(i + 1, j, 2);
        else free = a[i] == b[j] && at(i + 1, j + 1, 0);
      }
    }
  }
  return at(0, 0, 0);
}

std::vector<Instance> read_blue_tsv(std::istream& in, const std::string& source,
                                    const LabelSet& labels, TaskMode task) {
  std::vector<Instance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.starts_with("index\t")) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
      fields.push_back(line.substr(start, tab - start));
    }
    fields.push_back(line.substr(start));
    if (fields.size() != 3) {
      throw FormatError(where, "expected 3 tab-separated columns, found " +
                                   std::to_string(fields.size()));
    }
    Instance inst;
    inst.instance_id = fields[0];
    inst.doc_id = fields[0].substr(0, fields[0].find('.'));
    try {
      inst.label = map_label(fields[2], labels, task);
    } catch (const ValidationError& e) {
      throw FormatError(where, e.what());
    }
    for (auto& piece : pre_tokenize(fields[1])) {
      inst.tokens.push_back(std::move(piece.text));
      inst.token_offsets.emplace_back(piece.begin, piece.end);
    }
    locate_targets(inst, task);
    out.push_back(std::move(inst));
  }

  // Group each document's instances by source sentence.
  std::map<std::string, std::vector<std::vector<std::size_t>>> groups;
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto& doc_groups = groups[out[k].doc_id];
    bool placed = false;
    for (auto& group : doc_groups) {
      for (std::size_t member : group) {
        if (same_source_sentence(out[member].tokens, out[k].tokens)) {
          group.push_back(k);
          placed = true;
          break;
        }
      }
      if (placed) break;
    }
    if (!placed) doc_groups.push_back({k});
  }
  for (auto& [doc, doc_groups] : groups) {
    for (std::size_t g = 0; g < doc_groups.size(); ++g) {
      for (std::size_t member : doc_groups[g]) {
        out[member].kind = doc_groups[g].size() == 1 ? InstanceKind::kNormal
                                                     : InstanceKind::kOverlapping;
        out[member].sentence_index = g;
      }
    }
  }
  return out;
}

std::vector<Instance> read_blue_tsv(const std::filesystem::path& path, const LabelSet& labels,
                                    TaskMode task) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_blue_tsv(in, path.string(), labels, task);
}

}  // namespace cpi::corpus
