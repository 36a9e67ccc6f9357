#include "cpi/corpus/document.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <set>

#include <nlohmann/json.hpp>

#include "cpi/corpus/text.h"

namespace cpi::corpus {

namespace {

using nlohmann::json;

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = std::to_string(problems.size()) + " invalid corpus record(s):";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

EntityKind parse_kind(std::string kind) {
  std::transform(kind.begin(), kind.end(), kind.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (kind == "chemical") return EntityKind::kChemical;
  if (kind == "protein" || kind == "gene" || kind == "gene-y" || kind == "gene-n") {
    return EntityKind::kProtein;
  }
  throw ValidationError("unknown entity kind '" + kind + "'");
}

bool is_known_label(const std::string& label, const CorpusFormat& format) {
  if (LabelSet::for_task(format.task).find(label)) return true;
  // Unevaluated CHEMPROT groups are accepted and ignored downstream.
  static const std::regex kCprGroup("CPR:[0-9]+");
  return format.task == TaskMode::kCpi && std::regex_match(label, kCprGroup);
}

AnnotatedDocument document_from_json(const json& j) {
  AnnotatedDocument doc;
  doc.doc_id = j.at("doc_id").get<std::string>();
  doc.title = j.value("title", "");
  std::vector<std::vector<std::size_t>> offsets;
  bool any_edges = false;
  std::vector<DepEdge> edges;
  const auto& sentences = j.at("sentences");
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto& sj = sentences[s];
    doc.sentences.push_back({sj.at("text").get<std::string>()});
    offsets.push_back(code_point_offsets(doc.sentences.back().text));
    if (sj.contains("dep_edges")) {
      any_edges = true;
      for (const auto& e : sj.at("dep_edges")) {
        if (!e.is_array() || e.size() != 2) {
          throw ValidationError("sentence " + std::to_string(s) +
                                ": dep_edges entries must be [head, dependent]");
        }
        edges.push_back({s, e[0].get<std::size_t>(), e[1].get<std::size_t>()});
      }
    }
  }
  if (any_edges) doc.dep_edges = std::move(edges);

  for (const auto& ej : j.value("entities", json::array())) {
    EntityMention m;
    m.entity_id = ej.at("id").get<std::string>();
    m.kind = parse_kind(ej.at("kind").get<std::string>());
    m.sentence_index = ej.at("sentence").get<std::size_t>();
    const auto start = ej.at("start").get<std::size_t>();
    const auto end = ej.at("end").get<std::size_t>();
    m.surface = ej.at("text").get<std::string>();
    if (m.sentence_index >= doc.sentences.size()) {
      throw ValidationError("entity " + m.entity_id + ": sentence index " +
                            std::to_string(m.sentence_index) + " out of range");
    }
    const auto& cps = offsets[m.sentence_index];
    if (start >= end || end >= cps.size()) {
      throw ValidationError("entity " + m.entity_id + ": span [" + std::to_string(start) + ", " +
                            std::to_string(end) + ") does not fit sentence " +
                            std::to_string(m.sentence_index));
    }
    m.start = cps[start];
    m.end = cps[end];
    doc.entities.push_back(std::move(m));
  }
  for (const auto& rj : j.value("relations", json::array())) {
    doc.relations.push_back({rj.at("chem_id").get<std::string>(),
                             rj.at("prot_id").get<std::string>(),
                             rj.at("label").get<std::string>()});
  }
  return doc;
}

}  // namespace

const EntityMention* AnnotatedDocument::find_entity(std::string_view id) const {
  for (const auto& e : entities) {
    if (e.entity_id == id) return &e;
  }
  return nullptr;
}

std::vector<std::pair<std::size_t, std::size_t>> AnnotatedDocument::sentence_edges(
    std::size_t sentence) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (!dep_edges) return out;
  for (const auto& e : *dep_edges) {
    if (e.sentence_index == sentence) out.emplace_back(e.head, e.dependent);
  }
  return out;
}

CorpusError::CorpusError(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

void validate_document(const AnnotatedDocument& doc, const CorpusFormat& format) {
  if (doc.doc_id.empty()) throw ValidationError("document has an empty doc_id");
  std::set<std::string_view> ids;
  for (const auto& e : doc.entities) {
    if (!ids.insert(e.entity_id).second) {
      throw ValidationError("entity " + e.entity_id + ": duplicate id");
    }
    if (e.sentence_index >= doc.sentences.size()) {
      throw ValidationError("entity " + e.entity_id + ": sentence index out of range");
    }
    const auto& text = doc.sentences[e.sentence_index].text;
    if (e.start >= e.end || e.end > text.size()) {
      throw ValidationError("entity " + e.entity_id + ": span outside its sentence");
    }
    const auto actual = text.substr(e.start, e.end - e.start);
    if (actual != e.surface) {
      throw ValidationError("entity " + e.entity_id + ": text '" + e.surface +
                            "' does not match sentence substring '" + actual + "'");
    }
  }
  for (const auto& r : doc.relations) {
    const auto* chem = doc.find_entity(r.chem_id);
    const auto* prot = doc.find_entity(r.prot_id);
    if (!chem || !prot) {
      throw ValidationError("relation " + r.chem_id + "-" + r.prot_id +
                            ": references an unknown entity id");
    }
    if (chem->kind != EntityKind::kChemical || prot->kind != EntityKind::kProtein) {
      throw ValidationError("relation " + r.chem_id + "-" + r.prot_id +
                            ": expects (chemical, protein) entity kinds");
    }
    if (!is_known_label(r.label, format)) {
      throw ValidationError("relation " + r.chem_id + "-" + r.prot_id + ": unknown label '" +
                            r.label + "'");
    }
  }
  if (doc.dep_edges) {
    std::vector<std::size_t> word_counts;
    for (const auto& s : doc.sentences) word_counts.push_back(pre_tokenize(s.text).size());
    for (const auto& e : *doc.dep_edges) {
      if (e.sentence_index >= word_counts.size() || e.head >= word_counts[e.sentence_index] ||
          e.dependent >= word_counts[e.sentence_index]) {
        throw ValidationError("dep edge (" + std::to_string(e.head) + ", " +
                              std::to_string(e.dependent) + ") in sentence " +
                              std::to_string(e.sentence_index) + " is out of range");
      }
    }
  }
}

std::vector<AnnotatedDocument> parse_corpus(std::istream& in, const std::string& source,
                                            const CorpusFormat& format) {
  std::vector<AnnotatedDocument> docs;
  std::vector<std::string> problems;
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    ++record;
    if (normalize_whitespace(line).empty()) continue;
    const std::string where = source + ": record " + std::to_string(record);
    try {
      auto doc = document_from_json(json::parse(line));
      validate_document(doc, format);
      if (auto [it, fresh] = seen.emplace(doc.doc_id, record); !fresh) {
        throw ValidationError("duplicate doc_id '" + doc.doc_id + "' (first at record " +
                              std::to_string(it->second) + ")");
      }
      docs.push_back(std::move(doc));
    } catch (const json::exception& e) {
      problems.push_back(where + ": malformed record: " + e.what());
    } catch (const Error& e) {
      problems.push_back(where + ": " + e.what());
    }
  }
  if (!problems.empty()) throw CorpusError(std::move(problems));
  return docs;
}

std::vector<AnnotatedDocument> parse_corpus(const std::filesystem::path& path,
                                            const CorpusFormat& format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path.string());
  return parse_corpus(in, path.string(), format);
}

std::string to_json_line(const AnnotatedDocument& doc) {
  json j;
  j["doc_id"] = doc.doc_id;
  j["title"] = doc.title;
  j["sentences"] = json::array();
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    json sj = {{"text", doc.sentences[s].text}};
    if (doc.dep_edges) {
      json edges = json::array();
      for (const auto& [head, dep] : doc.sentence_edges(s)) edges.push_back({head, dep});
      sj["dep_edges"] = std::move(edges);
    }
    j["sentences"].push_back(std::move(sj));
  }
  j["entities"] = json::array();
  for (const auto& e : doc.entities) {
    // Byte offsets back to code-point offsets.
    const auto cps = code_point_offsets(doc.sentences.at(e.sentence_index).text);
    const auto start = std::lower_bound(cps.begin(), cps.end(), e.start) - cps.begin();
    const auto end = std::lower_bound(cps.begin(), cps.end(), e.end) - cps.begin();
    j["entities"].push_back({{"id", e.entity_id},
                             {"kind", e.kind == EntityKind::kChemical ? "chemical" : "protein"},
                             {"sentence", e.sentence_index},
                             {"start", start},
                             {"end", end},
                             {"text", e.surface}});
  }
  j["relations"] = json::array();
  for (const auto& r : doc.relations) {
    j["relations"].push_back({{"chem_id", r.chem_id}, {"prot_id", r.prot_id}, {"label", r.label}});
  }
  return j.dump();
}

void write_corpus(const std::filesystem::path& path, const std::vector<AnnotatedDocument>& docs) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write corpus file " + path.string());
  for (const auto& doc : docs) out << to_json_line(doc) << '\n';
}

}  // namespace cpi::corpus
