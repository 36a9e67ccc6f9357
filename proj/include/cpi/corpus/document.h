#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpi/common.h"
#include "cpi/labels.h"

namespace cpi::corpus {

enum class EntityKind { kChemical, kProtein };

struct EntityMention {
  std::string entity_id;
  EntityKind kind = EntityKind::kChemical;
  std::size_t sentence_index = 0;
  // Half-open byte range inside the sentence text.
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
};

struct GoldRelation {
  std::string chem_id;
  std::string prot_id;
  std::string label;
};

struct DepEdge {
  std::size_t sentence_index = 0;
  std::size_t head = 0;
  std::size_t dependent = 0;
};

struct Sentence {
  std::string text;
};

struct AnnotatedDocument {
  std::string doc_id;
  std::string title;
  std::vector<Sentence> sentences;
  std::vector<EntityMention> entities;
  std::vector<GoldRelation> relations;
  // Indices refer to pre_tokenize() pieces of the edge's sentence.
  std::optional<std::vector<DepEdge>> dep_edges;

  const EntityMention* find_entity(std::string_view id) const;
  // Edges of one sentence as (head, dependent) pairs.
  std::vector<std::pair<std::size_t, std::size_t>> sentence_edges(std::size_t sentence) const;
};

struct CorpusFormat {
  TaskMode task = TaskMode::kCpi;
};

// Every problem found while reading a corpus, one line per record.
class CorpusError : public Error {
 public:
  explicit CorpusError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Reads the line-delimited JSON corpus format, one document per line:
//   {doc_id, title, sentences: [{text, dep_edges?: [[head, dep], ...]}],
//    entities: [{id, kind, sentence, start, end, text}],
//    relations: [{chem_id, prot_id, label}]}
// Entity offsets in the file are code-point offsets into the sentence.
// All invalid records are reported together in one CorpusError.
std::vector<AnnotatedDocument> parse_corpus(const std::filesystem::path& path,
                                            const CorpusFormat& format = {});
std::vector<AnnotatedDocument> parse_corpus(std::istream& in, const std::string& source,
                                            const CorpusFormat& format = {});

// Throws ValidationError naming the offending entity or relation.
void validate_document(const AnnotatedDocument& doc, const CorpusFormat& format = {});

// Inverse of parse for one document (a single JSON line, no newline).
std::string to_json_line(const AnnotatedDocument& doc);
void write_corpus(const std::filesystem::path& path, const std::vector<AnnotatedDocument>& docs);

}  // namespace cpi::corpus
