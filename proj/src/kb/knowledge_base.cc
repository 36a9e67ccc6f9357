#include "cpi/kb/knowledge_base.h"

#include <algorithm>
#include <fstream>

#include "cpi/common.h"
#include "cpi/corpus/text.h"

namespace cpi::kb {

namespace {

bool is_kb_tag(std::string_view tag) {
  return tag.size() == 5 && tag.starts_with("CPR:") && tag[4] >= '3' && tag[4] <= '9';
}

bool is_retrieved_tag(std::string_view tag) {
  return tag == "CPR:4" || tag == "CPR:5" || tag == "CPR:6";
}

}  // namespace

std::string normalize_key(std::string_view text) {
  std::string out = corpus::normalize_whitespace(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return c < 128 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
  });
  return out;
}

void KnowledgeBase::add(std::string_view chemical, std::string_view protein, std::string tag) {
  facts_[{normalize_key(chemical), normalize_key(protein)}].insert(std::move(tag));
}

const std::set<std::string>* KnowledgeBase::find(std::string_view chemical,
                                                 std::string_view protein) const {
  auto it = facts_.find({normalize_key(chemical), normalize_key(protein)});
  return it == facts_.end() ? nullptr : &it->second;
}

KnowledgeBase parse_kb(std::istream& in, const std::string& source) {
  KnowledgeBase kb;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (corpus::normalize_whitespace(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1) {
      cols.push_back(line.substr(start, tab - start));
    }
    cols.push_back(line.substr(start));
    if (cols.size() != 3) {
      throw FormatError(where, "expected 3 tab-separated columns, found " +
                                   std::to_string(cols.size()));
    }
    const std::string tag = corpus::normalize_whitespace(cols[2]);
    if (!is_kb_tag(tag)) throw FormatError(where, "unknown tag '" + cols[2] + "'");
    kb.add(cols[0], cols[1], tag);
  }
  return kb;
}

KnowledgeBase load_kb(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open knowledge base " + path.string());
  return parse_kb(in, path.string());
}

std::vector<std::string> lookup_cpr_tags(std::string_view chemical, std::string_view protein,
                                         const KnowledgeBase& kb) {
  const auto* tags = kb.find(chemical, protein);
  if (!tags) return {};
  std::vector<std::string> kept;
  for (const auto& t : *tags) {
    if (is_retrieved_tag(t)) kept.push_back(t);
  }
  if (kept.size() > 1) return {};
  return kept;
}

}  // namespace cpi::kb
