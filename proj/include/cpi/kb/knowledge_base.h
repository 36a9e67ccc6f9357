#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cpi::kb {

// Lowercases ASCII letters and collapses whitespace.
std::string normalize_key(std::string_view text);

// Immutable-after-load table of (chemical, protein) -> CPR tags.
class KnowledgeBase {
 public:
  void add(std::string_view chemical, std::string_view protein, std::string tag);

  std::size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }
  // nullptr when the pair is absent.
  const std::set<std::string>* find(std::string_view chemical, std::string_view protein) const;

 private:
  std::map<std::pair<std::string, std::string>, std::set<std::string>> facts_;
};

// Tab-separated chemical, protein, tag with tag in CPR:3..CPR:9. Blank
// lines are skipped; duplicate rows collapse. Errors carry the line number.
KnowledgeBase load_kb(const std::filesystem::path& path);
KnowledgeBase parse_kb(std::istream& in, const std::string& source);

// The pair's tags restricted to CPR:4, CPR:5 and CPR:6. A pair with more
// than one distinct tag left after that filter is ambiguous and yields none.
std::vector<std::string> lookup_cpr_tags(std::string_view chemical, std::string_view protein,
                                         const KnowledgeBase& kb);

}  // namespace cpi::kb
