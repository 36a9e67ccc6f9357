#include "cpi/corpus/stats.h"

#include <algorithm>
#include <sstream>

namespace cpi::corpus {

namespace {

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string with_commas(std::size_t n) {
  std::string digits = std::to_string(n);
  for (int i = static_cast<int>(digits.size()) - 3; i > 0; i -= 3) digits.insert(i, ",");
  return digits;
}

}  // namespace

SplitStats split_stats(std::string name, std::span<const Instance> instances,
                       const LabelSet& labels) {
  SplitStats s;
  s.split = std::move(name);
  s.label_counts.assign(labels.size(), 0);
  for (const auto& inst : instances) {
    ++s.label_counts.at(inst.label);
    ++(inst.kind == InstanceKind::kOverlapping ? s.overlapping : s.normal);
    ++s.total;
  }
  return s;
}

StatsTable corpus_stats(std::span<const NamedSplit> splits, const LabelSet& labels) {
  StatsTable table;
  table.labels = labels.names();
  for (const auto& split : splits) {
    table.splits.push_back(split_stats(split.name, split.instances, labels));
  }
  return table;
}

StatsTable corpus_stats(std::span<const Instance> instances, const LabelSet& labels) {
  const NamedSplit all{"all", instances};
  return corpus_stats(std::span(&all, 1), labels);
}

SplitStats StatsTable::total() const {
  SplitStats t;
  t.split = "Total";
  t.label_counts.assign(labels.size(), 0);
  for (const auto& s : splits) {
    for (std::size_t i = 0; i < labels.size(); ++i) t.label_counts[i] += s.label_counts[i];
    t.overlapping += s.overlapping;
    t.normal += s.normal;
    t.total += s.total;
  }
  return t;
}

std::string StatsTable::format_labels() const {
  std::ostringstream out;
  out << pad("Set", 16);
  for (const auto& l : labels) out << pad(l, 10);
  out << "\n";
  auto rows = splits;
  rows.push_back(total());
  for (const auto& s : rows) {
    out << pad(s.split, 16);
    for (auto c : s.label_counts) out << pad(with_commas(c), 10);
    out << "\n";
  }
  return out.str();
}

std::string StatsTable::format_kinds() const {
  std::ostringstream out;
  out << pad("Set", 16) << pad("Overlapping", 13) << pad("Normal", 10) << "All\n";
  auto rows = splits;
  rows.push_back(total());
  for (const auto& s : rows) {
    out << pad(s.split, 16) << pad(with_commas(s.overlapping), 13)
        << pad(with_commas(s.normal), 10) << with_commas(s.total) << "\n";
  }
  return out.str();
}

std::string StatsTable::to_csv() const {
  std::ostringstream out;
  out << "split";
  for (const auto& l : labels) out << "," << l;
  out << ",overlapping,normal,all\n";
  auto rows = splits;
  rows.push_back(total());
  for (const auto& s : rows) {
    out << s.split;
    for (auto c : s.label_counts) out << "," << c;
    out << "," << s.overlapping << "," << s.normal << "," << s.total << "\n";
  }
  return out.str();
}

}  // namespace cpi::corpus
