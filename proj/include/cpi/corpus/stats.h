#pragma once

#include <span>
#include <string>
#include <vector>

#include "cpi/corpus/instance.h"
#include "cpi/labels.h"

namespace cpi::corpus {

struct SplitStats {
  std::string split;
  std::vector<std::size_t> label_counts;  // indexed by Label
  std::size_t overlapping = 0;
  std::size_t normal = 0;
  std::size_t total = 0;
};

// Per-split counts by label and by instance kind, plus a summed total row.
struct StatsTable {
  std::vector<std::string> labels;
  std::vector<SplitStats> splits;

  SplitStats total() const;
  // Label counts per split (the CPR-type statistics table).
  std::string format_labels() const;
  // Overlapping / normal / all per split.
  std::string format_kinds() const;
  // split,<label...>,overlapping,normal,all with a trailing Total row.
  std::string to_csv() const;
};

struct NamedSplit {
  std::string name;
  std::span<const Instance> instances;
};

SplitStats split_stats(std::string name, std::span<const Instance> instances,
                       const LabelSet& labels);
StatsTable corpus_stats(std::span<const NamedSplit> splits, const LabelSet& labels);
// Single split named "all".
StatsTable corpus_stats(std::span<const Instance> instances, const LabelSet& labels);

}  // namespace cpi::corpus
