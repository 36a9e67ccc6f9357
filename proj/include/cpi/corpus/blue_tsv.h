#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cpi/corpus/instance.h"
#include "cpi/labels.h"

namespace cpi::corpus {

// Reads the pre-masked tab-separated instance format (index, sentence,
// label; optional "index" header row). The document id is the index up to
// its first '.'. Instances of one document are grouped into sentences by
// aligning their token sequences with each mask acting as a wildcard for
// the mention it hides; a group of size one is a normal instance.
// Labels: CPI uses CPR:N / false, DDI uses DDI-<type> / DDI-false.
std::vector<Instance> read_blue_tsv(const std::filesystem::path& path, const LabelSet& labels,
                                    TaskMode task);
std::vector<Instance> read_blue_tsv(std::istream& in, const std::string& source,
                                    const LabelSet& labels, TaskMode task);

// True when the two masked token sequences can come from one sentence.
bool same_source_sentence(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace cpi::corpus
