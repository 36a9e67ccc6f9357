#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cpi/corpus/instance.h"
#include "cpi/eval/metrics.h"
#include "cpi/labels.h"

namespace cpi::eval {

struct PredictionRecord {
  std::string instance_id;
  std::string gold;
  std::string predicted;
  corpus::InstanceKind kind = corpus::InstanceKind::kNormal;
};

// Tab-separated instance_id, gold, predicted, kind under a header line.
void write_predictions(std::ostream& out, std::span<const PredictionRecord> records);
void write_predictions(const std::filesystem::path& path, std::span<const PredictionRecord> records);
std::vector<PredictionRecord> read_predictions(std::istream& in, const std::string& source);
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);

// Stratified report over saved predictions. Label names must belong to
// `labels`.
EvalReport evaluate_predictions(std::span<const PredictionRecord> records, const LabelSet& labels);

}  // namespace cpi::eval
