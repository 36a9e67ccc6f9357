#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cpi/eval/metrics.h"
#include "cpi/fusion/config.h"
#include "cpi/fusion/features.h"
#include "cpi/fusion/model.h"

namespace cpi::fusion {

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  eval::PRF dev;
};

// {"epoch":..,"train_loss":..,"dev_P":..,"dev_R":..,"dev_F":..}
std::string to_json_line(const EpochRecord& record);

struct TrainResult {
  Model model;
  std::vector<EpochRecord> log;
  // Epoch whose parameters the model holds (1-based).
  int best_epoch = 0;
  double best_dev_f = 0.0;
};

// Mini-batch training with per-epoch seeded shuffling, Adam, and early
// stopping on development micro-F: training stops once `patience` epochs
// pass without improvement and the best epoch's parameters are restored.
// Without development data every epoch runs and the last one is kept.
// Each epoch record is also written to `log` as one JSON line.
TrainResult train(const TrainConfig& config, const ModelConfig& model_config,
                  std::span<const Example> train_set, std::span<const Example> dev_set,
                  const LabelSet& labels, std::ostream* log = nullptr);

std::vector<Label> predict(const Model& model, std::span<const Example> examples);
double mean_loss(const Model& model, std::span<const Example> examples);
eval::PRF micro_score(const Model& model, std::span<const Example> examples, const LabelSet& labels);

}  // namespace cpi::fusion
