#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "cpi/eval/metrics.h"
#include "cpi/fusion/config.h"
#include "cpi/fusion/features.h"

namespace cpi::eval {

struct AblationVariant {
  std::string name;
  std::set<fusion::Component> removed;
};

// full, -gaussian, -title, -knowledge, -title&knowledge, -all.
const std::vector<AblationVariant>& ablation_variants();

struct AblationRow {
  AblationVariant variant;
  std::size_t parameters = 0;
  int best_epoch = 0;
  double best_dev_f = 0.0;
  EvalReport report;  // on the evaluation split
};

// Trains every variant from the same seed and budget and evaluates it on
// `eval_set`. The ablations in `base` are ignored.
std::vector<AblationRow> run_ablation_suite(const fusion::TrainConfig& base, int vocab_size,
                                            std::span<const fusion::Example> train_set,
                                            std::span<const fusion::Example> dev_set,
                                            std::span<const fusion::Example> eval_set,
                                            const LabelSet& labels);

std::string format_ablation_table(std::span<const AblationRow> rows);
// variant,parameters,best_epoch,P,R,F,overlapping_F,normal_F
std::string ablation_csv(std::span<const AblationRow> rows);

}  // namespace cpi::eval
