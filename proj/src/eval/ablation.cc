#include "cpi/eval/ablation.h"

#include <cstdio>

#include <spdlog/spdlog.h>

#include "cpi/fusion/train.h"

namespace cpi::eval {

using fusion::Component;

const std::vector<AblationVariant>& ablation_variants() {
  static const std::vector<AblationVariant> variants = {
      {"full", {}},
      {"-gaussian", {Component::kGaussian}},
      {"-title", {Component::kTitle}},
      {"-knowledge", {Component::kKnowledge}},
      {"-title&knowledge", {Component::kTitle, Component::kKnowledge}},
      {"-all", {Component::kGaussian, Component::kTitle, Component::kKnowledge}},
  };
  return variants;
}

std::vector<AblationRow> run_ablation_suite(const fusion::TrainConfig& base, int vocab_size,
                                            std::span<const fusion::Example> train_set,
                                            std::span<const fusion::Example> dev_set,
                                            std::span<const fusion::Example> eval_set,
                                            const LabelSet& labels) {
  std::vector<Label> golds;
  std::vector<corpus::InstanceKind> kinds;
  for (const auto& ex : eval_set) {
    golds.push_back(ex.gold);
    kinds.push_back(ex.kind);
  }
  std::vector<AblationRow> rows;
  for (const auto& variant : ablation_variants()) {
    spdlog::info("ablation variant {}", variant.name);
    fusion::TrainConfig config = base;
    config.ablation = variant.removed;
    const auto model_config = config.model_config(vocab_size, labels.size());
    auto result = fusion::train(config, model_config, train_set, dev_set, labels);
    const auto preds = fusion::predict(result.model, eval_set);
    rows.push_back({variant, result.model.parameter_count(), result.best_epoch, result.best_dev_f,
                    stratified_eval(preds, golds, kinds, labels)});
  }
  return rows;
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string format_ablation_table(std::span<const AblationRow> rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %10s %6s %8s %8s %8s %8s %8s\n", "variant", "params",
                "epoch", "P", "R", "F", "ovl_F", "norm_F");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-18s %10zu %6d %8s %8s %8s %8s %8s\n", r.variant.name.c_str(),
                  r.parameters, r.best_epoch, fixed(r.report.micro.precision).c_str(),
                  fixed(r.report.micro.recall).c_str(), fixed(r.report.micro.f).c_str(),
                  fixed(r.report.kind_row("overlapping").prf.f).c_str(),
                  fixed(r.report.kind_row("normal").prf.f).c_str());
    out += line;
  }
  return out;
}

std::string ablation_csv(std::span<const AblationRow> rows) {
  std::string out = "variant,parameters,best_epoch,P,R,F,overlapping_F,normal_F\n";
  for (const auto& r : rows) {
    out += r.variant.name + ',' + std::to_string(r.parameters) + ',' + std::to_string(r.best_epoch) +
           ',' + fixed(r.report.micro.precision) + ',' + fixed(r.report.micro.recall) + ',' +
           fixed(r.report.micro.f) + ',' + fixed(r.report.kind_row("overlapping").prf.f) + ',' +
           fixed(r.report.kind_row("normal").prf.f) + '\n';
  }
  return out;
}

}  // namespace cpi::eval
