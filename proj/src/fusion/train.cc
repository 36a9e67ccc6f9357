#include "cpi/fusion/train.h"

#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "cpi/num/ops.h"

namespace cpi::fusion {

using num::Tensor;

std::string to_json_line(const EpochRecord& r) {
  const nlohmann::ordered_json j = {{"epoch", r.epoch},
                                    {"train_loss", r.train_loss},
                                    {"dev_P", r.dev.precision},
                                    {"dev_R", r.dev.recall},
                                    {"dev_F", r.dev.f}};
  return j.dump();
}

std::vector<Label> predict(const Model& model, std::span<const Example> examples) {
  std::vector<Label> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(model.predict(ex.input));
  return out;
}

double mean_loss(const Model& model, std::span<const Example> examples) {
  if (examples.empty()) return 0.0;
  num::NoGradGuard no_grad;
  double total = 0.0;
  for (const auto& ex : examples) total += model.loss(ex.input, ex.gold).item();
  return total / static_cast<double>(examples.size());
}

eval::PRF micro_score(const Model& model, std::span<const Example> examples, const LabelSet& labels) {
  std::vector<Label> golds;
  golds.reserve(examples.size());
  for (const auto& ex : examples) golds.push_back(ex.gold);
  const auto positives = labels.positive_labels();
  return eval::micro_prf(predict(model, examples), golds, positives);
}

namespace {

std::vector<std::vector<double>> snapshot(const std::vector<Tensor>& params) {
  std::vector<std::vector<double>> out;
  out.reserve(params.size());
  for (const auto& p : params) out.emplace_back(p.data().begin(), p.data().end());
  return out;
}

void restore(std::vector<Tensor>& params, const std::vector<std::vector<double>>& values) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto dst = params[i].mutable_data();
    std::copy(values[i].begin(), values[i].end(), dst.begin());
  }
}

}  // namespace

TrainResult train(const TrainConfig& config, const ModelConfig& model_config,
                  std::span<const Example> train_set, std::span<const Example> dev_set,
                  const LabelSet& labels, std::ostream* log) {
  config.validate();
  if (train_set.empty()) throw ValidationError("train: empty training set");
  if (model_config.num_labels != labels.size()) {
    throw ValidationError("train: model has " + std::to_string(model_config.num_labels) +
                          " labels, task has " + std::to_string(labels.size()));
  }
  Rng rng(config.seed);
  TrainResult result{Model(model_config, rng), {}, 0, 0.0};
  Model& model = result.model;
  std::vector<Tensor> params = model.parameter_tensors();
  const bool updates = config.optimizer.lr > 0.0;
  num::AdamState adam;
  if (updates) adam = num::make_adam_state(config.optimizer, params);

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::vector<double>> best = snapshot(params);
  int since_best = 0;
  const ForwardOptions train_options{true, &rng};
  const auto batch = static_cast<std::size_t>(config.batch_size);
  const long steps_per_epoch = static_cast<long>((order.size() + batch - 1) / batch);
  const long total_steps = steps_per_epoch * config.max_epochs;
  long step = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const double inv = 1.0 / static_cast<double>(end - start);
      for (auto& p : params) p.zero_grad();
      for (std::size_t i = start; i < end; ++i) {
        const Example& ex = train_set[order[i]];
        const Tensor loss = model.loss(ex.input, ex.gold, train_options);
        epoch_loss += loss.item();
        num::scale(loss, inv).backward();
      }
      if (updates) {
        num::clip_grad_norm(params, config.clip_norm);
        adam.config.lr = config.learning_rate(step, steps_per_epoch, total_steps);
        num::adam_step(params, adam);
      }
      ++step;
    }
    for (auto& p : params) p.zero_grad();

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = epoch_loss / static_cast<double>(order.size());
    if (!dev_set.empty()) record.dev = micro_score(model, dev_set, labels);
    result.log.push_back(record);
    if (log) *log << to_json_line(record) << '\n';
    spdlog::info("epoch {}: train_loss {:.6f} dev P {:.4f} R {:.4f} F {:.4f}", epoch,
                 record.train_loss, record.dev.precision, record.dev.recall, record.dev.f);

    if (dev_set.empty() || result.best_epoch == 0 || record.dev.f > result.best_dev_f) {
      result.best_epoch = epoch;
      result.best_dev_f = record.dev.f;
      best = snapshot(params);
      since_best = 0;
    } else if (++since_best >= config.patience) {
      spdlog::info("early stop after epoch {}; best epoch {}", epoch, result.best_epoch);
      break;
    }
  }
  restore(params, best);
  return result;
}

}  // namespace cpi::fusion
