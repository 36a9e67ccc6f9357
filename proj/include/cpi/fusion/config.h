#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "cpi/encoder/encoder.h"
#include "cpi/fusion/model.h"
#include "cpi/gaussian/gaussian.h"
#include "cpi/labels.h"
#include "cpi/num/adam.h"

namespace cpi::fusion {

// Everything a training run depends on. Defaults are the desk-scale setup.
struct TrainConfig {
  std::uint64_t seed = 13;
  TaskMode task = TaskMode::kCpi;
  encoder::EncoderConfig encoder;
  gaussian::GaussianConfig gaussian;
  // lr may be 0 here, which trains without updating any parameter.
  num::AdamConfig optimizer{2e-3};
  // Learning rate ramps up linearly over the first warmup_epochs and, with
  // decay on, falls linearly towards 0 at the end of max_epochs.
  double warmup_epochs = 2.0;
  bool decay = true;
  // Joint gradient norm limit per update; 0 disables clipping.
  double clip_norm = 1.0;
  int batch_size = 8;
  int max_epochs = 30;
  int patience = 5;
  std::set<Component> ablation;
  bool share_encoder = true;
  std::size_t vocab_max_size = 8000;
  std::size_t vocab_min_freq = 1;

  void validate() const;
  ModelConfig model_config(int vocab_size, int num_labels) const;
  // Learning rate of update `step` (0-based) out of `total_steps`, with
  // `steps_per_epoch` updates per epoch.
  double learning_rate(long step, long steps_per_epoch, long total_steps) const;
};

// key = value lines; '#' starts a comment. Keys: seed, task, encoder.layers,
// encoder.hidden, encoder.heads, encoder.ffn, encoder.max_len,
// encoder.dropout, gaussian.mu, gaussian.sigma, gaussian.window,
// gaussian.renormalize, optimizer.lr, optimizer.beta1, optimizer.beta2,
// optimizer.eps, optimizer.warmup_epochs, optimizer.decay,
// optimizer.clip_norm, batch_size, max_epochs, patience, ablation,
// share_encoder, vocab.max_size, vocab.min_freq. Unknown keys and bad
// values are FormatErrors with the line number.
TrainConfig parse_train_config(std::istream& in, const std::string& source);
TrainConfig load_train_config(const std::filesystem::path& path);
std::string format_train_config(const TrainConfig& config);

nlohmann::json to_json(const TrainConfig& config);

}  // namespace cpi::fusion
