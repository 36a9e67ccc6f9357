#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpi/num/tensor.h"

namespace cpi::num {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

// File layout:
//   line 1: "CPICKPT <version>"
//   line 2: JSON header {config, vocab_hash, params: [{name, shape}]}
//   rest:   parameter values as little-endian IEEE-754 doubles, in header order
inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  nlohmann::json config;
  std::string vocab_hash;
  std::vector<NamedTensor> params;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Copies values from `source` into `target` by name; shapes must agree and
// every target must be present.
void assign_parameters(std::span<NamedTensor> target, std::span<const NamedTensor> source);

}  // namespace cpi::num
