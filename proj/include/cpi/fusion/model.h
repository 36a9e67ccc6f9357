#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpi/corpus/span.h"
#include "cpi/encoder/encoder.h"
#include "cpi/gaussian/gaussian.h"
#include "cpi/labels.h"
#include "cpi/num/checkpoint.h"

namespace cpi::fusion {

enum class Component { kGaussian, kTitle, kKnowledge };

std::string_view to_string(Component component);
Component parse_component(std::string_view text);
// Comma-separated component names; "" and "none" give the empty set.
std::set<Component> parse_components(std::string_view text);
std::string format_components(const std::set<Component>& components);

struct ModelConfig {
  encoder::EncoderConfig encoder;
  gaussian::GaussianConfig gaussian;
  std::set<Component> ablated;
  // One encoder for instance, title and knowledge sequences; otherwise the
  // title and knowledge sequences get encoders of their own.
  bool share_encoder = true;
  int num_labels = 0;

  void validate() const;
  // Number of d-wide slots in the classifier input.
  int slot_count() const;
  bool uses(Component component) const { return !ablated.count(component); }
};

// Same config with `components` additionally removed.
ModelConfig ablate(ModelConfig config, const std::set<Component>& components);

// Token ids in encoder layout: [CLS] ... [SEP].
struct ModelInput {
  std::vector<int> instance_ids;
  corpus::TokenSpan target1;
  corpus::TokenSpan target2;
  std::vector<int> title_ids;
  std::vector<int> knowledge_ids;
};

// Representations of one forward pass. Removed components leave their
// slot undefined; h concatenates the defined ones in the order title,
// instance, target1, target2, knowledge.
struct FusedRepresentations {
  num::Tensor r_title;
  num::Tensor r_ins;
  num::Tensor r_tar1;
  num::Tensor r_tar2;
  num::Tensor r_know;
  num::Tensor h;
};

struct ForwardResult {
  FusedRepresentations reps;
  // Fusion attention weights over the instance tokens, when computed.
  num::Tensor title_attention;
  num::Tensor knowledge_attention;
  num::Tensor logits;
  num::Tensor probs;
};

struct ForwardOptions {
  bool training = false;
  Rng* rng = nullptr;
};

class Model {
 public:
  Model(const ModelConfig& config, Rng& rng);

  const ModelConfig& config() const { return config_; }

  ForwardResult forward(const ModelInput& input, const ForwardOptions& options = {}) const;
  // Cross-entropy of the gold label under the classifier.
  num::Tensor loss(const ModelInput& input, Label gold, const ForwardOptions& options = {}) const;
  Label predict(const ModelInput& input) const;

  std::vector<num::NamedTensor> parameters() const;
  std::vector<num::Tensor> parameter_tensors() const;
  std::size_t parameter_count() const;

  const num::Tensor& classifier_weight() const { return w_out_; }
  const num::Tensor& classifier_bias() const { return b_out_; }

 private:
  const encoder::Encoder& title_encoder() const;
  const encoder::Encoder& knowledge_encoder() const;

  ModelConfig config_;
  std::unique_ptr<encoder::Encoder> encoder_;
  std::unique_ptr<encoder::Encoder> title_encoder_;
  std::unique_ptr<encoder::Encoder> knowledge_encoder_;
  num::Tensor w_out_;  // [num_labels x slots*d]
  num::Tensor b_out_;  // [num_labels]
};

nlohmann::json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& json);

}  // namespace cpi::fusion
