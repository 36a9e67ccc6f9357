#pragma once

#include <span>
#include <string>
#include <vector>

#include "cpi/num/checkpoint.h"
#include "cpi/num/tensor.h"
#include "cpi/random.h"

namespace cpi::encoder {

struct EncoderConfig {
  int layers = 2;
  int hidden = 64;
  int heads = 4;
  int ffn = 256;
  int max_len = 128;
  double dropout = 0.1;
  int vocab_size = 0;

  void validate() const;
};

struct EncodedSequence {
  num::Tensor token_reps;  // [N x d]
  num::Tensor seq_rep;     // [d], row 0 of token_reps
  std::vector<bool> attention_mask;
  // Attention probabilities [N x N], layer-major then head, when requested.
  std::vector<num::Tensor> attention;
};

struct EncodeOptions {
  bool training = false;
  Rng* rng = nullptr;  // required when training with dropout
  bool keep_attention = false;
};

// Post-norm transformer encoder: token + learned position embeddings, then
// `layers` blocks of multi-head self-attention and a GELU feed-forward
// network, each followed by residual addition and layer normalisation.
class Encoder {
 public:
  Encoder(const EncoderConfig& config, Rng& rng);

  const EncoderConfig& config() const { return config_; }

  // Token embedding plus position embedding, [N x d].
  num::Tensor embed(std::span<const int> ids, std::span<const int> positions) const;
  num::Tensor embed(std::span<const int> ids) const;

  // `mask[i]` false marks padding: such positions are never attended to.
  // An empty mask keeps every position.
  EncodedSequence encode(std::span<const int> ids, const std::vector<bool>& mask = {},
                         const EncodeOptions& options = {}) const;

  std::vector<num::NamedTensor> parameters(const std::string& prefix) const;
  std::size_t parameter_count() const;

 private:
  struct Block {
    num::Tensor wq, bq, wk, wv, bv, wo, bo;
    num::Tensor ln1_gain, ln1_bias;
    num::Tensor w1, b1, w2, b2;
    num::Tensor ln2_gain, ln2_bias;
  };

  num::Tensor self_attention(const Block& block, const num::Tensor& x,
                             const std::vector<bool>& mask, EncodedSequence* out) const;

  EncoderConfig config_;
  num::Tensor token_embedding_;
  num::Tensor position_embedding_;
  std::vector<Block> blocks_;
};

}  // namespace cpi::encoder
