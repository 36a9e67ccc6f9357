#include "cpi/encoder/encoder.h"

#include <cmath>
#include <numeric>

#include "cpi/num/init.h"
#include "cpi/num/ops.h"

namespace cpi::encoder {

using num::Tensor;

void EncoderConfig::validate() const {
  if (layers < 0) throw ValidationError("encoder.layers must be >= 0");
  if (hidden <= 0 || heads <= 0 || ffn <= 0) {
    throw ValidationError("encoder.hidden, encoder.heads and encoder.ffn must be positive");
  }
  if (hidden % heads != 0) throw ValidationError("encoder.hidden must be divisible by encoder.heads");
  if (max_len <= 0) throw ValidationError("encoder.max_len must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ValidationError("encoder.dropout must lie in [0, 1)");
  if (vocab_size <= 0) throw ValidationError("encoder vocab size must be positive");
}

Encoder::Encoder(const EncoderConfig& config, Rng& rng) : config_(config) {
  config_.validate();
  const auto d = static_cast<std::size_t>(config_.hidden);
  const auto f = static_cast<std::size_t>(config_.ffn);
  token_embedding_ = num::scaled_normal_param({static_cast<std::size_t>(config_.vocab_size), d}, 1, rng);
  position_embedding_ = num::scaled_normal_param({static_cast<std::size_t>(config_.max_len), d}, 1, rng);
  for (int l = 0; l < config_.layers; ++l) {
    Block b;
    b.wq = num::scaled_normal_param({d, d}, d, rng);
    b.bq = num::zeros_param({d});
    // No key bias: it adds the same amount to every score of a query row,
    // which softmax cancels, so its gradient is identically zero.
    b.wk = num::scaled_normal_param({d, d}, d, rng);
    b.wv = num::scaled_normal_param({d, d}, d, rng);
    b.bv = num::zeros_param({d});
    b.wo = num::scaled_normal_param({d, d}, d, rng);
    b.bo = num::zeros_param({d});
    b.ln1_gain = num::ones_param({d});
    b.ln1_bias = num::zeros_param({d});
    b.w1 = num::scaled_normal_param({d, f}, d, rng);
    b.b1 = num::zeros_param({f});
    b.w2 = num::scaled_normal_param({f, d}, f, rng);
    b.b2 = num::zeros_param({d});
    b.ln2_gain = num::ones_param({d});
    b.ln2_bias = num::zeros_param({d});
    blocks_.push_back(std::move(b));
  }
}

Tensor Encoder::embed(std::span<const int> ids, std::span<const int> positions) const {
  if (ids.empty()) throw ValidationError("encoder: empty token sequence");
  if (ids.size() > static_cast<std::size_t>(config_.max_len)) {
    throw ValidationError("encoder: sequence of " + std::to_string(ids.size()) +
                          " tokens exceeds max_len " + std::to_string(config_.max_len));
  }
  if (positions.size() != ids.size()) {
    throw num::ShapeError("embed: " + std::to_string(ids.size()) + " ids vs " +
                          std::to_string(positions.size()) + " positions");
  }
  return num::add(num::embedding(token_embedding_, ids),
                  num::embedding(position_embedding_, positions));
}

Tensor Encoder::embed(std::span<const int> ids) const {
  std::vector<int> positions(ids.size());
  std::iota(positions.begin(), positions.end(), 0);
  return embed(ids, positions);
}

Tensor Encoder::self_attention(const Block& b, const Tensor& x, const std::vector<bool>& mask,
                               EncodedSequence* out) const {
  const auto heads = static_cast<std::size_t>(config_.heads);
  const std::size_t head_dim = static_cast<std::size_t>(config_.hidden) / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  const Tensor q = num::add_bias(num::matmul(x, b.wq), b.bq);
  const Tensor k = num::matmul(x, b.wk);
  const Tensor v = num::add_bias(num::matmul(x, b.wv), b.bv);
  std::vector<Tensor> outputs;
  outputs.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const Tensor qh = num::slice(q, 1, h * head_dim, head_dim);
    const Tensor kh = num::slice(k, 1, h * head_dim, head_dim);
    const Tensor vh = num::slice(v, 1, h * head_dim, head_dim);
    const Tensor scores = num::scale(num::matmul(qh, num::transpose(kh)), scale);
    const Tensor probs = num::masked_softmax(scores, mask);
    if (out) out->attention.push_back(probs);
    outputs.push_back(num::matmul(probs, vh));
  }
  const Tensor merged = heads == 1 ? outputs.front() : num::concat(outputs, 1);
  return num::add_bias(num::matmul(merged, b.wo), b.bo);
}

EncodedSequence Encoder::encode(std::span<const int> ids, const std::vector<bool>& mask,
                                const EncodeOptions& options) const {
  EncodedSequence out;
  out.attention_mask = mask.empty() ? std::vector<bool>(ids.size(), true) : mask;
  if (out.attention_mask.size() != ids.size()) {
    throw num::ShapeError("encode: " + std::to_string(ids.size()) + " ids vs mask of " +
                          std::to_string(out.attention_mask.size()));
  }
  bool any = false;
  for (bool m : out.attention_mask) any = any || m;
  if (!any) throw ValidationError("encode: every position is masked");

  const bool drop = options.training && config_.dropout > 0.0;
  if (drop && !options.rng) throw Error("encode: training with dropout needs an Rng");
  auto maybe_dropout = [&](const Tensor& t) {
    return drop ? num::dropout(t, config_.dropout, *options.rng) : t;
  };

  Tensor x = maybe_dropout(embed(ids));
  for (const Block& b : blocks_) {
    const Tensor attn = self_attention(b, x, out.attention_mask,
                                       options.keep_attention ? &out : nullptr);
    x = num::layer_norm(num::add(x, maybe_dropout(attn)), b.ln1_gain, b.ln1_bias);
    const Tensor hidden = num::gelu(num::add_bias(num::matmul(x, b.w1), b.b1));
    const Tensor ffn = num::add_bias(num::matmul(hidden, b.w2), b.b2);
    x = num::layer_norm(num::add(x, maybe_dropout(ffn)), b.ln2_gain, b.ln2_bias);
  }
  out.token_reps = x;
  out.seq_rep = num::row(x, 0);
  return out;
}

std::vector<num::NamedTensor> Encoder::parameters(const std::string& prefix) const {
  std::vector<num::NamedTensor> out{{prefix + "token_embedding", token_embedding_},
                                    {prefix + "position_embedding", position_embedding_}};
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    const Block& b = blocks_[l];
    const std::string p = prefix + "layer" + std::to_string(l) + ".";
    out.insert(out.end(), {{p + "attn.wq", b.wq},   {p + "attn.bq", b.bq},
                           {p + "attn.wk", b.wk},   {p + "attn.wv", b.wv},
                           {p + "attn.bv", b.bv},   {p + "attn.wo", b.wo},
                           {p + "attn.bo", b.bo},   {p + "ln1.gain", b.ln1_gain},
                           {p + "ln1.bias", b.ln1_bias}, {p + "ffn.w1", b.w1},
                           {p + "ffn.b1", b.b1},    {p + "ffn.w2", b.w2},
                           {p + "ffn.b2", b.b2},    {p + "ln2.gain", b.ln2_gain},
                           {p + "ln2.bias", b.ln2_bias}});
  }
  return out;
}

std::size_t Encoder::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters("")) n += p.tensor.size();
  return n;
}

}  // namespace cpi::encoder
