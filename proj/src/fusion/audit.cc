#include "cpi/fusion/audit.h"

#include <algorithm>
#include <functional>

#include "cpi/corpus/vocab.h"
#include "cpi/fusion/attention.h"
#include "cpi/fusion/model.h"
#include "cpi/gaussian/gaussian.h"
#include "cpi/num/ops.h"

namespace cpi::fusion {

using num::Tensor;

double GradientAudit::max_op_error() const {
  double worst = 0.0;
  for (const auto& e : ops) worst = std::max(worst, e.result.max_rel_error);
  return worst;
}

namespace {

Tensor random_tensor(num::Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(num::numel(shape));
  for (auto& x : v) x = rng.uniform(lo, hi);
  return Tensor::from(std::move(shape), std::move(v), true);
}

// Contracts an op output with fixed random weights so every output element
// reaches the scalar with a distinct coefficient.
std::function<Tensor()> contracted(std::function<Tensor()> op, Rng& rng) {
  const Tensor probe = op();
  std::vector<double> w(probe.size());
  for (auto& x : w) x = rng.uniform(-1.0, 1.0);
  const Tensor weights = Tensor::from(probe.shape(), std::move(w));
  return [op = std::move(op), weights] { return num::sum(num::mul(op(), weights)); };
}

}  // namespace

GradientAudit run_gradient_audit(std::uint64_t seed) {
  Rng rng(seed);
  GradientAudit audit;
  auto check = [&](const std::string& name, std::function<Tensor()> op, std::vector<Tensor> inputs,
                   bool contract = true) {
    auto f = contract ? contracted(std::move(op), rng) : std::move(op);
    audit.ops.push_back({name, num::grad_check(f, inputs)});
  };

  {
    Tensor a = random_tensor({3, 4}, rng), b = random_tensor({4, 2}, rng);
    check("matmul", [=] { return num::matmul(a, b); }, {a, b});
  }
  {
    Tensor a = random_tensor({3, 4}, rng);
    check("transpose", [=] { return num::transpose(a); }, {a});
    check("reshape", [=] { return num::reshape(a, {2, 6}); }, {a});
    check("scale", [=] { return num::scale(a, -1.7); }, {a});
    check("gelu", [=] { return num::gelu(a); }, {a});
    check("softmax_rows", [=] { return num::softmax(a, 1); }, {a});
    check("softmax_cols", [=] { return num::softmax(a, 0); }, {a});
    check("masked_softmax", [=] { return num::masked_softmax(a, {true, false, true, true}); }, {a});
    check("slice", [=] { return num::slice(a, 1, 1, 2); }, {a});
    check("row", [=] { return num::row(a, 2); }, {a});
    check("sum", [=] { return num::sum(a); }, {a}, false);
  }
  {
    Tensor a = random_tensor({3, 4}, rng), b = random_tensor({3, 4}, rng);
    check("add", [=] { return num::add(a, b); }, {a, b});
    check("mul", [=] { return num::mul(a, b); }, {a, b});
    check("concat_rows", [=] { return num::concat(std::vector<Tensor>{a, b}, 0); }, {a, b});
    check("concat_cols", [=] { return num::concat(std::vector<Tensor>{a, b}, 1); }, {a, b});
  }
  {
    Tensor a = random_tensor({3, 4}, rng), bias = random_tensor({4}, rng);
    check("add_bias", [=] { return num::add_bias(a, bias); }, {a, bias});
    Tensor gain = random_tensor({4}, rng, 0.5, 1.5);
    check("layer_norm", [=] { return num::layer_norm(a, gain, bias); }, {a, gain, bias});
  }
  {
    Tensor table = random_tensor({5, 3}, rng);
    check("embedding", [=] { return num::embedding(table, std::vector<int>{4, 0, 4, 2}); }, {table});
  }
  {
    Tensor logits = random_tensor({6}, rng);
    check("cross_entropy_with_logits", [=] { return num::cross_entropy_with_logits(logits, 2); },
          {logits}, false);
    Tensor probs = random_tensor({6}, rng, 0.1, 1.0);
    check("cross_entropy", [=] { return num::cross_entropy(probs, 4); }, {probs}, false);
  }
  {
    Tensor reps = random_tensor({5, 3}, rng);
    const std::vector<int> distances{-2, -1, 0, 1, 2};
    check("target_aware_pool",
          [=] { return gaussian::target_aware_pool(distances, reps, gaussian::GaussianConfig{}); }, {reps});
    Tensor query = random_tensor({3}, rng);
    check("fusion_attention",
          [=] { return fusion_attention(query, reps, {true, true, false, true, true}); }, {query, reps});
  }

  // Full model: hidden 32, two layers, instance "[CLS] @CHEMICAL$ w @GENE$ [SEP]".
  ModelConfig config;
  config.encoder.layers = 2;
  config.encoder.hidden = 32;
  config.encoder.heads = 4;
  config.encoder.ffn = 64;
  config.encoder.max_len = 16;
  config.encoder.dropout = 0.0;
  config.encoder.vocab_size = 16;
  config.num_labels = 6;
  const Model model(config, rng);
  ModelInput input;
  using corpus::Vocab;
  input.instance_ids = {Vocab::kSeqStart, Vocab::kChemMask, 12, Vocab::kGeneMask, Vocab::kSeqEnd};
  input.target1 = {1, 1};
  input.target2 = {3, 3};
  input.title_ids = {Vocab::kSeqStart, 10, 11, 13, Vocab::kSeqEnd};
  input.knowledge_ids = {Vocab::kSeqStart, 6, Vocab::kChemMask, 12, Vocab::kGeneMask, Vocab::kSeqEnd};
  std::vector<Tensor> params = model.parameter_tensors();
  audit.model = {"model", num::grad_check([&] { return model.loss(input, 1); }, params)};
  return audit;
}

}  // namespace cpi::fusion
