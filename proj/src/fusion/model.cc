#include "cpi/fusion/model.h"

#include <sstream>

#include "cpi/corpus/vocab.h"
#include "cpi/fusion/attention.h"
#include "cpi/num/init.h"
#include "cpi/num/ops.h"

namespace cpi::fusion {

using num::Tensor;

std::string_view to_string(Component component) {
  switch (component) {
    case Component::kGaussian: return "gaussian";
    case Component::kTitle: return "title";
    case Component::kKnowledge: return "knowledge";
  }
  return "?";
}

Component parse_component(std::string_view text) {
  if (text == "gaussian") return Component::kGaussian;
  if (text == "title") return Component::kTitle;
  if (text == "knowledge") return Component::kKnowledge;
  throw ValidationError("unknown component '" + std::string(text) +
                        "' (expected gaussian, title or knowledge)");
}

std::set<Component> parse_components(std::string_view text) {
  std::set<Component> out;
  if (text.empty() || text == "none") return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    out.insert(parse_component(item));
    pos = comma + 1;
  }
  return out;
}

std::string format_components(const std::set<Component>& components) {
  if (components.empty()) return "none";
  std::string out;
  for (Component c : components) {
    if (!out.empty()) out += ',';
    out += to_string(c);
  }
  return out;
}

void ModelConfig::validate() const {
  encoder.validate();
  gaussian.validate();
  if (num_labels < 2) throw ValidationError("model needs at least two labels");
}

int ModelConfig::slot_count() const {
  int slots = 1;
  if (uses(Component::kTitle)) ++slots;
  if (uses(Component::kGaussian)) slots += 2;
  if (uses(Component::kKnowledge)) ++slots;
  return slots;
}

ModelConfig ablate(ModelConfig config, const std::set<Component>& components) {
  config.ablated.insert(components.begin(), components.end());
  return config;
}

Model::Model(const ModelConfig& config, Rng& rng) : config_(config) {
  config_.validate();
  encoder_ = std::make_unique<encoder::Encoder>(config_.encoder, rng);
  if (!config_.share_encoder) {
    if (config_.uses(Component::kTitle)) {
      title_encoder_ = std::make_unique<encoder::Encoder>(config_.encoder, rng);
    }
    if (config_.uses(Component::kKnowledge)) {
      knowledge_encoder_ = std::make_unique<encoder::Encoder>(config_.encoder, rng);
    }
  }
  const auto width = static_cast<std::size_t>(config_.slot_count() * config_.encoder.hidden);
  const auto labels = static_cast<std::size_t>(config_.num_labels);
  w_out_ = num::scaled_normal_param({labels, width}, width, rng);
  b_out_ = num::zeros_param({labels});
}

const encoder::Encoder& Model::title_encoder() const {
  return title_encoder_ ? *title_encoder_ : *encoder_;
}

const encoder::Encoder& Model::knowledge_encoder() const {
  return knowledge_encoder_ ? *knowledge_encoder_ : *encoder_;
}

namespace {

const std::vector<int>& or_bare(const std::vector<int>& ids) {
  static const std::vector<int> bare{corpus::Vocab::kSeqStart, corpus::Vocab::kSeqEnd};
  return ids.empty() ? bare : ids;
}

// Fusion attention ranges over the instance's own tokens. The delimiter
// rows are left out: the title and knowledge queries are themselves [CLS]
// rows of the same encoder, and attending to the instance's [CLS] row
// collapses the weights onto it.
std::vector<bool> content_mask(const std::vector<bool>& mask) {
  if (mask.size() <= 2) return mask;
  std::vector<bool> out = mask;
  out.front() = false;
  out.back() = false;
  return out;
}

void check_span(const char* which, corpus::TokenSpan span, std::size_t n) {
  if (span.first > span.last || span.last >= n) {
    throw ValidationError(std::string("model input: ") + which + " span [" +
                          std::to_string(span.first) + ", " + std::to_string(span.last) +
                          "] outside " + std::to_string(n) + " tokens");
  }
}

}  // namespace

ForwardResult Model::forward(const ModelInput& input, const ForwardOptions& options) const {
  if (input.instance_ids.empty()) throw ValidationError("model input: empty instance");
  const std::size_t n = input.instance_ids.size();
  encoder::EncodeOptions enc_options{options.training, options.rng, false};
  const encoder::EncodedSequence ins = encoder_->encode(input.instance_ids, {}, enc_options);

  const std::vector<bool> fusion_mask = content_mask(ins.attention_mask);
  ForwardResult out;
  FusedRepresentations& reps = out.reps;
  std::vector<Tensor> slots;
  if (config_.uses(Component::kTitle)) {
    const auto title = title_encoder().encode(or_bare(input.title_ids), {}, enc_options);
    reps.r_title = fusion_attention(title.seq_rep, ins.token_reps, fusion_mask,
                                   &out.title_attention);
    slots.push_back(reps.r_title);
  }
  reps.r_ins = ins.seq_rep;
  slots.push_back(reps.r_ins);
  if (config_.uses(Component::kGaussian)) {
    check_span("target1", input.target1, n);
    check_span("target2", input.target2, n);
    const auto x1 = gaussian::relative_distances(n, input.target1);
    const auto x2 = gaussian::relative_distances(n, input.target2);
    reps.r_tar1 = gaussian::target_aware_pool(x1, ins.token_reps, config_.gaussian, ins.attention_mask);
    reps.r_tar2 = gaussian::target_aware_pool(x2, ins.token_reps, config_.gaussian, ins.attention_mask);
    slots.push_back(reps.r_tar1);
    slots.push_back(reps.r_tar2);
  }
  if (config_.uses(Component::kKnowledge)) {
    const auto know = knowledge_encoder().encode(or_bare(input.knowledge_ids), {}, enc_options);
    reps.r_know = fusion_attention(know.seq_rep, ins.token_reps, fusion_mask,
                                  &out.knowledge_attention);
    slots.push_back(reps.r_know);
  }
  reps.h = slots.size() == 1 ? slots.front() : num::concat(slots, 0);

  Tensor h = reps.h;
  if (options.training && config_.encoder.dropout > 0.0) {
    if (!options.rng) throw Error("forward: training with dropout needs an Rng");
    h = num::dropout(h, config_.encoder.dropout, *options.rng);
  }
  const std::size_t width = h.size();
  out.logits = num::add(num::reshape(num::matmul(w_out_, num::reshape(h, {width, 1})),
                                     {static_cast<std::size_t>(config_.num_labels)}),
                        b_out_);
  out.probs = num::softmax(out.logits, 0);
  return out;
}

Tensor Model::loss(const ModelInput& input, Label gold, const ForwardOptions& options) const {
  if (gold < 0 || gold >= config_.num_labels) {
    throw ValidationError("gold label " + std::to_string(gold) + " outside " +
                          std::to_string(config_.num_labels) + " labels");
  }
  return num::cross_entropy_with_logits(forward(input, options).logits,
                                        static_cast<std::size_t>(gold));
}

Label Model::predict(const ModelInput& input) const {
  num::NoGradGuard no_grad;
  const Tensor probs = forward(input).probs;
  Label best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[static_cast<std::size_t>(best)]) best = static_cast<Label>(i);
  }
  return best;
}

std::vector<num::NamedTensor> Model::parameters() const {
  auto out = encoder_->parameters("encoder.");
  if (title_encoder_) {
    auto p = title_encoder_->parameters("title_encoder.");
    out.insert(out.end(), p.begin(), p.end());
  }
  if (knowledge_encoder_) {
    auto p = knowledge_encoder_->parameters("knowledge_encoder.");
    out.insert(out.end(), p.begin(), p.end());
  }
  out.push_back({"classifier.weight", w_out_});
  out.push_back({"classifier.bias", b_out_});
  return out;
}

std::vector<Tensor> Model::parameter_tensors() const {
  std::vector<Tensor> out;
  for (auto& p : parameters()) out.push_back(p.tensor);
  return out;
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) n += p.tensor.size();
  return n;
}

nlohmann::json to_json(const ModelConfig& config) {
  const auto& e = config.encoder;
  const auto& g = config.gaussian;
  return {
      {"encoder",
       {{"layers", e.layers}, {"hidden", e.hidden}, {"heads", e.heads}, {"ffn", e.ffn},
        {"max_len", e.max_len}, {"dropout", e.dropout}, {"vocab_size", e.vocab_size}}},
      {"gaussian",
       {{"mu", g.mu}, {"sigma", g.sigma}, {"window", g.window}, {"renormalize", g.renormalize}}},
      {"ablation", format_components(config.ablated)},
      {"share_encoder", config.share_encoder},
      {"num_labels", config.num_labels},
  };
}

ModelConfig model_config_from_json(const nlohmann::json& json) {
  try {
    ModelConfig c;
    const auto& e = json.at("encoder");
    c.encoder.layers = e.at("layers").get<int>();
    c.encoder.hidden = e.at("hidden").get<int>();
    c.encoder.heads = e.at("heads").get<int>();
    c.encoder.ffn = e.at("ffn").get<int>();
    c.encoder.max_len = e.at("max_len").get<int>();
    c.encoder.dropout = e.at("dropout").get<double>();
    c.encoder.vocab_size = e.at("vocab_size").get<int>();
    const auto& g = json.at("gaussian");
    c.gaussian.mu = g.at("mu").get<double>();
    c.gaussian.sigma = g.at("sigma").get<double>();
    c.gaussian.window = g.at("window").get<int>();
    c.gaussian.renormalize = g.at("renormalize").get<bool>();
    c.ablated = parse_components(json.at("ablation").get<std::string>());
    c.share_encoder = json.at("share_encoder").get<bool>();
    c.num_labels = json.at("num_labels").get<int>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model config: ") + e.what());
  }
}

}  // namespace cpi::fusion
