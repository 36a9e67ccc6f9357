#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "cpi/corpus/document.h"
#include "cpi/corpus/vocab.h"
#include "cpi/fusion/attention.h"
#include "cpi/fusion/config.h"
#include "cpi/fusion/features.h"
#include "cpi/fusion/model.h"
#include "cpi/fusion/train.h"
#include "cpi/kb/knowledge_base.h"
#include "cpi/num/grad_check.h"
#include "cpi/num/ops.h"
#include "cpi/random.h"
#include "test_support.h"

namespace cpi::fusion {
namespace {

using num::Tensor;

Tensor random_matrix(std::size_t n, std::size_t d, Rng& rng, bool requires_grad = false) {
  std::vector<double> v(n * d);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor::from({n, d}, std::move(v), requires_grad);
}

Tensor random_vector(std::size_t d, Rng& rng, bool requires_grad = false) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor::from({d}, std::move(v), requires_grad);
}

TEST(FusionAttentionTest, SingleTokenReturnsIt) {
  Rng rng(1);
  Tensor u = random_matrix(1, 4, rng);
  Tensor out = fusion_attention(random_vector(4, rng), u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(out[k], u[k], 1e-15);
}

TEST(FusionAttentionTest, OrthogonalQueryAveragesTokens) {
  Tensor u = Tensor::from({3, 2}, {0.0, 1.0, 0.0, -2.0, 0.0, 4.0});
  Tensor q = Tensor::from({2}, {5.0, 0.0});
  Tensor weights;
  Tensor out = fusion_attention(q, u, {}, &weights);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(weights[i], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(out[0], 0.0, 1e-15);
  EXPECT_NEAR(out[1], 1.0, 1e-15);
}

TEST(FusionAttentionTest, HandOracleScores) {
  const double ln3 = std::log(3.0);
  Tensor u = Tensor::from({2, 2}, {0.0, 1.0, ln3, 2.0});
  Tensor q = Tensor::from({2}, {1.0, 0.0});
  Tensor weights;
  Tensor out = fusion_attention(q, u, {}, &weights);
  EXPECT_NEAR(weights[0], 0.25, 1e-15);
  EXPECT_NEAR(weights[1], 0.75, 1e-15);
  EXPECT_NEAR(out[0], 0.75 * ln3, 1e-15);
  EXPECT_NEAR(out[1], 0.25 * 1.0 + 0.75 * 2.0, 1e-15);
}

TEST(FusionAttentionTest, MaskedPositionsGetZeroWeight) {
  Rng rng(2);
  Tensor u = random_matrix(5, 3, rng);
  Tensor weights;
  fusion_attention(random_vector(3, rng), u, {false, true, true, false, true}, &weights);
  EXPECT_EQ(weights[0], 0.0);
  EXPECT_EQ(weights[3], 0.0);
  EXPECT_NEAR(weights[1] + weights[2] + weights[4], 1.0, 1e-12);
}

TEST(FusionAttentionTest, Errors) {
  Rng rng(3);
  EXPECT_THROW(fusion_attention(random_vector(3, rng), random_matrix(2, 4, rng)), num::ShapeError);
  EXPECT_THROW(fusion_attention(random_vector(3, rng), random_matrix(2, 3, rng), {false, false}), Error);
}

TEST(FusionAttentionTest, OutputInConvexHull) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(8), d = 1 + rng.below(6);
    Tensor u = random_matrix(n, d, rng);
    Tensor q = Tensor::from({d}, std::vector<double>(d, 0.0));
    for (auto& x : q.mutable_data()) x = rng.uniform(-5.0, 5.0);
    Tensor weights;
    Tensor out = fusion_attention(q, u, {}, &weights);
    double s = 0.0;
    for (double w : weights.data()) {
      EXPECT_GE(w, 0.0);
      s += w;
    }
    EXPECT_NEAR(s, 1.0, 1e-9);
    for (std::size_t k = 0; k < d; ++k) {
      double lo = u.at(0, k), hi = u.at(0, k);
      for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, u.at(i, k));
        hi = std::max(hi, u.at(i, k));
      }
      EXPECT_GE(out[k], lo - 1e-12);
      EXPECT_LE(out[k], hi + 1e-12);
    }
  }
}

TEST(FusionAttentionTest, GradientCheck) {
  Rng rng(5);
  Tensor q = random_vector(4, rng, true);
  Tensor u = random_matrix(5, 4, rng, true);
  Tensor w = random_vector(4, rng);
  std::vector<Tensor> inputs = {q, u};
  auto result = num::grad_check(
      [&] { return num::sum(num::mul(fusion_attention(q, u, {true, true, false, true, true}), w)); },
      inputs);
  EXPECT_LE(result.max_rel_error, 1e-5);
}

ModelConfig tiny_config(int layers = 1) {
  ModelConfig config;
  config.encoder.layers = layers;
  config.encoder.hidden = 8;
  config.encoder.heads = 2;
  config.encoder.ffn = 16;
  config.encoder.max_len = 16;
  config.encoder.dropout = 0.0;
  config.encoder.vocab_size = 20;
  config.num_labels = 6;
  return config;
}

ModelInput tiny_input() {
  ModelInput input;
  input.instance_ids = {2, 4, 10, 11, 5, 12, 3};
  input.target1 = {1, 1};
  input.target2 = {4, 4};
  input.title_ids = {2, 13, 14, 3};
  input.knowledge_ids = {2, 6, 4, 11, 5, 3};
  return input;
}

std::size_t width(const Tensor& t) { return t.defined() ? t.size() : 0; }

TEST(ModelTest, ProbabilitiesFormADistribution) {
  Rng rng(6);
  Model model(tiny_config(), rng);
  auto out = model.forward(tiny_input());
  ASSERT_EQ(out.probs.size(), 6u);
  double s = 0.0;
  for (double p : out.probs.data()) {
    EXPECT_GE(p, 0.0);
    s += p;
  }
  EXPECT_NEAR(s, 1.0, 1e-9);
  const auto argmax = std::max_element(out.probs.data().begin(), out.probs.data().end()) -
                      out.probs.data().begin();
  EXPECT_EQ(model.predict(tiny_input()), static_cast<Label>(argmax));
}

TEST(ModelTest, ZeroClassifierGivesUniformPrediction) {
  Rng rng(7);
  Model model(tiny_config(), rng);
  for (auto& p : model.parameters()) {
    if (p.name.rfind("classifier.", 0) == 0) {
      auto data = p.tensor.mutable_data();
      std::fill(data.begin(), data.end(), 0.0);
    }
  }
  auto out = model.forward(tiny_input());
  for (double p : out.probs.data()) EXPECT_NEAR(p, 1.0 / 6.0, 1e-15);
}

TEST(ModelTest, ArgmaxInvariantUnderLogitShift) {
  Rng rng(8);
  Model model(tiny_config(), rng);
  auto out = model.forward(tiny_input());
  Tensor shifted = num::softmax(num::add(out.logits, Tensor::full({6}, 123.0)), 0);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(shifted[i], out.probs[i], 1e-12);
}

TEST(ModelTest, HConcatenatesSlotsInOrder) {
  Rng rng(9);
  Model model(tiny_config(), rng);
  auto out = model.forward(tiny_input());
  const auto& r = out.reps;
  ASSERT_EQ(r.h.size(), 40u);
  const Tensor* parts[] = {&r.r_title, &r.r_ins, &r.r_tar1, &r.r_tar2, &r.r_know};
  for (std::size_t s = 0; s < 5; ++s) {
    ASSERT_EQ(parts[s]->size(), 8u);
    for (std::size_t k = 0; k < 8; ++k) EXPECT_EQ(r.h[s * 8 + k], (*parts[s])[k]);
  }
}

TEST(ModelTest, TitleAndKnowledgeAttentionSkipDelimiters) {
  Rng rng(10);
  Model model(tiny_config(), rng);
  auto out = model.forward(tiny_input());
  for (const Tensor* w : {&out.title_attention, &out.knowledge_attention}) {
    ASSERT_EQ(w->size(), 7u);
    EXPECT_EQ((*w)[0], 0.0);
    EXPECT_EQ((*w)[6], 0.0);
    double s = 0.0;
    for (double x : w->data()) s += x;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(ModelTest, EmptyTitleAndKnowledgeAreAllowed) {
  Rng rng(11);
  Model model(tiny_config(), rng);
  ModelInput input = tiny_input();
  input.title_ids.clear();
  input.knowledge_ids.clear();
  auto out = model.forward(input);
  EXPECT_EQ(out.probs.size(), 6u);
  input.instance_ids.clear();
  EXPECT_THROW(model.forward(input), Error);
}

TEST(ModelTest, AblationWidths) {
  struct Case {
    std::set<Component> removed;
    std::size_t slots;
  };
  const std::vector<Case> cases = {
      {{}, 5},
      {{Component::kGaussian}, 3},
      {{Component::kTitle}, 4},
      {{Component::kKnowledge}, 4},
      {{Component::kTitle, Component::kKnowledge}, 3},
      {{Component::kGaussian, Component::kTitle, Component::kKnowledge}, 1},
  };
  for (const auto& c : cases) {
    ModelConfig config = ablate(tiny_config(), c.removed);
    EXPECT_EQ(config.slot_count(), static_cast<int>(c.slots));
    Rng rng(12);
    Model model(config, rng);
    auto out = model.forward(tiny_input());
    EXPECT_EQ(out.reps.h.size(), c.slots * 8);
    EXPECT_EQ(model.classifier_weight().shape(), (num::Shape{6, c.slots * 8}));
    EXPECT_EQ(width(out.reps.r_tar1) > 0, !c.removed.count(Component::kGaussian));
    EXPECT_EQ(width(out.reps.r_title) > 0, !c.removed.count(Component::kTitle));
    EXPECT_EQ(width(out.reps.r_know) > 0, !c.removed.count(Component::kKnowledge));
  }
  EXPECT_EQ(ablate(tiny_config(), {}).slot_count(), tiny_config().slot_count());
}

TEST(ModelTest, AblationKeepsRemainingSlotsForFixedWeights) {
  Rng rng_full(13);
  Model full(tiny_config(), rng_full);
  Rng rng_ablated(14);
  Model ablated(ablate(tiny_config(), {Component::kGaussian}), rng_ablated);
  std::map<std::string, Tensor> source;
  for (const auto& p : full.parameters()) source[p.name] = p.tensor;
  for (auto& p : ablated.parameters()) {
    if (p.name.rfind("classifier.", 0) == 0) continue;
    auto src = source.at(p.name).data();
    std::copy(src.begin(), src.end(), p.tensor.mutable_data().begin());
  }
  auto a = full.forward(tiny_input()).reps;
  auto b = ablated.forward(tiny_input()).reps;
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_EQ(a.r_title[k], b.r_title[k]);
    EXPECT_EQ(a.r_ins[k], b.r_ins[k]);
    EXPECT_EQ(a.r_know[k], b.r_know[k]);
  }
}

TEST(ModelTest, AllRemovedEqualsPlainEncoderClassifier) {
  ModelConfig config = ablate(tiny_config(2), {Component::kGaussian, Component::kTitle, Component::kKnowledge});
  Rng rng(15);
  Model model(config, rng);
  Rng base_rng(16);
  encoder::Encoder baseline(config.encoder, base_rng);
  const std::size_t d = 8, labels = 6;
  EXPECT_EQ(model.parameter_count(), baseline.parameter_count() + labels * d + labels);
}

TEST(ModelTest, SeparateEncodersTripleEncoderParameters) {
  ModelConfig shared = tiny_config();
  ModelConfig separate = tiny_config();
  separate.share_encoder = false;
  Rng a(17), b(17), c(17);
  Model ms(shared, a), mp(separate, b);
  encoder::Encoder enc(shared.encoder, c);
  EXPECT_EQ(mp.parameter_count(), ms.parameter_count() + 2 * enc.parameter_count());
  auto out = mp.forward(tiny_input());
  EXPECT_EQ(out.probs.size(), 6u);
}

TEST(ModelTest, LossGradientCheck) {
  Rng rng(18);
  Model model(tiny_config(2), rng);
  auto params = model.parameter_tensors();
  auto result = num::grad_check([&] { return model.loss(tiny_input(), 2); }, params);
  EXPECT_LE(result.max_rel_error, 1e-4) << "worst input " << result.worst_input;
}

TEST(ModelTest, ConfigJsonRoundTrip) {
  ModelConfig config = ablate(tiny_config(), {Component::kTitle});
  config.gaussian.sigma = 2.5;
  config.share_encoder = false;
  ModelConfig back = model_config_from_json(to_json(config));
  EXPECT_EQ(to_json(back), to_json(config));
  EXPECT_EQ(back.ablated, config.ablated);
}

TEST(ComponentTest, Parsing) {
  EXPECT_TRUE(parse_components("").empty());
  EXPECT_TRUE(parse_components("none").empty());
  EXPECT_EQ(parse_components("title,gaussian"), (std::set<Component>{Component::kGaussian, Component::kTitle}));
  EXPECT_THROW(parse_components("gaussian,attention"), Error);
  EXPECT_EQ(format_components({Component::kKnowledge, Component::kGaussian}), "gaussian,knowledge");
}

corpus::Vocab mini_vocab(const std::vector<corpus::AnnotatedDocument>& docs) {
  return corpus::build_vocab(docs, 400, 1);
}

TEST(FeaturesTest, DelimitersAndSpanMapping) {
  auto docs = corpus::parse_corpus(cpi::testing::data_path("mini_corpus.jsonl"));
  corpus::Vocab vocab = corpus::build_vocab(docs, corpus::Vocab::kReserved + 60, 1);
  std::vector<std::string> none;
  EXPECT_EQ(encode_words(none, vocab), (std::vector<int>{corpus::Vocab::kSeqStart, corpus::Vocab::kSeqEnd}));
  EXPECT_EQ(encode_text("", vocab), (std::vector<int>{corpus::Vocab::kSeqStart, corpus::Vocab::kSeqEnd}));

  auto insts = corpus::generate_instances(docs[0], LabelSet::for_task(TaskMode::kCpi));
  for (const auto& inst : insts) {
    ModelInput input = featurize(inst, vocab, docs[0].title);
    EXPECT_EQ(input.instance_ids.front(), corpus::Vocab::kSeqStart);
    EXPECT_EQ(input.instance_ids.back(), corpus::Vocab::kSeqEnd);
    EXPECT_EQ(input.instance_ids[input.target1.first], corpus::Vocab::kChemMask);
    EXPECT_EQ(input.target1.first, input.target1.last);
    EXPECT_EQ(input.instance_ids[input.target2.first], corpus::Vocab::kGeneMask);
    EXPECT_GE(input.instance_ids.size(), inst.tokens.size() + 2);
  }
  corpus::Instance missing = insts[0];
  missing.target1.reset();
  EXPECT_THROW(featurize(missing, vocab), ValidationError);
}

TEST(FeaturesTest, PrepareExamplesCarriesKnowledge) {
  auto docs = corpus::parse_corpus(cpi::testing::data_path("mini_corpus.jsonl"));
  auto kb = kb::load_kb(cpi::testing::data_path("mini_kb.tsv"));
  corpus::Vocab vocab = mini_vocab(docs);
  auto examples = prepare_examples(docs, LabelSet::for_task(TaskMode::kCpi), kb, vocab);
  ASSERT_EQ(examples.size(), 16u);
  EXPECT_EQ(examples[0].instance_id, "mini001.T1.T3");
  EXPECT_EQ(examples[0].input.knowledge_ids[1], vocab.id("CPR:4"));
  EXPECT_EQ(examples[0].input.title_ids.size(), corpus::tokenize(docs[0].title, vocab).size() + 2);
  // mini002.T3.T4 has only an unfiltered tag and no parse.
  EXPECT_EQ(examples[7].instance_id, "mini002.T3.T4");
  EXPECT_EQ(examples[7].input.knowledge_ids.size(), 2u);
}

TEST(TrainConfigTest, ParseAndFormatRoundTrip) {
  std::istringstream in(
      "# comment\n"
      "seed = 99\n"
      "encoder.hidden = 32   # trailing\n"
      "\n"
      "gaussian.sigma = 2.5\n"
      "optimizer.lr = 0.01\n"
      "batch_size = 4\n"
      "ablation = gaussian,knowledge\n"
      "share_encoder = false\n");
  TrainConfig config = parse_train_config(in, "cfg");
  EXPECT_EQ(config.seed, 99u);
  EXPECT_EQ(config.encoder.hidden, 32);
  EXPECT_EQ(config.gaussian.sigma, 2.5);
  EXPECT_EQ(config.optimizer.lr, 0.01);
  EXPECT_EQ(config.batch_size, 4);
  EXPECT_EQ(config.ablation, (std::set<Component>{Component::kGaussian, Component::kKnowledge}));
  EXPECT_FALSE(config.share_encoder);
  std::istringstream again(format_train_config(config));
  EXPECT_EQ(format_train_config(parse_train_config(again, "formatted")), format_train_config(config));
}

TEST(TrainConfigTest, ErrorsCarryLineNumbers) {
  auto expect_error_at = [](const std::string& text, const std::string& location) {
    std::istringstream in(text);
    try {
      parse_train_config(in, "cfg");
      FAIL() << "expected FormatError for " << text;
    } catch (const FormatError& e) {
      EXPECT_EQ(e.location(), location) << e.what();
    }
  };
  expect_error_at("seed = 1\nbogus = 3\n", "cfg:2");
  expect_error_at("batch_size = many\n", "cfg:1");
  expect_error_at("seed = 1\n\nencoder.layers\n", "cfg:3");
  expect_error_at("ablation = everything\n", "cfg:1");
}

TEST(TrainConfigTest, DefaultsAreValid) {
  TrainConfig config;
  EXPECT_NO_THROW(config.validate());
  EXPECT_EQ(config.encoder.layers, 2);
  EXPECT_EQ(config.encoder.hidden, 64);
  EXPECT_EQ(config.encoder.heads, 4);
  EXPECT_EQ(config.encoder.ffn, 256);
  EXPECT_EQ(config.encoder.max_len, 128);
  EXPECT_EQ(config.gaussian.mu, 0.0);
  EXPECT_EQ(config.gaussian.sigma, 3.0);
  EXPECT_EQ(config.gaussian.window, 1);
  EXPECT_EQ(config.patience, 5);
  config.optimizer.lr = 0.0;
  EXPECT_NO_THROW(config.validate());
  config.optimizer.lr = -1.0;
  EXPECT_THROW(config.validate(), Error);
}

TEST(TrainConfigTest, LearningRateSchedule) {
  TrainConfig config;
  config.optimizer.lr = 1.0;
  config.warmup_epochs = 2.0;
  const long per_epoch = 10, total = 300;
  EXPECT_NEAR(config.learning_rate(0, per_epoch, total), 1.0 / 20.0, 1e-15);
  EXPECT_NEAR(config.learning_rate(9, per_epoch, total), 0.5, 1e-15);
  EXPECT_NEAR(config.learning_rate(19, per_epoch, total), 1.0, 1e-15);
  EXPECT_GT(config.learning_rate(299, per_epoch, total), 0.0);
  EXPECT_LT(config.learning_rate(299, per_epoch, total), 0.01);
  for (long s = 20; s < total; ++s) {
    EXPECT_LE(config.learning_rate(s, per_epoch, total), config.learning_rate(s - 1, per_epoch, total) + 1e-15);
  }
  config.decay = false;
  EXPECT_EQ(config.learning_rate(299, per_epoch, total), 1.0);
}

struct TrainFixture {
  std::vector<corpus::AnnotatedDocument> docs;
  corpus::Vocab vocab;
  std::vector<Example> examples;
  LabelSet labels = LabelSet::for_task(TaskMode::kCpi);

  TrainFixture() {
    docs = corpus::parse_corpus(cpi::testing::data_path("mini_corpus.jsonl"));
    vocab = corpus::build_vocab(docs, 400, 1);
    auto kb = kb::load_kb(cpi::testing::data_path("mini_kb.tsv"));
    examples = prepare_examples(docs, labels, kb, vocab);
  }

  TrainConfig config() const {
    TrainConfig c;
    c.encoder.layers = 1;
    c.encoder.hidden = 16;
    c.encoder.heads = 2;
    c.encoder.ffn = 32;
    c.encoder.max_len = 32;
    c.encoder.dropout = 0.0;
    c.optimizer.lr = 5e-3;
    c.warmup_epochs = 0.0;
    c.decay = false;
    c.batch_size = 2;
    c.max_epochs = 1;
    return c;
  }
};

TEST(TrainTest, OneEpochLowersTrainingLoss) {
  TrainFixture f;
  std::span<const Example> ten(f.examples.data(), 10);
  TrainConfig config = f.config();
  ModelConfig mc = config.model_config(f.vocab.size(), f.labels.size());
  Rng rng(config.seed);
  Model initial(mc, rng);
  const double before = mean_loss(initial, ten);
  auto result = train(config, mc, ten, {}, f.labels);
  ASSERT_EQ(result.log.size(), 1u);
  EXPECT_LT(mean_loss(result.model, ten), before);
}

TEST(TrainTest, SameSeedSameResult) {
  TrainFixture f;
  TrainConfig config = f.config();
  config.max_epochs = 3;
  config.encoder.dropout = 0.1;
  ModelConfig mc = config.model_config(f.vocab.size(), f.labels.size());
  std::span<const Example> all(f.examples);
  std::ostringstream log_a, log_b;
  auto a = train(config, mc, all.subspan(0, 12), all.subspan(12), f.labels, &log_a);
  auto b = train(config, mc, all.subspan(0, 12), all.subspan(12), f.labels, &log_b);
  EXPECT_EQ(log_a.str(), log_b.str());
  EXPECT_EQ(a.best_dev_f, b.best_dev_f);
  auto pa = a.model.parameter_tensors();
  auto pb = b.model.parameter_tensors();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_TRUE(std::equal(pa[i].data().begin(), pa[i].data().end(), pb[i].data().begin()));
  }
}

TEST(TrainTest, ZeroLearningRateLeavesParametersUnchanged) {
  TrainFixture f;
  TrainConfig config = f.config();
  config.optimizer.lr = 0.0;
  config.max_epochs = 2;
  ModelConfig mc = config.model_config(f.vocab.size(), f.labels.size());
  Rng rng(config.seed);
  Model initial(mc, rng);
  auto result = train(config, mc, f.examples, {}, f.labels);
  auto before = initial.parameter_tensors();
  auto after = result.model.parameter_tensors();
  ASSERT_EQ(before.size(), after.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    EXPECT_TRUE(std::equal(before[i].data().begin(), before[i].data().end(), after[i].data().begin()));
  }
}

TEST(TrainTest, EarlyStoppingRestoresBestEpoch) {
  TrainFixture f;
  TrainConfig config = f.config();
  config.max_epochs = 8;
  config.patience = 2;
  ModelConfig mc = config.model_config(f.vocab.size(), f.labels.size());
  std::span<const Example> all(f.examples);
  auto result = train(config, mc, all.subspan(0, 10), all.subspan(10), f.labels);
  ASSERT_FALSE(result.log.empty());
  EXPECT_LE(result.log.size(), 8u);
  ASSERT_GE(result.best_epoch, 1);
  EXPECT_EQ(result.log[result.best_epoch - 1].dev.f, result.best_dev_f);
  for (const auto& r : result.log) EXPECT_LE(r.dev.f, result.best_dev_f);
  if (static_cast<int>(result.log.size()) < config.max_epochs) {
    EXPECT_EQ(static_cast<int>(result.log.size()), result.best_epoch + config.patience);
  }
  EXPECT_EQ(micro_score(result.model, all.subspan(10), f.labels).f, result.best_dev_f);
}

TEST(TrainTest, RejectsEmptyTrainingSet) {
  TrainFixture f;
  TrainConfig config = f.config();
  std::vector<Example> none;
  EXPECT_THROW(train(config, config.model_config(f.vocab.size(), f.labels.size()), none, {}, f.labels),
               ValidationError);
}

TEST(TrainTest, EpochRecordJsonLine) {
  EpochRecord r;
  r.epoch = 3;
  r.train_loss = 0.5;
  r.dev.precision = 0.25;
  r.dev.recall = 1.0;
  r.dev.f = 0.4;
  const std::string line = to_json_line(r);
  EXPECT_EQ(line.find("{\"epoch\":3,\"train_loss\":0.5,\"dev_P\":0.25,\"dev_R\":1.0,\"dev_F\":0.4"), 0u) << line;
}

}  // namespace
}  // namespace cpi::fusion
