#include "cpi/cli/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "cpi/corpus/blue_tsv.h"
#include "cpi/corpus/document.h"
#include "cpi/corpus/stats.h"
#include "cpi/corpus/vocab.h"
#include "cpi/eval/ablation.h"
#include "cpi/eval/predictions.h"
#include "cpi/eval/synthetic.h"
#include "cpi/fusion/audit.h"
#include "cpi/fusion/train.h"
#include "cpi/kb/knowledge_sequence.h"
#include "cpi/num/checkpoint.h"

namespace cpi::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 13;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string task;
  std::string ablate;
  std::string kb;
  bool blue = false;

  std::vector<std::string> corpus;
  std::string train;
  std::string dev;
  std::string test;
  std::string model;
  std::string predictions;
  std::size_t docs = 200;
};

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ValidationError("missing " + what);
  if (!fs::is_regular_file(path)) throw ValidationError(what + " not found: " + path);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

fs::path output_dir(const Options& o) {
  if (o.out.empty()) throw ValidationError("missing --out directory");
  fs::create_directories(o.out);
  return o.out;
}

fusion::TrainConfig resolve_config(const Options& o) {
  fusion::TrainConfig config;
  if (!o.config.empty()) {
    require_file(o.config, "config file");
    config = fusion::load_train_config(o.config);
  }
  if (o.seed) config.seed = *o.seed;
  if (!o.task.empty()) config.task = parse_task_mode(o.task);
  if (!o.ablate.empty()) config.ablation = fusion::parse_components(o.ablate);
  config.validate();
  return config;
}

TaskMode resolve_task(const Options& o) {
  return o.task.empty() ? TaskMode::kCpi : parse_task_mode(o.task);
}

kb::KnowledgeBase load_optional_kb(const Options& o) {
  if (o.kb.empty()) return {};
  require_file(o.kb, "knowledge base");
  return kb::load_kb(o.kb);
}

// One split of input data, either annotated documents or pre-masked
// instances.
struct Split {
  std::vector<corpus::AnnotatedDocument> docs;
  std::vector<corpus::Instance> instances;
};

Split load_split(const std::string& path, const std::string& what, bool blue, TaskMode task,
                 const LabelSet& labels) {
  require_file(path, what);
  Split s;
  if (blue) {
    s.instances = corpus::read_blue_tsv(path, labels, task);
  } else {
    s.docs = corpus::parse_corpus(path, corpus::CorpusFormat{task});
    s.instances = corpus::generate_instances(s.docs, labels);
  }
  return s;
}

corpus::Vocab build_split_vocab(const Split& s, const fusion::TrainConfig& config) {
  if (!s.docs.empty()) return corpus::build_vocab(s.docs, config.vocab_max_size, config.vocab_min_freq);
  std::vector<std::string> texts;
  for (const auto& inst : s.instances) texts.push_back(inst.text());
  return corpus::build_vocab(texts, config.vocab_max_size, config.vocab_min_freq);
}

std::vector<fusion::Example> examples_of(const Split& s, const LabelSet& labels,
                                         const kb::KnowledgeBase& kb, const corpus::Vocab& vocab) {
  if (!s.docs.empty()) return fusion::prepare_examples(s.docs, labels, kb, vocab);
  return fusion::prepare_examples(s.instances, vocab);
}

std::string span_str(const std::optional<corpus::TokenSpan>& s) {
  return s ? std::to_string(s->first) + "-" + std::to_string(s->last) : "-";
}

int run_prepare(const Options& o, std::ostream& out) {
  const TaskMode task = resolve_task(o);
  const LabelSet labels = LabelSet::for_task(task);
  if (o.corpus.size() != 1) throw ValidationError("prepare takes exactly one --corpus file");
  const Split split = load_split(o.corpus.front(), "corpus", o.blue, task, labels);
  const kb::KnowledgeBase kb = load_optional_kb(o);
  const fs::path dir = output_dir(o);

  std::ostringstream instances, knowledge;
  instances << "instance_id\tdoc_id\tkind\tlabel\ttarget1\ttarget2\ttext\n";
  knowledge << "instance_id\tknowledge\n";
  std::map<std::string, const corpus::AnnotatedDocument*> by_id;
  for (const auto& d : split.docs) by_id[d.doc_id] = &d;
  for (const auto& inst : split.instances) {
    instances << inst.instance_id << '\t' << inst.doc_id << '\t' << corpus::to_string(inst.kind)
              << '\t' << labels.name(inst.label) << '\t' << span_str(inst.target1) << '\t'
              << span_str(inst.target2) << '\t' << inst.text() << '\n';
    std::string seq;
    if (const auto it = by_id.find(inst.doc_id); it != by_id.end()) {
      for (const auto& t : kb::build_knowledge_sequence(inst, *it->second, kb).tokens()) {
        if (!seq.empty()) seq += ' ';
        seq += t;
      }
    }
    knowledge << inst.instance_id << '\t' << seq << '\n';
  }
  write_text(dir / "instances.tsv", instances.str());
  write_text(dir / "knowledge.tsv", knowledge.str());
  out << "wrote " << split.instances.size() << " instances to " << dir.string() << '\n';
  return 0;
}

int run_stats(const Options& o, std::ostream& out) {
  const TaskMode task = resolve_task(o);
  const LabelSet labels = LabelSet::for_task(task);
  if (o.corpus.empty()) throw ValidationError("stats needs at least one --corpus file");
  for (const auto& path : o.corpus) require_file(path, "corpus");
  std::vector<std::vector<corpus::Instance>> loaded;
  std::vector<std::string> names;
  for (const auto& path : o.corpus) {
    loaded.push_back(load_split(path, "corpus", o.blue, task, labels).instances);
    names.push_back(fs::path(path).stem().string());
  }
  std::vector<corpus::NamedSplit> splits;
  for (std::size_t i = 0; i < loaded.size(); ++i) splits.push_back({names[i], loaded[i]});
  const corpus::StatsTable table = corpus::corpus_stats(splits, labels);
  out << table.format_labels() << '\n' << table.format_kinds();
  if (!o.out.empty()) write_text(output_dir(o) / "stats.csv", table.to_csv());
  return 0;
}

nlohmann::json checkpoint_config(const fusion::TrainConfig& train, const fusion::ModelConfig& model) {
  return {{"model", fusion::to_json(model)}, {"train", fusion::to_json(train)}};
}

int run_train(const Options& o, std::ostream& out) {
  const fusion::TrainConfig config = resolve_config(o);
  const LabelSet labels = LabelSet::for_task(config.task);
  const Split train = load_split(o.train, "training corpus", o.blue, config.task, labels);
  std::optional<Split> dev;
  if (!o.dev.empty()) dev = load_split(o.dev, "development corpus", o.blue, config.task, labels);
  const kb::KnowledgeBase kb = load_optional_kb(o);
  const fs::path dir = output_dir(o);

  const corpus::Vocab vocab = build_split_vocab(train, config);
  const auto train_examples = examples_of(train, labels, kb, vocab);
  const auto dev_examples = dev ? examples_of(*dev, labels, kb, vocab) : std::vector<fusion::Example>{};
  const fusion::ModelConfig model_config = config.model_config(vocab.size(), labels.size());

  std::ostringstream log;
  const auto result = fusion::train(config, model_config, train_examples, dev_examples, labels, &log);
  vocab.save(dir / "vocab.txt");
  write_text(dir / "train_log.jsonl", log.str());
  write_text(dir / "config.txt", fusion::format_train_config(config));
  num::save_checkpoint(dir / "model.ckpt",
                       {checkpoint_config(config, model_config), vocab.fingerprint(),
                        result.model.parameters()});
  out << "trained " << result.log.size() << " epochs; best epoch " << result.best_epoch
      << " dev F " << result.best_dev_f << '\n';
  return 0;
}

int run_eval(const Options& o, std::ostream& out) {
  const fs::path dir = output_dir(o);
  std::vector<eval::PredictionRecord> records;
  LabelSet labels = LabelSet::for_task(resolve_task(o));
  if (!o.predictions.empty()) {
    require_file(o.predictions, "predictions file");
    records = eval::read_predictions(o.predictions);
  } else {
    if (o.model.empty()) throw ValidationError("eval needs --model or --predictions");
    const fs::path model_dir = o.model;
    require_file((model_dir / "model.ckpt").string(), "checkpoint");
    require_file((model_dir / "vocab.txt").string(), "vocabulary");
    const num::Checkpoint ckpt = num::load_checkpoint(model_dir / "model.ckpt");
    const corpus::Vocab vocab = corpus::Vocab::load(model_dir / "vocab.txt");
    if (vocab.fingerprint() != ckpt.vocab_hash) {
      throw ValidationError("vocabulary " + (model_dir / "vocab.txt").string() +
                            " does not match the checkpoint");
    }
    fusion::ModelConfig model_config;
    TaskMode task = TaskMode::kCpi;
    try {
      model_config = fusion::model_config_from_json(ckpt.config.at("model"));
      task = parse_task_mode(ckpt.config.at("train").at("task").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("checkpoint config: " + std::string(e.what()));
    }
    labels = LabelSet::for_task(task);
    Rng rng(0);
    const fusion::Model model(model_config, rng);
    auto params = model.parameters();
    num::assign_parameters(params, ckpt.params);

    const Split test = load_split(o.test, "evaluation corpus", o.blue, task, labels);
    const auto examples = examples_of(test, labels, load_optional_kb(o), vocab);
    const auto preds = fusion::predict(model, examples);
    for (std::size_t i = 0; i < examples.size(); ++i) {
      records.push_back({examples[i].instance_id, labels.name(examples[i].gold), labels.name(preds[i]),
                         examples[i].kind});
    }
    eval::write_predictions(dir / "predictions.tsv", records);
  }
  const eval::EvalReport report = eval::evaluate_predictions(records, labels);
  const std::string text = eval::format_report(report);
  write_text(dir / "report.txt", text);
  write_text(dir / "report.csv", eval::report_csv(report));
  out << text;
  return 0;
}

int run_ablate(const Options& o, std::ostream& out) {
  fusion::TrainConfig config = resolve_config(o);
  const LabelSet labels = LabelSet::for_task(config.task);
  const Split train = load_split(o.train, "training corpus", o.blue, config.task, labels);
  const Split dev = load_split(o.dev, "development corpus", o.blue, config.task, labels);
  const Split test = load_split(o.test, "evaluation corpus", o.blue, config.task, labels);
  const kb::KnowledgeBase kb = load_optional_kb(o);
  const fs::path dir = output_dir(o);

  const corpus::Vocab vocab = build_split_vocab(train, config);
  const auto rows = eval::run_ablation_suite(config, vocab.size(), examples_of(train, labels, kb, vocab),
                                             examples_of(dev, labels, kb, vocab),
                                             examples_of(test, labels, kb, vocab), labels);
  const std::string table = eval::format_ablation_table(rows);
  write_text(dir / "ablation.txt", table);
  write_text(dir / "ablation.csv", eval::ablation_csv(rows));
  out << table;
  return 0;
}

int run_synth(const Options& o, std::ostream& out) {
  eval::SyntheticSpec spec;
  spec.n_docs = o.docs;
  const auto corpus = eval::make_synthetic_corpus(o.seed.value_or(kDefaultSeed), spec);
  const fs::path dir = output_dir(o);
  eval::write_synthetic_corpus(corpus, dir);
  out << "wrote " << corpus.train.size() << "/" << corpus.dev.size() << "/" << corpus.test.size()
      << " train/dev/test documents and " << corpus.kb.size() << " knowledge base rows to "
      << dir.string() << '\n';
  return 0;
}

int run_gradcheck(const Options& o, std::ostream& out) {
  const auto audit = fusion::run_gradient_audit(o.seed.value_or(kDefaultSeed));
  char line[160];
  for (const auto& e : audit.ops) {
    std::snprintf(line, sizeof line, "%-28s %6zu components  max rel. error %.3e\n", e.name.c_str(),
                  e.result.components, e.result.max_rel_error);
    out << line;
  }
  std::snprintf(line, sizeof line, "%-28s %6zu components  max rel. error %.3e\n", "full model loss",
                audit.model.result.components, audit.model.result.max_rel_error);
  out << line;
  const bool ok = audit.max_op_error() <= 1e-5 && audit.model.result.max_rel_error <= 1e-4;
  std::snprintf(line, sizeof line, "ops max rel. error %.3e (limit 1e-5); model max rel. error %.3e (limit 1e-4): %s\n",
                audit.max_op_error(), audit.model.result.max_rel_error, ok ? "ok" : "FAILED");
  out << line;
  return ok ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  init_logging();
  CLI::App app{"Chemical-protein interaction extraction with Gaussian positional pooling",
               "cpi_extract"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Random seed (default 13)");
  };
  auto add_task = [&](CLI::App* sub) {
    sub->add_option("--task", o.task, "Task mode: cpi (default) or ddi")
        ->check(CLI::IsMember({"cpi", "ddi"}));
  };
  auto add_training = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Training config file (key = value lines)");
    add_seed(sub);
    add_task(sub);
    sub->add_option("--ablate", o.ablate, "Components to remove: gaussian,title,knowledge");
    sub->add_option("--kb", o.kb, "Knowledge base TSV");
    sub->add_flag("--blue", o.blue, "Inputs are pre-masked BLUE-style TSV files");
  };

  auto* prepare = app.add_subcommand("prepare", "Corpus to instances and knowledge sequences");
  prepare->add_option("--corpus", o.corpus, "Annotated corpus (JSONL)")->required();
  prepare->add_option("--kb", o.kb, "Knowledge base TSV");
  prepare->add_option("--out", o.out, "Output directory")->required();
  prepare->add_flag("--blue", o.blue, "Input is a pre-masked BLUE-style TSV file");
  add_task(prepare);

  auto* stats = app.add_subcommand("stats", "Label and instance-kind statistics per split");
  stats->add_option("--corpus", o.corpus, "One file per split; the split is named by file stem")
      ->required();
  stats->add_option("--out", o.out, "Optional directory for stats.csv");
  stats->add_flag("--blue", o.blue, "Inputs are pre-masked BLUE-style TSV files");
  add_task(stats);

  auto* train = app.add_subcommand("train", "Train a model");
  train->add_option("--train", o.train, "Training corpus")->required();
  train->add_option("--dev", o.dev, "Development corpus for early stopping");
  train->add_option("--out", o.out, "Output directory")->required();
  add_training(train);

  auto* evaluate = app.add_subcommand("eval", "Stratified evaluation report");
  evaluate->add_option("--model", o.model, "Directory written by train");
  evaluate->add_option("--test", o.test, "Evaluation corpus");
  evaluate->add_option("--predictions", o.predictions, "Re-evaluate a saved predictions file");
  evaluate->add_option("--kb", o.kb, "Knowledge base TSV");
  evaluate->add_option("--out", o.out, "Output directory")->required();
  evaluate->add_flag("--blue", o.blue, "Input is a pre-masked BLUE-style TSV file");
  add_task(evaluate);

  auto* ablate = app.add_subcommand("ablate", "Train and evaluate the six ablation variants");
  ablate->add_option("--train", o.train, "Training corpus")->required();
  ablate->add_option("--dev", o.dev, "Development corpus")->required();
  ablate->add_option("--test", o.test, "Evaluation corpus")->required();
  ablate->add_option("--out", o.out, "Output directory")->required();
  add_training(ablate);

  auto* synth = app.add_subcommand("synth", "Generate the synthetic overlapping-relation corpus");
  add_seed(synth);
  synth->add_option("--docs", o.docs, "Number of documents (>= 50)");
  synth->add_option("--out", o.out, "Output directory")->required();

  auto* gradcheck = app.add_subcommand("gradcheck", "Audit reverse-mode gradients against finite differences");
  add_seed(gradcheck);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  try {
    if (*prepare) return run_prepare(o, out);
    if (*stats) return run_stats(o, out);
    if (*train) return run_train(o, out);
    if (*evaluate) return run_eval(o, out);
    if (*ablate) return run_ablate(o, out);
    if (*synth) return run_synth(o, out);
    if (*gradcheck) return run_gradcheck(o, out);
  } catch (const corpus::CorpusError& e) {
    for (const auto& p : e.problems()) err << "error: " << p << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace cpi::cli
