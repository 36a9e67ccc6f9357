#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "cpi/cli/cli.h"
#include "test_support.h"

namespace cpi::cli {
namespace {

namespace fs = std::filesystem;
using cpi::testing::data_path;
using cpi::testing::read_file;
using cpi::testing::TempDir;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = cli_main(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::set<std::string> listing(const fs::path& dir) {
  std::set<std::string> names;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    names.insert(fs::relative(e.path(), dir).string());
  }
  return names;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

const char* kTinyConfig =
    "encoder.layers = 1\n"
    "encoder.hidden = 16\n"
    "encoder.heads = 2\n"
    "encoder.ffn = 32\n"
    "encoder.max_len = 32\n"
    "max_epochs = 2\n"
    "batch_size = 4\n";

TEST(CliTest, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}).code, 0);
  for (const char* sub : {"prepare", "stats", "train", "eval", "ablate", "synth", "gradcheck"}) {
    CliRun r = run({sub, "--help"});
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
  }
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  CliRun r = run({"stats", "--corpus", data_path("mini_corpus.jsonl").string(), "--frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
  EXPECT_EQ(run({"prepare", "--out", "x"}).code, 2);
  EXPECT_EQ(run({"stats", "--corpus", data_path("mini_corpus.jsonl").string(), "--task", "xyz"}).code, 2);
}

TEST(CliTest, ValidationFailuresExitOneWithContext) {
  TempDir dir("cli_bad");
  CliRun missing = run({"prepare", "--corpus", (dir / "nope.jsonl").string(), "--out", (dir / "o").string()});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("nope.jsonl"), std::string::npos) << missing.err;

  write_text(dir / "bad.jsonl", "{\"doc_id\": 1}\n");
  CliRun bad = run({"stats", "--corpus", (dir / "bad.jsonl").string()});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("record 1"), std::string::npos) << bad.err;

  write_text(dir / "cfg.txt", "seed = 1\nencoder.hiddne = 3\n");
  CliRun cfg = run({"train", "--train", data_path("mini_corpus.jsonl").string(), "--config",
                 (dir / "cfg.txt").string(), "--out", (dir / "m").string()});
  EXPECT_EQ(cfg.code, 1);
  EXPECT_NE(cfg.err.find("cfg.txt:2"), std::string::npos) << cfg.err;
}

TEST(CliTest, StatsMatchesManifest) {
  TempDir dir("cli_stats");
  CliRun r = run({"stats", "--corpus", data_path("mini_corpus.jsonl").string(), "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Overlapping"), std::string::npos);
  const std::string csv = read_file(dir / "stats.csv");
  EXPECT_NE(csv.find("mini_corpus,1,3,2,1,3,6,12,4,16\n"), std::string::npos) << csv;
}

TEST(CliTest, PrepareWritesInstancesAndKnowledge) {
  TempDir dir("cli_prepare");
  CliRun r = run({"prepare", "--corpus", data_path("mini_corpus.jsonl").string(), "--kb",
               data_path("mini_kb.tsv").string(), "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(listing(dir.path()), (std::set<std::string>{"instances.tsv", "knowledge.tsv"}));
  const std::string instances = read_file(dir / "instances.tsv");
  EXPECT_EQ(std::count(instances.begin(), instances.end(), '\n'), 17);
  const std::string knowledge = read_file(dir / "knowledge.tsv");
  EXPECT_NE(knowledge.find("mini001.T1.T3\tCPR:4 @CHEMICAL$ inhibit activity @GENE$\n"), std::string::npos)
      << knowledge;
}

TEST(CliTest, SynthIsReproducible) {
  TempDir a("cli_synth_a"), b("cli_synth_b");
  ASSERT_EQ(run({"synth", "--seed", "7", "--out", a.path().string()}).code, 0);
  ASSERT_EQ(run({"synth", "--seed", "7", "--out", b.path().string()}).code, 0);
  EXPECT_EQ(listing(a.path()), listing(b.path()));
  for (const auto& name : listing(a.path())) EXPECT_EQ(read_file(a / name), read_file(b / name)) << name;
  EXPECT_EQ(run({"synth", "--docs", "10", "--out", a.path().string()}).code, 1);
}

TEST(CliTest, GradcheckPassesOnDefaults) {
  CliRun r = run({"gradcheck"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("max rel. error"), std::string::npos);
  EXPECT_NE(r.out.find(": ok"), std::string::npos) << r.out;
}

TEST(CliTest, TrainEvalRoundTripIsDeterministic) {
  TempDir dir("cli_train");
  write_text(dir / "tiny.cfg", kTinyConfig);
  const std::string corpus = data_path("mini_corpus.jsonl").string();
  const std::string kb = data_path("mini_kb.tsv").string();
  for (const char* name : {"m1", "m2"}) {
    CliRun r = run({"train", "--train", corpus, "--dev", corpus, "--kb", kb, "--config",
                 (dir / "tiny.cfg").string(), "--seed", "5", "--out", (dir / name).string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(listing(dir / "m1"),
            (std::set<std::string>{"config.txt", "model.ckpt", "train_log.jsonl", "vocab.txt"}));
  for (const char* f : {"config.txt", "model.ckpt", "train_log.jsonl", "vocab.txt"}) {
    EXPECT_EQ(read_file(dir / "m1" / f), read_file(dir / "m2" / f)) << f;
  }
  const std::string log = read_file(dir / "m1" / "train_log.jsonl");
  EXPECT_EQ(log.rfind("{\"epoch\":1,\"train_loss\":", 0), 0u) << log;

  for (const char* name : {"e1", "e2"}) {
    CliRun r = run({"eval", "--model", (dir / "m1").string(), "--test", corpus, "--kb", kb, "--out",
                 (dir / name).string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(listing(dir / "e1"), (std::set<std::string>{"predictions.tsv", "report.csv", "report.txt"}));
  for (const char* f : {"predictions.tsv", "report.csv", "report.txt"}) {
    EXPECT_EQ(read_file(dir / "e1" / f), read_file(dir / "e2" / f)) << f;
  }
  CliRun replay = run({"eval", "--predictions", (dir / "e1" / "predictions.tsv").string(), "--out",
                    (dir / "e3").string()});
  ASSERT_EQ(replay.code, 0) << replay.err;
  EXPECT_EQ(read_file(dir / "e1" / "report.txt"), read_file(dir / "e3" / "report.txt"));
  EXPECT_EQ(read_file(dir / "e1" / "report.csv"), read_file(dir / "e3" / "report.csv"));
}

TEST(CliTest, EvalRejectsCheckpointWithForeignVocab) {
  TempDir dir("cli_vocab");
  write_text(dir / "tiny.cfg", std::string(kTinyConfig) + "max_epochs = 1\n");
  const std::string corpus = data_path("mini_corpus.jsonl").string();
  ASSERT_EQ(run({"train", "--train", corpus, "--config", (dir / "tiny.cfg").string(), "--out",
                 (dir / "m").string()}).code, 0);
  write_text(dir / "m" / "vocab.txt", "[PAD]\n[UNK]\n");
  CliRun r = run({"eval", "--model", (dir / "m").string(), "--test", corpus, "--out", (dir / "e").string()});
  EXPECT_EQ(r.code, 1);
}

}  // namespace
}  // namespace cpi::cli
