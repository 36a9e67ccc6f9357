#include "cpi/eval/synthetic.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <map>
#include <string_view>

#include "cpi/corpus/text.h"
#include "cpi/random.h"

namespace cpi::eval {

namespace {

constexpr std::array<std::string_view, 32> kChemicals = {
    "aspirin",    "caffeine",   "nicotine",    "ethanol",     "morphine",   "cocaine",
    "warfarin",   "heparin",    "insulin",     "tamoxifen",   "imatinib",   "gefitinib",
    "metformin",  "rapamycin",  "forskolin",   "curcumin",    "resveratrol", "quercetin",
    "cisplatin",  "paclitaxel", "doxorubicin", "melatonin",   "dopamine",   "serotonin",
    "histamine",  "genistein",  "lithium",     "ketamine",    "haloperidol", "clozapine",
    "atropine",   "propranolol"};

constexpr std::array<std::string_view, 32> kProteins = {
    "EGFR",  "HER2",  "VEGFR",  "CYP3A4", "CYP2D6", "COX2",  "AKT1",  "MTOR",
    "JAK2",  "STAT3", "TNF",    "IL6",    "PPARG",  "ESR1",  "AR",    "GR",
    "DRD2",  "HTR2A", "ADRB2",  "CHRM1",  "GABRA1", "NMDA",  "P53",   "BCL2",
    "CASP3", "MAPK1", "PTGS1",  "ACHE",   "MAOA",   "SLC6A4", "ABCB1", "HMGCR"};

struct Trigger {
  std::string_view word;
  std::string_view label;
};

constexpr std::array<Trigger, 12> kTriggers = {{{"activates", "CPR:3"},
                                               {"upregulates", "CPR:3"},
                                               {"induces", "CPR:3"},
                                               {"inhibits", "CPR:4"},
                                               {"blocks", "CPR:4"},
                                               {"suppresses", "CPR:4"},
                                               {"agonizes", "CPR:5"},
                                               {"antagonizes", "CPR:6"},
                                               {"metabolizes", "CPR:9"},
                                               {"hydroxylates", "CPR:9"},
                                               {"oxidizes", "CPR:9"},
                                               {"stimulates", "CPR:3"}}};

constexpr std::array<std::string_view, 5> kPositive = {"CPR:3", "CPR:4", "CPR:5", "CPR:6", "CPR:9"};

constexpr std::array<std::string_view, 5> kConnectors = {"and", "with", "or", "versus", "near"};

constexpr std::array<std::string_view, 6> kPrefixes = {
    "we show that", "in this study", "results indicate that", "here", "notably",
    "in cultured cells"};

constexpr std::array<std::string_view, 5> kSuffixes = {
    "in vitro", "in rat liver", "at low doses", "in human plasma", "during treatment"};

const std::map<std::string_view, std::string_view>& title_words() {
  static const std::map<std::string_view, std::string_view> words = {
      {"CPR:3", "activation"}, {"CPR:4", "inhibition"}, {"CPR:5", "agonism"},
      {"CPR:6", "antagonism"}, {"CPR:9", "metabolism"}, {"False", "exposure"}};
  return words;
}

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& pool, Rng& rng) {
  return pool[rng.below(N)];
}

void append_words(std::vector<std::string>& words, std::string_view phrase) {
  std::size_t pos = 0;
  while (pos < phrase.size()) {
    const std::size_t space = std::min(phrase.find(' ', pos), phrase.size());
    words.emplace_back(phrase.substr(pos, space - pos));
    pos = space + 1;
  }
}

// Distinct picks from a pool.
template <std::size_t N>
std::vector<std::string> sample_names(const std::array<std::string_view, N>& pool, std::size_t k,
                                      Rng& rng) {
  std::vector<std::size_t> idx(N);
  for (std::size_t i = 0; i < N; ++i) idx[i] = i;
  rng.shuffle(idx);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(pool[idx[i]]);
  return out;
}

struct Positive {
  std::string chemical;
  std::string protein;
  std::string label;
};

corpus::AnnotatedDocument make_document(std::size_t index, const SyntheticSpec& spec, Rng& rng,
                                        std::vector<Positive>& positives) {
  const std::size_t n_chem = rng.uniform() < spec.third_entity_prob ? 3 : 2;
  const std::size_t n_prot = rng.uniform() < spec.third_entity_prob ? 3 : 2;
  const auto chem_names = sample_names(kChemicals, n_chem, rng);
  const auto prot_names = sample_names(kProteins, n_prot, rng);

  // Entity order: a random interleaving of the chemicals and proteins.
  struct Slot {
    corpus::EntityKind kind;
    std::string name;
  };
  std::vector<Slot> slots;
  for (const auto& n : chem_names) slots.push_back({corpus::EntityKind::kChemical, n});
  for (const auto& n : prot_names) slots.push_back({corpus::EntityKind::kProtein, n});
  rng.shuffle(slots);

  std::vector<std::string> words;
  append_words(words, pick(kPrefixes, rng));
  std::vector<std::size_t> positions;
  std::vector<std::string> relation_labels;  // label between slot i and i+1, "" if none
  for (std::size_t i = 0; i < slots.size(); ++i) {
    positions.push_back(words.size());
    words.push_back(slots[i].name);
    if (i + 1 == slots.size()) break;
    const bool mixed = slots[i].kind != slots[i + 1].kind;
    if (mixed && rng.uniform() < spec.trigger_prob) {
      const std::string_view label = pick(kPositive, rng);
      std::vector<std::string_view> options;
      for (const auto& t : kTriggers) {
        if (t.label == label) options.push_back(t.word);
      }
      words.emplace_back(options[rng.below(options.size())]);
      relation_labels.emplace_back(label);
    } else {
      words.emplace_back(pick(kConnectors, rng));
      relation_labels.emplace_back();
    }
  }
  append_words(words, pick(kSuffixes, rng));
  words.emplace_back(".");

  corpus::AnnotatedDocument doc;
  char id[32];
  std::snprintf(id, sizeof id, "synth%04zu", index + 1);
  doc.doc_id = id;
  std::string text;
  std::vector<std::size_t> starts;
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (w > 0 && words[w] != ".") text += ' ';
    starts.push_back(text.size());
    text += words[w];
  }
  doc.sentences.push_back({text});

  std::vector<std::string> ids(slots.size());
  std::size_t n_c = 0, n_p = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const bool chem = slots[i].kind == corpus::EntityKind::kChemical;
    ids[i] = chem ? "C" + std::to_string(++n_c) : "P" + std::to_string(++n_p);
    const std::size_t w = positions[i];
    doc.entities.push_back({ids[i], slots[i].kind, 0, starts[w], starts[w] + words[w].size(), words[w]});
  }
  std::string first_label = "False";
  for (std::size_t i = 0; i + 1 < slots.size(); ++i) {
    if (relation_labels[i].empty()) continue;
    const bool chem_first = slots[i].kind == corpus::EntityKind::kChemical;
    const std::size_t c = chem_first ? i : i + 1;
    const std::size_t p = chem_first ? i + 1 : i;
    doc.relations.push_back({ids[c], ids[p], relation_labels[i]});
    positives.push_back({slots[c].name, slots[p].name, relation_labels[i]});
    if (first_label == "False") first_label = relation_labels[i];
  }

  // Every chemical-protein pair must be recoverable from trigger position.
  for (std::size_t a = 0; a < slots.size(); ++a) {
    for (std::size_t b = 0; b < slots.size(); ++b) {
      if (slots[a].kind != corpus::EntityKind::kChemical ||
          slots[b].kind != corpus::EntityKind::kProtein) {
        continue;
      }
      std::string gold = "False";
      for (const auto& r : doc.relations) {
        if (r.chem_id == ids[a] && r.prot_id == ids[b]) gold = r.label;
      }
      if (trigger_oracle(words, positions[a], positions[b]) != gold) {
        throw Error("synthetic generator: trigger oracle disagrees with gold for " + doc.doc_id +
                    " " + ids[a] + "-" + ids[b]);
      }
    }
  }

  std::vector<corpus::DepEdge> edges;
  const std::size_t n_pieces = corpus::pre_tokenize(text).size();
  for (std::size_t w = 0; w + 1 < n_pieces; ++w) edges.push_back({0, w, w + 1});
  doc.dep_edges = std::move(edges);

  const std::string_view topic = rng.uniform() < 0.5 ? "signaling" : "pharmacology";
  doc.title = "Effects of " + std::string(title_words().at(first_label)) + " on " +
              std::string(topic);
  return doc;
}

}  // namespace

std::string trigger_oracle(const std::vector<std::string>& words, std::size_t chem_pos,
                           std::size_t prot_pos) {
  auto near = [](std::size_t a, std::size_t b) { return (a > b ? a - b : b - a) <= 2; };
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (!near(w, chem_pos) || !near(w, prot_pos)) continue;
    for (const auto& t : kTriggers) {
      if (words[w] == t.word) return std::string(t.label);
    }
  }
  return "False";
}

SyntheticCorpus make_synthetic_corpus(std::uint64_t seed, const SyntheticSpec& spec) {
  if (spec.n_docs < 50) throw ValidationError("synthetic corpus needs at least 50 documents");
  Rng rng(seed);
  std::vector<Positive> positives;
  std::vector<corpus::AnnotatedDocument> docs;
  for (std::size_t i = 0; i < spec.n_docs; ++i) docs.push_back(make_document(i, spec, rng, positives));

  SyntheticCorpus out;
  const std::size_t n_train = spec.n_docs * 70 / 100;
  const std::size_t n_dev = spec.n_docs * 15 / 100;
  out.train.assign(docs.begin(), docs.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.dev.assign(docs.begin() + static_cast<std::ptrdiff_t>(n_train),
                 docs.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev));
  out.test.assign(docs.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev), docs.end());

  rng.shuffle(positives);
  const auto n_kb = static_cast<std::size_t>(spec.kb_coverage * static_cast<double>(positives.size()) + 0.5);
  for (std::size_t i = 0; i < n_kb && i < positives.size(); ++i) {
    out.kb.push_back({positives[i].chemical, positives[i].protein, positives[i].label});
  }
  std::sort(out.kb.begin(), out.kb.end(), [](const KbRow& a, const KbRow& b) {
    return std::tie(a.chemical, a.protein, a.tag) < std::tie(b.chemical, b.protein, b.tag);
  });
  return out;
}

void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  corpus::write_corpus(dir / "train.jsonl", corpus.train);
  corpus::write_corpus(dir / "dev.jsonl", corpus.dev);
  corpus::write_corpus(dir / "test.jsonl", corpus.test);
  std::ofstream kb(dir / "kb.tsv", std::ios::binary);
  if (!kb) throw Error("cannot write " + (dir / "kb.tsv").string());
  for (const auto& row : corpus.kb) kb << row.chemical << '\t' << row.protein << '\t' << row.tag << '\n';
}

}  // namespace cpi::eval
