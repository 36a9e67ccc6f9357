#include "cpi/eval/predictions.h"

#include <fstream>
#include <sstream>

namespace cpi::eval {

namespace {
constexpr std::string_view kHeader = "instance_id\tgold\tpredicted\tkind";
}

void write_predictions(std::ostream& out, std::span<const PredictionRecord> records) {
  out << kHeader << '\n';
  for (const auto& r : records) {
    out << r.instance_id << '\t' << r.gold << '\t' << r.predicted << '\t' << corpus::to_string(r.kind)
        << '\n';
  }
}

void write_predictions(const std::filesystem::path& path, std::span<const PredictionRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_predictions(out, records);
}

std::vector<PredictionRecord> read_predictions(std::istream& in, const std::string& source) {
  std::vector<PredictionRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line == kHeader)) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const auto tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    const std::string location = source + ":" + std::to_string(line_no);
    if (fields.size() != 4) {
      throw FormatError(location, "expected 4 tab-separated fields, found " + std::to_string(fields.size()));
    }
    PredictionRecord r{fields[0], fields[1], fields[2], {}};
    try {
      r.kind = corpus::parse_instance_kind(fields[3]);
    } catch (const Error& e) {
      throw FormatError(location, e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open predictions file " + path.string());
  return read_predictions(in, path.string());
}

EvalReport evaluate_predictions(std::span<const PredictionRecord> records, const LabelSet& labels) {
  std::vector<Label> preds, golds;
  std::vector<corpus::InstanceKind> kinds;
  for (const auto& r : records) {
    const auto g = labels.find(r.gold);
    const auto p = labels.find(r.predicted);
    if (!g || !p) {
      throw ValidationError("prediction for " + r.instance_id + ": unknown label '" +
                            (!g ? r.gold : r.predicted) + "'");
    }
    golds.push_back(*g);
    preds.push_back(*p);
    kinds.push_back(r.kind);
  }
  return stratified_eval(preds, golds, kinds, labels);
}

}  // namespace cpi::eval
