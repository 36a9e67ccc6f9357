#include "cpi/eval/metrics.h"

#include <algorithm>
#include <cstdio>

#include "cpi/common.h"

namespace cpi::eval {

double f_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

namespace {

void check_lengths(std::size_t predictions, std::size_t golds) {
  if (predictions != golds) {
    throw ValidationError("evaluation: " + std::to_string(predictions) + " predictions vs " +
                          std::to_string(golds) + " gold labels");
  }
}

PRF finish(long tp, long fp, long fn) {
  PRF out;
  out.tp = tp;
  out.fp = fp;
  out.fn = fn;
  out.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  out.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  out.f = f_score(out.precision, out.recall);
  return out;
}

std::string fixed(double value, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace

PRF micro_prf(std::span<const Label> predictions, std::span<const Label> golds,
              std::span<const Label> positive_labels) {
  check_lengths(predictions.size(), golds.size());
  auto positive = [&](Label l) {
    return std::find(positive_labels.begin(), positive_labels.end(), l) != positive_labels.end();
  };
  long tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred_pos = positive(predictions[i]);
    const bool gold_pos = positive(golds[i]);
    if (pred_pos && predictions[i] == golds[i]) {
      ++tp;
      continue;
    }
    if (pred_pos) ++fp;
    if (gold_pos) ++fn;
  }
  return finish(tp, fp, fn);
}

const KindRow& EvalReport::kind_row(std::string_view kind) const {
  for (const auto& row : by_kind) {
    if (row.kind == kind) return row;
  }
  throw Error("report has no row for kind '" + std::string(kind) + "'");
}

EvalReport stratified_eval(std::span<const Label> predictions, std::span<const Label> golds,
                           std::span<const corpus::InstanceKind> kinds, const LabelSet& labels) {
  check_lengths(predictions.size(), golds.size());
  if (kinds.size() != golds.size()) {
    throw ValidationError("evaluation: " + std::to_string(kinds.size()) + " kinds vs " +
                          std::to_string(golds.size()) + " gold labels");
  }
  const auto n_labels = static_cast<std::size_t>(labels.size());
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (golds[i] < 0 || golds[i] >= labels.size() || predictions[i] < 0 ||
        predictions[i] >= labels.size()) {
      throw ValidationError("evaluation: label index outside the label set at item " +
                            std::to_string(i));
    }
  }
  const std::vector<Label> positives = labels.positive_labels();

  EvalReport report;
  report.labels = labels.names();
  report.micro = micro_prf(predictions, golds, positives);
  for (Label l : positives) {
    const Label one[] = {l};
    report.per_type_f.push_back(micro_prf(predictions, golds, one).f);
  }
  for (auto kind : {corpus::InstanceKind::kOverlapping, corpus::InstanceKind::kNormal}) {
    std::vector<Label> p, g;
    for (std::size_t i = 0; i < golds.size(); ++i) {
      if (kinds[i] != kind) continue;
      p.push_back(predictions[i]);
      g.push_back(golds[i]);
    }
    report.by_kind.push_back({std::string(corpus::to_string(kind)), g.size(), micro_prf(p, g, positives)});
  }
  report.by_kind.push_back({"all", golds.size(), report.micro});
  report.confusion.assign(n_labels, std::vector<long>(n_labels, 0));
  for (std::size_t i = 0; i < golds.size(); ++i) {
    ++report.confusion[static_cast<std::size_t>(golds[i])][static_cast<std::size_t>(predictions[i])];
  }
  return report;
}

std::string format_report(const EvalReport& report) {
  std::string out = "Per-type F\n";
  for (std::size_t i = 0; i < report.per_type_f.size(); ++i) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-12s %s\n", report.labels[i].c_str(),
                  fixed(report.per_type_f[i]).c_str());
    out += line;
  }
  out += "\nMicro P/R/F by instance kind\n";
  char line[256];
  std::snprintf(line, sizeof line, "  %-12s %8s %8s %8s %8s %6s %6s %6s\n", "kind", "count", "P",
                "R", "F", "TP", "FP", "FN");
  out += line;
  for (const auto& row : report.by_kind) {
    std::snprintf(line, sizeof line, "  %-12s %8zu %8s %8s %8s %6ld %6ld %6ld\n", row.kind.c_str(),
                  row.count, fixed(row.prf.precision).c_str(), fixed(row.prf.recall).c_str(),
                  fixed(row.prf.f).c_str(), row.prf.tp, row.prf.fp, row.prf.fn);
    out += line;
  }
  out += "\nConfusion (rows gold, columns predicted)\n";
  std::snprintf(line, sizeof line, "  %-12s", "");
  out += line;
  for (const auto& l : report.labels) {
    std::snprintf(line, sizeof line, " %10s", l.c_str());
    out += line;
  }
  out += '\n';
  for (std::size_t g = 0; g < report.confusion.size(); ++g) {
    std::snprintf(line, sizeof line, "  %-12s", report.labels[g].c_str());
    out += line;
    for (long c : report.confusion[g]) {
      std::snprintf(line, sizeof line, " %10ld", c);
      out += line;
    }
    out += '\n';
  }
  return out;
}

std::string report_csv(const EvalReport& report) {
  std::string out = "section,key,metric,value\n";
  auto add = [&](const std::string& section, const std::string& key, const std::string& metric,
                 const std::string& value) {
    out += section + ',' + key + ',' + metric + ',' + value + '\n';
  };
  for (std::size_t i = 0; i < report.per_type_f.size(); ++i) {
    add("per_type", report.labels[i], "F", fixed(report.per_type_f[i]));
  }
  for (const auto& row : report.by_kind) {
    add("by_kind", row.kind, "count", std::to_string(row.count));
    add("by_kind", row.kind, "P", fixed(row.prf.precision));
    add("by_kind", row.kind, "R", fixed(row.prf.recall));
    add("by_kind", row.kind, "F", fixed(row.prf.f));
    add("by_kind", row.kind, "TP", std::to_string(row.prf.tp));
    add("by_kind", row.kind, "FP", std::to_string(row.prf.fp));
    add("by_kind", row.kind, "FN", std::to_string(row.prf.fn));
  }
  for (std::size_t g = 0; g < report.confusion.size(); ++g) {
    for (std::size_t p = 0; p < report.confusion[g].size(); ++p) {
      add("confusion", report.labels[g], report.labels[p], std::to_string(report.confusion[g][p]));
    }
  }
  return out;
}

}  // namespace cpi::eval
