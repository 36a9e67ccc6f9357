#pragma once

#include <span>
#include <string>
#include <vector>

#include "cpi/corpus/instance.h"
#include "cpi/labels.h"

namespace cpi::eval {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

// 2PR / (P + R), 0 when P + R is 0.
double f_score(double precision, double recall);

// Counts pooled over `positive_labels`: a prediction is a true positive
// when it equals a positive gold label, a false positive when it is a
// positive label other than the gold, and every positive gold not matched
// is a false negative. Ratios with a zero denominator are 0.
PRF micro_prf(std::span<const Label> predictions, std::span<const Label> golds,
              std::span<const Label> positive_labels);

struct KindRow {
  std::string kind;  // "overlapping", "normal" or "all"
  std::size_t count = 0;
  PRF prf;
};

struct EvalReport {
  std::vector<std::string> labels;
  // F-score of each positive label, in label order.
  std::vector<double> per_type_f;
  PRF micro;
  // Rows for overlapping, normal and all, in that order.
  std::vector<KindRow> by_kind;
  // confusion[gold][predicted]
  std::vector<std::vector<long>> confusion;

  const KindRow& kind_row(std::string_view kind) const;
};

EvalReport stratified_eval(std::span<const Label> predictions, std::span<const Label> golds,
                           std::span<const corpus::InstanceKind> kinds, const LabelSet& labels);

// Human-readable tables: per-type F, the stratified micro scores and the
// confusion matrix.
std::string format_report(const EvalReport& report);
// Long-form CSV "section,key,metric,value" with the same numbers.
std::string report_csv(const EvalReport& report);

}  // namespace cpi::eval
