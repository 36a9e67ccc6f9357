#include "cpi/labels.h"

#include "cpi/common.h"

namespace cpi {

TaskMode parse_task_mode(std::string_view text) {
  if (text == "cpi") return TaskMode::kCpi;
  if (text == "ddi") return TaskMode::kDdi;
  throw ValidationError("unknown task mode '" + std::string(text) + "' (expected cpi or ddi)");
}

std::string_view to_string(TaskMode mode) {
  return mode == TaskMode::kCpi ? "cpi" : "ddi";
}

LabelSet LabelSet::for_task(TaskMode mode) {
  if (mode == TaskMode::kDdi) {
    return LabelSet({"Advice", "Effect", "Mechanism", "Int", "False"});
  }
  return LabelSet({"CPR:3", "CPR:4", "CPR:5", "CPR:6", "CPR:9", "False"});
}

std::vector<Label> LabelSet::positive_labels() const {
  std::vector<Label> out;
  for (Label l = 0; l < negative(); ++l) out.push_back(l);
  return out;
}

std::optional<Label> LabelSet::find(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

Label LabelSet::at(std::string_view name) const {
  if (auto label = find(name)) return *label;
  throw Error("unknown relation label '" + std::string(name) + "'");
}

}  // namespace cpi
