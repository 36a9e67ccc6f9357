#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cpi {

enum class TaskMode { kCpi, kDdi };

TaskMode parse_task_mode(std::string_view text);
std::string_view to_string(TaskMode mode);

// Index into a LabelSet. The negative class is always the last label.
using Label = int;

// Ordered relation label inventory for one task.
class LabelSet {
 public:
  static LabelSet for_task(TaskMode mode);

  int size() const { return static_cast<int>(names_.size()); }
  Label negative() const { return size() - 1; }
  bool is_positive(Label label) const { return label >= 0 && label < negative(); }
  const std::string& name(Label label) const { return names_.at(label); }
  const std::vector<std::string>& names() const { return names_; }
  std::vector<Label> positive_labels() const;

  // Exact match against the inventory.
  std::optional<Label> find(std::string_view name) const;
  Label at(std::string_view name) const;

 private:
  explicit LabelSet(std::vector<std::string> names) : names_(std::move(names)) {}
  std::vector<std::string> names_;
};

}  // namespace cpi
