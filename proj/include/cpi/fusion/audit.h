#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpi/num/grad_check.h"

namespace cpi::fusion {

struct AuditEntry {
  std::string name;
  num::GradCheckResult result;
};

struct GradientAudit {
  // One entry per differentiable op, each on small random operands.
  std::vector<AuditEntry> ops;
  // Cross-entropy of the full model (2 layers, hidden 32) on a 3-word
  // instance with title and knowledge sequences, over every parameter.
  AuditEntry model;

  double max_op_error() const;
};

GradientAudit run_gradient_audit(std::uint64_t seed);

}  // namespace cpi::fusion
