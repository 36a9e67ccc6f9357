#pragma once

#include <vector>

#include "cpi/num/tensor.h"

namespace cpi::fusion {

// Dot-product attention of a whole-sequence query [d] over token_reps
// [N x d]: scores query . u_i, softmax over the kept positions, and the
// weighted sum of rows. No score scaling. An empty `keep` keeps every
// position. The weights [N] are written to `weights` when given.
num::Tensor fusion_attention(const num::Tensor& query, const num::Tensor& token_reps,
                             const std::vector<bool>& keep = {}, num::Tensor* weights = nullptr);

}  // namespace cpi::fusion
