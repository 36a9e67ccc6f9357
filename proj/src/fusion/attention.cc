#include "cpi/fusion/attention.h"

#include "cpi/num/ops.h"

namespace cpi::fusion {

using num::Tensor;

Tensor fusion_attention(const Tensor& query, const Tensor& token_reps,
                        const std::vector<bool>& keep, Tensor* weights) {
  if (query.rank() != 1 || token_reps.rank() != 2 || token_reps.dim(1) != query.dim(0)) {
    throw num::ShapeError("fusion_attention: shape mismatch " + num::shape_str(query.shape()) +
                          " vs " + num::shape_str(token_reps.shape()));
  }
  const std::size_t n = token_reps.dim(0);
  const std::size_t d = query.dim(0);
  const std::vector<bool> mask = keep.empty() ? std::vector<bool>(n, true) : keep;
  const Tensor scores = num::reshape(num::matmul(token_reps, num::reshape(query, {d, 1})), {n});
  const Tensor alpha = num::masked_softmax(scores, mask);
  if (weights) *weights = alpha;
  return num::reshape(num::matmul(num::reshape(alpha, {1, n}), token_reps), {d});
}

}  // namespace cpi::fusion
