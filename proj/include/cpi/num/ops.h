#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cpi/num/tensor.h"
#include "cpi/random.h"

namespace cpi::num {

// [m x k] * [k x n] -> [m x n]
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
Tensor reshape(const Tensor& a, Shape shape);

Tensor add(const Tensor& a, const Tensor& b);
// Adds bias [n] to every row of a [m x n] (or to a [n]).
Tensor add_bias(const Tensor& a, const Tensor& bias);
Tensor scale(const Tensor& a, double factor);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor sum(const Tensor& a);

// Max-subtracted softmax along `axis`.
Tensor softmax(const Tensor& a, std::size_t axis);
// Softmax over the last axis restricted to positions where `keep` is true;
// the other positions get exactly 0. Throws if nothing is kept.
Tensor masked_softmax(const Tensor& a, const std::vector<bool>& keep);

// Normalizes each row over the last axis, then applies gain and bias.
Tensor layer_norm(const Tensor& a, const Tensor& gain, const Tensor& bias, double eps = 1e-6);
// Exact GELU, 0.5 x (1 + erf(x / sqrt 2)).
Tensor gelu(const Tensor& a);

Tensor concat(std::span<const Tensor> parts, std::size_t axis);
Tensor slice(const Tensor& a, std::size_t axis, std::size_t start, std::size_t length);
std::vector<Tensor> split(const Tensor& a, std::span<const std::size_t> sizes, std::size_t axis);
// Row `index` of a [m x n] as a rank-1 [n].
Tensor row(const Tensor& a, std::size_t index);

// Gathers rows of table [V x d] -> [ids.size() x d].
Tensor embedding(const Tensor& table, std::span<const int> ids);
// Inverted dropout. Identity when rate == 0.
Tensor dropout(const Tensor& a, double rate, Rng& rng);

// -log(probs[gold]) for a probability vector [n].
Tensor cross_entropy(const Tensor& probs, std::size_t gold);
// -log softmax(logits)[gold], computed through log-sum-exp.
Tensor cross_entropy_with_logits(const Tensor& logits, std::size_t gold);

}  // namespace cpi::num
