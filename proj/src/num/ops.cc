#include "cpi/num/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace cpi::num {

namespace {

using detail::Node;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMatrix>;
using ConstMatMap = Eigen::Map<const RowMatrix>;

Tensor make_op(Shape shape, std::vector<double> value, std::vector<Tensor> inputs,
               std::function<void(Node&)> backward) {
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value = std::move(value);
  const bool needs_grad = grad_enabled() && std::any_of(inputs.begin(), inputs.end(),
                                      [](const Tensor& t) { return t.requires_grad(); });
  if (needs_grad) {
    node->requires_grad = true;
    node->parents.reserve(inputs.size());
    for (auto& t : inputs) node->parents.push_back(t.node());
    node->backward = std::move(backward);
  }
  return Tensor(std::move(node));
}

[[noreturn]] void mismatch(const char* op, const Shape& a, const Shape& b) {
  throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " + shape_str(b));
}

void require_rank(const char* op, const Tensor& t, std::size_t rank) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                     shape_str(t.shape()));
  }
}

// Strides for iterating one axis of a rank-1/2 tensor as (outer, axis, inner).
struct AxisView {
  std::size_t outer = 1, length = 1, inner = 1;
  AxisView(const Shape& shape, std::size_t axis) {
    for (std::size_t i = 0; i < axis; ++i) outer *= shape[i];
    length = shape[axis];
    for (std::size_t i = axis + 1; i < shape.size(); ++i) inner *= shape[i];
  }
  std::size_t index(std::size_t o, std::size_t k, std::size_t i) const {
    return (o * length + k) * inner + i;
  }
};

void check_axis(const char* op, const Tensor& t, std::size_t axis) {
  if (axis >= t.rank()) {
    throw ShapeError(std::string(op) + ": axis " + std::to_string(axis) + " out of range for " +
                     shape_str(t.shape()));
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) mismatch("matmul", a.shape(), b.shape());
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  std::vector<double> out(m * n);
  MatMap(out.data(), m, n).noalias() =
      ConstMatMap(a.data().data(), m, k) * ConstMatMap(b.data().data(), k, n);
  return make_op({m, n}, std::move(out), {a, b}, [m, k, n](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    ConstMatMap dc(self.grad.data(), m, n);
    if (pa.requires_grad) {
      MatMap(pa.ensure_grad().data(), m, k).noalias() +=
          dc * ConstMatMap(pb.value.data(), k, n).transpose();
    }
    if (pb.requires_grad) {
      MatMap(pb.ensure_grad().data(), k, n).noalias() +=
          ConstMatMap(pa.value.data(), m, k).transpose() * dc;
    }
  });
}

Tensor transpose(const Tensor& a) {
  require_rank("transpose", a, 2);
  const std::size_t m = a.dim(0), n = a.dim(1);
  std::vector<double> out(m * n);
  MatMap(out.data(), n, m) = ConstMatMap(a.data().data(), m, n).transpose();
  return make_op({n, m}, std::move(out), {a}, [m, n](Node& self) {
    Node& pa = *self.parents[0];
    MatMap(pa.ensure_grad().data(), m, n) += ConstMatMap(self.grad.data(), n, m).transpose();
  });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (numel(shape) != a.size()) mismatch("reshape", a.shape(), shape);
  std::vector<double> out(a.data().begin(), a.data().end());
  return make_op(std::move(shape), std::move(out), {a}, [](Node& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) mismatch("add", a.shape(), b.shape());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return make_op(a.shape(), std::move(out), {a, b}, [](Node& self) {
    for (auto& parent : self.parents) {
      if (!parent->requires_grad) continue;
      auto& g = parent->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Tensor add_bias(const Tensor& a, const Tensor& bias) {
  const std::size_t n = a.shape().back();
  if (bias.rank() != 1 || bias.dim(0) != n) mismatch("add_bias", a.shape(), bias.shape());
  const std::size_t rows = a.size() / n;
  std::vector<double> out(a.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < n; ++c) out[r * n + c] = a[r * n + c] + bias[c];
  }
  return make_op(a.shape(), std::move(out), {a, bias}, [rows, n](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    if (pa.requires_grad) {
      auto& g = pa.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
    if (pb.requires_grad) {
      auto& g = pb.ensure_grad();
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < n; ++c) g[c] += self.grad[r * n + c];
      }
    }
  });
}

Tensor scale(const Tensor& a, double factor) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * factor;
  return make_op(a.shape(), std::move(out), {a}, [factor](Node& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * factor;
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) mismatch("mul", a.shape(), b.shape());
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return make_op(a.shape(), std::move(out), {a, b}, [](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    if (pa.requires_grad) {
      auto& g = pa.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * pb.value[i];
    }
    if (pb.requires_grad) {
      auto& g = pb.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * pa.value[i];
    }
  });
}

Tensor sum(const Tensor& a) {
  double total = 0.0;
  for (double v : a.data()) total += v;
  return make_op({1}, {total}, {a}, [](Node& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (double& v : g) v += self.grad[0];
  });
}

namespace {

// Shared backward for softmax variants: dx = y * (dy - sum(dy * y)).
void softmax_backward(Node& self, const AxisView& view) {
  auto& g = self.parents[0]->ensure_grad();
  for (std::size_t o = 0; o < view.outer; ++o) {
    for (std::size_t i = 0; i < view.inner; ++i) {
      double dot = 0.0;
      for (std::size_t k = 0; k < view.length; ++k) {
        const std::size_t idx = view.index(o, k, i);
        dot += self.grad[idx] * self.value[idx];
      }
      for (std::size_t k = 0; k < view.length; ++k) {
        const std::size_t idx = view.index(o, k, i);
        g[idx] += self.value[idx] * (self.grad[idx] - dot);
      }
    }
  }
}

}  // namespace

Tensor softmax(const Tensor& a, std::size_t axis) {
  check_axis("softmax", a, axis);
  const AxisView view(a.shape(), axis);
  std::vector<double> out(a.size());
  for (std::size_t o = 0; o < view.outer; ++o) {
    for (std::size_t i = 0; i < view.inner; ++i) {
      double max = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < view.length; ++k) max = std::max(max, a[view.index(o, k, i)]);
      double total = 0.0;
      for (std::size_t k = 0; k < view.length; ++k) {
        const std::size_t idx = view.index(o, k, i);
        out[idx] = std::exp(a[idx] - max);
        total += out[idx];
      }
      for (std::size_t k = 0; k < view.length; ++k) out[view.index(o, k, i)] /= total;
    }
  }
  return make_op(a.shape(), std::move(out), {a},
                 [view](Node& self) { softmax_backward(self, view); });
}

Tensor masked_softmax(const Tensor& a, const std::vector<bool>& keep) {
  const std::size_t n = a.shape().back();
  if (keep.size() != n) mismatch("masked_softmax", a.shape(), {keep.size()});
  if (std::none_of(keep.begin(), keep.end(), [](bool k) { return k; })) {
    throw ShapeError("masked_softmax: every position is masked");
  }
  const std::size_t rows = a.size() / n;
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = a.data().data() + r * n;
    double* y = out.data() + r * n;
    double max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (keep[k]) max = std::max(max, x[k]);
    }
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (keep[k]) total += (y[k] = std::exp(x[k] - max));
    }
    for (std::size_t k = 0; k < n; ++k) y[k] /= total;
  }
  const AxisView view(a.shape(), a.rank() - 1);
  return make_op(a.shape(), std::move(out), {a},
                 [view](Node& self) { softmax_backward(self, view); });
}

Tensor layer_norm(const Tensor& a, const Tensor& gain, const Tensor& bias, double eps) {
  const std::size_t n = a.shape().back();
  if (gain.rank() != 1 || gain.dim(0) != n) mismatch("layer_norm", a.shape(), gain.shape());
  if (bias.rank() != 1 || bias.dim(0) != n) mismatch("layer_norm", a.shape(), bias.shape());
  const std::size_t rows = a.size() / n;
  std::vector<double> out(a.size());
  std::vector<double> normalized(a.size());
  std::vector<double> inv_std(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = a.data().data() + r * n;
    double mean = 0.0;
    for (std::size_t c = 0; c < n; ++c) mean += x[c];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t c = 0; c < n; ++c) var += (x[c] - mean) * (x[c] - mean);
    var /= static_cast<double>(n);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < n; ++c) {
      const double xhat = (x[c] - mean) * inv_std[r];
      normalized[r * n + c] = xhat;
      out[r * n + c] = gain[c] * xhat + bias[c];
    }
  }
  return make_op(a.shape(), std::move(out), {a, gain, bias},
                 [rows, n, normalized = std::move(normalized),
                  inv_std = std::move(inv_std)](Node& self) {
    Node& px = *self.parents[0];
    Node& pg = *self.parents[1];
    Node& pb = *self.parents[2];
    const double dn = static_cast<double>(n);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* dy = self.grad.data() + r * n;
      const double* xhat = normalized.data() + r * n;
      if (pg.requires_grad) {
        auto& g = pg.ensure_grad();
        for (std::size_t c = 0; c < n; ++c) g[c] += dy[c] * xhat[c];
      }
      if (pb.requires_grad) {
        auto& g = pb.ensure_grad();
        for (std::size_t c = 0; c < n; ++c) g[c] += dy[c];
      }
      if (px.requires_grad) {
        double sum_d = 0.0, sum_dx = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
          const double d = dy[c] * pg.value[c];
          sum_d += d;
          sum_dx += d * xhat[c];
        }
        auto& g = px.ensure_grad();
        for (std::size_t c = 0; c < n; ++c) {
          const double d = dy[c] * pg.value[c];
          g[r * n + c] += inv_std[r] / dn * (dn * d - sum_d - xhat[c] * sum_dx);
        }
      }
    }
  });
}

Tensor gelu(const Tensor& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.5 * a[i] * (1.0 + std::erf(a[i] * M_SQRT1_2));
  }
  return make_op(a.shape(), std::move(out), {a}, [](Node& self) {
    Node& pa = *self.parents[0];
    auto& g = pa.ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = pa.value[i];
      const double cdf = 0.5 * (1.0 + std::erf(x * M_SQRT1_2));
      const double pdf = std::exp(-0.5 * x * x) * (M_2_SQRTPI * M_SQRT1_2 * 0.5);
      g[i] += self.grad[i] * (cdf + x * pdf);
    }
  });
}

Tensor concat(std::span<const Tensor> parts, std::size_t axis) {
  if (parts.empty()) throw ShapeError("concat: no operands");
  check_axis("concat", parts[0], axis);
  Shape shape = parts[0].shape();
  std::size_t total = 0;
  for (const auto& p : parts) {
    Shape expect = shape;
    expect[axis] = p.rank() == shape.size() ? p.dim(axis) : 0;
    if (p.shape() != expect) mismatch("concat", parts[0].shape(), p.shape());
    total += p.dim(axis);
  }
  shape[axis] = total;
  const AxisView out_view(shape, axis);
  std::vector<double> out(numel(shape));
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    offsets.push_back(offset);
    const AxisView view(p.shape(), axis);
    for (std::size_t o = 0; o < view.outer; ++o) {
      for (std::size_t k = 0; k < view.length; ++k) {
        for (std::size_t i = 0; i < view.inner; ++i) {
          out[out_view.index(o, offset + k, i)] = p[view.index(o, k, i)];
        }
      }
    }
    offset += p.dim(axis);
  }
  return make_op(shape, std::move(out), std::vector<Tensor>(parts.begin(), parts.end()),
                 [axis, out_view, offsets](Node& self) {
    for (std::size_t j = 0; j < self.parents.size(); ++j) {
      Node& p = *self.parents[j];
      if (!p.requires_grad) continue;
      const AxisView view(p.shape, axis);
      auto& g = p.ensure_grad();
      for (std::size_t o = 0; o < view.outer; ++o) {
        for (std::size_t k = 0; k < view.length; ++k) {
          for (std::size_t i = 0; i < view.inner; ++i) {
            g[view.index(o, k, i)] += self.grad[out_view.index(o, offsets[j] + k, i)];
          }
        }
      }
    }
  });
}

Tensor slice(const Tensor& a, std::size_t axis, std::size_t start, std::size_t length) {
  check_axis("slice", a, axis);
  if (length == 0 || start + length > a.dim(axis)) {
    throw ShapeError("slice: range [" + std::to_string(start) + ", " +
                     std::to_string(start + length) + ") out of bounds for " + shape_str(a.shape()));
  }
  Shape shape = a.shape();
  shape[axis] = length;
  const AxisView in_view(a.shape(), axis);
  const AxisView out_view(shape, axis);
  std::vector<double> out(numel(shape));
  for (std::size_t o = 0; o < out_view.outer; ++o) {
    for (std::size_t k = 0; k < length; ++k) {
      for (std::size_t i = 0; i < out_view.inner; ++i) {
        out[out_view.index(o, k, i)] = a[in_view.index(o, start + k, i)];
      }
    }
  }
  return make_op(std::move(shape), std::move(out), {a},
                 [in_view, out_view, start](Node& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (std::size_t o = 0; o < out_view.outer; ++o) {
      for (std::size_t k = 0; k < out_view.length; ++k) {
        for (std::size_t i = 0; i < out_view.inner; ++i) {
          g[in_view.index(o, start + k, i)] += self.grad[out_view.index(o, k, i)];
        }
      }
    }
  });
}

std::vector<Tensor> split(const Tensor& a, std::span<const std::size_t> sizes, std::size_t axis) {
  check_axis("split", a, axis);
  std::size_t total = 0;
  for (std::size_t s : sizes) total += s;
  if (total != a.dim(axis)) {
    throw ShapeError("split: sizes sum to " + std::to_string(total) + " but axis " +
                     std::to_string(axis) + " of " + shape_str(a.shape()) + " differs");
  }
  std::vector<Tensor> out;
  std::size_t start = 0;
  for (std::size_t s : sizes) {
    out.push_back(slice(a, axis, start, s));
    start += s;
  }
  return out;
}

Tensor row(const Tensor& a, std::size_t index) {
  require_rank("row", a, 2);
  return reshape(slice(a, 0, index, 1), {a.dim(1)});
}

Tensor embedding(const Tensor& table, std::span<const int> ids) {
  require_rank("embedding", table, 2);
  if (ids.empty()) throw ShapeError("embedding: empty id list");
  const std::size_t vocab = table.dim(0), d = table.dim(1);
  std::vector<double> out(ids.size() * d);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] < 0 || static_cast<std::size_t>(ids[r]) >= vocab) {
      throw ShapeError("embedding: id " + std::to_string(ids[r]) + " outside table " +
                       shape_str(table.shape()));
    }
    std::copy_n(table.data().begin() + ids[r] * d, d, out.begin() + r * d);
  }
  std::vector<int> rows(ids.begin(), ids.end());
  return make_op({ids.size(), d}, std::move(out), {table}, [rows, d](Node& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < d; ++c) g[rows[r] * d + c] += self.grad[r * d + c];
    }
  });
}

Tensor dropout(const Tensor& a, double rate, Rng& rng) {
  if (rate <= 0.0) return a;
  if (rate >= 1.0) throw Error("dropout: rate must be below 1");
  std::vector<double> mask(a.size());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask) m = rng.uniform() >= rate ? keep_scale : 0.0;
  return mul(a, Tensor::from(a.shape(), std::move(mask)));
}

Tensor cross_entropy(const Tensor& probs, std::size_t gold) {
  require_rank("cross_entropy", probs, 1);
  if (gold >= probs.size()) {
    throw ShapeError("cross_entropy: gold index " + std::to_string(gold) + " outside " +
                     shape_str(probs.shape()));
  }
  const double p = probs[gold];
  return make_op({1}, {-std::log(p)}, {probs}, [gold, p](Node& self) {
    self.parents[0]->ensure_grad()[gold] += -self.grad[0] / p;
  });
}

Tensor cross_entropy_with_logits(const Tensor& logits, std::size_t gold) {
  require_rank("cross_entropy_with_logits", logits, 1);
  if (gold >= logits.size()) {
    throw ShapeError("cross_entropy_with_logits: gold index " + std::to_string(gold) +
                     " outside " + shape_str(logits.shape()));
  }
  const double max = *std::max_element(logits.data().begin(), logits.data().end());
  double total = 0.0;
  for (double z : logits.data()) total += std::exp(z - max);
  const double log_norm = max + std::log(total);
  std::vector<double> probs(logits.size());
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::exp(logits[i] - log_norm);
  return make_op({1}, {log_norm - logits[gold]}, {logits},
                 [gold, probs = std::move(probs)](Node& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] += self.grad[0] * (probs[i] - (i == gold ? 1.0 : 0.0));
    }
  });
}

}  // namespace cpi::num
