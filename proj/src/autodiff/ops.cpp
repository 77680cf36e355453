// Copyright 2026 The radar-anomaly Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "radar_anomaly/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radar_anomaly/errors.hpp"

namespace radar::ad {
namespace {

template <typename T>
using NodePtr = std::shared_ptr<detail::Node<T>>;

template <typename T>
Tensor<T> make_result(Shape shape, std::vector<T> data, std::vector<NodePtr<T>> parents,
                      std::function<void(detail::Node<T>&)> backward) {
  auto node = std::make_shared<detail::Node<T>>();
  node->shape = std::move(shape);
  node->data = std::move(data);
  const bool needs_grad =
      grad_enabled() && std::any_of(parents.begin(), parents.end(),
                                    [](const NodePtr<T>& p) { return p->requires_grad; });
  if (needs_grad) {
    node->requires_grad = true;
    node->parents = std::move(parents);
    node->backward = std::move(backward);
  }
  return Tensor<T>(std::move(node));
}

// Columns [j0, j0 + W) of rows [i0, i0 + R) of C (M x N) += A (M x K) * B (K x N).
// The fixed-size accumulators stay in registers across the k loop; R rows give
// independent dependency chains.
template <std::size_t R, std::size_t W, typename T>
void gemm_tile(std::size_t i0, std::size_t j0, std::size_t K, std::size_t N, const T* A,
               const T* B, T* C) {
  T acc[R][W];
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t j = 0; j < W; ++j) acc[r][j] = C[(i0 + r) * N + j0 + j];
  for (std::size_t k = 0; k < K; ++k) {
    const T* b = B + k * N + j0;
    for (std::size_t r = 0; r < R; ++r) {
      const T a = A[(i0 + r) * K + k];
      for (std::size_t j = 0; j < W; ++j) acc[r][j] += a * b[j];
    }
  }
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t j = 0; j < W; ++j) C[(i0 + r) * N + j0 + j] = acc[r][j];
}

template <std::size_t W, typename T>
void gemm_columns(std::size_t M, std::size_t K, std::size_t N, std::size_t j0, const T* A,
                  const T* B, T* C) {
  std::size_t i = 0;
  for (; i + 4 <= M; i += 4) gemm_tile<4, W>(i, j0, K, N, A, B, C);
  for (; i < M; ++i) gemm_tile<1, W>(i, j0, K, N, A, B, C);
}

// C (M x N) += A (M x K) * B (K x N)
template <typename T>
void gemm_nn(std::size_t M, std::size_t K, std::size_t N, const T* A, const T* B, T* C) {
  std::size_t j0 = 0;
  for (; j0 + 32 <= N; j0 += 32) gemm_columns<32>(M, K, N, j0, A, B, C);
  for (; j0 + 16 <= N; j0 += 16) gemm_columns<16>(M, K, N, j0, A, B, C);
  for (; j0 + 4 <= N; j0 += 4) gemm_columns<4>(M, K, N, j0, A, B, C);
  for (; j0 < N; ++j0) gemm_columns<1>(M, K, N, j0, A, B, C);
}

template <typename T>
std::vector<T> transpose(std::size_t rows, std::size_t cols, const T* src) {
  constexpr std::size_t kTile = 16;
  std::vector<T> out(rows * cols);
  for (std::size_t r0 = 0; r0 < rows; r0 += kTile)
    for (std::size_t c0 = 0; c0 < cols; c0 += kTile)
      for (std::size_t r = r0; r < std::min(rows, r0 + kTile); ++r)
        for (std::size_t c = c0; c < std::min(cols, c0 + kTile); ++c)
          out[c * rows + r] = src[r * cols + c];
  return out;
}

struct AxisSplit {
  std::size_t outer = 1;
  std::size_t len = 1;
  std::size_t inner = 1;
};

AxisSplit split_at(const Shape& shape, std::size_t axis) {
  AxisSplit s;
  for (std::size_t i = 0; i < axis; ++i) s.outer *= shape[i];
  s.len = shape[axis];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) s.inner *= shape[i];
  return s;
}

}  // namespace

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.rank() < 1 || b.rank() != 2 || a.shape().back() != b.dim(0)) {
    throw ShapeError("matmul: incompatible shapes " + to_string(a.shape()) + " and " +
                     to_string(b.shape()));
  }
  const std::size_t K = b.dim(0);
  const std::size_t N = b.dim(1);
  const std::size_t M = K == 0 ? 0 : a.numel() / K;
  Shape out_shape = a.shape();
  out_shape.back() = N;
  std::vector<T> out(M * N, T(0));
  gemm_nn(M, K, N, a.data().data(), b.data().data(), out.data());

  return make_result<T>(std::move(out_shape), std::move(out), {a.node(), b.node()},
                        [M, K, N](detail::Node<T>& self) {
                          auto& pa = *self.parents[0];
                          auto& pb = *self.parents[1];
                          const T* g = self.grad.data();
                          if (pa.requires_grad) {
                            const auto bt = transpose(K, N, pb.data.data());
                            gemm_nn(M, N, K, g, bt.data(), pa.ensure_grad().data());
                          }
                          if (pb.requires_grad) {
                            const auto at = transpose(M, K, pa.data.data());
                            gemm_nn(K, M, N, at.data(), g, pb.ensure_grad().data());
                          }
                        });
}

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("add: incompatible shapes " + to_string(a.shape()) + " and " +
                     to_string(b.shape()));
  }
  std::vector<T> out(a.data().begin(), a.data().end());
  const auto bd = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bd[i];
  return make_result<T>(a.shape(), std::move(out), {a.node(), b.node()},
                        [](detail::Node<T>& self) {
                          for (std::size_t p = 0; p < 2; ++p) {
                            auto& parent = *self.parents[p];
                            if (!parent.requires_grad) continue;
                            auto& g = parent.ensure_grad();
                            for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                          }
                        });
}

template <typename T>
Tensor<T> add_bias(const Tensor<T>& x, const Tensor<T>& bias) {
  if (x.rank() < 1 || bias.rank() != 1 || x.shape().back() != bias.dim(0)) {
    throw ShapeError("add_bias: incompatible shapes " + to_string(x.shape()) + " and " +
                     to_string(bias.shape()));
  }
  const std::size_t N = bias.dim(0);
  const std::size_t rows = N == 0 ? 0 : x.numel() / N;
  std::vector<T> out(x.data().begin(), x.data().end());
  const T* b = bias.data().data();
  for (std::size_t r = 0; r < rows; ++r) {
    T* o = out.data() + r * N;
    for (std::size_t j = 0; j < N; ++j) o[j] += b[j];
  }
  return make_result<T>(x.shape(), std::move(out), {x.node(), bias.node()},
                        [rows, N](detail::Node<T>& self) {
                          auto& px = *self.parents[0];
                          auto& pb = *self.parents[1];
                          if (px.requires_grad) {
                            auto& gx = px.ensure_grad();
                            for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += self.grad[i];
                          }
                          if (pb.requires_grad) {
                            auto& gb = pb.ensure_grad();
                            for (std::size_t r = 0; r < rows; ++r) {
                              const T* g = self.grad.data() + r * N;
                              for (std::size_t j = 0; j < N; ++j) gb[j] += g[j];
                            }
                          }
                        });
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  std::vector<T> out(x.numel());
  const auto in = x.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = in[i] > T(0) ? in[i] : T(0);
  return make_result<T>(x.shape(), std::move(out), {x.node()}, [](detail::Node<T>& self) {
    auto& px = *self.parents[0];
    T* gx = px.ensure_grad().data();
    const T* xd = px.data.data();
    const T* g = self.grad.data();
    const std::size_t n = px.data.size();
    for (std::size_t i = 0; i < n; ++i) gx[i] += xd[i] > T(0) ? g[i] : T(0);
  });
}

template <typename T>
Tensor<T> concat(std::span<const Tensor<T>> parts, std::size_t axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  const Shape& first = parts[0].shape();
  if (axis >= first.size()) {
    throw ShapeError("concat: axis " + std::to_string(axis) + " out of range for shape " +
                     to_string(first));
  }
  Shape out_shape = first;
  out_shape[axis] = 0;
  std::vector<std::size_t> lens;
  std::vector<NodePtr<T>> parents;
  for (const Tensor<T>& p : parts) {
    const Shape& s = p.shape();
    bool ok = s.size() == first.size();
    for (std::size_t d = 0; ok && d < s.size(); ++d) ok = d == axis || s[d] == first[d];
    if (!ok) {
      throw ShapeError("concat: shape " + to_string(s) + " does not match " + to_string(first) +
                       " outside axis " + std::to_string(axis));
    }
    out_shape[axis] += s[axis];
    lens.push_back(s[axis]);
    parents.push_back(p.node());
  }
  const AxisSplit split = split_at(out_shape, axis);
  std::vector<T> out(numel(out_shape));
  std::size_t offset = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const std::size_t chunk = lens[p] * split.inner;
    const T* src = parts[p].data().data();
    for (std::size_t o = 0; o < split.outer; ++o) {
      std::copy_n(src + o * chunk, chunk, out.data() + o * split.len * split.inner + offset);
    }
    offset += chunk;
  }
  return make_result<T>(std::move(out_shape), std::move(out), std::move(parents),
                        [lens, split](detail::Node<T>& self) {
                          std::size_t offset = 0;
                          for (std::size_t p = 0; p < lens.size(); ++p) {
                            const std::size_t chunk = lens[p] * split.inner;
                            auto& parent = *self.parents[p];
                            if (parent.requires_grad) {
                              auto& g = parent.ensure_grad();
                              for (std::size_t o = 0; o < split.outer; ++o) {
                                const T* src =
                                    self.grad.data() + o * split.len * split.inner + offset;
                                T* dst = g.data() + o * chunk;
                                for (std::size_t i = 0; i < chunk; ++i) dst[i] += src[i];
                              }
                            }
                            offset += chunk;
                          }
                        });
}

template <typename T>
Tensor<T> gather(const Tensor<T>& src, std::span<const std::size_t> indices,
                 const Shape& index_shape) {
  if (src.rank() < 1) throw ShapeError("gather: source must have rank >= 1");
  if (numel(index_shape) != indices.size()) {
    throw ShapeError("gather: index shape " + to_string(index_shape) + " does not hold " +
                     std::to_string(indices.size()) + " indices");
  }
  const std::size_t rows = src.dim(0);
  const std::size_t row = rows == 0 ? 0 : src.numel() / rows;
  Shape out_shape = index_shape;
  out_shape.insert(out_shape.end(), src.shape().begin() + 1, src.shape().end());
  std::vector<T> out(indices.size() * row);
  const T* s = src.data().data();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows) {
      throw ShapeError("gather: index " + std::to_string(indices[i]) + " out of range for shape " +
                       to_string(src.shape()));
    }
    std::copy_n(s + indices[i] * row, row, out.data() + i * row);
  }
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return make_result<T>(std::move(out_shape), std::move(out), {src.node()},
                        [idx = std::move(idx), row](detail::Node<T>& self) {
                          auto& g = self.parents[0]->ensure_grad();
                          for (std::size_t i = 0; i < idx.size(); ++i) {
                            const T* src = self.grad.data() + i * row;
                            T* dst = g.data() + idx[i] * row;
                            for (std::size_t j = 0; j < row; ++j) dst[j] += src[j];
                          }
                        });
}

template <typename T>
Tensor<T> max_reduce(const Tensor<T>& x, std::size_t axis) {
  if (axis >= x.rank()) {
    throw ShapeError("max_reduce: axis " + std::to_string(axis) + " out of range for shape " +
                     to_string(x.shape()));
  }
  const AxisSplit split = split_at(x.shape(), axis);
  if (split.len == 0) throw ShapeError("max_reduce: empty axis in shape " + to_string(x.shape()));
  Shape out_shape = x.shape();
  out_shape.erase(out_shape.begin() + static_cast<std::ptrdiff_t>(axis));
  std::vector<T> out(split.outer * split.inner);
  std::vector<std::size_t> arg(out.size());
  const T* in = x.data().data();
  for (std::size_t o = 0; o < split.outer; ++o) {
    const T* base = in + o * split.len * split.inner;
    T* dst = out.data() + o * split.inner;
    std::size_t* a = arg.data() + o * split.inner;
    std::copy_n(base, split.inner, dst);
    std::fill_n(a, split.inner, std::size_t{0});
    for (std::size_t l = 1; l < split.len; ++l) {
      const T* row = base + l * split.inner;
      for (std::size_t i = 0; i < split.inner; ++i) {
        if (row[i] > dst[i]) {
          dst[i] = row[i];
          a[i] = l;
        }
      }
    }
  }
  return make_result<T>(std::move(out_shape), std::move(out), {x.node()},
                        [arg = std::move(arg), split](detail::Node<T>& self) {
                          auto& g = self.parents[0]->ensure_grad();
                          for (std::size_t o = 0; o < split.outer; ++o) {
                            for (std::size_t i = 0; i < split.inner; ++i) {
                              const std::size_t k = o * split.inner + i;
                              g[(o * split.len + arg[k]) * split.inner + i] += self.grad[k];
                            }
                          }
                        });
}

template <typename T>
Tensor<T> reshape(const Tensor<T>& x, const Shape& shape) {
  if (numel(shape) != x.numel()) {
    throw ShapeError("reshape: cannot view " + to_string(x.shape()) + " as " + to_string(shape));
  }
  std::vector<T> out(x.data().begin(), x.data().end());
  return make_result<T>(shape, std::move(out), {x.node()}, [](detail::Node<T>& self) {
    auto& g = self.parents[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
  });
}

template <typename T>
Tensor<T> weighted_softmax_cross_entropy(const Tensor<T>& logits, std::span<const int> labels,
                                         std::span<const double> class_weights) {
  if (logits.rank() != 2 || logits.dim(0) != labels.size() ||
      logits.dim(1) != class_weights.size()) {
    throw ShapeError("weighted_softmax_cross_entropy: logits " + to_string(logits.shape()) +
                     " do not match " + std::to_string(labels.size()) + " labels and " +
                     std::to_string(class_weights.size()) + " class weights");
  }
  const std::size_t n = logits.dim(0);
  const std::size_t C = logits.dim(1);
  if (n == 0) throw ShapeError("weighted_softmax_cross_entropy: no rows");
  for (double w : class_weights) {
    if (!(w > 0.0)) throw Error("weighted_softmax_cross_entropy: class weights must be positive");
  }
  const T* z = logits.data().data();
  std::vector<T> probs(n * C);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= C) {
      throw Error("weighted_softmax_cross_entropy: label " + std::to_string(y) + " out of range");
    }
    const T* row = z + i * C;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < C; ++c) {
      if (!std::isfinite(static_cast<double>(row[c]))) {
        throw Error("weighted_softmax_cross_entropy: non-finite logit in row " +
                    std::to_string(i));
      }
      mx = std::max(mx, static_cast<double>(row[c]));
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < C; ++c) sum += std::exp(static_cast<double>(row[c]) - mx);
    const double lse = mx + std::log(sum);
    for (std::size_t c = 0; c < C; ++c) {
      probs[i * C + c] = static_cast<T>(std::exp(static_cast<double>(row[c]) - lse));
    }
    total += class_weights[static_cast<std::size_t>(y)] * (lse - static_cast<double>(row[y]));
  }
  std::vector<T> out{static_cast<T>(total / static_cast<double>(n))};
  std::vector<int> y(labels.begin(), labels.end());
  std::vector<double> w(class_weights.begin(), class_weights.end());
  return make_result<T>(Shape{}, std::move(out), {logits.node()},
                        [probs = std::move(probs), y = std::move(y), w = std::move(w), n,
                         C](detail::Node<T>& self) {
                          auto& g = self.parents[0]->ensure_grad();
                          const double up = static_cast<double>(self.grad[0]);
                          for (std::size_t i = 0; i < n; ++i) {
                            const double scale = up * w[static_cast<std::size_t>(y[i])] /
                                                 static_cast<double>(n);
                            for (std::size_t c = 0; c < C; ++c) {
                              const double target = static_cast<std::size_t>(y[i]) == c ? 1.0 : 0.0;
                              g[i * C + c] +=
                                  static_cast<T>(scale * (static_cast<double>(probs[i * C + c]) - target));
                            }
                          }
                        });
}

#define RADAR_AD_INSTANTIATE(T)                                                              \
  template Tensor<T> matmul(const Tensor<T>&, const Tensor<T>&);                             \
  template Tensor<T> add(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> add_bias(const Tensor<T>&, const Tensor<T>&);                           \
  template Tensor<T> relu(const Tensor<T>&);                                                 \
  template Tensor<T> concat(std::span<const Tensor<T>>, std::size_t);                        \
  template Tensor<T> gather(const Tensor<T>&, std::span<const std::size_t>, const Shape&);   \
  template Tensor<T> max_reduce(const Tensor<T>&, std::size_t);                              \
  template Tensor<T> reshape(const Tensor<T>&, const Shape&);                                 \
  template Tensor<T> weighted_softmax_cross_entropy(const Tensor<T>&, std::span<const int>,  \
                                                    std::span<const double>);

RADAR_AD_INSTANTIATE(float)
RADAR_AD_INSTANTIATE(double)

#undef RADAR_AD_INSTANTIATE

}  // namespace radar::ad
