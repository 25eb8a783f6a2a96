#pragma once

#include <algorithm>
#include <cmath>

#include "alsc/rng.hpp"
#include "alsc/tape.hpp"

// Forward primitives with exact analytic backward rules. Every op validates
// shapes eagerly and records itself on the tape when any input requires grad
// (tape == nullptr disables recording for pure evaluation). Backward
// closures only accumulate (+=) into input grads.
namespace alsc::ops {

template <typename S>
bool tracked(Tape<S>* tape, std::initializer_list<const TensorPtr<S>*> inputs) {
  if (!tape) return false;
  for (auto* in : inputs) {
    if ((*in)->requires_grad) return true;
  }
  return false;
}

namespace detail {

// matmul operands normalized to 2-D: rank-1 lhs acts as 1xk, rank-1 rhs as kx1
template <typename S>
void mm_accum(const S* a, const S* b, S* out, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    for (int p = 0; p < k; ++p) {
      S av = a[i * k + p];
      if (av == S(0)) continue;
      const S* brow = b + p * n;
      S* orow = out + i * n;
      for (int j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
}

// out[m x n] += a[m x k] * b[k x n] with optional transposes on a/b
template <typename S>
void mm_accum_t(const S* a, bool ta, const S* b, bool tb, S* out, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    for (int p = 0; p < k; ++p) {
      S av = ta ? a[p * m + i] : a[i * k + p];
      if (av == S(0)) continue;
      S* orow = out + i * n;
      if (!tb) {
        const S* brow = b + p * n;
        for (int j = 0; j < n; ++j) orow[j] += av * brow[j];
      } else {
        for (int j = 0; j < n; ++j) orow[j] += av * b[j * k + p];
      }
    }
  }
}

}  // namespace detail

// Matrix product. Shapes: (m,k)x(k,n)->(m,n); (m,k)x(k)->(m); (k)x(k,n)->(n);
// (k)x(k)->scalar dot product.
template <typename S>
TensorPtr<S> matmul(Tape<S>* tape, const TensorPtr<S>& a, const TensorPtr<S>& b) {
  int m = a->rank() == 2 ? a->shape[0] : 1;
  int ka = a->rank() == 2 ? a->shape[1] : a->shape[0];
  int kb = b->rank() == 2 ? b->shape[0] : b->shape[0];
  int n = b->rank() == 2 ? b->shape[1] : 1;
  if (ka != kb) {
    throw std::invalid_argument("matmul: inner dims differ, " + shape_str(a->shape) + " vs " +
                                shape_str(b->shape));
  }
  std::vector<int> out_shape;
  if (a->rank() == 1 && b->rank() == 1) out_shape = {1};
  else if (a->rank() == 1) out_shape = {n};
  else if (b->rank() == 1) out_shape = {m};
  else out_shape = {m, n};

  auto out = make_tensor<S>(out_shape);
  detail::mm_accum(a->data.data(), b->data.data(), out->data.data(), m, ka, n);

  if (tracked(tape, {&a, &b})) {
    out->requires_grad = true;
    int k = ka;
    tape->record({a, b}, out, [a, b, out, m, k, n] {
      // dA += dC * B^T ; dB += A^T * dC
      if (a->requires_grad)
        detail::mm_accum_t(out->grad.data(), false, b->data.data(), true, a->grad.data(), m, n, k);
      if (b->requires_grad)
        detail::mm_accum_t(a->data.data(), true, out->grad.data(), false, b->grad.data(), k, m, n);
    });
  }
  return out;
}

template <typename S>
void check_same_shape(const char* op, const TensorPtr<S>& a, const TensorPtr<S>& b) {
  if (a->shape != b->shape) {
    throw std::invalid_argument(std::string(op) + ": shapes differ, " + shape_str(a->shape) +
                                " vs " + shape_str(b->shape));
  }
}

template <typename S>
TensorPtr<S> add(Tape<S>* tape, const TensorPtr<S>& a, const TensorPtr<S>& b) {
  check_same_shape("add", a, b);
  auto out = make_tensor<S>(a->shape);
  for (size_t i = 0; i < out->data.size(); ++i) out->data[i] = a->data[i] + b->data[i];
  if (tracked(tape, {&a, &b})) {
    out->requires_grad = true;
    tape->record({a, b}, out, [a, b, out] {
      for (size_t i = 0; i < out->grad.size(); ++i) {
        if (a->requires_grad) a->grad[i] += out->grad[i];
        if (b->requires_grad) b->grad[i] += out->grad[i];
      }
    });
  }
  return out;
}

// elementwise product
template <typename S>
TensorPtr<S> mul(Tape<S>* tape, const TensorPtr<S>& a, const TensorPtr<S>& b) {
  check_same_shape("mul", a, b);
  auto out = make_tensor<S>(a->shape);
  for (size_t i = 0; i < out->data.size(); ++i) out->data[i] = a->data[i] * b->data[i];
  if (tracked(tape, {&a, &b})) {
    out->requires_grad = true;
    tape->record({a, b}, out, [a, b, out] {
      for (size_t i = 0; i < out->grad.size(); ++i) {
        if (a->requires_grad) a->grad[i] += out->grad[i] * b->data[i];
        if (b->requires_grad) b->grad[i] += out->grad[i] * a->data[i];
      }
    });
  }
  return out;
}

template <typename S>
TensorPtr<S> scale(Tape<S>* tape, const TensorPtr<S>& x, S c) {
  auto out = make_tensor<S>(x->shape);
  for (size_t i = 0; i < out->data.size(); ++i) out->data[i] = c * x->data[i];
  if (tracked(tape, {&x})) {
    out->requires_grad = true;
    tape->record({x}, out, [x, out, c] {
      for (size_t i = 0; i < out->grad.size(); ++i) x->grad[i] += c * out->grad[i];
    });
  }
  return out;
}

template <typename S>
TensorPtr<S> tanh(Tape<S>* tape, const TensorPtr<S>& x) {
  auto out = make_tensor<S>(x->shape);
  for (size_t i = 0; i < out->data.size(); ++i) out->data[i] = std::tanh(x->data[i]);
  if (tracked(tape, {&x})) {
    out->requires_grad = true;
    tape->record({x}, out, [x, out] {
      for (size_t i = 0; i < out->grad.size(); ++i) {
        S y = out->data[i];
        x->grad[i] += out->grad[i] * (S(1) - y * y);
      }
    });
  }
  return out;
}

template <typename S>
TensorPtr<S> sigmoid(Tape<S>* tape, const TensorPtr<S>& x) {
  auto out = make_tensor<S>(x->shape);
  for (size_t i = 0; i < out->data.size(); ++i) out->data[i] = S(1) / (S(1) + std::exp(-x->data[i]));
  if (tracked(tape, {&x})) {
    out->requires_grad = true;
    tape->record({x}, out, [x, out] {
      for (size_t i = 0; i < out->grad.size(); ++i) {
        S y = out->data[i];
        x->grad[i] += out->grad[i] * y * (S(1) - y);
      }
    });
  }
  return out;
}

// column-wise mean over the rows of a matrix: (n,d) -> (d)
template <typename S>
TensorPtr<S> mean_rows(Tape<S>* tape, const TensorPtr<S>& x) {
  if (x->rank() != 2) throw std::invalid_argument("mean_rows: expected rank-2, got " + shape_str(x->shape));
  int n = x->shape[0], d = x->shape[1];
  auto out = make_tensor<S>({d});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) out->data[j] += x->at(i, j);
  for (int j = 0; j < d; ++j) out->data[j] /= S(n);
  if (tracked(tape, {&x})) {
    out->requires_grad = true;
    tape->record({x}, out, [x, out, n, d] {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x->grad[static_cast<size_t>(i) * d + j] += out->grad[j] / S(n);
    });
  }
  return out;
}

template <typename S>
TensorPtr<S> sum(Tape<S>* tape, const TensorPtr<S>& x) {
  auto out = make_tensor<S>({1});
  S acc = S(0);
  for (S v : x->data) acc += v;
  out->data[0] = acc;
  if (tracked(tape, {&x})) {
    out->requires_grad = true;
    tape->record({x}, out, [x, out] {
      for (size_t i = 0; i < x->grad.size(); ++i) x->grad[i] += out->grad[0];
    });
  }
  return out;
}

// stack rank-1 tensors of equal length d into an (n,d) matrix
template <typename S>
TensorPtr<S> stack_rows(Tape<S>* tape, const std::vector<TensorPtr<S>>& parts) {
  if (parts.empty()) throw std::invalid_argument("stack_rows: no parts");
  int d = parts[0]->cols();
  for (auto& p : parts) {
    if (p->rank() != 1 || p->shape[0] != d) {
      throw std::invalid_argument("stack_rows: expected rank-1 length " + std::to_string(d) +
                                  ", got " + shape_str(p->shape));
    }
  }
  int n = static_cast<int>(parts.size());
  auto out = make_tensor<S>({n, d});
  for (int i = 0; i < n; ++i)
    std::copy(parts[i]->data.begin(), parts[i]->data.end(), out->data.begin() + static_cast<size_t>(i) * d);
  bool any = false;
  for (auto& p : parts) any = any || p->requires_grad;
  if (tape && any) {
    out->requires_grad = true;
    tape->record(parts, out, [parts, out, d] {
      for (size_t i = 0; i < parts.size(); ++i) {
        if (!parts[i]->requires_grad) continue;
        for (int j = 0; j < d; ++j) parts[i]->grad[j] += out->grad[i * d + j];
      }
    });
  }
  return out;
}

// concatenate rank-1 tensors end to end
template <typename S>
TensorPtr<S> concat(Tape<S>* tape, const std::vector<TensorPtr<S>>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat: no parts");
  int total = 0;
  for (auto& p : parts) {
    if (p->rank() != 1) throw std::invalid_argument("concat: expected rank-1, got " + shape_str(p->shape));
    total += p->shape[0];
  }
  auto out = make_tensor<S>({total});
  size_t off = 0;
  for (auto& p : parts) {
    std::copy(p->data.begin(), p->data.end(), out->data.begin() + off);
    off += p->data.size();
  }
  bool any = false;
  for (auto& p : parts) any = any || p->requires_grad;
  if (tape && any) {
    out->requires_grad = true;
    tape->record(parts, out, [parts, out] {
      size_t off = 0;
      for (auto& p : parts) {
        if (p->requires_grad)
          for (size_t j = 0; j < p->data.size(); ++j) p->grad[j] += out->grad[off + j];
        off += p->data.size();
      }
    });
  }
  return out;
}

// contiguous row slice [r0, r1) of a matrix (or element slice of a vector)
template <typename S>
TensorPtr<S> slice_rows(Tape<S>* tape, const TensorPtr<S>& x, int r0, int r1) {
  int n = x->rank() == 2 ? x->shape[0] : x->shape[0];
  if (r0 < 0 || r1 <= r0 || r1 > n) {
    throw std::invalid_argument("slice_rows: range [" + std::to_string(r0) + "," + std::to_string(r1) +
                                ") out of bounds for " + shape_str(x->shape));
  }
  int d = x->rank() == 2 ? x->shape[1] : 1;
  std::vector<int> out_shape = x->rank() == 2 ? std::vector<int>{r1 - r0, d} : std::vector<int>{r1 - r0};
  auto out = make_tensor<S>(out_shape);
  std::copy(x->data.begin() + static_cast<size_t>(r0) * d, x->data.begin() + static_cast<size_t>(r1) * d,
            out->data.begin());
  if (tracked(tape, {&x})) {
    out->requires_grad = true;
    tape->record({x}, out, [x, out, r0, d] {
      for (size_t j = 0; j < out->grad.size(); ++j) x->grad[static_cast<size_t>(r0) * d + j] += out->grad[j];
    });
  }
  return out;
}

// gather matrix rows by index (embedding lookup); indices may repeat
template <typename S>
TensorPtr<S> gather_rows(Tape<S>* tape, const TensorPtr<S>& x, const std::vector<int>& ids) {
  if (x->rank() != 2) throw std::invalid_argument("gather_rows: expected rank-2, got " + shape_str(x->shape));
  if (ids.empty()) throw std::invalid_argument("gather_rows: empty index list");
  int v = x->shape[0], d = x->shape[1];
  for (int id : ids) {
    if (id < 0 || id >= v)
      throw std::invalid_argument("gather_rows: index " + std::to_string(id) + " out of [0," + std::to_string(v) + ")");
  }
  auto out = make_tensor<S>({static_cast<int>(ids.size()), d});
  for (size_t i = 0; i < ids.size(); ++i)
    std::copy(x->data.begin() + static_cast<size_t>(ids[i]) * d,
              x->data.begin() + static_cast<size_t>(ids[i] + 1) * d, out->data.begin() + i * d);
  if (tracked(tape, {&x})) {
    out->requires_grad = true;
    tape->record({x}, out, [x, out, ids, d] {
      for (size_t i = 0; i < ids.size(); ++i)
        for (int j = 0; j < d; ++j)
          x->grad[static_cast<size_t>(ids[i]) * d + j] += out->grad[i * d + j];
    });
  }
  return out;
}

// single matrix row as a rank-1 vector
template <typename S>
TensorPtr<S> row(Tape<S>* tape, const TensorPtr<S>& x, int i) {
  if (x->rank() != 2) throw std::invalid_argument("row: expected rank-2, got " + shape_str(x->shape));
  int n = x->shape[0], d = x->shape[1];
  if (i < 0 || i >= n) throw std::invalid_argument("row: index " + std::to_string(i) + " out of [0," + std::to_string(n) + ")");
  auto out = make_tensor<S>({d});
  std::copy(x->data.begin() + static_cast<size_t>(i) * d, x->data.begin() + static_cast<size_t>(i + 1) * d,
            out->data.begin());
  if (tracked(tape, {&x})) {
    out->requires_grad = true;
    tape->record({x}, out, [x, out, i, d] {
      for (int j = 0; j < d; ++j) x->grad[static_cast<size_t>(i) * d + j] += out->grad[j];
    });
  }
  return out;
}

// Numerically stable masked softmax over a rank-1 tensor. Masked-out
// positions get an additive -1e9 before the max-subtracted exp, which
// underflows to exactly zero after normalization.
inline constexpr double kMaskOffset = -1e9;

template <typename S>
TensorPtr<S> softmax(Tape<S>* tape, const TensorPtr<S>& v, const std::vector<uint8_t>* mask = nullptr) {
  if (v->rank() != 1 || v->shape[0] < 1)
    throw std::invalid_argument("softmax: expected nonempty rank-1, got " + shape_str(v->shape));
  int n = v->shape[0];
  if (mask) {
    if (static_cast<int>(mask->size()) != n)
      throw std::invalid_argument("softmax: mask length " + std::to_string(mask->size()) +
                                  " does not match input length " + std::to_string(n));
    bool any = false;
    for (uint8_t m : *mask) any = any || (m != 0);
    if (!any) throw std::invalid_argument("softmax: all positions masked, nothing to attend to");
  }
  auto out = make_tensor<S>({n});
  std::vector<S> scores(v->data);
  if (mask) {
    for (int i = 0; i < n; ++i)
      if (!(*mask)[i]) scores[i] += S(kMaskOffset);
  }
  S mx = *std::max_element(scores.begin(), scores.end());
  S z = S(0);
  for (int i = 0; i < n; ++i) {
    out->data[i] = std::exp(scores[i] - mx);
    z += out->data[i];
  }
  for (int i = 0; i < n; ++i) out->data[i] /= z;
  if (tracked(tape, {&v})) {
    out->requires_grad = true;
    tape->record({v}, out, [v, out, n] {
      S dot = S(0);
      for (int i = 0; i < n; ++i) dot += out->grad[i] * out->data[i];
      for (int i = 0; i < n; ++i) v->grad[i] += out->data[i] * (out->grad[i] - dot);
    });
  }
  return out;
}

// Inverted dropout: zero each entry with probability rate, scale survivors by
// 1/(1-rate). Draws the mask from rng at call time; eval mode is handled by
// the caller not invoking this.
template <typename S>
TensorPtr<S> dropout(Tape<S>* tape, const TensorPtr<S>& x, double rate, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0)
    throw std::invalid_argument("dropout: rate must be in [0,1), got " + std::to_string(rate));
  auto keep = std::make_shared<std::vector<S>>(x->data.size());
  S inv = S(1.0 / (1.0 - rate));
  for (size_t i = 0; i < keep->size(); ++i) (*keep)[i] = rng.uniform() >= rate ? inv : S(0);
  auto out = make_tensor<S>(x->shape);
  for (size_t i = 0; i < out->data.size(); ++i) out->data[i] = x->data[i] * (*keep)[i];
  if (tracked(tape, {&x})) {
    out->requires_grad = true;
    tape->record({x}, out, [x, out, keep] {
      for (size_t i = 0; i < out->grad.size(); ++i) x->grad[i] += out->grad[i] * (*keep)[i];
    });
  }
  return out;
}

}  // namespace alsc::ops
