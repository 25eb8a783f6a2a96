#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace alsc {

// Dense row-major tensor. S is float for training and double for gradient
// checking; the whole model stack is templated on it so both precisions run
// the same code. Gradients accumulate additively; the caller zeroes them.
template <typename S>
struct Tensor {
  std::vector<int> shape;
  std::vector<S> data;
  std::vector<S> grad;  // empty until first touched; same size as data after
  bool requires_grad = false;

  int64_t numel() const { return static_cast<int64_t>(data.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  bool is_scalar() const { return numel() == 1; }

  int rows() const { return rank() == 2 ? shape[0] : 1; }
  int cols() const { return rank() == 2 ? shape[1] : shape[0]; }

  S& at(int r, int c) { return data[static_cast<size_t>(r) * cols() + c]; }
  S at(int r, int c) const { return data[static_cast<size_t>(r) * cols() + c]; }

  void ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), S(0));
  }
  void zero_grad() { grad.assign(data.size(), S(0)); }

  // grad value with unallocated buffers reading as zero
  S grad_at(size_t i) const { return grad.empty() ? S(0) : grad[i]; }
};

template <typename S>
using TensorPtr = std::shared_ptr<Tensor<S>>;

inline std::string shape_str(const std::vector<int>& shape) {
  std::string s = "(";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

inline int64_t shape_numel(const std::vector<int>& shape) {
  int64_t n = 1;
  for (int d : shape) n *= d;
  return n;
}

template <typename S>
TensorPtr<S> make_tensor(std::vector<int> shape, bool requires_grad = false) {
  for (int d : shape) {
    if (d <= 0) throw std::invalid_argument("tensor: nonpositive dim in shape " + shape_str(shape));
  }
  auto t = std::make_shared<Tensor<S>>();
  t->data.assign(static_cast<size_t>(shape_numel(shape)), S(0));
  t->shape = std::move(shape);
  t->requires_grad = requires_grad;
  return t;
}

template <typename S>
TensorPtr<S> make_tensor(std::vector<int> shape, std::vector<S> values, bool requires_grad = false) {
  auto t = make_tensor<S>(std::move(shape), requires_grad);
  if (values.size() != t->data.size()) {
    throw std::invalid_argument("tensor: " + std::to_string(values.size()) + " values for shape " +
                                shape_str(t->shape));
  }
  t->data = std::move(values);
  return t;
}

template <typename S>
TensorPtr<S> scalar_tensor(S v, bool requires_grad = false) {
  return make_tensor<S>({1}, {v}, requires_grad);
}

template <typename S>
TensorPtr<S> zeros_like(const TensorPtr<S>& x) {
  return make_tensor<S>(x->shape);
}

// Deep value copy. Grad buffers are not copied.
template <typename S>
TensorPtr<S> clone(const TensorPtr<S>& x) {
  auto t = std::make_shared<Tensor<S>>();
  t->shape = x->shape;
  t->data = x->data;
  t->requires_grad = x->requires_grad;
  return t;
}

}  // namespace alsc
