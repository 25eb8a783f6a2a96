#pragma once

#include <functional>
#include <unordered_set>

#include "alsc/tensor.hpp"

namespace alsc {

// Tape of executed primitives in forward order. backward() replays it in
// exact reverse order. Intermediate (op output) adjoints are reset at the
// start of each backward pass; leaf gradients keep accumulating, so two
// passes without zero_grad double every parameter gradient.
template <typename S>
class Tape {
 public:
  void record(std::vector<TensorPtr<S>> inputs, TensorPtr<S> output, std::function<void()> back) {
    outputs_.insert(output.get());
    entries_.push_back(Entry{std::move(inputs), std::move(output), std::move(back)});
  }

  void backward(const TensorPtr<S>& loss) {
    if (!loss->is_scalar()) {
      throw std::invalid_argument("backward: loss must be scalar, got " + shape_str(loss->shape));
    }
    if (outputs_.find(loss.get()) == outputs_.end()) {
      throw std::invalid_argument("backward: loss is not connected to this tape");
    }
    for (auto& e : entries_) {
      for (auto& in : e.inputs) {
        if (in->requires_grad) in->ensure_grad();
      }
      e.output->zero_grad();
    }
    loss->grad[0] = S(1);
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) it->back();
  }

  void clear() {
    entries_.clear();
    outputs_.clear();
  }

  size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::vector<TensorPtr<S>> inputs;
    TensorPtr<S> output;
    std::function<void()> back;
  };
  std::vector<Entry> entries_;
  std::unordered_set<const Tensor<S>*> outputs_;
};

}  // namespace alsc
