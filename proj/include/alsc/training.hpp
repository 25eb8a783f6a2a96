#pragma once

#include <map>

#include "alsc/models.hpp"

namespace alsc {

// Batch-mean negative log likelihood over a (B, n_classes) probability
// matrix. Probabilities are clamped at 1e-12 before the log; clamped entries
// contribute zero gradient.
inline constexpr double kProbFloor = 1e-12;

template <typename S>
TensorPtr<S> cross_entropy(Tape<S>* tape, const TensorPtr<S>& p_batch, const std::vector<int>& labels) {
  if (p_batch->rank() != 2 || p_batch->shape[0] != static_cast<int>(labels.size()))
    throw std::invalid_argument("cross_entropy: probs " + shape_str(p_batch->shape) + " vs " +
                                std::to_string(labels.size()) + " labels");
  int batch = p_batch->shape[0];
  int classes = p_batch->shape[1];
  for (int i = 0; i < batch; ++i) {
    S row_sum = S(0);
    for (int c = 0; c < classes; ++c) {
      S v = p_batch->at(i, c);
      if (std::isnan(v)) throw std::invalid_argument("cross_entropy: NaN probability at row " + std::to_string(i));
      row_sum += v;
    }
    if (std::abs(static_cast<double>(row_sum) - 1.0) > 1e-3)
      throw std::invalid_argument("cross_entropy: row " + std::to_string(i) + " does not sum to 1");
    if (labels[i] < 0 || labels[i] >= classes)
      throw std::invalid_argument("cross_entropy: label " + std::to_string(labels[i]) + " out of range");
  }
  auto out = make_tensor<S>({1});
  S acc = S(0);
  for (int i = 0; i < batch; ++i)
    acc -= std::log(std::max(p_batch->at(i, labels[i]), S(kProbFloor)));
  out->data[0] = acc / S(batch);
  if (ops::tracked(tape, {&p_batch})) {
    out->requires_grad = true;
    tape->record({p_batch}, out, [p_batch, out, labels, batch] {
      for (int i = 0; i < batch; ++i) {
        S p = p_batch->at(i, labels[i]);
        if (p <= S(kProbFloor)) continue;
        p_batch->grad[static_cast<size_t>(i) * p_batch->shape[1] + labels[i]] -=
            out->grad[0] / (S(batch) * p);
      }
    });
  }
  return out;
}

// L = J + lambda * U
template <typename S>
TensorPtr<S> combined_loss(Tape<S>* tape, const TensorPtr<S>& aspect_loss, const TensorPtr<S>& doc_loss,
                           double lambda) {
  if (lambda < 0.0 || lambda >= 1.0)
    throw std::invalid_argument("combined_loss: lambda must be in [0,1), got " + std::to_string(lambda));
  return ops::add(tape, aspect_loss, ops::scale(tape, doc_loss, static_cast<S>(lambda)));
}

// Forward a batch of aspect samples and reduce to the batch-mean loss.
template <typename S>
TensorPtr<S> aspect_batch_loss(Tape<S>* tape, const std::vector<EncodedAspect>& batch,
                               const AspectParams<S>& params, Mode mode, double dropout_rate,
                               Rng& dropout_rng) {
  std::vector<TensorPtr<S>> probs;
  std::vector<int> labels;
  probs.reserve(batch.size());
  for (auto& s : batch) {
    probs.push_back(aspect_forward(tape, s, params, mode, dropout_rate, dropout_rng).p);
    labels.push_back(s.label);
  }
  return cross_entropy(tape, ops::stack_rows(tape, probs), labels);
}

template <typename S>
TensorPtr<S> doc_batch_loss(Tape<S>* tape, const std::vector<EncodedDoc>& batch,
                            const DocParams<S>& params, DocRep rep, Mode mode, double dropout_rate,
                            Rng& dropout_rng) {
  std::vector<TensorPtr<S>> probs;
  std::vector<int> labels;
  probs.reserve(batch.size());
  for (auto& d : batch) {
    probs.push_back(doc_forward(tape, d, params, rep, mode, dropout_rate, dropout_rng));
    labels.push_back(d.label);
  }
  return cross_entropy(tape, ops::stack_rows(tape, probs), labels);
}

struct RmsHyper {
  double lr = 0.001;
  double rho = 0.9;
  double eps = 1e-8;
};

// Per-parameter running average of squared gradients, keyed by parameter
// name. Shared tensors must be deduplicated before stepping (merge_params).
template <typename S>
struct RmsState {
  std::map<std::string, std::vector<S>> sq;

  std::vector<S>& slot(const std::string& name, size_t size) {
    auto it = sq.find(name);
    if (it == sq.end()) it = sq.emplace(name, std::vector<S>(size, S(0))).first;
    return it->second;
  }
};

// s <- rho s + (1-rho) g^2 ; theta <- theta - lr g / (sqrt(s) + eps).
// Frozen rows (embedding PAD) are skipped entirely, state included.
template <typename S>
void rmsprop_step(const std::vector<NamedParam<S>>& params, RmsState<S>& state, const RmsHyper& hp) {
  for (auto& np : params) {
    auto& t = *np.tensor;
    if (t.grad.size() != t.data.size()) t.ensure_grad();
    auto& s = state.slot(np.name, t.data.size());
    size_t row_begin = 0, row_end = 0;
    if (np.frozen_row >= 0) {
      size_t cols = static_cast<size_t>(t.cols());
      row_begin = np.frozen_row * cols;
      row_end = row_begin + cols;
    }
    for (size_t i = 0; i < t.data.size(); ++i) {
      if (np.frozen_row >= 0 && i >= row_begin && i < row_end) continue;
      S g = t.grad[i];
      s[i] = static_cast<S>(hp.rho) * s[i] + static_cast<S>(1.0 - hp.rho) * g * g;
      S step = static_cast<S>(hp.lr) * g / (std::sqrt(s[i]) + static_cast<S>(hp.eps));
      if (!std::isfinite(step))
        throw std::runtime_error("rmsprop: non-finite update for " + np.name + "[" + std::to_string(i) + "]");
      t.data[i] -= step;
    }
  }
}

template <typename S>
void zero_grads(const std::vector<NamedParam<S>>& params) {
  for (auto& np : params) np.tensor->zero_grad();
}

// Optional global gradient clipping, off by default (max_norm <= 0).
template <typename S>
void clip_grad_norm(const std::vector<NamedParam<S>>& params, double max_norm) {
  if (max_norm <= 0.0) return;
  double total = 0.0;
  for (auto& np : params)
    for (S g : np.tensor->grad) total += static_cast<double>(g) * static_cast<double>(g);
  total = std::sqrt(total);
  if (total <= max_norm) return;
  S factor = static_cast<S>(max_norm / total);
  for (auto& np : params)
    for (auto& g : np.tensor->grad) g *= factor;
}

}  // namespace alsc
