#pragma once

#include "alsc/ops.hpp"

namespace alsc {

enum class Mode { kTrain, kEval };

// Glorot-uniform init, draws consumed in row-major order so init streams are
// reproducible across regimes.
template <typename S>
TensorPtr<S> glorot(std::vector<int> shape, int fan_in, int fan_out, Rng& rng) {
  auto t = make_tensor<S>(std::move(shape), true);
  double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (auto& v : t->data) v = static_cast<S>(rng.uniform(-limit, limit));
  return t;
}

// Single-direction LSTM, one weight/recurrent/bias triple per gate.
// Forget-gate bias starts at 1, the rest at 0.
template <typename S>
struct LstmParams {
  int in_dim = 0;
  int hidden = 0;
  TensorPtr<S> Wi, Ui, bi;  // input gate
  TensorPtr<S> Wf, Uf, bf;  // forget gate
  TensorPtr<S> Wo, Uo, bo;  // output gate
  TensorPtr<S> Wg, Ug, bg;  // candidate

  std::vector<std::pair<std::string, TensorPtr<S>>> named(const std::string& prefix) const {
    return {{prefix + ".Wi", Wi}, {prefix + ".Ui", Ui}, {prefix + ".bi", bi},
            {prefix + ".Wf", Wf}, {prefix + ".Uf", Uf}, {prefix + ".bf", bf},
            {prefix + ".Wo", Wo}, {prefix + ".Uo", Uo}, {prefix + ".bo", bo},
            {prefix + ".Wg", Wg}, {prefix + ".Ug", Ug}, {prefix + ".bg", bg}};
  }
};

template <typename S>
LstmParams<S> init_lstm(int in_dim, int hidden, Rng& rng) {
  LstmParams<S> p;
  p.in_dim = in_dim;
  p.hidden = hidden;
  auto w = [&] { return glorot<S>({hidden, in_dim}, in_dim, hidden, rng); };
  auto u = [&] { return glorot<S>({hidden, hidden}, hidden, hidden, rng); };
  auto b = [&] { return make_tensor<S>({hidden}, true); };
  p.Wi = w(); p.Ui = u(); p.bi = b();
  p.Wf = w(); p.Uf = u(); p.bf = b();
  for (auto& v : p.bf->data) v = S(1);
  p.Wo = w(); p.Uo = u(); p.bo = b();
  p.Wg = w(); p.Ug = u(); p.bg = b();
  return p;
}

template <typename S>
LstmParams<S> clone_lstm(const LstmParams<S>& p) {
  LstmParams<S> c;
  c.in_dim = p.in_dim;
  c.hidden = p.hidden;
  c.Wi = clone(p.Wi); c.Ui = clone(p.Ui); c.bi = clone(p.bi);
  c.Wf = clone(p.Wf); c.Uf = clone(p.Uf); c.bf = clone(p.bf);
  c.Wo = clone(p.Wo); c.Uo = clone(p.Uo); c.bo = clone(p.bo);
  c.Wg = clone(p.Wg); c.Ug = clone(p.Ug); c.bg = clone(p.bg);
  return c;
}

template <typename S>
struct LstmState {
  TensorPtr<S> h;
  TensorPtr<S> c;
};

template <typename S>
LstmState<S> lstm_cell(Tape<S>* tape, const TensorPtr<S>& x, const LstmState<S>& prev,
                       const LstmParams<S>& p) {
  auto gate = [&](const TensorPtr<S>& W, const TensorPtr<S>& U, const TensorPtr<S>& b) {
    return ops::add(tape, ops::add(tape, ops::matmul(tape, W, x), ops::matmul(tape, U, prev.h)), b);
  };
  auto i = ops::sigmoid(tape, gate(p.Wi, p.Ui, p.bi));
  auto f = ops::sigmoid(tape, gate(p.Wf, p.Uf, p.bf));
  auto o = ops::sigmoid(tape, gate(p.Wo, p.Uo, p.bo));
  auto g = ops::tanh(tape, gate(p.Wg, p.Ug, p.bg));
  auto c = ops::add(tape, ops::mul(tape, f, prev.c), ops::mul(tape, i, g));
  auto h = ops::mul(tape, o, ops::tanh(tape, c));
  return {h, c};
}

// Runs the recurrence over the rows of an (n,d) embedded sequence and stacks
// the hidden states into an (n,hidden) matrix. Initial state is zero.
template <typename S>
TensorPtr<S> lstm_forward(Tape<S>* tape, const TensorPtr<S>& embedded, const LstmParams<S>& p) {
  if (embedded->rank() != 2 || embedded->shape[0] < 1)
    throw std::invalid_argument("lstm_forward: expected (n,d) input, got " + shape_str(embedded->shape));
  if (embedded->shape[1] != p.in_dim)
    throw std::invalid_argument("lstm_forward: input dim " + std::to_string(embedded->shape[1]) +
                                " does not match params dim " + std::to_string(p.in_dim));
  int n = embedded->shape[0];
  LstmState<S> st{make_tensor<S>({p.hidden}), make_tensor<S>({p.hidden})};
  std::vector<TensorPtr<S>> hs;
  hs.reserve(n);
  for (int t = 0; t < n; ++t) {
    st = lstm_cell(tape, ops::row(tape, embedded, t), st, p);
    hs.push_back(st.h);
  }
  return ops::stack_rows(tape, hs);
}

// mean of the target's embedding rows
template <typename S>
TensorPtr<S> target_rep(Tape<S>* tape, const TensorPtr<S>& target_rows) {
  if (target_rows->rank() != 2 || target_rows->shape[0] < 1)
    throw std::invalid_argument("target_rep: expected nonempty (m,d), got " + shape_str(target_rows->shape));
  return ops::mean_rows(tape, target_rows);
}

template <typename S>
struct AttentionOut {
  TensorPtr<S> z;      // pooled sentence representation
  TensorPtr<S> alpha;  // attention weights, zero at masked positions
};

// Bilinear target-conditioned attention: score_i = tanh(h_i . (Wa t)),
// alpha = masked softmax(score), z = sum_i alpha_i h_i.
template <typename S>
AttentionOut<S> attention(Tape<S>* tape, const TensorPtr<S>& h, const TensorPtr<S>& t,
                          const TensorPtr<S>& Wa, const std::vector<uint8_t>* mask = nullptr) {
  if (h->rank() != 2) throw std::invalid_argument("attention: h must be (n,hidden), got " + shape_str(h->shape));
  if (Wa->rank() != 2 || Wa->shape[0] != h->shape[1] || Wa->shape[1] != t->cols())
    throw std::invalid_argument("attention: Wa " + shape_str(Wa->shape) + " incompatible with h " +
                                shape_str(h->shape) + " and t " + shape_str(t->shape));
  auto u = ops::matmul(tape, Wa, t);
  auto beta = ops::tanh(tape, ops::matmul(tape, h, u));
  auto alpha = ops::softmax(tape, beta, mask);
  auto z = ops::matmul(tape, alpha, h);
  return {z, alpha};
}

template <typename S>
struct OutputParams {
  TensorPtr<S> W;  // (n_classes, hidden)
  TensorPtr<S> b;  // (n_classes)
};

template <typename S>
OutputParams<S> init_output(int hidden, int n_classes, Rng& rng) {
  return {glorot<S>({n_classes, hidden}, hidden, n_classes, rng), make_tensor<S>({n_classes}, true)};
}

template <typename S>
TensorPtr<S> output_layer(Tape<S>* tape, const TensorPtr<S>& rep, const OutputParams<S>& p) {
  return ops::softmax(tape, ops::add(tape, ops::matmul(tape, p.W, rep), p.b));
}

template <typename S>
TensorPtr<S> dropout(Tape<S>* tape, const TensorPtr<S>& x, double rate, Mode mode, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0)
    throw std::invalid_argument("dropout: rate must be in [0,1), got " + std::to_string(rate));
  if (mode == Mode::kEval || rate == 0.0) return x;
  return ops::dropout(tape, x, rate, rng);
}

}  // namespace alsc
