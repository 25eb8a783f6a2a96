#pragma once

#include <optional>

#include "alsc/classes.hpp"
#include "alsc/layers.hpp"

namespace alsc {

struct ModelDims {
  int vocab = 0;
  int emb = 300;
  int hidden = 300;
};

// Vocab-encoded samples; token ids index the embedding matrix.
struct EncodedAspect {
  std::vector<int> ids;
  int target_begin = 0;
  int target_end = 0;  // half-open
  int label = 0;
};

struct EncodedDoc {
  std::vector<int> ids;
  int label = 0;
};

enum class DocRep { kLast, kMean };

// Which layers PRET copies from the document model.
struct TransferMask {
  bool embedding = false;
  bool lstm = false;
  bool output = false;

  static TransferMask full() { return {true, true, true}; }
  static TransferMask none() { return {}; }
};

template <typename S>
struct NamedParam {
  std::string name;
  TensorPtr<S> tensor;
  int frozen_row = -1;  // row excluded from updates (embedding PAD row)
};

template <typename S>
struct AspectParams {
  ModelDims dims;
  TensorPtr<S> E;  // (vocab, emb)
  LstmParams<S> lstm;
  TensorPtr<S> Wa;  // (hidden, emb)
  OutputParams<S> out;

  std::vector<NamedParam<S>> named(const std::string& prefix = "") const {
    std::vector<NamedParam<S>> v{{prefix + "E", E, kPadIndex}};
    for (auto& [n, t] : lstm.named(prefix + "lstm")) v.push_back({n, t, -1});
    v.push_back({prefix + "attn.Wa", Wa, -1});
    v.push_back({prefix + "out.W", out.W, -1});
    v.push_back({prefix + "out.b", out.b, -1});
    return v;
  }
};

template <typename S>
struct DocParams {
  ModelDims dims;
  TensorPtr<S> E;
  LstmParams<S> lstm;
  OutputParams<S> out;

  std::vector<NamedParam<S>> named(const std::string& prefix = "") const {
    std::vector<NamedParam<S>> v{{prefix + "E", E, kPadIndex}};
    for (auto& [n, t] : lstm.named(prefix + "lstm")) v.push_back({n, t, -1});
    v.push_back({prefix + "out.W", out.W, -1});
    v.push_back({prefix + "out.b", out.b, -1});
    return v;
  }
};

// Embedding init: rows provided by the loader (pretrained vectors or seeded
// uniform fallback); PAD row stays zero and is frozen during updates.
template <typename S>
TensorPtr<S> init_embedding(const ModelDims& d, Rng& rng, const std::vector<float>* pretrained) {
  auto E = make_tensor<S>({d.vocab, d.emb}, true);
  if (pretrained) {
    if (pretrained->size() != E->data.size())
      throw std::invalid_argument("init_embedding: pretrained size mismatch");
    for (size_t i = 0; i < E->data.size(); ++i) E->data[i] = static_cast<S>((*pretrained)[i]);
  } else {
    double limit = 0.25 / std::sqrt(static_cast<double>(d.emb));
    for (auto& v : E->data) v = static_cast<S>(rng.uniform(-limit, limit));
    for (int j = 0; j < d.emb; ++j) E->data[static_cast<size_t>(kPadIndex) * d.emb + j] = S(0);
  }
  return E;
}

template <typename S>
AspectParams<S> init_aspect_params(const ModelDims& d, Rng& rng, const std::vector<float>* pretrained_emb) {
  AspectParams<S> p;
  p.dims = d;
  p.E = init_embedding<S>(d, rng, pretrained_emb);
  p.lstm = init_lstm<S>(d.emb, d.hidden, rng);
  p.Wa = glorot<S>({d.hidden, d.emb}, d.hidden, d.emb, rng);
  p.out = init_output<S>(d.hidden, kNumClasses, rng);
  return p;
}

template <typename S>
DocParams<S> init_doc_params(const ModelDims& d, Rng& rng, const std::vector<float>* pretrained_emb) {
  DocParams<S> p;
  p.dims = d;
  p.E = init_embedding<S>(d, rng, pretrained_emb);
  p.lstm = init_lstm<S>(d.emb, d.hidden, rng);
  p.out = init_output<S>(d.hidden, kNumClasses, rng);
  return p;
}

template <typename S>
AspectParams<S> clone_aspect(const AspectParams<S>& p) {
  return {p.dims, clone(p.E), clone_lstm(p.lstm), clone(p.Wa), {clone(p.out.W), clone(p.out.b)}};
}

template <typename S>
DocParams<S> clone_doc(const DocParams<S>& p) {
  return {p.dims, clone(p.E), clone_lstm(p.lstm), {clone(p.out.W), clone(p.out.b)}};
}

template <typename S>
struct AspectForwardOut {
  TensorPtr<S> p;      // class probabilities
  TensorPtr<S> alpha;  // attention weights over tokens
};

template <typename S>
AspectForwardOut<S> aspect_forward(Tape<S>* tape, const EncodedAspect& s, const AspectParams<S>& params,
                                   Mode mode, double dropout_rate, Rng& dropout_rng) {
  if (s.ids.empty()) throw std::invalid_argument("aspect_forward: empty sample");
  if (s.target_begin < 0 || s.target_end <= s.target_begin ||
      s.target_end > static_cast<int>(s.ids.size()))
    throw std::invalid_argument("aspect_forward: target span [" + std::to_string(s.target_begin) + "," +
                                std::to_string(s.target_end) + ") invalid for " +
                                std::to_string(s.ids.size()) + " tokens");
  auto embedded = ops::gather_rows(tape, params.E, s.ids);
  auto h = lstm_forward(tape, embedded, params.lstm);
  auto t = target_rep(tape, ops::slice_rows(tape, embedded, s.target_begin, s.target_end));
  auto att = attention(tape, h, t, params.Wa);
  auto rep = dropout(tape, att.z, dropout_rate, mode, dropout_rng);
  auto p = output_layer(tape, rep, params.out);
  return {p, att.alpha};
}

template <typename S>
TensorPtr<S> doc_forward(Tape<S>* tape, const EncodedDoc& doc, const DocParams<S>& params, DocRep rep,
                         Mode mode, double dropout_rate, Rng& dropout_rng) {
  if (doc.ids.empty()) throw std::invalid_argument("doc_forward: empty document");
  auto embedded = ops::gather_rows(tape, params.E, doc.ids);
  auto h = lstm_forward(tape, embedded, params.lstm);
  auto r = rep == DocRep::kLast ? ops::row(tape, h, static_cast<int>(doc.ids.size()) - 1)
                                : ops::mean_rows(tape, h);
  auto dropped = dropout(tape, r, dropout_rate, mode, dropout_rng);
  return output_layer(tape, dropped, params.out);
}

// PRET initialization: start from a scratch init driven by rng (so an empty
// mask reproduces scratch exactly), then value-copy the masked layers from
// the document model. Wa is never transferred. Copies own their storage.
template <typename S>
AspectParams<S> transfer_init(const DocParams<S>& doc, const TransferMask& mask, Rng& rng,
                              const std::vector<float>* pretrained_emb) {
  AspectParams<S> p = init_aspect_params<S>(doc.dims, rng, pretrained_emb);
  if (mask.embedding) p.E = clone(doc.E);
  if (mask.lstm) p.lstm = clone_lstm(doc.lstm);
  if (mask.output) p.out = {clone(doc.out.W), clone(doc.out.b)};
  return p;
}

// MULT sharing: embedding and LSTM become one storage for both tasks; the
// attention matrix and the two output heads stay task-specific.
struct SharedBinding {
  std::vector<std::string> shared;
};

template <typename S>
SharedBinding bind_shared(AspectParams<S>& aspect, DocParams<S>& doc) {
  if (aspect.dims.vocab != doc.dims.vocab || aspect.dims.emb != doc.dims.emb ||
      aspect.dims.hidden != doc.dims.hidden)
    throw std::invalid_argument("bind_shared: dimension mismatch between tasks");
  doc.E = aspect.E;
  doc.lstm = aspect.lstm;
  SharedBinding b;
  b.shared = {"E"};
  for (auto& [n, t] : aspect.lstm.named("lstm")) b.shared.push_back(n);
  return b;
}

// Union of trainable parameters for a joint step, deduplicated by storage so
// shared tensors are updated exactly once.
template <typename S>
std::vector<NamedParam<S>> merge_params(const std::vector<NamedParam<S>>& a,
                                        const std::vector<NamedParam<S>>& b) {
  std::vector<NamedParam<S>> out = a;
  for (auto& np : b) {
    bool dup = false;
    for (auto& existing : out) dup = dup || existing.tensor == np.tensor;
    if (!dup) out.push_back(np);
  }
  return out;
}

}  // namespace alsc
