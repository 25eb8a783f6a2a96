#pragma once

#include <cmath>

#include "alsc/checkpoint.hpp"
#include "alsc/config.hpp"
#include "alsc/corpus.hpp"
#include "alsc/eval.hpp"
#include "alsc/training.hpp"

namespace alsc {

// training failure (divergence etc.) -> exit code 1
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = NAN;  // aspect loss J (doc loss for pretraining phases)
  double doc_loss = NAN;    // U, joint regimes only
  double train_acc = NAN;
  double dev_acc = NAN;
  double dev_f1 = NAN;
};

struct History {
  std::vector<EpochRecord> epochs;
  int best_epoch = -1;  // -1 = initial parameters (no epochs run)
};

// Corpora loaded, balanced, split, encoded.
struct PreparedData {
  Vocab vocab;
  EmbeddingMatrix emb;
  bool emb_pretrained = false;  // true when an embedding file was supplied
  std::vector<EncodedAspect> train, dev, test;
  std::vector<EncodedDoc> docs;       // after balancing and fraction subsampling
  std::vector<EncodedDoc> doc_train;  // pretraining split of docs
  std::vector<EncodedDoc> doc_dev;
  std::vector<int> doc_ids;  // positions retained by the fraction subsample
};

PreparedData prepare_data(const RunConfig& cfg);

struct SeedResult {
  uint64_t seed = 0;
  History history;      // aspect phase
  History doc_history;  // inline document pretraining, when it ran
  bool has_aspect = false;
  AspectParams<float> best;
  bool has_doc = false;
  DocParams<float> doc_best;
  double test_acc = NAN;
  double test_f1 = NAN;
  ConfusionMatrix test_cm;
};

// One full training run for one seed. fixed_doc, when given, is used as the
// pretrained document model instead of pretraining inline.
SeedResult train_one_seed(const RunConfig& cfg, const PreparedData& data, uint64_t seed,
                          const DocParams<float>* fixed_doc = nullptr);

// Document model pretraining only (the `pretrain` command).
SeedResult pretrain_one_seed(const RunConfig& cfg, const PreparedData& data, uint64_t seed);

ConfusionMatrix eval_aspect(const AspectParams<float>& params, const std::vector<EncodedAspect>& samples);
ConfusionMatrix eval_doc(const DocParams<float>& params, const std::vector<EncodedDoc>& docs, DocRep rep);

std::vector<AttentionRecord> attention_dump(const AspectParams<float>& params,
                                            const std::vector<EncodedAspect>& encoded,
                                            const std::vector<AspectSample>& raw);

std::vector<EncodedAspect> encode_aspects(const Vocab& vocab, const std::vector<AspectSample>& samples);
std::vector<EncodedDoc> encode_docs(const Vocab& vocab, const std::vector<DocSample>& docs);

}  // namespace alsc
