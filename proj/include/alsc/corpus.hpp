#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alsc/classes.hpp"
#include "alsc/rng.hpp"

namespace alsc {

// Tokenized sentence with an opinion-target span (half-open token range).
struct AspectSample {
  std::vector<std::string> tokens;
  int target_begin = 0;
  int target_end = 0;
  int label = 0;
};

struct DocSample {
  std::vector<std::string> tokens;
  int label = 0;
};

// Token ids: 0 = PAD, 1 = UNK, corpus tokens from 2 upward ordered by
// descending frequency, ties lexicographic.
class Vocab {
 public:
  static Vocab build(const std::vector<const std::vector<std::string>*>& token_seqs, int min_freq = 1);

  int encode(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnkIndex : it->second;
  }
  const std::string& decode(int id) const { return tokens_.at(id); }
  bool contains(const std::string& token) const { return index_.count(token) > 0; }
  int size() const { return static_cast<int>(tokens_.size()); }

  std::vector<int> encode(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (auto& t : tokens) ids.push_back(encode(t));
    return ids;
  }

  // order-sensitive content hash, stored in checkpoints to refuse transfer
  // across incompatible vocabularies
  uint64_t hash() const;

  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

struct EmbeddingMatrix {
  int vocab = 0;
  int dim = 0;
  std::vector<float> data;          // row-major (vocab, dim); PAD row all-zero
  std::vector<uint8_t> pretrained;  // per-row flag: from file vs seeded random
  int found = 0;                    // vocab tokens covered by the file
  int missing = 0;                  // vocab tokens randomly initialized
};

struct LoadOptions {
  bool filter_conflicts = false;
  int max_doc_len = 400;  // documents truncated to this many tokens
};

// JSON-lines loaders; malformed input reports the 1-based line number.
std::vector<AspectSample> load_aspect_corpus(const std::string& path, const LoadOptions& opts = {});
std::vector<DocSample> load_doc_corpus(const std::string& path, const LoadOptions& opts = {});

// rating 1..5 -> label: <3 negative, =3 neutral, >3 positive
int map_rating(int rating);

// exactly per_class docs of each class, sampled without replacement, order
// shuffled deterministically by seed
std::vector<DocSample> balance_docs(const std::vector<DocSample>& docs, int per_class, uint64_t seed);

// dev holds round(fraction*N) samples drawn by seed; train holds the rest;
// both keep corpus order
std::pair<std::vector<AspectSample>, std::vector<AspectSample>> dev_split(
    const std::vector<AspectSample>& samples, double fraction, uint64_t seed);

// Plain-text embedding file: "token v1 ... vd" per line. Tokens missing from
// the file get uniform rows in [-0.25, 0.25] / sqrt(dim); PAD row is zeroed.
EmbeddingMatrix load_embeddings(const std::string& path, const Vocab& vocab, int dim, uint64_t seed);

// seeded random fallback when no embedding file is supplied
EmbeddingMatrix random_embeddings(const Vocab& vocab, int dim, uint64_t seed);

// fallback tokenizer: lowercase, split punctuation off, split on whitespace
std::vector<std::string> tokenize(const std::string& text);

}  // namespace alsc
