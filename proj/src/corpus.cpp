#include "alsc/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace alsc {

using nlohmann::json;

Vocab Vocab::build(const std::vector<const std::vector<std::string>*>& token_seqs, int min_freq) {
  std::unordered_map<std::string, int64_t> freq;
  for (auto* seq : token_seqs)
    for (auto& tok : *seq) ++freq[tok];

  std::vector<std::pair<std::string, int64_t>> items(freq.begin(), freq.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocab v;
  v.tokens_ = {"<pad>", "<unk>"};
  for (auto& [tok, n] : items) {
    if (n < min_freq) continue;
    v.tokens_.push_back(tok);
  }
  for (int i = 0; i < static_cast<int>(v.tokens_.size()); ++i) v.index_[v.tokens_[i]] = i;
  return v;
}

uint64_t Vocab::hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (auto& tok : tokens_) {
    for (unsigned char c : tok) mix(c);
    mix('\n');
  }
  return h;
}

int map_rating(int rating) {
  if (rating < 1 || rating > 5)
    throw std::invalid_argument("map_rating: rating " + std::to_string(rating) + " outside 1..5");
  if (rating < 3) return kNegative;
  if (rating > 3) return kPositive;
  return kNeutral;
}

namespace {

std::vector<std::string> parse_tokens(const json& j, const char* where) {
  if (!j.contains("tokens") || !j["tokens"].is_array() || j["tokens"].empty())
    throw std::invalid_argument(std::string(where) + ": missing or empty \"tokens\" array");
  std::vector<std::string> toks;
  toks.reserve(j["tokens"].size());
  for (auto& t : j["tokens"]) {
    if (!t.is_string()) throw std::invalid_argument(std::string(where) + ": non-string token");
    toks.push_back(t.get<std::string>());
  }
  return toks;
}

[[noreturn]] void line_error(const std::string& path, size_t line_no, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

std::string join_tokens(const std::vector<std::string>& toks, int begin, int end) {
  std::string s;
  for (int i = begin; i < end; ++i) {
    if (i > begin) s += ' ';
    s += toks[i];
  }
  return s;
}

}  // namespace

std::vector<AspectSample> load_aspect_corpus(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open aspect corpus: " + path);
  std::vector<AspectSample> samples;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      line_error(path, line_no, std::string("malformed JSON: ") + e.what());
    }
    AspectSample s;
    try {
      s.tokens = parse_tokens(j, "aspect sample");
      if (!j.contains("target") || !j["target"].is_array() || j["target"].size() != 2)
        throw std::invalid_argument("aspect sample: \"target\" must be [begin, end)");
      s.target_begin = j["target"][0].get<int>();
      s.target_end = j["target"][1].get<int>();
      s.label = parse_label(j.at("label").get<std::string>());
    } catch (const std::exception& e) {
      line_error(path, line_no, e.what());
    }
    int n = static_cast<int>(s.tokens.size());
    if (s.target_begin < 0 || s.target_begin >= s.target_end || s.target_end > n)
      line_error(path, line_no,
                 "target span [" + std::to_string(s.target_begin) + "," + std::to_string(s.target_end) +
                     ") invalid for sentence of " + std::to_string(n) + " tokens");
    samples.push_back(std::move(s));
  }

  if (opts.filter_conflicts) {
    // same sentence + same target surface form labeled with different
    // polarities: drop every sample with that key
    std::map<std::pair<std::string, std::string>, std::set<int>> labels_by_key;
    for (auto& s : samples) {
      auto key = std::make_pair(join_tokens(s.tokens, 0, static_cast<int>(s.tokens.size())),
                                join_tokens(s.tokens, s.target_begin, s.target_end));
      labels_by_key[key].insert(s.label);
    }
    std::vector<AspectSample> kept;
    for (auto& s : samples) {
      auto key = std::make_pair(join_tokens(s.tokens, 0, static_cast<int>(s.tokens.size())),
                                join_tokens(s.tokens, s.target_begin, s.target_end));
      if (labels_by_key[key].size() == 1) kept.push_back(std::move(s));
    }
    samples = std::move(kept);
  }
  return samples;
}

std::vector<DocSample> load_doc_corpus(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open document corpus: " + path);
  std::vector<DocSample> docs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      line_error(path, line_no, std::string("malformed JSON: ") + e.what());
    }
    DocSample d;
    try {
      d.tokens = parse_tokens(j, "document");
      if (j.contains("label")) {
        d.label = parse_label(j["label"].get<std::string>());
      } else if (j.contains("rating")) {
        d.label = map_rating(j["rating"].get<int>());
      } else {
        throw std::invalid_argument("document: needs \"label\" or \"rating\"");
      }
    } catch (const std::exception& e) {
      line_error(path, line_no, e.what());
    }
    if (opts.max_doc_len > 0 && static_cast<int>(d.tokens.size()) > opts.max_doc_len)
      d.tokens.resize(opts.max_doc_len);
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<DocSample> balance_docs(const std::vector<DocSample>& docs, int per_class, uint64_t seed) {
  if (per_class <= 0) throw std::invalid_argument("balance_docs: per_class must be positive");
  std::vector<std::vector<int>> by_class(kNumClasses);
  for (int i = 0; i < static_cast<int>(docs.size()); ++i) by_class[docs[i].label].push_back(i);
  for (int c = 0; c < kNumClasses; ++c) {
    if (static_cast<int>(by_class[c].size()) < per_class)
      throw std::invalid_argument("balance_docs: class " + std::string(label_name(c)) + " has only " +
                                  std::to_string(by_class[c].size()) + " docs, need " +
                                  std::to_string(per_class));
  }
  Rng rng(seed, "balance");
  std::vector<int> chosen;
  for (int c = 0; c < kNumClasses; ++c) {
    auto pool = by_class[c];
    rng.shuffle(pool);
    chosen.insert(chosen.end(), pool.begin(), pool.begin() + per_class);
  }
  rng.shuffle(chosen);
  std::vector<DocSample> out;
  out.reserve(chosen.size());
  for (int i : chosen) out.push_back(docs[i]);
  return out;
}

std::pair<std::vector<AspectSample>, std::vector<AspectSample>> dev_split(
    const std::vector<AspectSample>& samples, double fraction, uint64_t seed) {
  if (fraction <= 0.0 || fraction >= 1.0)
    throw std::invalid_argument("dev_split: fraction must be in (0,1), got " + std::to_string(fraction));
  int n = static_cast<int>(samples.size());
  if (n < 2) throw std::invalid_argument("dev_split: need at least 2 samples, got " + std::to_string(n));
  int dev_n = static_cast<int>(std::llround(fraction * n));
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed, "dev_split");
  rng.shuffle(idx);
  std::vector<uint8_t> is_dev(n, 0);
  for (int i = 0; i < dev_n; ++i) is_dev[idx[i]] = 1;
  std::vector<AspectSample> train, dev;
  for (int i = 0; i < n; ++i) (is_dev[i] ? dev : train).push_back(samples[i]);
  return {std::move(train), std::move(dev)};
}

namespace {

void fill_random_row(std::vector<float>& data, int row, int dim, Rng& rng) {
  double limit = 0.25 / std::sqrt(static_cast<double>(dim));
  for (int j = 0; j < dim; ++j)
    data[static_cast<size_t>(row) * dim + j] = static_cast<float>(rng.uniform(-limit, limit));
}

}  // namespace

EmbeddingMatrix random_embeddings(const Vocab& vocab, int dim, uint64_t seed) {
  EmbeddingMatrix m;
  m.vocab = vocab.size();
  m.dim = dim;
  m.data.assign(static_cast<size_t>(m.vocab) * dim, 0.0f);
  m.pretrained.assign(m.vocab, 0);
  Rng rng(seed, "embeddings");
  for (int r = 0; r < m.vocab; ++r) {
    if (r == kPadIndex) continue;
    fill_random_row(m.data, r, dim, rng);
  }
  m.found = 0;
  m.missing = m.vocab - 2;  // coverage counts corpus tokens, not PAD/UNK
  return m;
}

EmbeddingMatrix load_embeddings(const std::string& path, const Vocab& vocab, int dim, uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);

  EmbeddingMatrix m;
  m.vocab = vocab.size();
  m.dim = dim;
  m.data.assign(static_cast<size_t>(m.vocab) * dim, 0.0f);
  m.pretrained.assign(m.vocab, 0);

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (!vocab.contains(tok)) continue;
    int row = vocab.encode(tok);
    if (row == kUnkIndex) continue;
    for (int j = 0; j < dim; ++j) {
      double v;
      if (!(ss >> v))
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                 std::to_string(dim) + " values for token \"" + tok + "\"");
      m.data[static_cast<size_t>(row) * dim + j] = static_cast<float>(v);
    }
    double extra;
    if (ss >> extra)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": more than " +
                               std::to_string(dim) + " values for token \"" + tok + "\"");
    m.pretrained[row] = 1;
  }

  Rng rng(seed, "embeddings");
  for (int r = 0; r < m.vocab; ++r) {
    if (r == kPadIndex) continue;
    if (!m.pretrained[r]) fill_random_row(m.data, r, dim, rng);
    if (r < 2) continue;  // coverage counts corpus tokens, not PAD/UNK
    if (m.pretrained[r]) ++m.found;
    else ++m.missing;
  }
  // PAD row stays all-zero
  for (int j = 0; j < dim; ++j) m.data[static_cast<size_t>(kPadIndex) * dim + j] = 0.0f;
  return m;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::string spaced;
  spaced.reserve(text.size() * 2);
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '\'' || std::isspace(c)) {
      spaced.push_back(static_cast<char>(std::tolower(c)));
    } else {
      spaced.push_back(' ');
      spaced.push_back(static_cast<char>(c));
      spaced.push_back(' ');
    }
  }
  std::vector<std::string> toks;
  std::istringstream ss(spaced);
  std::string tok;
  while (ss >> tok) toks.push_back(tok);
  return toks;
}

}  // namespace alsc
