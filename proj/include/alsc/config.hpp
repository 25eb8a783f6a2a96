#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "alsc/models.hpp"

namespace alsc {

enum class Regime { kScratch, kPret, kMult, kPretMult };

std::string regime_name(Regime r);
Regime parse_regime(const std::string& s);

std::string mask_name(const TransferMask& m);   // "embedding,lstm,output" / "none"
TransferMask parse_mask(const std::string& s);

// Full experiment description. Serialized as a flat key=value text file;
// every field is overridable by a CLI flag and the resolved config is echoed
// into the output directory.
struct RunConfig {
  Regime regime = Regime::kScratch;
  double lambda = 0.1;
  int batch_size = 32;
  int max_epochs = 30;   // aspect-level phases
  int doc_epochs = 10;   // document pretraining phase
  double doc_fraction = 1.0;
  TransferMask mask = TransferMask::full();
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
  double dev_fraction = 0.2;  // 0 disables the dev split (selection on train)
  uint64_t data_seed = 42;
  std::string selection = "macro_f1";  // or "accuracy"
  int emb_dim = 300;
  int hidden_dim = 300;
  double dropout = 0.5;
  double lr = 0.001;
  double rho = 0.9;
  double epsilon = 1e-8;
  double clip_norm = 0.0;  // 0 = off
  int max_doc_len = 400;
  bool filter_conflicts = false;
  int doc_balance_per_class = 0;  // 0 = use documents as-is

  std::string aspect_train;
  std::string aspect_test;
  std::string doc_data;
  std::string embeddings;
  std::string doc_checkpoint;
  std::string baseline_run;
  std::string out_dir;

  void validate() const;
  std::map<std::string, std::string> to_map() const;
  void apply(const std::map<std::string, std::string>& kv);  // unknown key -> error
  std::string serialize() const;                             // sorted key=value lines
};

std::map<std::string, std::string> parse_config_file(const std::string& path);

std::string seeds_name(const std::vector<uint64_t>& seeds);
std::vector<uint64_t> parse_seeds(const std::string& s);

}  // namespace alsc
