#include "alsc/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace alsc {

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::kScratch: return "scratch";
    case Regime::kPret: return "pret";
    case Regime::kMult: return "mult";
    case Regime::kPretMult: return "pret_mult";
  }
  throw std::logic_error("bad regime");
}

Regime parse_regime(const std::string& s) {
  if (s == "scratch") return Regime::kScratch;
  if (s == "pret") return Regime::kPret;
  if (s == "mult") return Regime::kMult;
  if (s == "pret_mult") return Regime::kPretMult;
  throw std::invalid_argument("unknown regime \"" + s + "\" (scratch|pret|mult|pret_mult)");
}

std::string mask_name(const TransferMask& m) {
  std::string s;
  if (m.embedding) s += "embedding";
  if (m.lstm) s += s.empty() ? "lstm" : ",lstm";
  if (m.output) s += s.empty() ? "output" : ",output";
  return s.empty() ? "none" : s;
}

TransferMask parse_mask(const std::string& s) {
  TransferMask m;
  if (s.empty() || s == "none") return m;
  std::istringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part == "embedding") m.embedding = true;
    else if (part == "lstm") m.lstm = true;
    else if (part == "output") m.output = true;
    else throw std::invalid_argument("unknown mask layer \"" + part + "\" (embedding|lstm|output)");
  }
  return m;
}

std::string seeds_name(const std::vector<uint64_t>& seeds) {
  std::string s;
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(seeds[i]);
  }
  return s;
}

std::vector<uint64_t> parse_seeds(const std::string& s) {
  std::vector<uint64_t> out;
  std::istringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    out.push_back(std::stoull(part));
  }
  if (out.empty()) throw std::invalid_argument("seeds: empty list");
  return out;
}

void RunConfig::validate() const {
  bool uses_mult = regime == Regime::kMult || regime == Regime::kPretMult;
  if (uses_mult && (lambda <= 0.0 || lambda >= 1.0))
    throw std::invalid_argument("lambda must be in (0,1) for MULT regimes, got " + std::to_string(lambda));
  if (doc_fraction < 0.0 || doc_fraction > 1.0)
    throw std::invalid_argument("doc_fraction must be in [0,1], got " + std::to_string(doc_fraction));
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (max_epochs < 0 || doc_epochs < 0) throw std::invalid_argument("epoch counts must be >= 0");
  if (dev_fraction < 0.0 || dev_fraction >= 1.0)
    throw std::invalid_argument("dev_fraction must be in [0,1), got " + std::to_string(dev_fraction));
  if (dropout < 0.0 || dropout >= 1.0)
    throw std::invalid_argument("dropout must be in [0,1), got " + std::to_string(dropout));
  if (selection != "macro_f1" && selection != "accuracy")
    throw std::invalid_argument("selection must be macro_f1 or accuracy");
  if (emb_dim < 1 || hidden_dim < 1) throw std::invalid_argument("dimensions must be positive");
  if (seeds.empty()) throw std::invalid_argument("need at least one seed");
}

std::map<std::string, std::string> RunConfig::to_map() const {
  auto fmt = [](double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
  };
  std::map<std::string, std::string> kv;
  kv["regime"] = regime_name(regime);
  kv["lambda"] = fmt(lambda);
  kv["batch_size"] = std::to_string(batch_size);
  kv["max_epochs"] = std::to_string(max_epochs);
  kv["doc_epochs"] = std::to_string(doc_epochs);
  kv["doc_fraction"] = fmt(doc_fraction);
  kv["mask"] = mask_name(mask);
  kv["seeds"] = seeds_name(seeds);
  kv["dev_fraction"] = fmt(dev_fraction);
  kv["data_seed"] = std::to_string(data_seed);
  kv["selection"] = selection;
  kv["emb_dim"] = std::to_string(emb_dim);
  kv["hidden_dim"] = std::to_string(hidden_dim);
  kv["dropout"] = fmt(dropout);
  kv["lr"] = fmt(lr);
  kv["rho"] = fmt(rho);
  kv["epsilon"] = fmt(epsilon);
  kv["clip_norm"] = fmt(clip_norm);
  kv["max_doc_len"] = std::to_string(max_doc_len);
  kv["filter_conflicts"] = filter_conflicts ? "true" : "false";
  kv["doc_balance_per_class"] = std::to_string(doc_balance_per_class);
  kv["aspect_train"] = aspect_train;
  kv["aspect_test"] = aspect_test;
  kv["doc_data"] = doc_data;
  kv["embeddings"] = embeddings;
  kv["doc_checkpoint"] = doc_checkpoint;
  kv["baseline_run"] = baseline_run;
  kv["out_dir"] = out_dir;
  return kv;
}

void RunConfig::apply(const std::map<std::string, std::string>& kv) {
  for (auto& [key, value] : kv) {
    if (key == "regime") regime = parse_regime(value);
    else if (key == "lambda") lambda = std::stod(value);
    else if (key == "batch_size") batch_size = std::stoi(value);
    else if (key == "max_epochs") max_epochs = std::stoi(value);
    else if (key == "doc_epochs") doc_epochs = std::stoi(value);
    else if (key == "doc_fraction") doc_fraction = std::stod(value);
    else if (key == "mask") mask = parse_mask(value);
    else if (key == "seeds") seeds = parse_seeds(value);
    else if (key == "dev_fraction") dev_fraction = std::stod(value);
    else if (key == "data_seed") data_seed = std::stoull(value);
    else if (key == "selection") selection = value;
    else if (key == "emb_dim") emb_dim = std::stoi(value);
    else if (key == "hidden_dim") hidden_dim = std::stoi(value);
    else if (key == "dropout") dropout = std::stod(value);
    else if (key == "lr") lr = std::stod(value);
    else if (key == "rho") rho = std::stod(value);
    else if (key == "epsilon") epsilon = std::stod(value);
    else if (key == "clip_norm") clip_norm = std::stod(value);
    else if (key == "max_doc_len") max_doc_len = std::stoi(value);
    else if (key == "filter_conflicts") filter_conflicts = (value == "true" || value == "1");
    else if (key == "doc_balance_per_class") doc_balance_per_class = std::stoi(value);
    else if (key == "aspect_train") aspect_train = value;
    else if (key == "aspect_test") aspect_test = value;
    else if (key == "doc_data") doc_data = value;
    else if (key == "embeddings") embeddings = value;
    else if (key == "doc_checkpoint") doc_checkpoint = value;
    else if (key == "baseline_run") baseline_run = value;
    else if (key == "out_dir") out_dir = value;
    else throw std::invalid_argument("unknown config key \"" + key + "\"");
  }
}

std::string RunConfig::serialize() const {
  std::string out;
  for (auto& [k, v] : to_map()) out += k + " = " + v + "\n";
  return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto strip = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      size_t b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    std::string stripped = strip(line);
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key = value");
    kv[strip(stripped.substr(0, eq))] = strip(stripped.substr(eq + 1));
  }
  return kv;
}

}  // namespace alsc
