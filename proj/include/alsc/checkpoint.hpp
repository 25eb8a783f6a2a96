#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "alsc/models.hpp"

namespace alsc {

enum class ModelKind : uint8_t { kAspect = 0, kDoc = 1 };

// On-disk checkpoint: fixed header (magic, version, model kind, dimensions,
// vocab hash, class order) followed by named parameter blocks, each
// name + shape + row-major float32 little-endian data. Save/load round-trips
// bit-exactly.
struct Checkpoint {
  ModelKind kind = ModelKind::kAspect;
  ModelDims dims;
  uint64_t vocab_hash = 0;
  std::string class_order = kClassOrder;
  // insertion-ordered parameter blocks
  std::vector<std::pair<std::string, std::pair<std::vector<int>, std::vector<float>>>> blocks;

  static Checkpoint from_aspect(const AspectParams<float>& p, uint64_t vocab_hash);
  static Checkpoint from_doc(const DocParams<float>& p, uint64_t vocab_hash);
  AspectParams<float> to_aspect() const;
  DocParams<float> to_doc() const;

  const std::pair<std::vector<int>, std::vector<float>>& block(const std::string& name) const;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace alsc
