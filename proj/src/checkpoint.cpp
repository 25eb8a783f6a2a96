#include "alsc/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace alsc {

namespace {

constexpr char kMagic[8] = {'A', 'L', 'S', 'C', 'C', 'K', 'P', 'T'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& out, uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8), static_cast<char>(v >> 16),
               static_cast<char>(v >> 24)};
  out.write(b, 4);
}

void put_u64(std::ostream& out, uint64_t v) {
  put_u32(out, static_cast<uint32_t>(v));
  put_u32(out, static_cast<uint32_t>(v >> 32));
}

void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_f32(std::ostream& out, float v) { put_u32(out, std::bit_cast<uint32_t>(v)); }

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint64_t get_u64(std::istream& in) {
  uint64_t lo = get_u32(in);
  uint64_t hi = get_u32(in);
  return lo | (hi << 32);
}

std::string get_string(std::istream& in) {
  uint32_t n = get_u32(in);
  if (n > (1u << 20)) throw std::runtime_error("checkpoint: unreasonable string length");
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return s;
}

float get_f32(std::istream& in) { return std::bit_cast<float>(get_u32(in)); }

std::pair<std::vector<int>, std::vector<float>> tensor_block(const TensorPtr<float>& t) {
  return {t->shape, t->data};
}

TensorPtr<float> block_tensor(const std::pair<std::vector<int>, std::vector<float>>& b) {
  return make_tensor<float>(b.first, b.second, true);
}

}  // namespace

Checkpoint Checkpoint::from_aspect(const AspectParams<float>& p, uint64_t vocab_hash) {
  Checkpoint c;
  c.kind = ModelKind::kAspect;
  c.dims = p.dims;
  c.vocab_hash = vocab_hash;
  for (auto& np : p.named()) c.blocks.emplace_back(np.name, tensor_block(np.tensor));
  return c;
}

Checkpoint Checkpoint::from_doc(const DocParams<float>& p, uint64_t vocab_hash) {
  Checkpoint c;
  c.kind = ModelKind::kDoc;
  c.dims = p.dims;
  c.vocab_hash = vocab_hash;
  for (auto& np : p.named()) c.blocks.emplace_back(np.name, tensor_block(np.tensor));
  return c;
}

const std::pair<std::vector<int>, std::vector<float>>& Checkpoint::block(const std::string& name) const {
  for (auto& [n, b] : blocks)
    if (n == name) return b;
  throw std::runtime_error("checkpoint: no block named \"" + name + "\"");
}

namespace {

LstmParams<float> lstm_from_blocks(const Checkpoint& c, const ModelDims& dims) {
  LstmParams<float> p;
  p.in_dim = dims.emb;
  p.hidden = dims.hidden;
  p.Wi = block_tensor(c.block("lstm.Wi")); p.Ui = block_tensor(c.block("lstm.Ui")); p.bi = block_tensor(c.block("lstm.bi"));
  p.Wf = block_tensor(c.block("lstm.Wf")); p.Uf = block_tensor(c.block("lstm.Uf")); p.bf = block_tensor(c.block("lstm.bf"));
  p.Wo = block_tensor(c.block("lstm.Wo")); p.Uo = block_tensor(c.block("lstm.Uo")); p.bo = block_tensor(c.block("lstm.bo"));
  p.Wg = block_tensor(c.block("lstm.Wg")); p.Ug = block_tensor(c.block("lstm.Ug")); p.bg = block_tensor(c.block("lstm.bg"));
  return p;
}

}  // namespace

AspectParams<float> Checkpoint::to_aspect() const {
  if (kind != ModelKind::kAspect) throw std::runtime_error("checkpoint: not an aspect model");
  AspectParams<float> p;
  p.dims = dims;
  p.E = block_tensor(block("E"));
  p.lstm = lstm_from_blocks(*this, dims);
  p.Wa = block_tensor(block("attn.Wa"));
  p.out = {block_tensor(block("out.W")), block_tensor(block("out.b"))};
  return p;
}

DocParams<float> Checkpoint::to_doc() const {
  if (kind != ModelKind::kDoc) throw std::runtime_error("checkpoint: not a document model");
  DocParams<float> p;
  p.dims = dims;
  p.E = block_tensor(block("E"));
  p.lstm = lstm_from_blocks(*this, dims);
  p.out = {block_tensor(block("out.W")), block_tensor(block("out.b"))};
  return p;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write(kMagic, 8);
  put_u32(out, kVersion);
  put_u32(out, static_cast<uint32_t>(ckpt.kind));
  put_u32(out, static_cast<uint32_t>(ckpt.dims.vocab));
  put_u32(out, static_cast<uint32_t>(ckpt.dims.emb));
  put_u32(out, static_cast<uint32_t>(ckpt.dims.hidden));
  put_u64(out, ckpt.vocab_hash);
  put_string(out, ckpt.class_order);
  put_u32(out, static_cast<uint32_t>(ckpt.blocks.size()));
  for (auto& [name, block] : ckpt.blocks) {
    put_string(out, name);
    put_u32(out, static_cast<uint32_t>(block.first.size()));
    for (int d : block.first) put_u32(out, static_cast<uint32_t>(d));
    for (float v : block.second) put_f32(out, v);
  }
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("not a checkpoint file: " + path);
  uint32_t version = get_u32(in);
  if (version != kVersion)
    throw std::runtime_error("checkpoint version " + std::to_string(version) + " unsupported");
  Checkpoint c;
  c.kind = static_cast<ModelKind>(get_u32(in));
  c.dims.vocab = static_cast<int>(get_u32(in));
  c.dims.emb = static_cast<int>(get_u32(in));
  c.dims.hidden = static_cast<int>(get_u32(in));
  c.vocab_hash = get_u64(in);
  c.class_order = get_string(in);
  if (c.class_order != kClassOrder)
    throw std::runtime_error("checkpoint class order \"" + c.class_order + "\" does not match \"" +
                             kClassOrder + "\"");
  uint32_t n_blocks = get_u32(in);
  for (uint32_t i = 0; i < n_blocks; ++i) {
    std::string name = get_string(in);
    uint32_t rank = get_u32(in);
    std::vector<int> shape;
    int64_t numel = 1;
    for (uint32_t r = 0; r < rank; ++r) {
      shape.push_back(static_cast<int>(get_u32(in)));
      numel *= shape.back();
    }
    std::vector<float> data(static_cast<size_t>(numel));
    for (auto& v : data) v = get_f32(in);
    c.blocks.emplace_back(std::move(name), std::make_pair(std::move(shape), std::move(data)));
  }
  return c;
}

}  // namespace alsc
