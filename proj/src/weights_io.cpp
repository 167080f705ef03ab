// DFW1 weight files.
//
//   "DFW1" | version | feature_dim | hidden | fc_dim | out_dim | num_layers | head_tag
//
// All header fields are little-endian u32. The payload is little-endian
// float32 in the order W_1, U_1, b_1, W_2, U_2, b_2, FC1_W, FC1_b, FC2_W,
// FC2_b. Kernels are row-major with rows = input dimension, so a file kernel
// of shape (in x out) is the transpose of the in-memory Matrix.

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "deepfir/errors.hpp"
#include "deepfir/model.hpp"

namespace deepfir {
namespace {

constexpr char kMagic[4] = {'D', 'F', 'W', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 32;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

std::uint32_t to_host(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
  return v;
}

class Reader {
 public:
  explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4, "header");
    std::uint32_t v;
    std::memcpy(&v, bytes_.data() + pos_, 4);
    pos_ += 4;
    return to_host(v);
  }

  float f32(const char* what) {
    need(4, what);
    std::uint32_t raw;
    std::memcpy(&raw, bytes_.data() + pos_, 4);
    pos_ += 4;
    const float v = std::bit_cast<float>(to_host(raw));
    if (!std::isfinite(v)) throw FormatError(std::string("DFW1: non-finite value in ") + what);
    return v;
  }

  void magic() {
    need(4, "magic");
    if (std::memcmp(bytes_.data(), kMagic, 4) != 0) throw FormatError("DFW1: bad magic");
    pos_ += 4;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (pos_ + n > bytes_.size()) {
      throw FormatError(std::string("DFW1: truncated while reading ") + what);
    }
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

class Writer {
 public:
  void u32(std::uint32_t v) { raw(to_host(v)); }
  void f32(float v) { raw(to_host(std::bit_cast<std::uint32_t>(v))); }
  void magic() {
    for (char c : kMagic) out_.push_back(static_cast<std::byte>(c));
  }
  std::vector<std::byte> take() { return std::move(out_); }

 private:
  void raw(std::uint32_t v) {
    std::byte b[4];
    std::memcpy(b, &v, 4);
    out_.insert(out_.end(), b, b + 4);
  }
  std::vector<std::byte> out_;
};

// Reads a file kernel (in x out, rows = input) into the Matrix sub-block
// m[row_offset + j][col_offset + i].
void read_kernel(Reader& r, Matrix& m, std::size_t in, std::size_t out, std::size_t col_offset,
                 const char* what) {
  for (std::size_t i = 0; i < in; ++i) {
    for (std::size_t j = 0; j < out; ++j) m.at(j, col_offset + i) = r.f32(what);
  }
}

void read_vector(Reader& r, std::vector<float>& v, const char* what) {
  for (float& x : v) x = r.f32(what);
}

void write_kernel(Writer& w, const Matrix& m, std::size_t in, std::size_t out,
                  std::size_t col_offset) {
  for (std::size_t i = 0; i < in; ++i) {
    for (std::size_t j = 0; j < out; ++j) w.f32(m.at(j, col_offset + i));
  }
}

void write_vector(Writer& w, const std::vector<float>& v) {
  for (float x : v) w.f32(x);
}

ModelDims parse_header(Reader& r) {
  r.magic();
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw FormatError("DFW1: unsupported version " + std::to_string(version));
  }
  ModelDims d;
  d.feature_dim = r.u32();
  d.hidden = r.u32();
  d.fc_dim = r.u32();
  d.out_dim = r.u32();
  d.num_layers = r.u32();
  const std::uint32_t head = r.u32();
  if (d.feature_dim == 0 || d.hidden == 0 || d.fc_dim == 0 || d.out_dim == 0) {
    throw FormatError("DFW1: zero dimension in header");
  }
  if (d.num_layers != 2) {
    throw FormatError("DFW1: num_layers must be 2, got " + std::to_string(d.num_layers));
  }
  if (head > 1) throw FormatError("DFW1: unknown head_tag " + std::to_string(head));
  d.head = static_cast<HeadKind>(head);
  return d;
}

}  // namespace

ModelDims read_weights_header(std::span<const std::byte> bytes) {
  Reader r(bytes);
  return parse_header(r);
}

ModelWeights load_weights(std::span<const std::byte> bytes) {
  Reader r(bytes);
  const ModelDims d = parse_header(r);

  const std::uint64_t expected = d.parameter_count() * 4;
  if (r.remaining() < expected) {
    throw FormatError("DFW1: truncated payload, expected " + std::to_string(expected) +
                      " bytes after header, found " + std::to_string(r.remaining()));
  }
  if (r.remaining() > expected) {
    throw FormatError("DFW1: " + std::to_string(r.remaining() - expected) +
                      " trailing bytes do not match header dimensions");
  }

  ModelWeights w = zero_weights(d);
  for (auto& layer : w.layers) {
    const std::size_t g = 4 * layer.hidden;
    read_kernel(r, layer.gates, layer.input_dim, g, 0, "input kernel");
    read_kernel(r, layer.gates, layer.hidden, g, layer.input_dim, "recurrent kernel");
    read_vector(r, layer.bias, "lstm bias");
  }
  read_kernel(r, w.fc1.kernel, d.hidden, d.fc_dim, 0, "fc1 kernel");
  read_vector(r, w.fc1.bias, "fc1 bias");
  read_kernel(r, w.fc2.kernel, d.fc_dim, d.out_dim, 0, "fc2 kernel");
  read_vector(r, w.fc2.bias, "fc2 bias");
  return w;
}

std::vector<std::byte> serialize_weights(const ModelWeights& weights) {
  const ModelDims& d = weights.dims;
  if (d.num_layers != 2 || weights.layers.size() != 2) {
    throw InvalidArgument("serialize_weights: DFW1 stores exactly two LSTM layers");
  }
  Writer w;
  w.magic();
  w.u32(kVersion);
  w.u32(d.feature_dim);
  w.u32(d.hidden);
  w.u32(d.fc_dim);
  w.u32(d.out_dim);
  w.u32(d.num_layers);
  w.u32(static_cast<std::uint32_t>(d.head));
  for (const auto& layer : weights.layers) {
    const std::size_t g = 4 * layer.hidden;
    write_kernel(w, layer.gates, layer.input_dim, g, 0);
    write_kernel(w, layer.gates, layer.hidden, g, layer.input_dim);
    write_vector(w, layer.bias);
  }
  write_kernel(w, weights.fc1.kernel, d.hidden, d.fc_dim, 0);
  write_vector(w, weights.fc1.bias);
  write_kernel(w, weights.fc2.kernel, d.fc_dim, d.out_dim, 0);
  write_vector(w, weights.fc2.bias);
  return w.take();
}

ModelWeights load_weights_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("DFW1: cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_weights(std::as_bytes(std::span(raw)));
}

void save_weights_file(const ModelWeights& weights, const std::filesystem::path& path) {
  const auto bytes = serialize_weights(weights);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("DFW1: cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("DFW1: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace deepfir
