#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "deepfir/filter.hpp"
#include "deepfir/kernels.hpp"

namespace deepfir {

enum class HeadKind : std::uint32_t { taps = 0, mask = 1 };

struct ModelDims {
  std::uint32_t feature_dim = 129;
  std::uint32_t hidden = 200;
  std::uint32_t fc_dim = 128;
  std::uint32_t out_dim = 128;
  std::uint32_t num_layers = 2;
  HeadKind head = HeadKind::taps;

  // 4H(F+H+1) for layer 1, 4H(2H+1) for each further layer, then both
  // fully-connected layers with biases.
  std::uint64_t parameter_count() const;

  bool operator==(const ModelDims&) const = default;
};

// One LSTM layer. Input and recurrent kernels are fused into a single
// output-major matrix of shape 4H x (input_dim + H) acting on [x ; h],
// gate blocks ordered (input, forget, cell candidate, output).
struct LstmLayer {
  std::size_t input_dim = 0;
  std::size_t hidden = 0;
  Matrix gates;
  std::vector<float> bias;
};

struct DenseLayer {
  Matrix kernel;  // out x in
  std::vector<float> bias;
};

// Immutable after load; safe to share across streams and threads.
struct ModelWeights {
  ModelDims dims;
  std::vector<LstmLayer> layers;
  DenseLayer fc1;  // ReLU
  DenseLayer fc2;  // sigmoid

  std::uint64_t parameter_count() const { return dims.parameter_count(); }
};

// Recurrent state of one audio stream plus its scratch buffers. Owned by
// exactly one stream.
struct ModelState {
  explicit ModelState(const ModelDims& dims);

  void reset();

  std::vector<std::vector<float>> hidden;  // per layer, H
  std::vector<std::vector<float>> cell;    // per layer, H

  // Scratch, sized once so a step does not allocate.
  std::vector<float> concat;
  std::vector<float> gates;
  std::vector<float> fc;
};

// One cell update in place: c' = f*c + i*g, h' = o*tanh(c').
void lstm_layer_step(const LstmLayer& layer, std::span<float> h, std::span<float> c,
                     std::span<const float> input, std::span<float> concat_scratch,
                     std::span<float> gate_scratch, Backend backend = Backend::serial);

// Advances every layer by one step and returns the top layer's hidden vector.
std::span<const float> lstm_step(const ModelWeights& weights, ModelState& state,
                                 std::span<const float> input, Backend backend = Backend::serial);

// lstm_step followed by the two dense layers; returns the sigmoid head.
std::vector<float> predict(const ModelWeights& weights, ModelState& state,
                           std::span<const float> features, Backend backend = Backend::serial);

// Requires a taps head. Taps are the sigmoid outputs, unscaled.
FirFilter predict_taps(const ModelWeights& weights, ModelState& state,
                       std::span<const float> features, Backend backend = Backend::serial);

// Requires a mask head.
std::vector<float> predict_mask(const ModelWeights& weights, ModelState& state,
                                std::span<const float> features, Backend backend = Backend::serial);

// DFW1 serialization.
ModelWeights load_weights(std::span<const std::byte> bytes);
ModelWeights load_weights_file(const std::filesystem::path& path);
std::vector<std::byte> serialize_weights(const ModelWeights& weights);
void save_weights_file(const ModelWeights& weights, const std::filesystem::path& path);

// Only parses and validates the 32-byte header.
ModelDims read_weights_header(std::span<const std::byte> bytes);

// Construction helpers for tests, tooling, and pinned-output experiments.
ModelWeights zero_weights(const ModelDims& dims);
ModelWeights random_weights(const ModelDims& dims, std::uint64_t seed, float scale = 0.1f);

// All kernels zero, so the head emits sigmoid(logits) for every input.
ModelWeights constant_head_weights(const ModelDims& dims, std::span<const float> logits);

// A saturated constant head: the impulse [1, 0, ...] for a taps head,
// the all-ones mask for a mask head. Outputs are exact in float32.
ModelWeights pass_through_weights(const ModelDims& dims);

// Logit that float32 sigmoid maps to exactly 1 (or, negated, to exactly 0).
inline constexpr float kSaturatedLogit = 100.0f;

}  // namespace deepfir
