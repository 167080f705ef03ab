#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "deepfir/errors.hpp"
#include "deepfir/model.hpp"

namespace deepfir {
namespace {

inline float sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

void check_input(const ModelWeights& w, std::span<const float> input) {
  if (input.size() != w.dims.feature_dim) {
    throw InvalidArgument("model input has " + std::to_string(input.size()) +
                          " values, weights expect " + std::to_string(w.dims.feature_dim));
  }
  if (w.layers.empty()) throw InvalidArgument("model has no LSTM layers");
}

LstmLayer make_layer(std::size_t input_dim, std::size_t hidden) {
  LstmLayer l;
  l.input_dim = input_dim;
  l.hidden = hidden;
  l.gates = Matrix(4 * hidden, input_dim + hidden);
  l.bias.assign(4 * hidden, 0.0f);
  return l;
}

DenseLayer make_dense(std::size_t in, std::size_t out) {
  DenseLayer d;
  d.kernel = Matrix(out, in);
  d.bias.assign(out, 0.0f);
  return d;
}

}  // namespace

std::uint64_t ModelDims::parameter_count() const {
  const std::uint64_t f = feature_dim, h = hidden, fc = fc_dim, out = out_dim;
  std::uint64_t n = 4 * h * (f + h + 1);
  for (std::uint32_t l = 1; l < num_layers; ++l) n += 4 * h * (2 * h + 1);
  n += h * fc + fc;
  n += fc * out + out;
  return n;
}

ModelState::ModelState(const ModelDims& dims)
    : hidden(dims.num_layers, std::vector<float>(dims.hidden, 0.0f)),
      cell(dims.num_layers, std::vector<float>(dims.hidden, 0.0f)),
      concat(std::max(dims.feature_dim, dims.hidden) + dims.hidden, 0.0f),
      gates(4 * static_cast<std::size_t>(dims.hidden), 0.0f),
      fc(dims.fc_dim, 0.0f) {}

void ModelState::reset() {
  for (auto& v : hidden) std::fill(v.begin(), v.end(), 0.0f);
  for (auto& v : cell) std::fill(v.begin(), v.end(), 0.0f);
}

void lstm_layer_step(const LstmLayer& layer, std::span<float> h, std::span<float> c,
                     std::span<const float> input, std::span<float> concat_scratch,
                     std::span<float> gate_scratch, Backend backend) {
  const std::size_t hid = layer.hidden;
  if (input.size() != layer.input_dim || h.size() != hid || c.size() != hid) {
    throw InvalidArgument("lstm_layer_step: dimension mismatch");
  }
  auto xh = concat_scratch.first(layer.input_dim + hid);
  std::copy(input.begin(), input.end(), xh.begin());
  std::copy(h.begin(), h.end(), xh.begin() + static_cast<std::ptrdiff_t>(layer.input_dim));

  auto z = gate_scratch.first(4 * hid);
  kernels::matvec(backend, layer.gates, xh, layer.bias, z);

  for (std::size_t j = 0; j < hid; ++j) {
    const float i_gate = sigmoid(z[j]);
    const float f_gate = sigmoid(z[hid + j]);
    const float g_cand = std::tanh(z[2 * hid + j]);
    const float o_gate = sigmoid(z[3 * hid + j]);
    c[j] = f_gate * c[j] + i_gate * g_cand;
    h[j] = o_gate * std::tanh(c[j]);
  }
}

std::span<const float> lstm_step(const ModelWeights& weights, ModelState& state,
                                 std::span<const float> input, Backend backend) {
  check_input(weights, input);
  std::span<const float> x = input;
  for (std::size_t l = 0; l < weights.layers.size(); ++l) {
    lstm_layer_step(weights.layers[l], state.hidden[l], state.cell[l], x, state.concat,
                    state.gates, backend);
    x = state.hidden[l];
  }
  return x;
}

std::vector<float> predict(const ModelWeights& weights, ModelState& state,
                           std::span<const float> features, Backend backend) {
  std::span<const float> top = lstm_step(weights, state, features, backend);

  kernels::matvec(backend, weights.fc1.kernel, top, weights.fc1.bias, state.fc);
  for (float& v : state.fc) v = std::max(v, 0.0f);

  std::vector<float> out(weights.dims.out_dim);
  kernels::matvec(backend, weights.fc2.kernel, state.fc, weights.fc2.bias, out);
  for (float& v : out) v = sigmoid(v);
  return out;
}

FirFilter predict_taps(const ModelWeights& weights, ModelState& state,
                       std::span<const float> features, Backend backend) {
  if (weights.dims.head != HeadKind::taps) {
    throw InvalidArgument("predict_taps: weights carry a mask head");
  }
  std::vector<float> out = predict(weights, state, features, backend);
  FirFilter f;
  f.taps.assign(out.begin(), out.end());
  f.phase_kind = PhaseKind::linear;
  return f;
}

std::vector<float> predict_mask(const ModelWeights& weights, ModelState& state,
                                std::span<const float> features, Backend backend) {
  if (weights.dims.head != HeadKind::mask) {
    throw InvalidArgument("predict_mask: weights carry a taps head");
  }
  return predict(weights, state, features, backend);
}

ModelWeights zero_weights(const ModelDims& dims) {
  if (dims.num_layers < 1 || dims.hidden == 0 || dims.feature_dim == 0 || dims.fc_dim == 0 ||
      dims.out_dim == 0) {
    throw InvalidArgument("zero_weights: all dimensions must be positive");
  }
  ModelWeights w;
  w.dims = dims;
  for (std::uint32_t l = 0; l < dims.num_layers; ++l) {
    w.layers.push_back(make_layer(l == 0 ? dims.feature_dim : dims.hidden, dims.hidden));
  }
  w.fc1 = make_dense(dims.hidden, dims.fc_dim);
  w.fc2 = make_dense(dims.fc_dim, dims.out_dim);
  return w;
}

ModelWeights random_weights(const ModelDims& dims, std::uint64_t seed, float scale) {
  ModelWeights w = zero_weights(dims);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-scale, scale);
  auto fill = [&](std::vector<float>& v) {
    for (float& x : v) x = u(rng);
  };
  for (auto& l : w.layers) {
    fill(l.gates.data);
    fill(l.bias);
  }
  fill(w.fc1.kernel.data);
  fill(w.fc1.bias);
  fill(w.fc2.kernel.data);
  fill(w.fc2.bias);
  return w;
}

ModelWeights constant_head_weights(const ModelDims& dims, std::span<const float> logits) {
  if (logits.size() != dims.out_dim) {
    throw InvalidArgument("constant_head_weights: expected " + std::to_string(dims.out_dim) +
                          " logits, got " + std::to_string(logits.size()));
  }
  ModelWeights w = zero_weights(dims);
  std::copy(logits.begin(), logits.end(), w.fc2.bias.begin());
  return w;
}

ModelWeights pass_through_weights(const ModelDims& dims) {
  std::vector<float> logits(dims.out_dim, kSaturatedLogit);
  if (dims.head == HeadKind::taps) {
    std::fill(logits.begin() + 1, logits.end(), -kSaturatedLogit);
  }
  return constant_head_weights(dims, logits);
}

}  // namespace deepfir
