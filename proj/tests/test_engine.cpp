#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "deepfir/engine.hpp"
#include "deepfir/errors.hpp"
#include "deepfir/wav.hpp"
#include "oracles.hpp"

using namespace deepfir;

namespace {

std::shared_ptr<const ModelWeights> shared(ModelWeights w) {
  return std::make_shared<const ModelWeights>(std::move(w));
}

std::shared_ptr<const ModelWeights> pass_through(HeadKind head = HeadKind::taps) {
  ModelDims d;
  d.head = head;
  d.out_dim = head == HeadKind::taps ? 128 : 129;
  return shared(pass_through_weights(d));
}

// Saturated head emitting a pure k-sample delay.
std::shared_ptr<const ModelWeights> delay_head(std::size_t k) {
  std::vector<float> logits(128, -kSaturatedLogit);
  logits[k] = kSaturatedLogit;
  return shared(constant_head_weights(ModelDims{}, logits));
}

std::vector<double> run_chunked(const StreamConfig& cfg, std::shared_ptr<const ModelWeights> w,
                                const std::vector<double>& x, std::size_t chunk) {
  auto p = make_processor(cfg, std::move(w));
  StreamRunner r(*p);
  std::vector<double> out;
  for (std::size_t i = 0; i < x.size(); i += chunk) {
    r.push(std::span(x).subspan(i, std::min(chunk, x.size() - i)), out);
  }
  r.finish(out);
  out.resize(x.size());
  return out;
}

}  // namespace

TEST(Config, ForMode) {
  const auto d = StreamConfig::for_mode(Mode::deepfir, 1.0);
  EXPECT_EQ(d.hop, 16u);
  EXPECT_EQ(d.synthesis_window, 16u);
  const auto l = StreamConfig::for_mode(Mode::lstw, 2.0);
  EXPECT_EQ(l.synthesis_window, 32u);
  EXPECT_EQ(l.hop, 16u);
  const auto o = StreamConfig::for_mode(Mode::ola, 1.0);
  EXPECT_EQ(o.synthesis_window, 256u);
  EXPECT_EQ(o.hop, 128u);
  EXPECT_EQ(StreamConfig::for_mode(Mode::deepfir, 0.0625).hop, 1u);
  EXPECT_THROW(StreamConfig::for_mode(Mode::deepfir, 0.03), InvalidArgument);
  EXPECT_THROW(StreamConfig::for_mode(Mode::lstw, 32.0), InvalidArgument);
  EXPECT_EQ(parse_mode("lstw"), Mode::lstw);
  EXPECT_THROW(parse_mode("iir"), InvalidArgument);
}

TEST(Config, ValidateRejectsInconsistentHop) {
  auto c = StreamConfig::for_mode(Mode::deepfir, 1.0);
  c.hop = 8;
  EXPECT_THROW(c.validate(), InvalidArgument);
  auto o = StreamConfig::for_mode(Mode::ola, 16.0);
  o.hop = 64;
  EXPECT_THROW(o.validate(), InvalidArgument);
  auto z = StreamConfig::for_mode(Mode::deepfir, 1.0);
  z.hop = z.synthesis_window = 0;
  EXPECT_THROW(z.validate(), InvalidArgument);
}

TEST(DeepFir, IdentityPath) {
  for (bool mp : {false, true}) {
    const auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0, 128, mp);
    const auto x = oracle::noise(8000, 1);
    const auto y = process_stream(cfg, pass_through(), x).output;
    ASSERT_EQ(y.size(), x.size());
    if (!mp) {
      EXPECT_EQ(y, x);
    } else {
      for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(to_pcm16(y[i]), to_pcm16(x[i]));
    }
  }
}

TEST(DeepFir, EqualFiltersGivePlainConvolution) {
  const auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0, 128, false);
  DeepFirEngine e(cfg, pass_through());
  const auto h = oracle::noise(128, 2, 0.2);
  const FirFilter f{h, PhaseKind::linear};
  const auto x = oracle::noise(1600, 3);
  std::vector<double> y;
  for (std::size_t i = 0; i < x.size(); i += 16) {
    std::vector<double> o(16);
    e.process_hop_with_filter(std::span(x).subspan(i, 16), f, o);
    y.insert(y.end(), o.begin(), o.end());
  }
  const auto ref = oracle::convolve(x, h);
  // The first hop fades in from the impulse; from the second on both
  // branches use h.
  for (std::size_t n = 16; n < x.size(); ++n) EXPECT_NEAR(y[n], ref[n], 1e-12);
}

TEST(DeepFir, CrossfadeBlendsBranches) {
  const auto cfg = StreamConfig::for_mode(Mode::deepfir, 0.5, 128, false);
  DeepFirEngine e(cfg, pass_through());
  const auto x = oracle::noise(16, 4);
  const FirFilter a{oracle::noise(128, 5, 0.1), PhaseKind::linear};
  const FirFilter b{oracle::noise(128, 6, 0.1), PhaseKind::linear};
  std::vector<double> o(8);
  e.process_hop_with_filter(std::span(x).first(8), a, o);
  e.process_hop_with_filter(std::span(x).subspan(8, 8), b, o);
  EXPECT_EQ(e.previous_filter().taps, a.taps);
  EXPECT_EQ(e.current_filter().taps, b.taps);
  const auto ya = oracle::convolve(x, a.taps);
  const auto yb = oracle::convolve(x, b.taps);
  for (std::size_t n = 0; n < 8; ++n) {
    const double rise = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(n + 1) / 8.0));
    EXPECT_NEAR(o[n], rise * yb[8 + n] + (1.0 - rise) * ya[8 + n], 1e-12);
  }
  EXPECT_NEAR(o[7], yb[15], 1e-15);
}

TEST(DeepFir, SingleSampleHopHandsOverImmediately) {
  const auto cfg = StreamConfig::for_mode(Mode::deepfir, 0.0625, 128, false);
  DeepFirEngine e(cfg, pass_through());
  const auto x = oracle::noise(64, 7);
  const FirFilter h{oracle::noise(128, 8, 0.1), PhaseKind::linear};
  const auto ref = oracle::convolve(x, h.taps);
  std::vector<double> o(1);
  for (std::size_t n = 0; n < x.size(); ++n) {
    e.process_hop_with_filter(std::span(x).subspan(n, 1), h, o);
    EXPECT_NEAR(o[0], ref[n], 1e-12);
  }
}

TEST(DeepFir, OneThousandHopsPerSecond) {
  const auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0);
  const auto x = oracle::noise(16000, 9);
  const auto r = process_stream(cfg, pass_through(), x);
  EXPECT_EQ(r.trace.hops, 1000u);
  EXPECT_EQ(r.trace.timings.size(), 1000u);
  EXPECT_TRUE(process_stream(cfg, pass_through(), std::vector<double>{}).output.empty());
}

TEST(DeepFir, PartialFinalHopIsPaddedAndTruncated) {
  const auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0, 128, false);
  const auto x = oracle::noise(100, 10);
  const auto r = process_stream(cfg, pass_through(), x);
  EXPECT_EQ(r.trace.hops, 7u);
  EXPECT_EQ(r.output, x);
}

TEST(DeepFir, DelayFilterCrossCorrelationPeak) {
  for (std::size_t k : {0u, 5u, 40u, 127u}) {
    const auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0, 128, false);
    const auto x = oracle::noise(4000, 11);
    const auto y = process_stream(cfg, delay_head(k), x).output;
    std::size_t best = 0;
    double best_v = -1.0;
    for (std::size_t lag = 0; lag < 200; ++lag) {
      double acc = 0.0;
      for (std::size_t n = lag; n < x.size(); ++n) acc += y[n] * x[n - lag];
      if (acc > best_v) {
        best_v = acc;
        best = lag;
      }
    }
    EXPECT_EQ(best, k);
  }
}

TEST(DeepFir, LinearWithPinnedFilters) {
  const auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0, 128, false);
  DeepFirEngine e1(cfg, pass_through()), e2(cfg, pass_through());
  const auto x = oracle::noise(800, 12);
  for (std::size_t i = 0; i < x.size(); i += 16) {
    const FirFilter f{oracle::noise(128, 1000 + i, 0.1), PhaseKind::linear};
    std::vector<double> in2(16), o1(16), o2(16);
    for (std::size_t j = 0; j < 16; ++j) in2[j] = 0.25 * x[i + j];
    e1.process_hop_with_filter(std::span(x).subspan(i, 16), f, o1);
    e2.process_hop_with_filter(in2, f, o2);
    for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(o2[j], 0.25 * o1[j]);
  }
}

TEST(DeepFir, ChunkInvariance) {
  const auto w = shared(random_weights(ModelDims{}, 21, 0.2f));
  const auto x = oracle::noise(3000, 13);
  for (bool mp : {false, true}) {
    const auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0, 128, mp);
    const auto whole = run_chunked(cfg, w, x, x.size());
    EXPECT_EQ(run_chunked(cfg, w, x, 1), whole);
    EXPECT_EQ(run_chunked(cfg, w, x, 7), whole);
    EXPECT_EQ(process_stream(cfg, w, x).output, whole);
  }
}

TEST(DeepFir, SerialAndParallelBackendsAgree) {
  const auto w = shared(random_weights(ModelDims{}, 22, 0.2f));
  const auto x = oracle::noise(2000, 14);
  auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0);
  cfg.backend = Backend::serial;
  const auto a = process_stream(cfg, w, x).output;
  cfg.backend = Backend::parallel;
  EXPECT_EQ(process_stream(cfg, w, x).output, a);
}

TEST(DeepFir, RejectsWrongHeadAndChunk) {
  const auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0);
  EXPECT_THROW(DeepFirEngine(cfg, pass_through(HeadKind::mask)), InvalidArgument);
  ModelDims d;
  d.out_dim = 64;
  EXPECT_THROW(DeepFirEngine(cfg, shared(zero_weights(d))), InvalidArgument);
  DeepFirEngine e(cfg, pass_through());
  std::vector<double> in(15), out(16);
  EXPECT_THROW(e.process_hop(in, out), InvalidArgument);
}

TEST(DeepFir, StateSizeIndependentOfStreamLength) {
  const auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0, 128, false);
  DeepFirEngine e(cfg, pass_through());
  const auto before = e.model_state().concat.capacity() + e.model_state().gates.capacity();
  const auto x = oracle::noise(16000, 15);
  std::vector<double> o(16);
  for (std::size_t i = 0; i < x.size(); i += 16) e.process_hop(std::span(x).subspan(i, 16), o);
  EXPECT_EQ(e.model_state().concat.capacity() + e.model_state().gates.capacity(), before);
}
