// One PASS/FAIL line per primary acceptance criterion. Exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "deepfir/dsp.hpp"
#include "deepfir/engine.hpp"
#include "deepfir/latency.hpp"
#include "deepfir/metrics.hpp"
#include "deepfir/minphase.hpp"
#include "deepfir/model.hpp"
#include "deepfir/wav.hpp"

using namespace deepfir;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s < budget_s;
  const bool ok = o.pass && in_time;
  failures += !ok;
  std::printf("%s %-22s %6.2fs/%-4gs %s%s\n", ok ? "PASS" : "FAIL", name, s, budget_s, o.detail.c_str(),
              in_time ? "" : " [over time budget]");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 0.1);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::shared_ptr<const ModelWeights> shared(ModelWeights w) {
  return std::make_shared<const ModelWeights>(std::move(w));
}

ModelDims mask_dims() {
  ModelDims d;
  d.head = HeadKind::mask;
  d.out_dim = kFeatureDim;
  return d;
}

Outcome latency_arithmetic() {
  bool ok = true;
  std::string detail;
  for (const auto& r : reproduce_table1()) {
    if (r.type == "Deep FIR") {
      ok = ok && r.end_to_end_matches && r.algorithmic_matches;
      detail += fmt("%g:%.4g/%.4g ", r.synthesis_ms, r.computed.algorithmic_ms, r.computed.end_to_end_ms);
    } else if (r.flagged_discrepant) {
      detail += fmt("flagged %s %g (%.3g vs %.3g) ", r.type.c_str(), r.synthesis_ms, r.computed.end_to_end_ms,
                    r.paper_end_to_end_ms);
    }
  }
  int flagged = 0;
  for (const auto& r : reproduce_table1()) {
    const bool expect_flag = (r.type == "LSTW" && (r.synthesis_ms == 1.0 || r.synthesis_ms == 4.0)) || r.type == "OLA";
    ok = ok && (r.flagged_discrepant == expect_flag);
    flagged += r.flagged_discrepant;
  }
  return {ok && flagged == 3, detail};
}

Outcome linear_phase_group_delay() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> h(128);
  for (std::size_t i = 0; i < 64; ++i) h[i] = h[127 - i] = u(rng);
  const auto gd = group_delay(FirFilter{h, PhaseKind::linear});
  return {std::abs(gd.mean_samples - 63.5) < 1e-6 && std::abs(gd.mean_ms - 4.0) < 0.05,
          fmt("mean %.6f samples = %.5f ms", gd.mean_samples, gd.mean_ms)};
}

// The suite runs on the literal population (iid sigmoid of standard-normal
// logits). Such filters have spectral zeros close to the unit circle, where
// the log spectrum is aliased unless the cepstral FFT is long; 4x padding
// leaves ~0.17 relative magnitude error. 2^18 points is the longest FFT that
// fits the time budget on one core. A few filters in every draw have zeros
// within ~1e-7 of the circle and stay above the idempotence bound at any
// affordable length, so the counts of violating filters are printed.
Outcome minphase_suite() {
  constexpr std::size_t kNfft = std::size_t{1} << 18;
  constexpr int kFilters = 200;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> z(0.0, 1.0);
  double worst_mag = 0.0, worst_idem = 0.0, worst_front = 0.0;
  int reduced = 0, bad_mag = 0, bad_idem = 0, bad_front = 0;
  for (int i = 0; i < kFilters; ++i) {
    std::vector<double> h(128);
    for (auto& t : h) t = 1.0 / (1.0 + std::exp(-z(rng)));
    const FirFilter f{h, PhaseKind::linear};
    const auto m = to_minimum_phase(f, kNfft);
    const auto mm = to_minimum_phase(m, kNfft);

    const auto a = rfft(h, 8192);
    const auto b = rfft(m.taps, 8192);
    double peak = 0.0, dev = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      peak = std::max(peak, std::abs(a[k]));
      dev = std::max(dev, std::abs(std::abs(a[k]) - std::abs(b[k])));
    }
    worst_mag = std::max(worst_mag, dev / peak);
    bad_mag += dev / peak >= 1e-3;
    double idem = 0.0;
    for (std::size_t n = 0; n < 128; ++n) idem = std::max(idem, std::abs(mm.taps[n] - m.taps[n]));
    worst_idem = std::max(worst_idem, idem);
    bad_idem += idem >= 1e-6;
    double eh = 0.0, em = 0.0, front = 0.0;
    for (std::size_t n = 0; n < 128; ++n) {
      eh += h[n] * h[n];
      em += m.taps[n] * m.taps[n];
      front = std::max(front, eh - em);
    }
    worst_front = std::max(worst_front, front);
    bad_front += front > 1e-6;
    reduced += group_delay(m).mean_samples < group_delay(f).mean_samples;
  }
  const double frac = static_cast<double>(reduced) / kFilters;
  const bool ok = worst_mag < 1e-3 && frac >= 0.99 && worst_idem < 1e-6 && worst_front <= 1e-6;
  return {ok, fmt("nfft=%zu worst (filters over bound): mag %.2e (%d) idem %.2e (%d) front %.2e (%d) "
                  "gd-reduced %.1f%%",
                  kNfft, worst_mag, bad_mag, worst_idem, bad_idem, worst_front, bad_front, 100.0 * frac)};
}

Outcome ola_cola() {
  const auto cfg = StreamConfig::for_mode(Mode::ola, 16.0);
  const auto w = shared(pass_through_weights(mask_dims()));
  const auto x = noise(160000, 5);
  const auto y = process_stream(cfg, w, x).output;
  const std::size_t d = 128;
  double se = 0.0;
  std::size_t count = 0;
  for (std::size_t n = 256; n + d < x.size(); ++n, ++count) se += std::pow(y[n + d] - x[n], 2);
  const double rms = std::sqrt(se / static_cast<double>(count));
  return {rms < 1e-6, fmt("rms error %.3e over 10 s", rms)};
}

std::vector<double> chunked(const StreamConfig& cfg, std::shared_ptr<const ModelWeights> w,
                            const std::vector<double>& x, std::size_t chunk) {
  auto p = make_processor(cfg, std::move(w));
  StreamRunner r(*p);
  std::vector<double> out;
  for (std::size_t i = 0; i < x.size(); i += chunk) r.push(std::span(x).subspan(i, std::min(chunk, x.size() - i)), out);
  r.finish(out);
  out.resize(x.size());
  return out;
}

Outcome streaming_invariance() {
  const auto x = noise(8000, 6);
  const auto taps = shared(random_weights(ModelDims{}, 11, 0.2f));
  const auto mask = shared(random_weights(mask_dims(), 12, 0.2f));
  const std::pair<StreamConfig, std::shared_ptr<const ModelWeights>> cases[] = {
      {StreamConfig::for_mode(Mode::deepfir, 1.0, 128, true), taps},
      {StreamConfig::for_mode(Mode::deepfir, 1.0, 128, false), taps},
      {StreamConfig::for_mode(Mode::lstw, 2.0), mask},
      {StreamConfig::for_mode(Mode::ola, 16.0), mask},
  };
  bool ok = true;
  std::string detail;
  for (const auto& [cfg, w] : cases) {
    const auto whole = chunked(cfg, w, x, x.size());
    const bool same = chunked(cfg, w, x, 1) == whole && chunked(cfg, w, x, 7) == whole;
    ok = ok && same;
    detail += fmt("%s%s:%s ", to_string(cfg.mode).c_str(),
                  cfg.mode == Mode::deepfir ? (cfg.min_phase ? "/min" : "/lin") : "", same ? "identical" : "DIFFERS");
  }
  return {ok, detail};
}

Outcome identity_path() {
  WavAudio in;
  for (double v : noise(16000, 7)) in.samples.push_back(from_pcm16(to_pcm16(v)));
  const auto w = shared(pass_through_weights(ModelDims{}));
  std::string detail;
  bool ok = true;
  for (bool mp : {true, false}) {
    const auto cfg = StreamConfig::for_mode(Mode::deepfir, 1.0, 128, mp);
    const auto y = process_stream(cfg, w, in.samples).output;
    const auto back = parse_wav(encode_wav(WavAudio{y, kSampleRate, 1}));
    int worst = 0;
    for (std::size_t i = 0; i < in.samples.size(); ++i) {
      worst = std::max(worst, std::abs(to_pcm16(back.samples[i]) - to_pcm16(in.samples[i])));
    }
    ok = ok && worst <= 1;
    detail += fmt("%s: max %d LSB%s ", mp ? "min-phase" : "linear", worst, y == in.samples ? " (bit-exact)" : "");
  }
  return {ok, detail};
}

Outcome metrics_suite() {
  const auto ref = noise(16000, 8);
  auto est = noise(16000, 9);
  for (std::size_t i = 0; i < est.size(); ++i) est[i] = 0.7 * ref[i] + est[i];
  const double base = si_sdr(ref, est);
  bool scale_exact = true;
  for (double g : {2.0, 0.25, -1.0, 64.0}) {
    std::vector<double> s(est);
    for (auto& v : s) v *= g;
    scale_exact = scale_exact && si_sdr(ref, s) == base;
  }
  // Equal-power noise orthogonal to the reference.
  auto n = noise(16000, 10);
  double rn = 0.0, rr = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    rn += ref[i] * n[i];
    rr += ref[i] * ref[i];
  }
  double nn = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    n[i] -= rn / rr * ref[i];
    nn += n[i] * n[i];
  }
  std::vector<double> noisy(ref);
  for (std::size_t i = 0; i < n.size(); ++i) noisy[i] += n[i] * std::sqrt(rr / nn);
  const double zero_db = si_sdr(ref, noisy);

  const auto spec = stft(ref);
  const double self = compressed_spectral_loss(spec, spec);
  SpectrogramBatch a, b;
  a.batch = a.bins = a.frames = b.batch = b.bins = b.frames = 1;
  a.data = {1.0};
  b.data = {-1.0};
  const double flip = compressed_spectral_loss(a, b, LossConfig{0.3, 0.85});
  const bool ok = scale_exact && std::abs(zero_db) < 0.01 && self == 0.0 && std::abs(flip - 3.4) < 1e-9;
  return {ok, fmt("scale-exact %s, orthogonal %.2e dB, self-loss %g, phase-flip %.12f", scale_exact ? "yes" : "no",
                  zero_db, self, flip)};
}

Outcome mips_model() {
  const auto c = calibrate_fixed_cost(StreamConfig::for_mode(Mode::deepfir, 1.0), 388.0,
                                      deepfir_per_sample_cost(128), "deepfir 1 ms");
  bool ok = true;
  std::string detail;
  const std::pair<double, double> rows[] = {{0.5, 728}, {0.25, 1407}, {0.125, 2742}, {0.0625, 5485}};
  for (auto [ms, paper] : rows) {
    const double m = estimate_mips(c, StreamConfig::for_mode(Mode::deepfir, ms));
    const double err = std::abs(m - paper) / paper;
    ok = ok && err < 0.15;
    detail += fmt("%g:%.0f(%+.1f%%) ", ms, m, 100.0 * (m - paper) / paper);
  }
  const auto l = calibrate_fixed_cost(StreamConfig::for_mode(Mode::lstw, 4.0), 222.0, 0.0, "lstw 4 ms");
  const double m2 = estimate_mips(l, StreamConfig::for_mode(Mode::lstw, 2.0));
  const double m1 = estimate_mips(l, StreamConfig::for_mode(Mode::lstw, 1.0));
  ok = ok && std::abs(m2 - 444.0) < 1e-9 && std::abs(m1 - 888.0) < 1e-9;
  detail += fmt("lstw 222/%.0f/%.0f", m2, m1);
  return {ok, detail};
}

Outcome throughput() {
  const auto w = shared(random_weights(ModelDims{}, 13, 0.1f));
  const auto r = measure_realtime(StreamConfig::for_mode(Mode::deepfir, 1.0), w, 10.0);
  return {r.real_time_factor < 1.0,
          fmt("rtf %.3f, mean %.0f us, p95 %.0f us per 1000 us hop, inference %.0f%% (DSP figures not reproducible "
              "off-silicon)",
              r.real_time_factor, r.mean_us, r.p95_us, 100.0 * r.inference_fraction)};
}

}  // namespace

int main() {
  criterion("latency-arithmetic", 1, latency_arithmetic);
  criterion("linear-phase-delay", 1, linear_phase_group_delay);
  criterion("minphase-suite", 10, minphase_suite);
  criterion("ola-cola", 5, ola_cola);
  criterion("streaming-invariance", 30, streaming_invariance);
  criterion("identity-path", 5, identity_path);
  criterion("metrics-suite", 5, metrics_suite);
  criterion("mips-model", 1, mips_model);
  criterion("throughput", 60, throughput);
  std::printf("%d failure(s)\n", failures);
  return failures;
}
