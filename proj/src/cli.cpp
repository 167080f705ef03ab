#include "deepfir/cli.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numeric>
#include <optional>

#include "deepfir/engine.hpp"
#include "deepfir/errors.hpp"
#include "deepfir/latency.hpp"
#include "deepfir/metrics.hpp"
#include "deepfir/minphase.hpp"
#include "deepfir/model.hpp"
#include "deepfir/report.hpp"
#include "deepfir/wav.hpp"

namespace deepfir {
namespace {

constexpr long kMaxAlignLag = 128;

// Raised for argument combinations CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_color_mt("deepfir");
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("DEEPFIR_LOG_LEVEL")) l->set_level(spdlog::level::from_str(env));
    return l;
  }();
  return log;
}

std::vector<std::byte> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto bytes = std::as_bytes(std::span(raw));
  return {bytes.begin(), bytes.end()};
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw FormatError("cannot write " + path);
  f << j.dump(2) << '\n';
}

Backend parse_backend(const std::string& s) {
  return s == "serial" ? Backend::serial : Backend::parallel;
}

struct LoadedWeights {
  std::shared_ptr<const ModelWeights> weights;
  std::string digest;
};

LoadedWeights load_weights_with_digest(const std::string& path) {
  const auto bytes = read_file(path);
  LoadedWeights lw;
  lw.weights = std::make_shared<const ModelWeights>(load_weights(bytes));
  lw.digest = sha256_hex(bytes);
  return lw;
}

StreamConfig make_config(const std::string& mode, double synthesis_ms, std::size_t taps,
                         bool min_phase, std::size_t nfft, const std::string& backend) {
  try {
    StreamConfig c = StreamConfig::for_mode(parse_mode(mode), synthesis_ms, taps, min_phase);
    c.minphase_nfft = nfft;
    c.backend = parse_backend(backend);
    c.validate();
    return c;
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

// Scores `estimate` against `reference` after shifting by `lag`; the
// mixture, if any, is cut to the same reference samples.
Json score(std::span<const double> reference, std::span<const double> estimate,
           std::span<const double> mixture, long lag, const std::string& method) {
  const AlignedPair p = align(reference, estimate, lag);
  if (p.reference.empty()) throw InvalidArgument("eval: no overlap after alignment");
  Json j;
  j["alignment"] = {{"lag_samples", lag}, {"method", method}};
  j["scored_samples"] = p.reference.size();
  j["si_sdr_db"] = si_sdr(p.reference, p.estimate);
  if (!mixture.empty()) {
    const auto offset = static_cast<std::size_t>(p.reference.data() - reference.data());
    if (offset + p.reference.size() > mixture.size()) {
      throw InvalidArgument("eval: mixture is shorter than the reference");
    }
    const auto mix = mixture.subspan(offset, p.reference.size());
    j["si_sdr_mix_db"] = si_sdr(p.reference, mix);
    j["si_sdri_db"] = si_sdr_improvement(mix, p.reference, p.estimate);
  }
  if (p.reference.size() >= kLossWindow) {
    const LossConfig cfg;
    j["compressed_spectral_loss"] = compressed_spectral_loss(stft(p.reference), stft(p.estimate), cfg);
    j["loss_config"] = {{"alpha", cfg.alpha}, {"beta", cfg.beta}, {"stft_window", kLossWindow},
                        {"stft_hop", kLossHop}, {"stft_window_type", "sqrt-hann"}};
  } else {
    j["compressed_spectral_loss"] = nullptr;
  }
  return j;
}

// ---------------------------------------------------------------- process

struct ProcessArgs {
  std::string input, output, weights, report, ref, taps_out;
  std::string mode = "deepfir";
  std::string backend = "parallel";
  double synthesis_ms = 1.0;
  double hardware_ms = kDefaultHardwareMs;
  std::size_t taps = 128;
  std::size_t nfft = 0;
  bool min_phase = true;
};

int cmd_process(const ProcessArgs& a, std::ostream& out) {
  const StreamConfig config = make_config(a.mode, a.synthesis_ms, a.taps, a.min_phase, a.nfft, a.backend);
  const LoadedWeights lw = load_weights_with_digest(a.weights);
  const WavAudio input = read_wav(a.input);

  auto processor = make_processor(config, lw.weights);
  StreamRunner runner(*processor);
  std::vector<HopTiming> timings;
  std::vector<double> gd_ms;
  std::ofstream taps_file;
  if (!a.taps_out.empty()) {
    if (config.mode != Mode::deepfir) throw UsageError("--taps-out requires --mode deepfir");
    taps_file.open(a.taps_out, std::ios::binary | std::ios::trunc);
    if (!taps_file) throw FormatError("cannot write " + a.taps_out);
  }
  runner.set_hop_callback([&](const HopProcessor& p) {
    timings.push_back(p.last_timing());
    if (config.mode != Mode::deepfir) return;
    const auto& f = static_cast<const DeepFirEngine&>(p).current_filter();
    gd_ms.push_back(group_delay(f).mean_ms);
    if (taps_file.is_open()) {
      for (double t : f.taps) {
        const float v = static_cast<float>(t);
        taps_file.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
    }
  });

  WavAudio result;
  result.sample_rate = input.sample_rate;
  runner.push(input.samples, result.samples);
  runner.finish(result.samples);
  result.samples.resize(input.samples.size());
  write_wav(a.output, result);
  logger()->info("processed {} hops of {} samples", runner.hops_processed(), config.hop);

  const double mean_gd =
      gd_ms.empty() ? 0.0 : std::accumulate(gd_ms.begin(), gd_ms.end(), 0.0) / static_cast<double>(gd_ms.size());

  Json report;
  report["schema"] = kReportSchema;
  report["engine_version"] = kEngineVersion;
  report["config"] = to_json(config);
  report["weights"] = {{"sha256", lw.digest}, {"dims", to_json(lw.weights->dims)}};
  report["input"] = {{"path", a.input}, {"samples", input.samples.size()}};
  report["hops"] = runner.hops_processed();
  report["final_hop_policy"] = "zero-pad input, truncate output";
  if (config.mode == Mode::deepfir) {
    report["group_delay"] = {
        {"mean_ms", mean_gd},
        {"min_ms", gd_ms.empty() ? 0.0 : *std::min_element(gd_ms.begin(), gd_ms.end())},
        {"max_ms", gd_ms.empty() ? 0.0 : *std::max_element(gd_ms.begin(), gd_ms.end())},
        {"weighting", "magnitude"},
        {"floor_db", -60.0},
        {"hops", gd_ms.size()},
    };
  }
  report["latency"] = to_json(end_to_end_latency(config, mean_gd, a.hardware_ms));
  report["mips_estimate"] = {
      {"mips", estimate_mips(first_principles_cost(config, lw.weights->dims), config)},
      {"cost_model", to_json(first_principles_cost(config, lw.weights->dims))}};
  report["timing"] = to_json(summarize_timings(timings, config.hop_ms() * 1000.0));

  if (!a.ref.empty()) {
    const WavAudio ref = read_wav(a.ref);
    long lag = static_cast<long>(processor->stream_delay());
    std::string method = "fixed";
    if (config.mode == Mode::deepfir) {
      if (config.min_phase) {
        lag = best_lag(ref.samples, result.samples, kMaxAlignLag);
        method = "best-lag";
      } else {
        lag = static_cast<long>(config.taps / 2);
      }
    }
    Json m = score(ref.samples, result.samples, input.samples, lag, method);
    if (method == "best-lag") {
      m["note"] = "minimum-phase output scored after best-lag alignment; phase changes bias SI-SDR";
    }
    report["metrics"] = std::move(m);
  }

  if (!a.report.empty()) {
    write_json(report, a.report);
  } else {
    out << report.dump(2) << '\n';
  }
  return kExitOk;
}

// ------------------------------------------------------------------- eval

struct EvalArgs {
  std::string ref, est, mix;
  long lag = 0;
  bool search_lag = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const WavAudio ref = read_wav(a.ref);
  const WavAudio est = read_wav(a.est);
  std::vector<double> mix;
  if (!a.mix.empty()) mix = read_wav(a.mix).samples;
  long lag = a.lag;
  std::string method = "fixed";
  if (a.search_lag) {
    lag = best_lag(ref.samples, est.samples, kMaxAlignLag);
    method = "best-lag";
  }
  Json j = score(ref.samples, est.samples, mix, lag, method);
  j["schema"] = kReportSchema;
  out << j.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- latency

struct LatencyArgs {
  std::string mode = "deepfir";
  double synthesis_ms = 1.0;
  double group_delay_ms = kDefaultGroupDelayMs;
  double hardware_ms = kDefaultHardwareMs;
  std::size_t taps = 128;
  bool table1 = false;
};

int cmd_latency(const LatencyArgs& a, std::ostream& out) {
  Json j;
  j["schema"] = kReportSchema;
  if (a.table1) {
    Json rows = Json::array();
    for (const auto& r : reproduce_table1(a.group_delay_ms, a.hardware_ms)) rows.push_back(to_json(r));
    j["table1"] = std::move(rows);
    j["assumptions"] = {{"group_delay_ms", a.group_delay_ms},
                        {"hardware_ms", a.hardware_ms},
                        {"tolerance_ms", kTable1Tolerance},
                        {"formula", "synthesis + group delay + hop + hardware"}};
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  const StreamConfig config = make_config(a.mode, a.synthesis_ms, a.taps, true, 0, "serial");
  if (!(a.group_delay_ms >= 0.0) || !(a.hardware_ms >= 0.0)) {
    throw UsageError("latency inputs must be nonnegative");
  }
  j["config"] = to_json(config);
  j["latency"] = to_json(end_to_end_latency(config, a.group_delay_ms, a.hardware_ms));
  const CostModel cost = first_principles_cost(config, ModelDims{.out_dim = static_cast<std::uint32_t>(
                                                                     config.mode == Mode::deepfir ? a.taps : kFeatureDim),
                                                                 .head = config.mode == Mode::deepfir ? HeadKind::taps : HeadKind::mask});
  j["mips_estimate"] = {{"mips", estimate_mips(cost, config)}, {"cost_model", to_json(cost)}};
  out << j.dump(2) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ bench

struct BenchArgs {
  std::string weights;
  std::string mode = "deepfir";
  std::string backend = "parallel";
  double seconds = 10.0;
  double synthesis_ms = 1.0;
  std::size_t taps = 128;
  bool min_phase = true;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const StreamConfig config = make_config(a.mode, a.synthesis_ms, a.taps, a.min_phase, 0, a.backend);
  if (!(a.seconds > 0.0)) throw UsageError("--seconds must be positive");
  const LoadedWeights lw = load_weights_with_digest(a.weights);
  const TimingReport t = measure_realtime(config, lw.weights, a.seconds);
  Json j;
  j["schema"] = kReportSchema;
  j["config"] = to_json(config);
  j["weights"] = {{"sha256", lw.digest}};
  j["seconds"] = a.seconds;
  j["threads"] = kernels::max_threads();
  j["timing"] = to_json(t);
  j["note"] = "wall-clock on this machine; not comparable to DSP cycle counts";
  out << j.dump(2) << '\n';
  return kExitOk;
}

// -------------------------------------------------------- inspect / init

int cmd_inspect(const std::string& path, std::ostream& out) {
  const auto bytes = read_file(path);
  const ModelWeights w = load_weights(bytes);
  Json j = to_json(w.dims);
  j["schema"] = kReportSchema;
  j["format"] = "DFW1";
  j["version"] = 1;
  j["sha256"] = sha256_hex(bytes);
  j["bytes"] = bytes.size();
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct InitArgs {
  std::string out;
  std::string kind = "pass-through";
  std::string head = "taps";
  std::uint64_t seed = 1;
  float scale = 0.1f;
  std::uint32_t hidden = 200;
  std::uint32_t fc_dim = 128;
  std::uint32_t taps = 128;
};

int cmd_init(const InitArgs& a, std::ostream& out) {
  ModelDims d;
  d.hidden = a.hidden;
  d.fc_dim = a.fc_dim;
  d.head = a.head == "mask" ? HeadKind::mask : HeadKind::taps;
  d.out_dim = d.head == HeadKind::mask ? static_cast<std::uint32_t>(kFeatureDim) : a.taps;
  ModelWeights w;
  if (a.kind == "pass-through") {
    w = pass_through_weights(d);
  } else if (a.kind == "zero") {
    w = zero_weights(d);
  } else {
    w = random_weights(d, a.seed, a.scale);
  }
  save_weights_file(w, a.out);
  Json j = to_json(d);
  j["schema"] = kReportSchema;
  j["path"] = a.out;
  j["kind"] = a.kind;
  out << j.dump(2) << '\n';
  return kExitOk;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Low-latency Deep FIR speech enhancement engine"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  const auto modes = CLI::IsMember({"deepfir", "lstw", "ola"});
  const auto backends = CLI::IsMember({"serial", "parallel"});

  ProcessArgs pa;
  auto* process = app.add_subcommand(
      "process",
      "Enhance a 16 kHz mono PCM16 WAV. The final partial hop is zero-padded and the output "
      "is truncated to the input length.");
  process->add_option("--input", pa.input, "Input WAV")->required()->check(CLI::ExistingFile);
  process->add_option("--output", pa.output, "Output WAV")->required();
  process->add_option("--weights", pa.weights, "DFW1 weight file")->required()->check(CLI::ExistingFile);
  process->add_option("--mode", pa.mode, "deepfir | lstw | ola")->check(modes)->capture_default_str();
  process->add_option("--synthesis-ms", pa.synthesis_ms, "Synthesis window in ms")->capture_default_str();
  process->add_option("--taps", pa.taps, "FIR taps (deepfir)")->capture_default_str();
  process->add_flag("--min-phase,!--linear-phase", pa.min_phase, "Minimum-phase conversion (default on)");
  process->add_option("--minphase-nfft", pa.nfft, "Cepstral FFT size (0 = 4 x taps)")->capture_default_str();
  process->add_option("--backend", pa.backend, "serial | parallel kernels")->check(backends)->capture_default_str();
  process->add_option("--hardware-ms", pa.hardware_ms, "Hardware latency for the report")->capture_default_str();
  process->add_option("--report", pa.report, "Write the JSON run report here instead of stdout");
  process->add_option("--ref", pa.ref, "Clean reference WAV for metrics")->check(CLI::ExistingFile);
  process->add_option("--taps-out", pa.taps_out, "Dump per-hop taps as little-endian float32");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "SI-SDR, SI-SDRi and compressed spectral loss");
  eval->add_option("--ref", ea.ref, "Reference WAV")->required()->check(CLI::ExistingFile);
  eval->add_option("--est", ea.est, "Estimate WAV")->required()->check(CLI::ExistingFile);
  eval->add_option("--mix", ea.mix, "Unprocessed mixture WAV (enables SI-SDRi)")->check(CLI::ExistingFile);
  eval->add_option("--lag", ea.lag, "Shift the estimate earlier by this many samples")->capture_default_str();
  eval->add_flag("--search-lag", ea.search_lag, "Pick the best lag within +/-128 samples");

  LatencyArgs la;
  auto* latency = app.add_subcommand("latency", "Latency decomposition and MIPS estimate");
  latency->add_option("--mode", la.mode, "deepfir | lstw | ola")->check(modes)->capture_default_str();
  latency->add_option("--synthesis-ms", la.synthesis_ms, "Synthesis window in ms")->capture_default_str();
  latency->add_option("--group-delay-ms", la.group_delay_ms, "Mean filter group delay (deepfir)")->capture_default_str();
  latency->add_option("--hardware-ms", la.hardware_ms, "Codec and transport latency")->capture_default_str();
  latency->add_option("--taps", la.taps, "FIR taps (deepfir)")->capture_default_str();
  latency->add_flag("--table1", la.table1, "Reproduce the published latency/MIPS table with discrepancy flags");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Wall-clock per-hop timing on this machine");
  bench->add_option("--weights", ba.weights, "DFW1 weight file")->required()->check(CLI::ExistingFile);
  bench->add_option("--seconds", ba.seconds, "Seconds of audio to process")->capture_default_str();
  bench->add_option("--mode", ba.mode, "deepfir | lstw | ola")->check(modes)->capture_default_str();
  bench->add_option("--synthesis-ms", ba.synthesis_ms, "Synthesis window in ms")->capture_default_str();
  bench->add_option("--taps", ba.taps, "FIR taps (deepfir)")->capture_default_str();
  bench->add_flag("--min-phase,!--linear-phase", ba.min_phase, "Minimum-phase conversion (default on)");
  bench->add_option("--backend", ba.backend, "serial | parallel kernels")->check(backends)->capture_default_str();

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect-weights", "Print DFW1 header dimensions and parameter count");
  inspect->add_option("--weights,weights", inspect_path, "DFW1 weight file")->required()->check(CLI::ExistingFile);

  InitArgs ia;
  auto* init = app.add_subcommand("init-weights", "Write a DFW1 file (pass-through, zero or random)");
  init->add_option("--out", ia.out, "Output path")->required();
  init->add_option("--kind", ia.kind, "pass-through | zero | random")
      ->check(CLI::IsMember({"pass-through", "zero", "random"}))
      ->capture_default_str();
  init->add_option("--head", ia.head, "taps | mask")->check(CLI::IsMember({"taps", "mask"}))->capture_default_str();
  init->add_option("--seed", ia.seed, "Seed for random weights")->capture_default_str();
  init->add_option("--scale", ia.scale, "Uniform range of random weights")->capture_default_str();
  init->add_option("--hidden", ia.hidden, "LSTM units")->capture_default_str();
  init->add_option("--fc-dim", ia.fc_dim, "Hidden dense width")->capture_default_str();
  init->add_option("--taps", ia.taps, "Taps for a taps head")->capture_default_str();

  std::vector<const char*> argv{"deepfir"};
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "deepfir: error: usage: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (*process) return cmd_process(pa, out);
    if (*eval) return cmd_eval(ea, out);
    if (*latency) return cmd_latency(la, out);
    if (*bench) return cmd_bench(ba, out);
    if (*inspect) return cmd_inspect(inspect_path, out);
    if (*init) return cmd_init(ia, out);
  } catch (const UsageError& e) {
    err << "deepfir: error: usage: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "deepfir: error: format: " << one_line(e.what()) << '\n';
    return kExitFailure;
  } catch (const InvalidArgument& e) {
    err << "deepfir: error: invalid-argument: " << one_line(e.what()) << '\n';
    return kExitFailure;
  } catch (const DegenerateFilter& e) {
    err << "deepfir: error: degenerate-filter: " << one_line(e.what()) << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "deepfir: error: internal: " << one_line(e.what()) << '\n';
    return kExitFailure;
  }
  err << "deepfir: error: usage: no subcommand\n";
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, out, err);
}

}  // namespace deepfir
