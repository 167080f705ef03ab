#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace deepfir {

inline constexpr std::uint32_t kSampleRate = 16000;

// Mono audio normalized to [-1, 1]; PCM16 values are scaled by 1/32768.
struct WavAudio {
  std::vector<double> samples;
  std::uint32_t sample_rate = kSampleRate;
  std::uint16_t channels = 1;
};

// Accepts only RIFF/WAVE PCM16 mono at `required_rate`. Throws FormatError
// naming the offending property.
WavAudio parse_wav(std::span<const std::byte> bytes, std::uint32_t required_rate = kSampleRate);
WavAudio read_wav(const std::filesystem::path& path, std::uint32_t required_rate = kSampleRate);

std::vector<std::byte> encode_wav(const WavAudio& audio);
void write_wav(const std::filesystem::path& path, const WavAudio& audio);

// Round to nearest, saturating at the PCM16 range.
std::int16_t to_pcm16(double x);
inline double from_pcm16(std::int16_t v) { return static_cast<double>(v) / 32768.0; }

}  // namespace deepfir
