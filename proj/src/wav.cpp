#include "deepfir/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "deepfir/errors.hpp"

namespace deepfir {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const std::byte* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const std::byte* p) {
  return static_cast<std::uint16_t>(static_cast<unsigned>(p[0]) | (static_cast<unsigned>(p[1]) << 8));
}

bool tag_is(const std::byte* p, const char* tag) { return std::memcmp(p, tag, 4) == 0; }

void put32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

void put16(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(static_cast<std::byte>(v & 0xFF));
  out.push_back(static_cast<std::byte>(v >> 8));
}

void put_tag(std::vector<std::byte>& out, const char* tag) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(tag[i]));
}

}  // namespace

std::int16_t to_pcm16(double x) {
  const double scaled = std::nearbyint(x * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

WavAudio parse_wav(std::span<const std::byte> bytes, std::uint32_t required_rate) {
  if (bytes.size() < 12) throw FormatError("wav: truncated header");
  if (!tag_is(bytes.data(), "RIFF") || !tag_is(bytes.data() + 8, "WAVE")) {
    throw FormatError("wav: not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::byte* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (tag_is(chunk, "fmt ")) {
      if (size < 16 || body + size > bytes.size()) throw FormatError("wav: truncated fmt chunk");
      const std::byte* f = bytes.data() + body;
      std::uint16_t format = le16(f);
      channels = le16(f + 2);
      rate = le32(f + 4);
      bits = le16(f + 14);
      if (format == kFormatExtensible && size >= 40) format = le16(f + 24);
      if (format != kFormatPcm) {
        throw FormatError("wav: format tag " + std::to_string(format) + " is not integer PCM");
      }
      if (channels != 1) {
        throw FormatError("wav: " + std::to_string(channels) + " channels, only mono is supported");
      }
      if (bits != 16) {
        throw FormatError("wav: " + std::to_string(bits) + "-bit samples, only PCM16 is supported");
      }
      if (rate != required_rate) {
        throw FormatError("wav: sample rate " + std::to_string(rate) + " Hz, expected " +
                          std::to_string(required_rate) + " Hz");
      }
      have_fmt = true;
    } else if (tag_is(chunk, "data")) {
      if (!have_fmt) throw FormatError("wav: data chunk before fmt chunk");
      if (body + size > bytes.size()) throw FormatError("wav: truncated data chunk");
      WavAudio audio;
      audio.sample_rate = rate;
      audio.channels = channels;
      audio.samples.resize(size / 2);
      for (std::size_t i = 0; i < audio.samples.size(); ++i) {
        audio.samples[i] = from_pcm16(static_cast<std::int16_t>(le16(bytes.data() + body + 2 * i)));
      }
      return audio;
    }
    pos = body + size + (size & 1u);
  }
  throw FormatError(have_fmt ? "wav: missing data chunk" : "wav: truncated header (no fmt chunk)");
}

WavAudio read_wav(const std::filesystem::path& path, std::uint32_t required_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("wav: cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_wav(std::as_bytes(std::span(raw)), required_rate);
}

std::vector<std::byte> encode_wav(const WavAudio& audio) {
  if (audio.channels != 1) throw InvalidArgument("wav: only mono output is supported");
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::vector<std::byte> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, audio.sample_rate);
  put32(out, audio.sample_rate * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_bytes);
  for (double x : audio.samples) put16(out, static_cast<std::uint16_t>(to_pcm16(x)));
  return out;
}

void write_wav(const std::filesystem::path& path, const WavAudio& audio) {
  const auto bytes = encode_wav(audio);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("wav: cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("wav: write failed for " + path.string());
}

}  // namespace deepfir
