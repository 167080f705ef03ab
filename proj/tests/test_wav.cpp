#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "deepfir/errors.hpp"
#include "deepfir/wav.hpp"

using namespace deepfir;

namespace {

std::vector<std::byte> header_with(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                                   std::uint16_t bits, std::size_t data_bytes) {
  WavAudio a;
  a.samples.assign(data_bytes / 2, 0.0);
  auto b = encode_wav(a);
  auto put16 = [&](std::size_t at, std::uint16_t v) { std::memcpy(b.data() + at, &v, 2); };
  auto put32 = [&](std::size_t at, std::uint32_t v) { std::memcpy(b.data() + at, &v, 4); };
  put16(20, format);
  put16(22, channels);
  put32(24, rate);
  put16(34, bits);
  return b;
}

std::string error_of(std::span<const std::byte> bytes) {
  try {
    parse_wav(bytes);
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Wav, Pcm16Conversion) {
  EXPECT_EQ(to_pcm16(0.0), 0);
  EXPECT_EQ(to_pcm16(1.0), 32767);
  EXPECT_EQ(to_pcm16(-1.0), -32768);
  EXPECT_EQ(to_pcm16(2.0), 32767);
  EXPECT_EQ(to_pcm16(100.0 / 32768.0), 100);
  for (int v : {-32768, -1, 0, 1, 12345, 32767}) EXPECT_EQ(to_pcm16(from_pcm16(static_cast<std::int16_t>(v))), v);
}

TEST(Wav, RoundTripIsBitExact) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(-32768, 32767);
  WavAudio a;
  for (int i = 0; i < 5000; ++i) a.samples.push_back(from_pcm16(static_cast<std::int16_t>(d(rng))));
  const auto path = std::filesystem::temp_directory_path() / "deepfir_wav_rt.wav";
  write_wav(path, a);
  const auto b = read_wav(path);
  std::filesystem::remove(path);
  EXPECT_EQ(b.samples, a.samples);
  EXPECT_EQ(b.sample_rate, 16000u);
  EXPECT_EQ(b.channels, 1);
}

TEST(Wav, SkipsUnknownChunks) {
  WavAudio a;
  a.samples = {0.5, -0.25};
  auto b = encode_wav(a);
  const char extra[] = {'L', 'I', 'S', 'T', 3, 0, 0, 0, 'a', 'b', 'c', 0};
  std::vector<std::byte> withlist(b.begin(), b.begin() + 36);
  for (char c : extra) withlist.push_back(static_cast<std::byte>(c));
  withlist.insert(withlist.end(), b.begin() + 36, b.end());
  EXPECT_EQ(parse_wav(withlist).samples, a.samples);
}

TEST(Wav, RejectionsNameTheProblem) {
  EXPECT_NE(error_of(header_with(1, 1, 44100, 16, 8)).find("44100"), std::string::npos);
  EXPECT_NE(error_of(header_with(1, 2, 16000, 16, 8)).find("channels"), std::string::npos);
  EXPECT_NE(error_of(header_with(3, 1, 16000, 32, 8)).find("PCM"), std::string::npos);
  EXPECT_NE(error_of(header_with(1, 1, 16000, 24, 8)).find("24-bit"), std::string::npos);
  auto ok = header_with(1, 1, 16000, 16, 8);
  EXPECT_NE(error_of(std::span(ok).first(10)).find("truncated"), std::string::npos);
  EXPECT_NE(error_of(std::span(ok).first(30)).find("truncated"), std::string::npos);
  EXPECT_NE(error_of(std::span(ok).first(46)).find("truncated"), std::string::npos);
  auto riff = ok;
  riff[0] = std::byte{'X'};
  EXPECT_NE(error_of(riff).find("RIFF"), std::string::npos);
  EXPECT_THROW(read_wav("/nonexistent/file.wav"), FormatError);
}
