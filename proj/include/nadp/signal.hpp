#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nadp {

inline constexpr int kSampleRateHz = 8000;

/// Mono PCM signal with amplitudes normalized to [-1, 1].
struct SampleBuffer {
  std::vector<double> samples;
  int sample_rate_hz = kSampleRateHz;
};

/// One fixed-length slice of a signal. The last frame of a stream may carry
/// trailing zeros; `padding` counts them.
struct Frame {
  std::size_t index = 0;
  std::vector<double> samples;
  std::size_t padding = 0;
};

// WAV I/O. Only RIFF/WAVE, PCM tag 1, mono, 8000 Hz, 16-bit is accepted;
// anything else raises Errc::UnsupportedFormat rather than being converted.
SampleBuffer load_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const SampleBuffer& buf);

SampleBuffer parse_wav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_wav(const SampleBuffer& buf);

/// Sample scaling used by the WAV layer: s / 32768 and its saturating,
/// round-to-nearest inverse.
double pcm16_to_real(std::int16_t s);
std::int16_t real_to_pcm16(double x);

/// Splits into ceil(N / frame_len) frames, zero-padding the last one.
std::vector<Frame> frame_signal(const SampleBuffer& buf, std::size_t frame_len);

/// Concatenates frames and drops the recorded padding.
SampleBuffer deframe(std::span<const Frame> frames);

}  // namespace nadp
