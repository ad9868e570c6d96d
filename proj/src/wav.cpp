#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "nadp/error.hpp"
#include "nadp/file_util.hpp"
#include "nadp/signal.hpp"

namespace nadp {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

bool tag_is(std::span<const std::uint8_t> bytes, std::size_t offset, const char* tag) {
  return std::memcmp(bytes.data() + offset, tag, 4) == 0;
}

}  // namespace

double pcm16_to_real(std::int16_t s) { return static_cast<double>(s) / 32768.0; }

std::int16_t real_to_pcm16(double x) {
  const double scaled = std::nearbyint(x * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

SampleBuffer parse_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) throw Error(Errc::CorruptFile, "file shorter than RIFF header");
  if (!tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE"))
    throw Error(Errc::UnsupportedFormat, "not a RIFF/WAVE file");

  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = get_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (chunk_size > bytes.size() - body)
      throw Error(Errc::CorruptFile, "chunk extends past end of file");

    if (tag_is(bytes, pos, "fmt ")) {
      if (chunk_size < 16) throw Error(Errc::CorruptFile, "fmt chunk too short");
      const std::uint16_t format = get_u16(bytes, body);
      const std::uint16_t channels = get_u16(bytes, body + 2);
      const std::uint32_t rate = get_u32(bytes, body + 4);
      const std::uint16_t bits = get_u16(bytes, body + 14);
      if (format != kFormatPcm)
        throw Error(Errc::UnsupportedFormat, "format tag " + std::to_string(format) + " is not PCM");
      if (channels != 1)
        throw Error(Errc::UnsupportedFormat, std::to_string(channels) + " channels, expected mono");
      if (rate != static_cast<std::uint32_t>(kSampleRateHz))
        throw Error(Errc::UnsupportedFormat, std::to_string(rate) + " Hz, expected 8000 Hz");
      if (bits != 16)
        throw Error(Errc::UnsupportedFormat, std::to_string(bits) + "-bit samples, expected 16-bit");
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      if (!have_fmt) throw Error(Errc::CorruptFile, "data chunk before fmt chunk");
      if (chunk_size % 2 != 0) throw Error(Errc::CorruptFile, "odd data chunk size for 16-bit PCM");
      SampleBuffer buf;
      buf.samples.resize(chunk_size / 2);
      for (std::size_t i = 0; i < buf.samples.size(); ++i)
        buf.samples[i] = pcm16_to_real(static_cast<std::int16_t>(get_u16(bytes, body + 2 * i)));
      return buf;
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (pos < bytes.size()) throw Error(Errc::CorruptFile, "truncated chunk header");
  throw Error(Errc::CorruptFile, have_fmt ? "missing data chunk" : "missing fmt chunk");
}

std::vector<std::uint8_t> serialize_wav(const SampleBuffer& buf) {
  const auto data_bytes = static_cast<std::uint32_t>(buf.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  auto tag = [&out](const char* t) { out.insert(out.end(), t, t + 4); };
  tag("RIFF");
  put_u32(out, 36 + data_bytes);
  tag("WAVE");
  tag("fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, kSampleRateHz);
  put_u32(out, kSampleRateHz * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  tag("data");
  put_u32(out, data_bytes);
  for (double s : buf.samples) put_u16(out, static_cast<std::uint16_t>(real_to_pcm16(s)));
  return out;
}

SampleBuffer load_wav(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file(path);
  } catch (const Error& e) {
    throw Error(Errc::IoFailure, e.what());
  }
  return parse_wav(bytes);
}

void write_wav(const std::filesystem::path& path, const SampleBuffer& buf) {
  write_file_atomic(path, serialize_wav(buf));
}

}  // namespace nadp
