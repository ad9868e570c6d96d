#include <cstring>
#include <string>

#include "nadp/codec.hpp"
#include "nadp/error.hpp"
#include "nadp/file_util.hpp"

namespace nadp {

namespace {

constexpr char kMagic[4] = {'N', 'A', 'D', 'P'};
constexpr std::uint32_t kMaxFrameLen = 1u << 20;

}  // namespace

std::string_view mode_name(PredictorMode mode) {
  switch (mode) {
    case PredictorMode::Mlp: return "mlp";
    case PredictorMode::Elman: return "elman";
    case PredictorMode::Rbf: return "rbf";
    case PredictorMode::CommitteeMean: return "committee_mean";
    case PredictorMode::CommitteeMedian: return "committee_median";
    case PredictorMode::LastSampleBaseline: return "last_sample_baseline";
  }
  return "?";
}

std::optional<PredictorMode> parse_mode(std::string_view name) {
  for (PredictorMode m : kAllModes)
    if (mode_name(m) == name) return m;
  return std::nullopt;
}

void CodecConfig::validate() const {
  if (nq < kMinBits || nq > kMaxBits)
    throw Error(Errc::InvalidConfig, "nq must be in 2..5, got " + std::to_string(nq));
  if (frame_len <= kOrder || frame_len > kMaxFrameLen)
    throw Error(Errc::InvalidConfig, "frame length must be in 11.." + std::to_string(kMaxFrameLen));
  if (static_cast<std::uint8_t>(mode) > static_cast<std::uint8_t>(PredictorMode::LastSampleBaseline))
    throw Error(Errc::InvalidConfig, "unknown predictor mode");
  if (epochs == 0) throw Error(Errc::InvalidConfig, "epochs must be positive");
}

std::uint64_t BitstreamHeader::padded_sample_count() const {
  const std::uint64_t f = config.frame_len;
  return (sample_count + f - 1) / f * f;
}

std::size_t BitstreamHeader::payload_bytes() const {
  return static_cast<std::size_t>((padded_sample_count() * static_cast<std::uint64_t>(config.nq) + 7) / 8);
}

std::vector<std::uint8_t> Bitstream::pack(std::span<const QuantizedCode> codes, int nq) {
  std::vector<std::uint8_t> out((codes.size() * static_cast<std::size_t>(nq) + 7) / 8, 0);
  std::size_t bit = 0;
  for (const QuantizedCode& c : codes) {
    const std::uint32_t sym = pack_code(c, nq);
    for (int b = nq - 1; b >= 0; --b, ++bit)
      if ((sym >> b) & 1u) out[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
  }
  return out;
}

std::vector<QuantizedCode> Bitstream::codes() const {
  const int nq = header.config.nq;
  const auto count = static_cast<std::size_t>(header.padded_sample_count());
  if (payload.size() < header.payload_bytes())
    throw Error(Errc::TruncatedPayload, "payload shorter than header implies");
  std::vector<QuantizedCode> out(count);
  std::size_t bit = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t sym = 0;
    for (int b = 0; b < nq; ++b, ++bit) sym = (sym << 1) | ((payload[bit / 8] >> (7 - bit % 8)) & 1u);
    out[i] = unpack_code(sym, nq);
  }
  return out;
}

std::vector<std::uint8_t> Bitstream::to_bytes() const {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put_u16(out, header.version);
  out.push_back(static_cast<std::uint8_t>(header.config.nq));
  out.push_back(static_cast<std::uint8_t>(header.config.mode));
  put_u16(out, header.config.epochs);
  put_u32(out, header.config.frame_len);
  put_u64(out, header.sample_count);
  put_u64(out, header.config.seed);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Bitstream Bitstream::from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw Error(Errc::BadMagic, "not an NADP bitstream");
  if (bytes.size() < kHeaderBytes) throw Error(Errc::TruncatedPayload, "header truncated");

  Bitstream bs;
  bs.header.version = get_u16(bytes, 4);
  if (bs.header.version != kBitstreamVersion)
    throw Error(Errc::VersionMismatch, "bitstream version " + std::to_string(bs.header.version) +
                                           ", expected " + std::to_string(kBitstreamVersion));
  CodecConfig& cfg = bs.header.config;
  cfg.nq = bytes[6];
  cfg.mode = static_cast<PredictorMode>(bytes[7]);
  cfg.epochs = get_u16(bytes, 8);
  cfg.frame_len = get_u32(bytes, 10);
  bs.header.sample_count = get_u64(bytes, 14);
  cfg.seed = get_u64(bytes, 22);
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(Errc::CorruptFile, std::string("header: ") + e.what());
  }

  const std::size_t need = bs.header.payload_bytes();
  const std::size_t have = bytes.size() - kHeaderBytes;
  if (have < need)
    throw Error(Errc::TruncatedPayload, "payload has " + std::to_string(have) + " bytes, header implies " +
                                            std::to_string(need));
  if (have > need) throw Error(Errc::CorruptFile, "trailing bytes after payload");
  bs.payload.assign(bytes.begin() + kHeaderBytes, bytes.end());
  return bs;
}

}  // namespace nadp
