#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nadp/bank.hpp"
#include "nadp/fusion.hpp"
#include "nadp/quantizer.hpp"
#include "nadp/signal.hpp"

namespace nadp {

enum class PredictorMode : std::uint8_t {
  Mlp = 0,
  Elman = 1,
  Rbf = 2,
  CommitteeMean = 3,
  CommitteeMedian = 4,
  LastSampleBaseline = 5,
};

inline constexpr std::array kAllModes = {
    PredictorMode::Mlp,           PredictorMode::Elman,           PredictorMode::Rbf,
    PredictorMode::CommitteeMean, PredictorMode::CommitteeMedian, PredictorMode::LastSampleBaseline,
};

std::string_view mode_name(PredictorMode mode);
std::optional<PredictorMode> parse_mode(std::string_view name);

struct CodecConfig {
  int nq = 5;
  std::uint32_t frame_len = 200;
  PredictorMode mode = PredictorMode::CommitteeMedian;
  std::uint16_t epochs = 6;
  std::uint64_t seed = 0;

  /// Throws Errc::InvalidConfig.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Bitstream

inline constexpr std::uint16_t kBitstreamVersion = 1;
inline constexpr std::size_t kHeaderBytes = 30;

struct BitstreamHeader {
  std::uint16_t version = kBitstreamVersion;
  CodecConfig config;
  std::uint64_t sample_count = 0;

  std::uint64_t padded_sample_count() const;
  std::size_t payload_bytes() const;
};

/// Header + packed quantizer codes. File layout, little-endian:
///   "NADP" | version u16 | nq u8 | mode u8 | epochs u16 | frame_len u32 |
///   sample_count u64 | seed u64 | payload
/// The payload holds one nq-bit symbol per padded sample, MSB first, zero
/// filled to a byte boundary.
struct Bitstream {
  BitstreamHeader header;
  std::vector<std::uint8_t> payload;

  std::vector<std::uint8_t> to_bytes() const;
  /// Throws BadMagic, VersionMismatch, TruncatedPayload or CorruptFile.
  static Bitstream from_bytes(std::span<const std::uint8_t> bytes);

  std::vector<QuantizedCode> codes() const;
  static std::vector<std::uint8_t> pack(std::span<const QuantizedCode> codes, int nq);
};

// ---------------------------------------------------------------------------
// Closed-loop state shared by encoder and decoder

struct Prediction {
  double value = 0.0;
  /// Present only when the three families were fused.
  std::optional<RankRecord> ranks;
};

/// Per-stream predictor loop. Encoder and decoder each own one and feed it
/// the same reconstructed samples, so both retrain identical banks at every
/// frame boundary without any coefficients being transmitted.
class CodecState {
 public:
  explicit CodecState(const CodecConfig& cfg);

  /// Prediction for the next sample from the last 10 reconstructions. At the
  /// first prediction of a new frame, retrains the bank on the previous
  /// frame's reconstruction.
  Prediction predict_next();

  /// Records the reconstruction of the sample that was just predicted.
  void commit(double reconstructed);

  const CodecConfig& config() const { return cfg_; }
  const JayantQuantizerState& quantizer() const { return quantizer_; }
  void set_quantizer(const JayantQuantizerState& q) { quantizer_ = q; }
  const Window& history() const { return history_; }
  const PredictorBank& bank() const { return bank_; }
  bool bank_ready() const { return bank_ready_; }
  std::size_t frame_index() const { return frame_index_; }
  /// Frames at which every member of some committee failed and the previous
  /// committee was kept.
  const std::vector<std::size_t>& fallback_frames() const { return fallback_frames_; }

 private:
  void retrain();

  CodecConfig cfg_;
  JayantQuantizerState quantizer_;
  Window history_{};
  PredictorBank bank_;
  bool bank_ready_ = false;
  std::size_t frame_index_ = 0;
  std::vector<double> current_frame_;
  bool retrain_pending_ = false;
  std::vector<std::size_t> fallback_frames_;
};

/// Reconstruction x_hat + e_hat, clamped to [-1, 1].
double reconstruct_sample(double prediction, double e_hat);

class Encoder {
 public:
  explicit Encoder(const CodecConfig& cfg) : state_(cfg) {}

  /// Encodes one sample. The original value is used only to form the
  /// residual; everything stored derives from the emitted code.
  QuantizedCode push(double x);

  double last_reconstruction() const { return last_; }
  const std::optional<RankRecord>& last_ranks() const { return last_ranks_; }
  const CodecState& state() const { return state_; }

 private:
  CodecState state_;
  double last_ = 0.0;
  std::optional<RankRecord> last_ranks_;
};

class Decoder {
 public:
  explicit Decoder(const CodecConfig& cfg) : state_(cfg) {}

  /// Returns the reconstructed sample for one code.
  double push(QuantizedCode code);

  const CodecState& state() const { return state_; }

 private:
  CodecState state_;
};

struct EncodeTrace {
  Bitstream bitstream;
  /// Encoder-side reconstruction, trimmed to the input length.
  std::vector<double> reconstruction;
  /// Fusion rank record per input sample (empty optionals outside fusion).
  std::vector<std::optional<RankRecord>> ranks;
  std::vector<std::size_t> fallback_frames;
};

Bitstream encode(const SampleBuffer& x, const CodecConfig& cfg);
EncodeTrace encode_traced(const SampleBuffer& x, const CodecConfig& cfg);
SampleBuffer decode(const Bitstream& bs);

}  // namespace nadp
