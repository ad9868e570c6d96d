#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace nadp {

inline constexpr int kMinBits = 2;
inline constexpr int kMaxBits = 5;
inline constexpr std::size_t kMaxMagnitudes = std::size_t{1} << (kMaxBits - 1);

/// Adaptive uniform mid-rise quantizer state (Jayant step-size adaptation).
///
/// After each sample the step is multiplied by the factor stored for the
/// emitted code magnitude, then clamped to [step_min, step_max]. Inner codes
/// carry factors below 1 and outer codes factors above 1, so the step tracks
/// the residual envelope using nothing but the code sequence.
struct JayantQuantizerState {
  int nq = 4;
  double step = 0.02;
  double step_min = 1e-5;
  double step_max = 0.5;
  std::array<double, kMaxMagnitudes> multipliers{};

  std::size_t levels() const { return std::size_t{1} << (nq - 1); }
  std::span<const double> multiplier_table() const { return {multipliers.data(), levels()}; }

  /// Default tables and bounds for `nq` bits per sample.
  static JayantQuantizerState initial(int nq);

  /// Throws Errc::InvalidConfig when any invariant is broken.
  void validate() const;
};

struct QuantizedCode {
  int sign = 1;  // +1 or -1
  unsigned magnitude = 0;

  bool operator==(const QuantizedCode&) const = default;
};

struct QuantizeResult {
  QuantizedCode code;
  double e_hat = 0.0;
  JayantQuantizerState next;
};

struct DequantizeResult {
  double e_hat = 0.0;
  JayantQuantizerState next;
};

QuantizeResult quantize(double residual, const JayantQuantizerState& state);

/// Mirror of quantize(); produces the identical reconstruction and next state.
/// Throws Errc::CodeOutOfRange for a magnitude outside the state's table.
DequantizeResult dequantize(QuantizedCode code, const JayantQuantizerState& state);

/// nq-bit symbol: sign bit (1 = negative) followed by the magnitude bits.
std::uint32_t pack_code(QuantizedCode code, int nq);
QuantizedCode unpack_code(std::uint32_t bits, int nq);

}  // namespace nadp
