#include "nadp/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nadp/error.hpp"

namespace nadp {

namespace {

constexpr double kMult2[] = {0.8, 1.6};
constexpr double kMult3[] = {0.9, 0.9, 1.25, 1.75};
constexpr double kMult4[] = {0.9, 0.9, 0.9, 0.9, 1.2, 1.6, 2.0, 2.4};
constexpr double kMult5[] = {0.9, 0.9, 0.9,  0.9, 0.95, 0.95, 0.95, 0.95,
                             1.2, 1.5, 1.8, 2.1, 2.4,  2.7,  3.0,  3.3};

std::span<const double> default_multipliers(int nq) {
  switch (nq) {
    case 2: return kMult2;
    case 3: return kMult3;
    case 4: return kMult4;
    case 5: return kMult5;
    default: throw Error(Errc::InvalidConfig, "nq must be in 2..5, got " + std::to_string(nq));
  }
}

double reconstruct(int sign, unsigned magnitude, double step) {
  return static_cast<double>(sign) * (static_cast<double>(magnitude) + 0.5) * step;
}

JayantQuantizerState adapt(const JayantQuantizerState& state, unsigned magnitude) {
  JayantQuantizerState next = state;
  next.step = std::clamp(state.step * state.multipliers[magnitude], state.step_min, state.step_max);
  return next;
}

}  // namespace

JayantQuantizerState JayantQuantizerState::initial(int nq) {
  JayantQuantizerState s;
  const auto table = default_multipliers(nq);
  s.nq = nq;
  std::copy(table.begin(), table.end(), s.multipliers.begin());
  return s;
}

void JayantQuantizerState::validate() const {
  if (nq < kMinBits || nq > kMaxBits)
    throw Error(Errc::InvalidConfig, "nq must be in 2..5, got " + std::to_string(nq));
  if (!(step_min > 0.0) || !(step_max >= step_min) || step < step_min || step > step_max)
    throw Error(Errc::InvalidConfig, "step must satisfy 0 < step_min <= step <= step_max");
  const auto table = multiplier_table();
  bool shrinks = false;
  bool grows = false;
  for (double m : table) {
    if (!(m > 0.0)) throw Error(Errc::InvalidConfig, "multipliers must be positive");
    shrinks |= m < 1.0;
    grows |= m > 1.0;
  }
  if (!shrinks || !grows)
    throw Error(Errc::InvalidConfig, "multiplier table must both shrink and grow the step");
}

QuantizeResult quantize(double residual, const JayantQuantizerState& state) {
  const int sign = residual < 0.0 ? -1 : 1;
  const double top = static_cast<double>(state.levels() - 1);
  const double magnitude = std::min(std::floor(std::fabs(residual) / state.step), top);
  QuantizeResult r;
  r.code = {sign, static_cast<unsigned>(magnitude)};
  r.e_hat = reconstruct(sign, r.code.magnitude, state.step);
  r.next = adapt(state, r.code.magnitude);
  return r;
}

DequantizeResult dequantize(QuantizedCode code, const JayantQuantizerState& state) {
  if (code.magnitude >= state.levels())
    throw Error(Errc::CodeOutOfRange, "magnitude " + std::to_string(code.magnitude) + " with nq=" +
                                          std::to_string(state.nq));
  if (code.sign != 1 && code.sign != -1) throw Error(Errc::CodeOutOfRange, "sign must be +1 or -1");
  return {reconstruct(code.sign, code.magnitude, state.step), adapt(state, code.magnitude)};
}

std::uint32_t pack_code(QuantizedCode code, int nq) {
  const std::uint32_t sign_bit = code.sign < 0 ? 1u : 0u;
  return (sign_bit << (nq - 1)) | code.magnitude;
}

QuantizedCode unpack_code(std::uint32_t bits, int nq) {
  const std::uint32_t mask = (1u << (nq - 1)) - 1u;
  return {(bits >> (nq - 1)) & 1u ? -1 : 1, bits & mask};
}

}  // namespace nadp
