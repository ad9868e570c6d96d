#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "nadp/signal.hpp"

namespace nadp {

enum class SynthKind { Ar, Tones, Noise };

std::string_view synth_name(SynthKind kind);
std::optional<SynthKind> parse_synth_kind(std::string_view name);

/// Deterministic 8 kHz test signal, peak-normalized to 0.9.
///  - Ar: pulse-and-noise excitation through a time-varying 8th-order
///    all-pole filter whose four resonances drift like formants, under a
///    syllable-rate envelope.
///  - Tones: five-harmonic tone with a rising fundamental (100 to 400 Hz).
///  - Noise: white uniform noise.
/// Throws Errc::InvalidConfig unless 0 < seconds <= 60.
SampleBuffer synthesize(SynthKind kind, double seconds, std::uint64_t seed);

}  // namespace nadp
