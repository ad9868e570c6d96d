#include "nadp/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "nadp/error.hpp"
#include "nadp/rng.hpp"

namespace nadp {

namespace {

constexpr double kFs = kSampleRateHz;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct FormantTrack {
  double center_hz;
  double swing_hz;
  double rate_hz;
  double bandwidth_hz;
};

constexpr std::array<FormantTrack, 4> kTracks{{
    {550.0, 200.0, 2.1, 70.0},
    {1400.0, 450.0, 1.3, 100.0},
    {2500.0, 250.0, 0.9, 160.0},
    {3400.0, 150.0, 0.7, 250.0},
}};

// Direct-form denominator of four cascaded resonators.
std::array<double, 8> ar_coefficients(const std::array<double, 4>& freqs) {
  std::array<double, 9> poly{1.0};
  for (std::size_t k = 0; k < 4; ++k) {
    const double r = std::exp(-std::numbers::pi * kTracks[k].bandwidth_hz / kFs);
    const double c1 = -2.0 * r * std::cos(kTwoPi * freqs[k] / kFs);
    const double c2 = r * r;
    std::array<double, 9> next{};
    for (std::size_t i = 0; i < 9; ++i) {
      next[i] += poly[i];
      if (i + 1 < 9) next[i + 1] += c1 * poly[i];
      if (i + 2 < 9) next[i + 2] += c2 * poly[i];
    }
    poly = next;
  }
  std::array<double, 8> a{};
  std::copy(poly.begin() + 1, poly.end(), a.begin());
  return a;
}

std::vector<double> make_ar(std::size_t n, Rng& rng) {
  std::array<double, 4> phase{};
  for (double& p : phase) p = rng.uniform(0.0, kTwoPi);
  const double pitch_phase = rng.uniform(0.0, kTwoPi);

  std::vector<double> out(n);
  std::array<double, 8> past{};  // y[n-1] .. y[n-8]
  std::array<double, 8> a{};
  double glottal = 0.0;
  double glottal2 = 0.0;
  double dc_in = 0.0;
  double dc_out = 0.0;
  double pulse_clock = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kFs;
    if (i % 80 == 0) {
      std::array<double, 4> freqs{};
      for (std::size_t k = 0; k < 4; ++k)
        freqs[k] = kTracks[k].center_hz + kTracks[k].swing_hz * std::sin(kTwoPi * kTracks[k].rate_hz * t + phase[k]);
      a = ar_coefficients(freqs);
    }
    const double f0 = 120.0 + 25.0 * std::sin(kTwoPi * 0.8 * t + pitch_phase);
    pulse_clock += f0 / kFs;
    double excitation = 0.02 * rng.uniform(-1.0, 1.0);
    if (pulse_clock >= 1.0) {
      pulse_clock -= 1.0;
      excitation += 1.0;
    }
    // Two-pole glottal low-pass gives the spectral tilt of voiced speech.
    glottal = 0.95 * glottal + excitation;
    glottal2 = 0.95 * glottal2 + glottal;

    double y = glottal2;
    for (std::size_t k = 0; k < 8; ++k) y -= a[k] * past[k];
    std::shift_right(past.begin(), past.end(), 1);
    past[0] = y;

    // DC blocker: the pulse train has a mean the resonators pass through.
    dc_out = y - dc_in + 0.995 * dc_out;
    dc_in = y;

    const double envelope = 0.3 + 0.7 * (0.5 - 0.5 * std::cos(kTwoPi * 3.0 * t));
    out[i] = envelope * dc_out;
  }
  return out;
}

std::vector<double> make_tones(std::size_t n, Rng& rng) {
  const double offset = rng.uniform(0.0, kTwoPi);
  const double duration = static_cast<double>(n) / kFs;
  std::vector<double> out(n);
  double phase = offset;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kFs;
    const double f0 = 100.0 + 300.0 * t / duration;
    phase += kTwoPi * f0 / kFs;
    double v = 0.0;
    for (int h = 1; h <= 5; ++h)
      if (h * f0 < kFs / 2.0) v += std::sin(h * phase) / h;
    out[i] = v;
  }
  return out;
}

std::vector<double> make_noise(std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (double& v : out) v = rng.uniform(-1.0, 1.0);
  return out;
}

}  // namespace

std::string_view synth_name(SynthKind kind) {
  switch (kind) {
    case SynthKind::Ar: return "ar";
    case SynthKind::Tones: return "tones";
    case SynthKind::Noise: return "noise";
  }
  return "?";
}

std::optional<SynthKind> parse_synth_kind(std::string_view name) {
  for (SynthKind k : {SynthKind::Ar, SynthKind::Tones, SynthKind::Noise})
    if (synth_name(k) == name) return k;
  return std::nullopt;
}

SampleBuffer synthesize(SynthKind kind, double seconds, std::uint64_t seed) {
  if (!(seconds > 0.0) || seconds > 60.0) throw Error(Errc::InvalidConfig, "seconds must be in (0, 60]");
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(seconds * kFs)));
  Rng rng(mix_seed({seed, static_cast<std::uint64_t>(kind)}));

  SampleBuffer buf;
  switch (kind) {
    case SynthKind::Ar: buf.samples = make_ar(n, rng); break;
    case SynthKind::Tones: buf.samples = make_tones(n, rng); break;
    case SynthKind::Noise: buf.samples = make_noise(n, rng); break;
  }
  double peak = 0.0;
  for (double v : buf.samples) peak = std::max(peak, std::fabs(v));
  if (peak > 0.0)
    for (double& v : buf.samples) v *= 0.9 / peak;
  return buf;
}

}  // namespace nadp
