#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nadp/fusion.hpp"
#include "nadp/signal.hpp"

namespace nadp {

enum class SnrStatus {
  Ok,
  ZeroError,   // error identically zero; db holds +inf
  ZeroSignal,  // signal identically zero; frame carries no information
};

struct FrameSnr {
  double db = 0.0;
  SnrStatus status = SnrStatus::Ok;
};

/// 10 log10(sum x^2 / sum e^2) over one frame.
FrameSnr snr_frame(std::span<const double> x, std::span<const double> e);

struct SegSnrReport {
  /// SNR of every frame that entered the average, in frame order.
  std::vector<double> per_frame_snr_db;
  /// Arithmetic mean of per_frame_snr_db. +inf when every informative frame
  /// had zero error.
  double segsnr_db = 0.0;
  std::size_t total_frames = 0;
  std::size_t zero_error_frames = 0;
  std::size_t zero_signal_frames = 0;

  std::size_t frames_excluded() const { return zero_error_frames + zero_signal_frames; }
};

/// Segmental SNR: frame the pair, take per-frame SNR of e = x - x_rec and
/// average in the dB domain. Zero-error and silent frames are excluded and
/// counted. Throws Errc::ZeroSignal when no frame carries signal.
SegSnrReport segsnr(const SampleBuffer& x, const SampleBuffer& x_rec, std::size_t frame_len);

struct RankCounts {
  std::size_t min_count = 0;
  std::size_t median_count = 0;
  std::size_t max_count = 0;
};

struct OrderStatsReport {
  std::array<RankCounts, kFamilyCount> families{};
  /// Frames that contained at least one fused sample.
  std::size_t frames = 0;

  const RankCounts& operator[](Family f) const { return families[static_cast<std::size_t>(f)]; }
};

/// Per frame, credits each rank (min, median, max) to the family that held it
/// most often within the frame; ties go to the lowest family index. Samples
/// without a record (unfused) are ignored.
OrderStatsReport order_stats(std::span<const std::optional<RankRecord>> records, std::size_t frame_len);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

MeanStd population_mean_std(std::span<const double> values);

}  // namespace nadp
