#include "nadp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nadp/error.hpp"

namespace nadp {

FrameSnr snr_frame(std::span<const double> x, std::span<const double> e) {
  if (x.size() != e.size()) throw Error(Errc::InvalidConfig, "signal and error lengths differ");
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    signal += x[i] * x[i];
    noise += e[i] * e[i];
  }
  if (signal == 0.0) return {0.0, SnrStatus::ZeroSignal};
  if (noise == 0.0) return {std::numeric_limits<double>::infinity(), SnrStatus::ZeroError};
  return {10.0 * std::log10(signal / noise), SnrStatus::Ok};
}

SegSnrReport segsnr(const SampleBuffer& x, const SampleBuffer& x_rec, std::size_t frame_len) {
  if (x.samples.size() != x_rec.samples.size())
    throw Error(Errc::InvalidConfig, "reference and reconstruction lengths differ");
  const std::vector<Frame> ref = frame_signal(x, frame_len);
  const std::vector<Frame> rec = frame_signal(x_rec, frame_len);

  SegSnrReport report;
  report.total_frames = ref.size();
  std::vector<double> err(frame_len);
  for (std::size_t k = 0; k < ref.size(); ++k) {
    for (std::size_t i = 0; i < frame_len; ++i) err[i] = ref[k].samples[i] - rec[k].samples[i];
    const FrameSnr s = snr_frame(ref[k].samples, err);
    switch (s.status) {
      case SnrStatus::Ok: report.per_frame_snr_db.push_back(s.db); break;
      case SnrStatus::ZeroError: ++report.zero_error_frames; break;
      case SnrStatus::ZeroSignal: ++report.zero_signal_frames; break;
    }
  }

  if (!report.per_frame_snr_db.empty()) {
    double sum = 0.0;
    for (double v : report.per_frame_snr_db) sum += v;
    report.segsnr_db = sum / static_cast<double>(report.per_frame_snr_db.size());
  } else if (report.zero_error_frames > 0) {
    report.segsnr_db = std::numeric_limits<double>::infinity();
  } else {
    throw Error(Errc::ZeroSignal, "every frame of the reference is silent");
  }
  return report;
}

OrderStatsReport order_stats(std::span<const std::optional<RankRecord>> records, std::size_t frame_len) {
  if (frame_len == 0) throw Error(Errc::InvalidConfig, "frame length must be positive");
  OrderStatsReport report;
  for (std::size_t begin = 0; begin < records.size(); begin += frame_len) {
    const std::size_t end = std::min(records.size(), begin + frame_len);
    std::array<std::array<std::size_t, kFamilyCount>, 3> tally{};  // [rank][family]
    bool any = false;
    for (std::size_t n = begin; n < end; ++n) {
      if (!records[n]) continue;
      any = true;
      for (std::size_t rank = 0; rank < 3; ++rank)
        ++tally[rank][static_cast<std::size_t>(records[n]->by_rank[rank])];
    }
    if (!any) continue;
    ++report.frames;
    for (std::size_t rank = 0; rank < 3; ++rank) {
      const auto winner = static_cast<std::size_t>(
          std::max_element(tally[rank].begin(), tally[rank].end()) - tally[rank].begin());
      RankCounts& c = report.families[winner];
      (rank == 0 ? c.min_count : rank == 1 ? c.median_count : c.max_count) += 1;
    }
  }
  return report;
}

MeanStd population_mean_std(std::span<const double> values) {
  MeanStd r;
  if (values.empty()) return r;
  const double n = static_cast<double>(values.size());
  for (double v : values) r.mean += v;
  r.mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - r.mean) * (v - r.mean);
  r.std = std::sqrt(var / n);
  return r;
}

}  // namespace nadp
