#include <algorithm>

#include "nadp/error.hpp"
#include "nadp/signal.hpp"

namespace nadp {

std::vector<Frame> frame_signal(const SampleBuffer& buf, std::size_t frame_len) {
  if (frame_len == 0) throw Error(Errc::InvalidConfig, "frame length must be positive");
  if (buf.samples.empty()) throw Error(Errc::EmptySignal, "cannot frame an empty signal");

  const std::size_t n = buf.samples.size();
  const std::size_t count = (n + frame_len - 1) / frame_len;
  std::vector<Frame> frames(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t begin = k * frame_len;
    const std::size_t end = std::min(n, begin + frame_len);
    Frame& f = frames[k];
    f.index = k;
    f.samples.assign(frame_len, 0.0);
    std::copy(buf.samples.begin() + static_cast<std::ptrdiff_t>(begin),
              buf.samples.begin() + static_cast<std::ptrdiff_t>(end), f.samples.begin());
    f.padding = frame_len - (end - begin);
  }
  return frames;
}

SampleBuffer deframe(std::span<const Frame> frames) {
  SampleBuffer out;
  for (const Frame& f : frames)
    out.samples.insert(out.samples.end(), f.samples.begin(),
                       f.samples.end() - static_cast<std::ptrdiff_t>(f.padding));
  return out;
}

}  // namespace nadp
