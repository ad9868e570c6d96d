#include "nadp/fusion.hpp"

#include <algorithm>

namespace nadp {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Mlp: return "mlp";
    case Family::Elman: return "elman";
    case Family::Rbf: return "rbf";
  }
  return "?";
}

FusionResult fuse(const std::array<double, 3>& outputs, FusionMode mode) {
  std::array<std::uint8_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint8_t a, std::uint8_t b) { return outputs[a] < outputs[b]; });

  // Move the lowest-index family sharing the median value into the middle.
  const double mid = outputs[order[1]];
  for (std::size_t pos = 0; pos < 3; ++pos) {
    if (outputs[order[pos]] == mid && order[pos] < order[1]) std::swap(order[pos], order[1]);
  }

  FusionResult r;
  for (std::size_t pos = 0; pos < 3; ++pos) r.ranks.by_rank[pos] = static_cast<Family>(order[pos]);
  r.value = mode == FusionMode::Median ? mid : (outputs[0] + outputs[1] + outputs[2]) / 3.0;
  return r;
}

}  // namespace nadp
