#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace nadp {

/// Predictor families in their fixed index order, which is also the
/// tie-break order for median attribution.
enum class Family : std::uint8_t { Mlp = 0, Elman = 1, Rbf = 2 };

inline constexpr std::size_t kFamilyCount = 3;

std::string_view family_name(Family f);

enum class FusionMode : std::uint8_t { Mean, Median };

/// Which family produced the minimum, median and maximum output of one sample.
struct RankRecord {
  std::array<Family, 3> by_rank{Family::Mlp, Family::Elman, Family::Rbf};

  Family min() const { return by_rank[0]; }
  Family median() const { return by_rank[1]; }
  Family max() const { return by_rank[2]; }
  bool operator==(const RankRecord&) const = default;
};

struct FusionResult {
  double value = 0.0;
  RankRecord ranks;
};

/// Combines the MLP, Elman and RBF outputs (in that order). Ties at the
/// median value credit the lowest-index tied family as median.
FusionResult fuse(const std::array<double, 3>& outputs, FusionMode mode);

}  // namespace nadp
