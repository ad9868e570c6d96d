#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nadp/networks.hpp"

namespace nadp {

inline constexpr std::size_t kCommitteeSize = 5;

/// Trained predictors for one stream. Empty committees mean the family has
/// not been trained yet (first frame) or is not used by the current mode.
struct PredictorBank {
  std::vector<MlpNet> mlp;
  std::vector<ElmanNet> elman;
  RbfNet rbf;
  bool has_rbf = false;
};

/// Versioned little-endian blob of a bank, for debugging and inspection.
/// Never part of the bitstream.
std::vector<std::uint8_t> serialize_bank(const PredictorBank& bank);
PredictorBank deserialize_bank(std::span<const std::uint8_t> bytes);

}  // namespace nadp
