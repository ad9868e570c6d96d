#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nadp/codec.hpp"

namespace nadp {

/// One (file, config) run.
struct ExperimentCell {
  CodecConfig config;
  std::string file;  // file name only, so CSVs do not depend on the corpus location
  double segsnr_db = 0.0;
  std::size_t frames_excluded = 0;
  std::vector<std::uint8_t> bitstream;
};

/// Mean and population standard deviation of SEGSNR for one config across
/// the files that succeeded.
struct AggregateRow {
  CodecConfig config;
  double mean_db = 0.0;
  double std_db = 0.0;
  std::size_t n_files = 0;
};

struct ExperimentResult {
  std::vector<ExperimentCell> cells;  // config-major, then corpus order
  std::vector<AggregateRow> table;    // one row per config, in config order
  std::vector<std::string> failures;  // "file [config]: message"

  std::string per_file_csv() const;
  std::string aggregate_csv() const;
};

/// Encodes, decodes and scores every file under every config. Per-file
/// failures are recorded and left out of the aggregate.
ExperimentResult run_experiment(std::span<const std::filesystem::path> corpus,
                                std::span<const CodecConfig> configs);

/// Every combination, ordered nq-major, then mode, then epochs.
std::vector<CodecConfig> grid_configs(std::span<const int> nqs, std::span<const PredictorMode> modes,
                                      std::span<const int> epochs, std::uint32_t frame_len,
                                      std::uint64_t seed);

}  // namespace nadp
