#include "nadp/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "nadp/error.hpp"
#include "nadp/metrics.hpp"

namespace nadp {

namespace {

std::string format_db(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string config_prefix(const CodecConfig& c) {
  return std::to_string(c.nq) + "," + std::string(mode_name(c.mode)) + "," + std::to_string(c.epochs);
}

}  // namespace

std::string ExperimentResult::per_file_csv() const {
  std::ostringstream out;
  out << "nq,mode,epochs,file,segsnr_db,frames_excluded\n";
  for (const ExperimentCell& c : cells)
    out << config_prefix(c.config) << ',' << c.file << ',' << format_db(c.segsnr_db) << ','
        << c.frames_excluded << '\n';
  return out.str();
}

std::string ExperimentResult::aggregate_csv() const {
  std::ostringstream out;
  out << "nq,mode,epochs,mean_db,std_db,n_files\n";
  for (const AggregateRow& r : table)
    out << config_prefix(r.config) << ',' << format_db(r.mean_db) << ',' << format_db(r.std_db) << ','
        << r.n_files << '\n';
  return out.str();
}

ExperimentResult run_experiment(std::span<const std::filesystem::path> corpus,
                                std::span<const CodecConfig> configs) {
  if (corpus.empty()) throw Error(Errc::InvalidConfig, "experiment needs at least one file");
  if (configs.empty()) throw Error(Errc::InvalidConfig, "experiment needs at least one config");

  std::vector<SampleBuffer> signals(corpus.size());
  std::vector<bool> loaded(corpus.size(), false);
  ExperimentResult result;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      signals[i] = load_wav(corpus[i]);
      loaded[i] = true;
    } catch (const Error& e) {
      result.failures.push_back(corpus[i].filename().string() + ": " + e.what());
    }
  }

  for (const CodecConfig& cfg : configs) {
    std::vector<double> scores;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (!loaded[i]) continue;
      const std::string name = corpus[i].filename().string();
      try {
        const Bitstream bs = encode(signals[i], cfg);
        const SampleBuffer rec = decode(bs);
        const SegSnrReport rep = segsnr(signals[i], rec, cfg.frame_len);
        result.cells.push_back({cfg, name, rep.segsnr_db, rep.frames_excluded(), bs.to_bytes()});
        scores.push_back(rep.segsnr_db);
      } catch (const Error& e) {
        result.failures.push_back(name + " [" + config_prefix(cfg) + "]: " + e.what());
      }
    }
    const MeanStd ms = population_mean_std(scores);
    result.table.push_back({cfg, ms.mean, ms.std, scores.size()});
  }
  return result;
}

std::vector<CodecConfig> grid_configs(std::span<const int> nqs, std::span<const PredictorMode> modes,
                                      std::span<const int> epochs, std::uint32_t frame_len,
                                      std::uint64_t seed) {
  std::vector<CodecConfig> out;
  for (int nq : nqs)
    for (PredictorMode m : modes)
      for (int e : epochs) {
        CodecConfig c;
        c.nq = nq;
        c.mode = m;
        c.epochs = static_cast<std::uint16_t>(e);
        c.frame_len = frame_len;
        c.seed = seed;
        c.validate();
        out.push_back(c);
      }
  return out;
}

}  // namespace nadp
