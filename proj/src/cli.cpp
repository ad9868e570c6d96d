#include "nadp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>

#include "nadp/codec.hpp"
#include "nadp/error.hpp"
#include "nadp/experiment.hpp"
#include "nadp/file_util.hpp"
#include "nadp/metrics.hpp"
#include "nadp/synth.hpp"

namespace nadp {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_db(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct EncodeArgs {
  std::string input;
  std::string output;
  int nq = 5;
  std::string mode = "committee_median";
  int epochs = 6;
  int frame_len = 200;
  std::uint64_t seed = 0;
  bool quiet = false;
};

struct DecodeArgs {
  std::string input;
  std::string output;
};

struct EvalArgs {
  std::string reference;
  std::string test;
  int frame_len = 200;
};

struct GridArgs {
  std::string corpus;
  std::string output;
  std::string aggregate;
  std::string bitstream_dir;
  std::vector<int> nqs{2, 3, 4, 5};
  std::vector<std::string> modes{"mlp", "elman", "rbf", "committee_mean", "committee_median"};
  std::vector<int> epochs{6};
  int frame_len = 200;
  std::uint64_t seed = 0;
};

struct SynthArgs {
  std::string output;
  std::string kind = "ar";
  double seconds = 2.0;
  std::uint64_t seed = 0;
};

PredictorMode require_mode(const std::string& name) {
  const auto m = parse_mode(name);
  if (!m) throw UsageError("unknown mode '" + name + "'");
  return *m;
}

int run_encode(const EncodeArgs& a, std::ostream& out) {
  CodecConfig cfg;
  cfg.nq = a.nq;
  cfg.mode = require_mode(a.mode);
  cfg.epochs = static_cast<std::uint16_t>(a.epochs);
  cfg.frame_len = static_cast<std::uint32_t>(a.frame_len);
  cfg.seed = a.seed;
  cfg.validate();

  const SampleBuffer x = load_wav(a.input);
  const EncodeTrace trace = encode_traced(x, cfg);
  SampleBuffer rec;
  rec.samples = trace.reconstruction;
  const SegSnrReport rep = segsnr(x, rec, cfg.frame_len);

  if (!a.quiet) {
    std::size_t k = 0;
    for (const Frame& f : frame_signal(x, cfg.frame_len)) {
      std::vector<double> err(f.samples.size());
      for (std::size_t i = 0; i < f.samples.size(); ++i) {
        const std::size_t n = f.index * cfg.frame_len + i;
        err[i] = n < rec.samples.size() ? f.samples[i] - rec.samples[n] : 0.0;
      }
      const FrameSnr s = snr_frame(f.samples, err);
      out << "frame " << ++k << "/" << rep.total_frames << " snr "
          << (s.status == SnrStatus::Ok ? format_db(s.db) + " dB"
                                        : s.status == SnrStatus::ZeroError ? std::string("inf") : std::string("silent"))
          << '\n';
    }
  }
  write_file_atomic(a.output, trace.bitstream.to_bytes());
  out << "segsnr " << format_db(rep.segsnr_db) << " dB over " << rep.per_frame_snr_db.size() << " frames ("
      << rep.frames_excluded() << " excluded)\n";
  return 0;
}

int run_decode(const DecodeArgs& a, std::ostream& out) {
  const Bitstream bs = Bitstream::from_bytes(read_file(a.input));
  write_wav(a.output, decode(bs));
  out << "decoded " << bs.header.sample_count << " samples (nq=" << bs.header.config.nq
      << ", mode=" << mode_name(bs.header.config.mode) << ")\n";
  return 0;
}

int run_eval(const EvalArgs& a, std::ostream& out) {
  const SegSnrReport rep = segsnr(load_wav(a.reference), load_wav(a.test), static_cast<std::size_t>(a.frame_len));
  out << "segsnr " << format_db(rep.segsnr_db) << " dB over " << rep.per_frame_snr_db.size() << " frames ("
      << rep.zero_error_frames << " zero-error, " << rep.zero_signal_frames << " silent excluded)\n";
  return 0;
}

int run_grid(const GridArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<PredictorMode> modes;
  for (const std::string& m : a.modes) modes.push_back(require_mode(m));
  for (int e : a.epochs)
    if (e < 1 || e > 65535) throw UsageError("epochs must be in 1..65535");
  const std::vector<CodecConfig> cfgs =
      grid_configs(a.nqs, modes, a.epochs, static_cast<std::uint32_t>(a.frame_len), a.seed);

  if (!fs::is_directory(a.corpus)) throw Error(Errc::IoFailure, "corpus directory not found: " + a.corpus);
  std::vector<fs::path> corpus;
  for (const auto& entry : fs::directory_iterator(a.corpus))
    if (entry.is_regular_file() && entry.path().extension() == ".wav") corpus.push_back(entry.path());
  std::sort(corpus.begin(), corpus.end());
  if (corpus.empty()) throw Error(Errc::IoFailure, "no .wav files in " + a.corpus);

  const ExperimentResult result = run_experiment(corpus, cfgs);

  fs::path aggregate = a.aggregate;
  if (aggregate.empty()) {
    const fs::path o(a.output);
    aggregate = o.parent_path() / (o.stem().string() + "_aggregate.csv");
  }
  write_file_atomic(a.output, result.per_file_csv());
  write_file_atomic(aggregate, result.aggregate_csv());
  if (!a.bitstream_dir.empty()) {
    fs::create_directories(a.bitstream_dir);
    for (const ExperimentCell& c : result.cells) {
      const std::string name = fs::path(c.file).stem().string() + "_nq" + std::to_string(c.config.nq) + "_" +
                               std::string(mode_name(c.config.mode)) + "_e" + std::to_string(c.config.epochs) +
                               ".nadp";
      write_file_atomic(fs::path(a.bitstream_dir) / name, c.bitstream);
    }
  }

  out << result.cells.size() << " runs over " << corpus.size() << " files, " << cfgs.size() << " configs\n";
  for (const std::string& f : result.failures) err << "failed: " << f << '\n';
  return result.failures.empty() ? 0 : 1;
}

int run_synth(const SynthArgs& a, std::ostream& out) {
  const auto kind = parse_synth_kind(a.kind);
  if (!kind) throw UsageError("unknown kind '" + a.kind + "'");
  if (!(a.seconds > 0.0) || a.seconds > 60.0) throw UsageError("--seconds must be in (0, 60]");
  const SampleBuffer buf = synthesize(*kind, a.seconds, a.seed);
  write_wav(a.output, buf);
  out << "wrote " << buf.samples.size() << " samples to " << a.output << '\n';
  return 0;
}

std::string mode_list() {
  std::string s;
  for (PredictorMode m : kAllModes) s += (s.empty() ? "" : ", ") + std::string(mode_name(m));
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Backward-adaptive ADPCM speech codec with neural-network prediction", "nadp"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode_cmd = app.add_subcommand("encode", "Encode a WAV file into an .nadp bitstream");
  encode_cmd->add_option("input", enc.input, "8 kHz mono 16-bit WAV")->required();
  encode_cmd->add_option("output", enc.output, "Bitstream to write")->required();
  encode_cmd->add_option("--nq", enc.nq, "Bits per sample")->check(CLI::Range(2, 5))->capture_default_str();
  encode_cmd->add_option("--mode", enc.mode, "Predictor: " + mode_list())->capture_default_str();
  encode_cmd->add_option("--epochs", enc.epochs, "LM epochs per frame")->check(CLI::Range(1, 65535))->capture_default_str();
  encode_cmd->add_option("--frame-len", enc.frame_len, "Samples per frame")->check(CLI::Range(11, 1 << 20))->capture_default_str();
  encode_cmd->add_option("--seed", enc.seed, "Initialization seed")->capture_default_str();
  encode_cmd->add_flag("--quiet", enc.quiet, "Only print the final SEGSNR");

  DecodeArgs dec;
  auto* decode_cmd = app.add_subcommand("decode", "Decode an .nadp bitstream into a WAV file");
  decode_cmd->add_option("input", dec.input, "Bitstream")->required();
  decode_cmd->add_option("output", dec.output, "WAV to write")->required();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Segmental SNR of a test WAV against a reference WAV");
  eval_cmd->add_option("reference", ev.reference, "Original WAV")->required();
  eval_cmd->add_option("test", ev.test, "Decoded WAV")->required();
  eval_cmd->add_option("--frame-len", ev.frame_len, "Samples per SNR frame")->check(CLI::Range(1, 1 << 20))->capture_default_str();

  GridArgs grid;
  auto* grid_cmd = app.add_subcommand("grid", "Run a config grid over a directory of WAVs and write CSVs");
  grid_cmd->add_option("corpus", grid.corpus, "Directory of WAV files")->required();
  grid_cmd->add_option("output", grid.output, "Per-file CSV")->required();
  grid_cmd->add_option("--aggregate", grid.aggregate, "Aggregate CSV (default <output>_aggregate.csv)");
  grid_cmd->add_option("--bitstream-dir", grid.bitstream_dir, "Also keep every bitstream here");
  grid_cmd->add_option("--nq-list", grid.nqs, "Comma-separated nq values")->delimiter(',')->check(CLI::Range(2, 5))->capture_default_str();
  grid_cmd->add_option("--mode-list", grid.modes, "Comma-separated modes")->delimiter(',')->capture_default_str();
  grid_cmd->add_option("--epochs-list", grid.epochs, "Comma-separated epoch counts")->delimiter(',')->capture_default_str();
  grid_cmd->add_option("--frame-len", grid.frame_len, "Samples per frame")->check(CLI::Range(11, 1 << 20))->capture_default_str();
  grid_cmd->add_option("--seed", grid.seed, "Initialization seed")->capture_default_str();

  SynthArgs syn;
  auto* synth_cmd = app.add_subcommand("synth", "Write a deterministic synthetic test signal");
  synth_cmd->add_option("output", syn.output, "WAV to write")->required();
  synth_cmd->add_option("--kind", syn.kind, "ar, tones or noise")->check(CLI::IsMember({"ar", "tones", "noise"}))->capture_default_str();
  synth_cmd->add_option("--seconds", syn.seconds, "Duration, (0, 60]")->capture_default_str();
  synth_cmd->add_option("--seed", syn.seed, "Generator seed")->capture_default_str();

  std::vector<const char*> argv;
  argv.push_back("nadp");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode_cmd) return run_encode(enc, out);
    if (*decode_cmd) return run_decode(dec, out);
    if (*eval_cmd) return run_eval(ev, out);
    if (*grid_cmd) return run_grid(grid, out, err);
    if (*synth_cmd) return run_synth(syn, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace nadp
