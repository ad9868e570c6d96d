// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nadp/cli.hpp"
#include "nadp/codec.hpp"
#include "nadp/file_util.hpp"
#include "nadp/metrics.hpp"
#include "nadp/networks.hpp"
#include "nadp/quantizer.hpp"
#include "nadp/synth.hpp"
#include "nadp/training.hpp"

using namespace nadp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Gen {
  std::mt19937_64 engine;
  explicit Gen(std::uint64_t seed) : engine(seed) {}
  double operator()(double lo = -1.0, double hi = 1.0) {
    return lo + (hi - lo) * static_cast<double>(engine() >> 11) * 0x1.0p-53;
  }
};

TrainSet random_trainset(Gen& g, std::size_t rows, double scale = 0.5) {
  std::vector<double> frame(rows + kOrder);
  for (double& v : frame) v = g() * scale;
  return build_trainset(frame);
}

std::vector<SampleBuffer> synth_corpus(double seconds) {
  return {synthesize(SynthKind::Ar, seconds, 1), synthesize(SynthKind::Tones, seconds, 1),
          synthesize(SynthKind::Noise, seconds, 1)};
}

const char* kSignalNames[] = {"ar", "tones", "noise"};

double run_segsnr(const SampleBuffer& x, int nq, PredictorMode mode, std::uint16_t epochs) {
  CodecConfig cfg;
  cfg.nq = nq;
  cfg.mode = mode;
  cfg.epochs = epochs;
  return segsnr(x, decode(encode(x, cfg)), cfg.frame_len).segsnr_db;
}

// ---------------------------------------------------------------------------

Outcome rbf_anchor() {
  Outcome o;
  Window c{}, x{};
  x[0] = 8.326;
  const double at_half = rbf_neuron(c, 0.1, x);
  o.require(std::fabs(at_half - 0.5) <= 1e-3, "rbf_neuron = " + fmt("%.6f", at_half));
  const double r = radbas(0.8326);
  o.require(std::fabs(r - 0.5) <= 1e-4, "radbas = " + fmt("%.6f", r));
  o.note("rbf_neuron " + fmt("%.6f", at_half) + ", radbas " + fmt("%.6f", r));
  return o;
}

Outcome codec_lockstep() {
  Outcome o;
  const auto signals = synth_corpus(2.0);
  int runs = 0;
  for (std::size_t s = 0; s < signals.size(); ++s)
    for (int nq = kMinBits; nq <= kMaxBits; ++nq)
      for (PredictorMode mode : kAllModes) {
        CodecConfig cfg;
        cfg.nq = nq;
        cfg.mode = mode;
        const EncodeTrace t = encode_traced(signals[s], cfg);
        const SampleBuffer y = decode(Bitstream::from_bytes(t.bitstream.to_bytes()));
        o.require(y.samples == t.reconstruction, std::string(kSignalNames[s]) + " nq=" + std::to_string(nq) +
                                                     " " + std::string(mode_name(mode)) + " differs");
        ++runs;
      }
  o.note(std::to_string(runs) + " runs bit-identical");
  return o;
}

double nearest_level(double e, int nq, double step) {
  const int levels = 1 << (nq - 1);
  double best = 0.0, dist = INFINITY;
  for (int sign : {-1, 1})
    for (int m = 0; m < levels; ++m) {
      const double level = sign * (m + 0.5) * step;
      if (std::fabs(e - level) < dist) {
        dist = std::fabs(e - level);
        best = level;
      }
    }
  return best;
}

Outcome quantizer_oracle() {
  Outcome o;
  Gen g(101);
  int mismatches = 0, bound = 0;
  for (int i = 0; i < 100000; ++i) {
    const int nq = 2 + static_cast<int>(g.engine() % 4);
    JayantQuantizerState s = JayantQuantizerState::initial(nq);
    s.step = g(s.step_min, s.step_max);
    const double e = g() * static_cast<double>(s.levels()) * s.step * 0.999999;
    const QuantizeResult r = quantize(e, s);
    if (std::fabs(e - r.e_hat) > std::fabs(e - nearest_level(e, nq, s.step)) * (1 + 1e-12)) ++mismatches;
    if (std::fabs(e - r.e_hat) > s.step / 2 * (1 + 1e-12)) ++bound;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " nearest-level mismatches");
  o.require(bound == 0, std::to_string(bound) + " half-step violations");
  o.note("100000 pairs checked");
  return o;
}

template <typename ResidualFn>
double worst_column_error(const Eigen::MatrixXd& jac, const Eigen::VectorXd& w, ResidualFn residuals) {
  constexpr double eps = 1e-6;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    Eigen::VectorXd plus = w, minus = w, rp, rm;
    plus[k] += eps;
    minus[k] -= eps;
    residuals(plus, rp);
    residuals(minus, rm);
    const Eigen::VectorXd fd = (rp - rm) / (2 * eps);
    worst = std::max(worst, (jac.col(k) - fd).norm() / std::max(fd.norm(), 1e-8));
  }
  return worst;
}

Outcome jacobian_check() {
  Outcome o;
  Gen g(202);
  double worst_mlp = 0.0, worst_elman = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const TrainSet ts = random_trainset(g, 40);
    {
      const MlpProblem p(ts);
      Eigen::VectorXd w(MlpNet::kParamCount);
      for (auto& v : w) v = g();
      Eigen::MatrixXd j;
      p.jacobian(w, j);
      worst_mlp = std::max(worst_mlp, worst_column_error(j, w, [&](const Eigen::VectorXd& v, Eigen::VectorXd& r) {
                                        p.residuals(v, r);
                                      }));
    }
    {
      const ElmanProblem p(ts);
      Eigen::VectorXd w(ElmanNet::kParamCount);
      for (auto& v : w) v = g();
      Eigen::MatrixXd j;
      p.jacobian(w, j);
      const auto ctx = p.contexts(w);
      worst_elman = std::max(worst_elman, worst_column_error(j, w, [&](const Eigen::VectorXd& v, Eigen::VectorXd& r) {
                                            p.residuals_with_contexts(v, ctx, r);
                                          }));
    }
  }
  o.require(worst_mlp < 1e-4, "mlp error " + fmt("%.2e", worst_mlp));
  o.require(worst_elman < 1e-4, "elman error " + fmt("%.2e", worst_elman));
  o.note("25+25 instances, worst relative error mlp " + fmt("%.2e", worst_mlp) + ", elman " + fmt("%.2e", worst_elman));
  return o;
}

class LineProblem final : public LeastSquaresProblem {
 public:
  LineProblem(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {}
  std::size_t param_count() const override { return 1; }
  std::size_t residual_count() const override { return x_.size(); }
  void residuals(const Eigen::VectorXd& w, Eigen::VectorXd& r) const override {
    r.resize(static_cast<Eigen::Index>(x_.size()));
    for (std::size_t i = 0; i < x_.size(); ++i) r[static_cast<Eigen::Index>(i)] = w[0] * x_[i] - y_[i];
  }
  void jacobian(const Eigen::VectorXd&, Eigen::MatrixXd& j) const override {
    j.resize(static_cast<Eigen::Index>(x_.size()), 1);
    for (std::size_t i = 0; i < x_.size(); ++i) j(static_cast<Eigen::Index>(i), 0) = x_[i];
  }
  double optimum() const {
    double xy = 0.0, xx = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      xy += x_[i] * y_[i];
      xx += x_[i] * x_[i];
    }
    return xy / xx;
  }

 private:
  std::vector<double> x_, y_;
};

Outcome lm_monotone_exact() {
  Outcome o;
  Gen g(303);
  int increases = 0, accepted = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const TrainSet ts = random_trainset(g, 80);
    LmState st = LmState::initial();
    st.alpha = 0.01;
    st.beta = 1.0;
    MlpNet m = initial_mlp(static_cast<std::uint64_t>(trial), 0, 0);
    ElmanNet e = initial_elman(static_cast<std::uint64_t>(trial), 0, 0);
    double last = INFINITY;
    for (int epoch = 0; epoch < 30 && !st.mu_ceiling_hit; ++epoch) {
      const LmEpochReport rep = trial % 2 ? lm_epoch(e, ts, st) : lm_epoch(m, ts, st);
      if (rep.objective_before > last || (rep.accepted && !(rep.objective_after < rep.objective_before)))
        ++increases;
      accepted += rep.accepted;
      last = rep.objective_after;
    }
  }
  o.require(increases == 0, std::to_string(increases) + " objective increases");

  double worst = 0.0;
  bool all_accepted = true;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(50), y(50);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = g(-2, 2);
      y[i] = 0.7 * x[i] + 0.1 * g();
    }
    const LineProblem p(x, y);
    LmState st = LmState::initial();
    st.mu = st.mu_min;  // undamped Gauss-Newton step, alpha = 0
    Eigen::VectorXd w(1);
    w[0] = g(-3, 3);
    all_accepted = all_accepted && lm_epoch(p, w, st).accepted;
    worst = std::max(worst, std::fabs(w[0] - p.optimum()));
  }
  o.require(all_accepted, "first step rejected");
  o.require(worst < 1e-10, "closed-form error " + fmt("%.2e", worst));
  o.note(std::to_string(accepted) + " accepted steps monotone; one-step error " + fmt("%.2e", worst));
  return o;
}

Outcome greedy_rbf() {
  Outcome o;
  Gen g(404);
  int increases = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const TrainSet ts = random_trainset(g, 50 + 10 * static_cast<std::size_t>(trial), 0.3);
    RbfTrainTrace trace;
    rbf_train_greedy(ts, {}, &trace);
    for (std::size_t n = 1; n < trace.sse_per_neuron.size(); ++n)
      increases += trace.sse_per_neuron[n] > trace.sse_per_neuron[n - 1];
  }
  o.require(increases == 0, std::to_string(increases) + " SSE increases");

  TrainSet one;
  Window x{};
  for (std::size_t i = 0; i < kOrder; ++i) x[i] = 0.03 * static_cast<double>(i);
  one.inputs.push_back(x);
  one.targets.push_back(-0.25);
  RbfTrainTrace trace;
  rbf_train_greedy(one, {}, &trace);
  o.require(trace.final_sse < 1e-20, "single-point SSE " + fmt("%.2e", trace.final_sse));
  o.note("single-point SSE " + fmt("%.2e", trace.final_sse));
  return o;
}

SampleBuffer buffer(std::vector<double> v) {
  SampleBuffer b;
  b.samples = std::move(v);
  return b;
}

Outcome segsnr_anchors() {
  Outcome o;
  Gen g(505);
  std::vector<double> x(400), y(400);
  for (std::size_t n = 0; n < x.size(); ++n) {
    x[n] = g(-0.5, 0.5);
    y[n] = x[n] - 0.1 * x[n];
  }
  const double twenty = segsnr(buffer(x), buffer(y), 200).segsnr_db;
  o.require(std::fabs(twenty - 20.0) <= 1e-9, "e = 0.1x gives " + fmt("%.12f", twenty));

  for (std::size_t n = 0; n < x.size(); ++n) y[n] = x[n] - (n < 200 ? std::sqrt(0.1) : 0.1) * x[n];
  const double fifteen = segsnr(buffer(x), buffer(y), 200).segsnr_db;
  o.require(std::fabs(fifteen - 15.0) <= 1e-9, "10/20 dB frames give " + fmt("%.12f", fifteen));

  for (std::size_t n = 0; n < x.size(); ++n) y[n] = x[n] + 0.03 * g();
  const SegSnrReport base = segsnr(buffer(x), buffer(y), 200);
  double worst = 0.0;
  for (double gain : {-2.0, 0.003, 7.0}) {
    std::vector<double> gx = x, gy = y;
    for (double& v : gx) v *= gain;
    for (double& v : gy) v *= gain;
    const SegSnrReport s = segsnr(buffer(gx), buffer(gy), 200);
    for (std::size_t j = 0; j < s.per_frame_snr_db.size(); ++j)
      worst = std::max(worst, std::fabs(s.per_frame_snr_db[j] - base.per_frame_snr_db[j]));
  }
  o.require(worst <= 1e-9, "gain changes frame SNR by " + fmt("%.2e", worst));
  o.note("20 dB err " + fmt("%.1e", std::fabs(twenty - 20)) + ", 15 dB err " + fmt("%.1e", std::fabs(fifteen - 15)));
  return o;
}

Outcome nq_trend(const SampleBuffer& ar) {
  Outcome o;
  std::vector<double> s;
  std::string values;
  for (int nq = kMinBits; nq <= kMaxBits; ++nq) {
    s.push_back(run_segsnr(ar, nq, PredictorMode::Mlp, 6));
    values += (values.empty() ? "" : " ") + fmt("%.2f", s.back());
  }
  for (std::size_t i = 1; i < s.size(); ++i) o.require(s[i] > s[i - 1], "not increasing at nq=" + std::to_string(i + 2));
  const double spread = s.back() - s.front();
  o.require(spread >= 8.0, "spread " + fmt("%.2f", spread) + " dB");
  o.note("nq 2..5: " + values + " dB, spread " + fmt("%.2f", spread) + " dB");
  return o;
}

Outcome epochs_effect(const SampleBuffer& ar) {
  Outcome o;
  std::string values;
  for (int nq = kMinBits; nq <= kMaxBits; ++nq) {
    const double e6 = run_segsnr(ar, nq, PredictorMode::Mlp, 6);
    const double e50 = run_segsnr(ar, nq, PredictorMode::Mlp, 50);
    o.require(e50 >= e6 - 0.5, "nq=" + std::to_string(nq) + " e50 " + fmt("%.2f", e50) + " < e6 " + fmt("%.2f", e6));
    values += (values.empty() ? "" : ", ") + std::string("nq=") + std::to_string(nq) + " " + fmt("%.2f", e6) + "->" +
              fmt("%.2f", e50);
  }
  o.note("e6->e50: " + values + " dB");
  return o;
}

Outcome fusion_effect(const std::vector<SampleBuffer>& signals) {
  Outcome o;
  for (std::size_t s = 0; s < signals.size(); ++s) {
    double best = -INFINITY;
    for (PredictorMode m : {PredictorMode::Mlp, PredictorMode::Elman, PredictorMode::Rbf})
      best = std::max(best, run_segsnr(signals[s], 4, m, 6));
    const double median = run_segsnr(signals[s], 4, PredictorMode::CommitteeMedian, 6);
    o.require(median >= best - 1.5, std::string(kSignalNames[s]) + " median " + fmt("%.2f", median) + " vs best " +
                                        fmt("%.2f", best));
    o.note(std::string(kSignalNames[s]) + " median " + fmt("%.2f", median) + " best single " + fmt("%.2f", best));
  }
  return o;
}

RankRecord record(Family a, Family b, Family c) {
  RankRecord r;
  r.by_rank = {a, b, c};
  return r;
}

Outcome order_stats_machinery() {
  Outcome o;
  std::mt19937_64 gen(606);
  int disagreements = 0, bad_sums = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t frame_len = 1 + gen() % 60;
    std::vector<std::optional<RankRecord>> recs(1 + gen() % 600);
    for (auto& rec : recs) {
      std::array<Family, 3> f = {Family::Mlp, Family::Elman, Family::Rbf};
      std::shuffle(f.begin(), f.end(), gen);
      rec = record(f[0], f[1], f[2]);
    }
    const OrderStatsReport got = order_stats(recs, frame_len);

    // Independent count: majority per rank per frame, lowest index on ties.
    std::size_t want[3][3] = {};
    std::size_t frames = 0;
    for (std::size_t start = 0; start < recs.size(); start += frame_len) {
      std::size_t tally[3][3] = {};
      for (std::size_t n = start; n < std::min(recs.size(), start + frame_len); ++n)
        for (std::size_t rank = 0; rank < 3; ++rank) ++tally[rank][static_cast<std::size_t>(recs[n]->by_rank[rank])];
      ++frames;
      for (std::size_t rank = 0; rank < 3; ++rank) {
        std::size_t winner = 0;
        for (std::size_t f = 1; f < 3; ++f)
          if (tally[rank][f] > tally[rank][winner]) winner = f;
        ++want[winner][rank];
      }
    }
    std::size_t sums[3] = {};
    for (std::size_t f = 0; f < 3; ++f) {
      const RankCounts& c = got.families[f];
      disagreements += c.min_count != want[f][0] || c.median_count != want[f][1] || c.max_count != want[f][2];
      sums[0] += c.min_count;
      sums[1] += c.median_count;
      sums[2] += c.max_count;
    }
    disagreements += got.frames != frames;
    for (std::size_t s : sums) bad_sums += s != got.frames;
  }
  o.require(disagreements == 0, std::to_string(disagreements) + " disagreements with brute force");
  o.require(bad_sums == 0, std::to_string(bad_sums) + " rank sums != K");
  o.note("100 record sets agree");
  return o;
}

int quiet_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return run_cli(args, out, err);
}

Outcome grid_determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "nadp_acceptance_grid";
  fs::remove_all(dir);
  fs::create_directories(dir / "corpus");
  for (const char* kind : {"ar", "tones", "noise"})
    quiet_cli({"synth", (dir / "corpus" / (std::string(kind) + ".wav")).string(), "--kind", kind, "--seconds", "0.5",
               "--seed", "3"});
  for (const char* run : {"a", "b"}) {
    const int code = quiet_cli({"grid", (dir / "corpus").string(), (dir / (std::string(run) + ".csv")).string(),
                                "--bitstream-dir", (dir / (std::string("bits_") + run)).string(), "--seed", "5"});
    o.require(code == 0, std::string("grid run ") + run + " exited " + std::to_string(code));
  }
  o.require(read_file(dir / "a.csv") == read_file(dir / "b.csv"), "per-file CSVs differ");
  o.require(read_file(dir / "a_aggregate.csv") == read_file(dir / "b_aggregate.csv"), "aggregate CSVs differ");
  std::size_t streams = 0;
  for (const auto& entry : fs::directory_iterator(dir / "bits_a")) {
    const fs::path other = dir / "bits_b" / entry.path().filename();
    o.require(fs::exists(other) && read_file(entry.path()) == read_file(other),
              entry.path().filename().string() + " differs");
    ++streams;
  }
  o.require(streams == 60, std::to_string(streams) + " bitstreams instead of 60");
  o.note("2 CSVs and " + std::to_string(streams) + " bitstreams identical");
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  const SampleBuffer ar = synthesize(SynthKind::Ar, 2.0, 1);
  const std::vector<SampleBuffer> signals = synth_corpus(2.0);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"rbf analytic anchor", rbf_anchor},
      {"codec lockstep", codec_lockstep},
      {"quantizer oracle", quantizer_oracle},
      {"jacobian vs finite differences", jacobian_check},
      {"lm monotonicity and exactness", lm_monotone_exact},
      {"greedy rbf", greedy_rbf},
      {"segsnr anchors", segsnr_anchors},
      {"segsnr trend in nq", [&] { return nq_trend(ar); }},
      {"epochs effect", [&] { return epochs_effect(ar); }},
      {"committee median vs single families", [&] { return fusion_effect(signals); }},
      {"order statistics", order_stats_machinery},
      {"grid determinism", grid_determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
