#include "nadp/codec.hpp"

#include <algorithm>
#include <future>

#include "nadp/error.hpp"
#include "nadp/training.hpp"

namespace nadp {

namespace {

bool uses_mlp(PredictorMode m) {
  return m == PredictorMode::Mlp || m == PredictorMode::CommitteeMean || m == PredictorMode::CommitteeMedian;
}

bool uses_elman(PredictorMode m) {
  return m == PredictorMode::Elman || m == PredictorMode::CommitteeMean || m == PredictorMode::CommitteeMedian;
}

bool uses_rbf(PredictorMode m) {
  return m == PredictorMode::Rbf || m == PredictorMode::CommitteeMean || m == PredictorMode::CommitteeMedian;
}

}  // namespace

double reconstruct_sample(double prediction, double e_hat) {
  return std::clamp(prediction + e_hat, -1.0, 1.0);
}

CodecState::CodecState(const CodecConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  quantizer_ = JayantQuantizerState::initial(cfg_.nq);
  current_frame_.reserve(cfg_.frame_len);
}

void CodecState::retrain() {
  const TrainSet ts = build_trainset(current_frame_);
  CommitteeSpec spec;
  spec.epochs = cfg_.epochs;
  spec.seed = cfg_.seed;
  spec.frame_index = frame_index_;

  // Families train concurrently; each result is installed in family order.
  std::future<CommitteeResult<MlpNet>> mlp_job;
  std::future<CommitteeResult<ElmanNet>> elman_job;
  std::future<RbfNet> rbf_job;
  if (uses_mlp(cfg_.mode))
    mlp_job = std::async(std::launch::async, [&] { return train_mlp_committee(ts, spec); });
  if (uses_elman(cfg_.mode))
    elman_job = std::async(std::launch::async, [&] { return train_elman_committee(ts, spec); });
  if (uses_rbf(cfg_.mode)) rbf_job = std::async(std::launch::async, [&] { return rbf_train_greedy(ts); });

  bool fell_back = false;
  if (mlp_job.valid()) {
    CommitteeResult<MlpNet> r = mlp_job.get();
    if (r.failed_members == kCommitteeSize && !bank_.mlp.empty())
      fell_back = true;
    else
      bank_.mlp = std::move(r.nets);
  }
  if (elman_job.valid()) {
    CommitteeResult<ElmanNet> r = elman_job.get();
    if (r.failed_members == kCommitteeSize && !bank_.elman.empty()) {
      fell_back = true;
    } else {
      bank_.elman = std::move(r.nets);
      for (ElmanNet& n : bank_.elman) n.reset_context();
    }
  }
  if (rbf_job.valid()) {
    bank_.rbf = rbf_job.get();
    bank_.has_rbf = true;
  }
  if (fell_back) fallback_frames_.push_back(frame_index_);
  bank_ready_ = true;
}

Prediction CodecState::predict_next() {
  if (retrain_pending_) {
    retrain();
    current_frame_.clear();
    retrain_pending_ = false;
  }

  Prediction p;
  if (!bank_ready_ || cfg_.mode == PredictorMode::LastSampleBaseline) {
    p.value = history_.back();
    return p;
  }

  switch (cfg_.mode) {
    case PredictorMode::Mlp:
      p.value = committee_average(std::span<const MlpNet>(bank_.mlp), history_);
      break;
    case PredictorMode::Elman:
      p.value = committee_average(std::span<ElmanNet>(bank_.elman), history_);
      break;
    case PredictorMode::Rbf:
      p.value = rbf_predict(bank_.rbf, history_);
      break;
    case PredictorMode::CommitteeMean:
    case PredictorMode::CommitteeMedian: {
      const std::array<double, 3> outputs{
          committee_average(std::span<const MlpNet>(bank_.mlp), history_),
          committee_average(std::span<ElmanNet>(bank_.elman), history_),
          rbf_predict(bank_.rbf, history_),
      };
      const FusionResult f = fuse(
          outputs, cfg_.mode == PredictorMode::CommitteeMean ? FusionMode::Mean : FusionMode::Median);
      p.value = f.value;
      p.ranks = f.ranks;
      break;
    }
    case PredictorMode::LastSampleBaseline:
      break;
  }
  return p;
}

void CodecState::commit(double reconstructed) {
  std::shift_left(history_.begin(), history_.end(), 1);
  history_.back() = reconstructed;
  current_frame_.push_back(reconstructed);
  if (current_frame_.size() == cfg_.frame_len) {
    ++frame_index_;
    // Training is deferred to the next prediction so the final frame of a
    // stream never pays for a bank nobody uses.
    retrain_pending_ = cfg_.mode != PredictorMode::LastSampleBaseline;
    if (!retrain_pending_) current_frame_.clear();
  }
}

QuantizedCode Encoder::push(double x) {
  const Prediction p = state_.predict_next();
  const QuantizeResult q = quantize(x - p.value, state_.quantizer());
  last_ = reconstruct_sample(p.value, q.e_hat);
  last_ranks_ = p.ranks;
  state_.set_quantizer(q.next);
  state_.commit(last_);
  return q.code;
}

double Decoder::push(QuantizedCode code) {
  const Prediction p = state_.predict_next();
  const DequantizeResult d = dequantize(code, state_.quantizer());
  const double rec = reconstruct_sample(p.value, d.e_hat);
  state_.set_quantizer(d.next);
  state_.commit(rec);
  return rec;
}

EncodeTrace encode_traced(const SampleBuffer& x, const CodecConfig& cfg) {
  cfg.validate();
  if (x.samples.empty()) throw Error(Errc::EmptySignal, "nothing to encode");
  if (x.sample_rate_hz != kSampleRateHz) throw Error(Errc::UnsupportedFormat, "codec runs at 8000 Hz only");

  EncodeTrace trace;
  BitstreamHeader& h = trace.bitstream.header;
  h.config = cfg;
  h.sample_count = x.samples.size();
  const auto padded = static_cast<std::size_t>(h.padded_sample_count());

  Encoder enc(cfg);
  std::vector<QuantizedCode> codes;
  codes.reserve(padded);
  trace.reconstruction.reserve(x.samples.size());
  trace.ranks.reserve(x.samples.size());
  for (std::size_t n = 0; n < padded; ++n) {
    codes.push_back(enc.push(n < x.samples.size() ? x.samples[n] : 0.0));
    if (n < x.samples.size()) {
      trace.reconstruction.push_back(enc.last_reconstruction());
      trace.ranks.push_back(enc.last_ranks());
    }
  }
  trace.bitstream.payload = Bitstream::pack(codes, cfg.nq);
  trace.fallback_frames = enc.state().fallback_frames();
  return trace;
}

Bitstream encode(const SampleBuffer& x, const CodecConfig& cfg) { return encode_traced(x, cfg).bitstream; }

SampleBuffer decode(const Bitstream& bs) {
  if (bs.header.version != kBitstreamVersion) throw Error(Errc::VersionMismatch, "unsupported bitstream version");
  const std::vector<QuantizedCode> codes = bs.codes();
  Decoder dec(bs.header.config);
  SampleBuffer out;
  out.samples.reserve(codes.size());
  for (const QuantizedCode& c : codes) out.samples.push_back(dec.push(c));
  out.samples.resize(static_cast<std::size_t>(bs.header.sample_count));
  return out;
}

}  // namespace nadp
