#include "nadp/training.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "nadp/bank.hpp"
#include "nadp/error.hpp"
#include "nadp/rng.hpp"

namespace nadp {

TrainSet build_trainset(std::span<const double> frame, std::size_t order) {
  if (order != kOrder) throw Error(Errc::InvalidConfig, "predictor order is fixed at 10");
  if (frame.size() <= order)
    throw Error(Errc::FrameTooShort, "frame of " + std::to_string(frame.size()) +
                                         " samples cannot train an order-" + std::to_string(order) +
                                         " predictor");
  TrainSet ts;
  const std::size_t rows = frame.size() - order;
  ts.inputs.resize(rows);
  ts.targets.resize(rows);
  for (std::size_t t = 0; t < rows; ++t) {
    std::copy_n(frame.begin() + static_cast<std::ptrdiff_t>(t), order, ts.inputs[t].begin());
    ts.targets[t] = frame[t + order];
  }
  return ts;
}

LmState LmState::initial(const LmSettings& s) {
  LmState st;
  st.mu = s.mu0;
  st.mu_inc = s.mu_inc;
  st.mu_dec = s.mu_dec;
  st.mu_min = s.mu_min;
  st.mu_max = s.mu_max;
  st.alpha = s.alpha0;
  st.beta = s.beta0;
  return st;
}

// ---------------------------------------------------------------------------

LmEpochReport lm_epoch(const LeastSquaresProblem& problem, Eigen::VectorXd& w, LmState& st) {
  const auto k = static_cast<Eigen::Index>(problem.param_count());
  const auto n = static_cast<Eigen::Index>(problem.residual_count());
  ++st.epoch;

  Eigen::VectorXd r(n);
  Eigen::MatrixXd jac(n, k);
  problem.residuals(w, r);
  problem.jacobian(w, jac);

  LmEpochReport rep;
  rep.e_d = r.squaredNorm();
  rep.e_w = w.squaredNorm();
  rep.objective_before = st.beta * rep.e_d + st.alpha * rep.e_w;
  rep.objective_after = rep.objective_before;

  const Eigen::MatrixXd normal = st.beta * (jac.transpose() * jac);
  const Eigen::VectorXd grad = st.beta * (jac.transpose() * r) + st.alpha * w;
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(k, k);

  Eigen::VectorXd trial(k);
  Eigen::VectorXd r_trial(n);
  while (true) {
    ++rep.trials;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal + (st.alpha + st.mu) * identity);
    if (ldlt.info() != Eigen::Success)
      throw Error(Errc::SingularNormalEquations, "damped normal matrix factorization failed");
    const Eigen::VectorXd delta = -ldlt.solve(grad);
    if (!delta.allFinite()) throw Error(Errc::SingularNormalEquations, "non-finite LM step");

    trial = w + delta;
    problem.residuals(trial, r_trial);
    const double e_d = r_trial.squaredNorm();
    const double e_w = trial.squaredNorm();
    const double objective = st.beta * e_d + st.alpha * e_w;
    if (objective < rep.objective_before) {
      w = trial;
      st.mu = std::max(st.mu * st.mu_dec, st.mu_min);
      rep.accepted = true;
      rep.objective_after = objective;
      rep.e_d = e_d;
      rep.e_w = e_w;
      break;
    }
    st.mu *= st.mu_inc;
    if (st.mu >= st.mu_max) {
      st.mu = st.mu_max;
      st.mu_ceiling_hit = true;
      return rep;
    }
  }

  if (st.alpha > 0.0) {
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal + st.alpha * identity);
    if (ldlt.info() != Eigen::Success)
      throw Error(Errc::SingularNormalEquations, "regularized Hessian factorization failed");
    rep.trace_hinv = 0.5 * ldlt.solve(identity).trace();
  }
  return rep;
}

LmState bayes_reg_update(const LmState& st, double e_d, double e_w, double trace_hinv,
                         std::size_t k, std::size_t n) {
  LmState next = st;
  const double params = static_cast<double>(k);
  next.gamma = std::clamp(params - 2.0 * st.alpha * trace_hinv, 0.0, params);
  if (e_w > 0.0) next.alpha = next.gamma / (2.0 * e_w);
  if (e_d > 0.0) next.beta = (static_cast<double>(n) - next.gamma) / (2.0 * e_d);
  return next;
}

// ---------------------------------------------------------------------------

namespace {

template <std::size_t N>
std::span<const double, N> fixed(const Eigen::VectorXd& w) {
  return std::span<const double, N>(w.data(), N);
}

MlpNet mlp_from(const Eigen::VectorXd& w) {
  MlpNet net;
  net.set_params(fixed<MlpNet::kParamCount>(w));
  return net;
}

ElmanNet elman_from(const Eigen::VectorXd& w) {
  ElmanNet net;
  net.set_params(fixed<ElmanNet::kParamCount>(w));
  return net;
}

template <std::size_t N>
Eigen::VectorXd to_vector(const std::array<double, N>& p) {
  return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(N));
}

constexpr std::size_t kRecOffset = ElmanNet::kHidden * kOrder;
constexpr std::size_t kElmanB1 = kRecOffset + ElmanNet::kHidden * ElmanNet::kHidden;
constexpr std::size_t kElmanW2 = kElmanB1 + ElmanNet::kHidden;
constexpr std::size_t kElmanB2 = kElmanW2 + ElmanNet::kHidden;

constexpr std::size_t kMlpB1 = MlpNet::kHidden * kOrder;
constexpr std::size_t kMlpW2 = kMlpB1 + MlpNet::kHidden;
constexpr std::size_t kMlpB2 = kMlpW2 + MlpNet::kHidden;

}  // namespace

void MlpProblem::residuals(const Eigen::VectorXd& w, Eigen::VectorXd& r) const {
  const MlpNet net = mlp_from(w);
  r.resize(static_cast<Eigen::Index>(ts_.size()));
  for (std::size_t t = 0; t < ts_.size(); ++t)
    r[static_cast<Eigen::Index>(t)] = mlp_predict(net, ts_.inputs[t]) - ts_.targets[t];
}

void MlpProblem::jacobian(const Eigen::VectorXd& w, Eigen::MatrixXd& jac) const {
  const MlpNet net = mlp_from(w);
  jac.setZero(static_cast<Eigen::Index>(ts_.size()), MlpNet::kParamCount);
  for (std::size_t t = 0; t < ts_.size(); ++t) {
    const auto row = static_cast<Eigen::Index>(t);
    const Window& x = ts_.inputs[t];
    for (std::size_t j = 0; j < MlpNet::kHidden; ++j) {
      double a = 0.0;
      for (std::size_t i = 0; i < kOrder; ++i) a += net.w1[j][i] * x[i];
      a += net.b1[j];
      const double h = tansig(a);
      const double d = net.w2[j] * (1.0 - h * h);
      for (std::size_t i = 0; i < kOrder; ++i) jac(row, static_cast<Eigen::Index>(j * kOrder + i)) = d * x[i];
      jac(row, static_cast<Eigen::Index>(kMlpB1 + j)) = d;
      jac(row, static_cast<Eigen::Index>(kMlpW2 + j)) = h;
    }
    jac(row, kMlpB2) = 1.0;
  }
}

void ElmanProblem::residuals(const Eigen::VectorXd& w, Eigen::VectorXd& r) const {
  ElmanNet net = elman_from(w);
  r.resize(static_cast<Eigen::Index>(ts_.size()));
  for (std::size_t t = 0; t < ts_.size(); ++t)
    r[static_cast<Eigen::Index>(t)] = elman_step(net, ts_.inputs[t]) - ts_.targets[t];
}

std::vector<ElmanProblem::Context> ElmanProblem::contexts(const Eigen::VectorXd& w) const {
  ElmanNet net = elman_from(w);
  std::vector<Context> out(ts_.size());
  for (std::size_t t = 0; t < ts_.size(); ++t) {
    out[t] = net.context;
    elman_step(net, ts_.inputs[t]);
  }
  return out;
}

void ElmanProblem::residuals_with_contexts(const Eigen::VectorXd& w, std::span<const Context> contexts,
                                           Eigen::VectorXd& r) const {
  const ElmanNet net = elman_from(w);
  r.resize(static_cast<Eigen::Index>(ts_.size()));
  for (std::size_t t = 0; t < ts_.size(); ++t)
    r[static_cast<Eigen::Index>(t)] = elman_predict(net, ts_.inputs[t], contexts[t]).y - ts_.targets[t];
}

void ElmanProblem::jacobian(const Eigen::VectorXd& w, Eigen::MatrixXd& jac) const {
  ElmanNet net = elman_from(w);
  jac.setZero(static_cast<Eigen::Index>(ts_.size()), ElmanNet::kParamCount);
  for (std::size_t t = 0; t < ts_.size(); ++t) {
    const auto row = static_cast<Eigen::Index>(t);
    const Window& x = ts_.inputs[t];
    const Context c = net.context;
    const ElmanOutput out = elman_predict(net, x);
    for (std::size_t j = 0; j < ElmanNet::kHidden; ++j) {
      const double h = out.next_context[j];
      const double d = net.w2[j] * (1.0 - h * h);
      for (std::size_t i = 0; i < kOrder; ++i) jac(row, static_cast<Eigen::Index>(j * kOrder + i)) = d * x[i];
      for (std::size_t k = 0; k < ElmanNet::kHidden; ++k)
        jac(row, static_cast<Eigen::Index>(kRecOffset + j * ElmanNet::kHidden + k)) = d * c[k];
      jac(row, static_cast<Eigen::Index>(kElmanB1 + j)) = d;
      jac(row, static_cast<Eigen::Index>(kElmanW2 + j)) = h;
    }
    jac(row, kElmanB2) = 1.0;
    net.context = out.next_context;
  }
}

LmEpochReport lm_epoch(MlpNet& net, const TrainSet& ts, LmState& st) {
  MlpProblem problem(ts);
  Eigen::VectorXd w = to_vector(net.params());
  const LmEpochReport rep = lm_epoch(problem, w, st);
  net.set_params(fixed<MlpNet::kParamCount>(w));
  return rep;
}

LmEpochReport lm_epoch(ElmanNet& net, const TrainSet& ts, LmState& st) {
  ElmanProblem problem(ts);
  Eigen::VectorXd w = to_vector(net.params());
  const LmEpochReport rep = lm_epoch(problem, w, st);
  net.set_params(fixed<ElmanNet::kParamCount>(w));
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

template <typename Net>
Net random_net(std::uint64_t seed, std::uint64_t frame_index, Family family, std::size_t member) {
  Rng rng(mix_seed({seed, frame_index, static_cast<std::uint64_t>(family), member}));
  std::array<double, Net::kParamCount> p{};
  for (double& v : p) v = rng.uniform(-0.5, 0.5);
  Net net;
  net.set_params(p);
  return net;
}

template <typename Net, typename Problem>
Net train_net(Net net, const TrainSet& ts, int epochs, const LmSettings& lm) {
  const Problem problem(ts);
  Eigen::VectorXd w = to_vector(net.params());
  LmState st = LmState::initial(lm);
  for (int e = 0; e < epochs; ++e) {
    const LmEpochReport rep = lm_epoch(problem, w, st);
    if (rep.accepted)
      st = bayes_reg_update(st, rep.e_d, rep.e_w, rep.trace_hinv, Net::kParamCount, ts.size());
    if (st.mu_ceiling_hit) break;
  }
  net.set_params(fixed<Net::kParamCount>(w));
  return net;
}

template <typename Net, typename InitFn, typename TrainFn>
CommitteeResult<Net> train_committee(const TrainSet& ts, const CommitteeSpec& spec, InitFn init,
                                     TrainFn train) {
  struct Outcome {
    Net net;
    bool failed = false;
  };
  auto member_job = [&](std::size_t i) {
    const Net start = init(spec.seed, spec.frame_index, i);
    try {
      return Outcome{train(start, ts, spec.epochs, spec.lm), false};
    } catch (const Error& e) {
      if (e.code() != Errc::SingularNormalEquations) throw;
      return Outcome{start, true};
    }
  };

  std::vector<Outcome> outcomes;
  outcomes.reserve(kCommitteeSize);
  if (spec.parallel) {
    std::vector<std::future<Outcome>> jobs;
    for (std::size_t i = 0; i < kCommitteeSize; ++i)
      jobs.push_back(std::async(std::launch::async, member_job, i));
    for (auto& j : jobs) outcomes.push_back(j.get());
  } else {
    for (std::size_t i = 0; i < kCommitteeSize; ++i) outcomes.push_back(member_job(i));
  }

  CommitteeResult<Net> result;
  for (Outcome& o : outcomes) {
    result.nets.push_back(o.net);
    result.failed_members += o.failed ? 1 : 0;
  }
  return result;
}

}  // namespace

MlpNet initial_mlp(std::uint64_t seed, std::uint64_t frame_index, std::size_t member) {
  return random_net<MlpNet>(seed, frame_index, Family::Mlp, member);
}

ElmanNet initial_elman(std::uint64_t seed, std::uint64_t frame_index, std::size_t member) {
  return random_net<ElmanNet>(seed, frame_index, Family::Elman, member);
}

MlpNet train_mlp(MlpNet net, const TrainSet& ts, int epochs, const LmSettings& lm) {
  return train_net<MlpNet, MlpProblem>(net, ts, epochs, lm);
}

ElmanNet train_elman(ElmanNet net, const TrainSet& ts, int epochs, const LmSettings& lm) {
  ElmanNet trained = train_net<ElmanNet, ElmanProblem>(net, ts, epochs, lm);
  trained.reset_context();
  return trained;
}

CommitteeResult<MlpNet> train_mlp_committee(const TrainSet& ts, const CommitteeSpec& spec) {
  return train_committee<MlpNet>(ts, spec, initial_mlp, train_mlp);
}

CommitteeResult<ElmanNet> train_elman_committee(const TrainSet& ts, const CommitteeSpec& spec) {
  return train_committee<ElmanNet>(ts, spec, initial_elman, train_elman);
}

}  // namespace nadp
