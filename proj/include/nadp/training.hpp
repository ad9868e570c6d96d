#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nadp/fusion.hpp"
#include "nadp/networks.hpp"

namespace nadp {

/// Sliding-window regression pairs cut from one decoded frame.
struct TrainSet {
  std::vector<Window> inputs;
  std::vector<double> targets;

  std::size_t size() const { return targets.size(); }
};

/// Row t holds samples [t, t + order) oldest to newest; its target is
/// sample t + order. Throws Errc::FrameTooShort unless frame.size() > order.
TrainSet build_trainset(std::span<const double> frame, std::size_t order = kOrder);

// ---------------------------------------------------------------------------
// Levenberg-Marquardt with Bayesian regularization

struct LmSettings {
  double mu0 = 1e-3;
  double mu_inc = 10.0;
  double mu_dec = 0.1;
  double mu_min = 1e-20;
  double mu_max = 1e10;
  double alpha0 = 0.0;
  double beta0 = 1.0;
};

struct LmState {
  double mu = 1e-3;
  double mu_inc = 10.0;
  double mu_dec = 0.1;
  double mu_min = 1e-20;
  double mu_max = 1e10;
  double alpha = 0.0;  // weight-decay term
  double beta = 1.0;   // data term
  double gamma = 0.0;  // effective parameter count from the last update
  int epoch = 0;
  bool mu_ceiling_hit = false;

  static LmState initial(const LmSettings& s = {});
};

/// Residual model for the optimizer: r(w) and its Jacobian dr/dw.
class LeastSquaresProblem {
 public:
  virtual ~LeastSquaresProblem() = default;
  virtual std::size_t param_count() const = 0;
  virtual std::size_t residual_count() const = 0;
  virtual void residuals(const Eigen::VectorXd& w, Eigen::VectorXd& r) const = 0;
  virtual void jacobian(const Eigen::VectorXd& w, Eigen::MatrixXd& jac) const = 0;
};

struct LmEpochReport {
  bool accepted = false;
  double objective_before = 0.0;  // F = beta * E_D + alpha * E_W at entry
  double objective_after = 0.0;   // F at exit (equal to before when rejected)
  double e_d = 0.0;               // sum of squared residuals at exit
  double e_w = 0.0;               // sum of squared parameters at exit
  /// Trace of the inverse Gauss-Newton Hessian of F, 2 * (beta J'J + alpha I),
  /// taken at the Jacobian used for the step. Zero when alpha == 0.
  double trace_hinv = 0.0;
  int trials = 0;
};

/// One outer LM iteration on F = beta * E_D + alpha * E_W. Trial steps
/// -(beta J'J + (alpha + mu) I)^-1 (beta J'r + alpha w) are retried with mu
/// grown by mu_inc until F decreases or mu reaches its ceiling. Throws
/// Errc::SingularNormalEquations if the damped system cannot be solved.
LmEpochReport lm_epoch(const LeastSquaresProblem& problem, Eigen::VectorXd& w, LmState& st);
LmEpochReport lm_epoch(MlpNet& net, const TrainSet& ts, LmState& st);
LmEpochReport lm_epoch(ElmanNet& net, const TrainSet& ts, LmState& st);

/// Gauss-Newton Bayesian hyperparameter update:
///   gamma = clamp(k - 2 alpha trace_hinv, 0, k)
///   alpha' = gamma / (2 E_W)        (alpha kept when E_W == 0)
///   beta'  = (N - gamma) / (2 E_D)  (beta kept when E_D == 0)
LmState bayes_reg_update(const LmState& st, double e_d, double e_w, double trace_hinv,
                         std::size_t k, std::size_t n);

/// Perceptron residuals r_t = mlp(x_t) - y_t.
class MlpProblem final : public LeastSquaresProblem {
 public:
  explicit MlpProblem(const TrainSet& ts) : ts_(ts) {}
  std::size_t param_count() const override { return MlpNet::kParamCount; }
  std::size_t residual_count() const override { return ts_.size(); }
  void residuals(const Eigen::VectorXd& w, Eigen::VectorXd& r) const override;
  void jacobian(const Eigen::VectorXd& w, Eigen::MatrixXd& jac) const override;

 private:
  const TrainSet& ts_;
};

/// Elman residuals over the frame in sample order, context starting at zero.
/// The Jacobian is truncated at depth 1: each row's context is the hidden
/// output of the previous row and is held constant when differentiating.
class ElmanProblem final : public LeastSquaresProblem {
 public:
  using Context = std::array<double, ElmanNet::kHidden>;

  explicit ElmanProblem(const TrainSet& ts) : ts_(ts) {}
  std::size_t param_count() const override { return ElmanNet::kParamCount; }
  std::size_t residual_count() const override { return ts_.size(); }
  void residuals(const Eigen::VectorXd& w, Eigen::VectorXd& r) const override;
  void jacobian(const Eigen::VectorXd& w, Eigen::MatrixXd& jac) const override;

  /// Contexts seen by each row when the network runs with parameters w.
  std::vector<Context> contexts(const Eigen::VectorXd& w) const;
  /// Residuals with the given per-row contexts instead of the recurrence.
  void residuals_with_contexts(const Eigen::VectorXd& w, std::span<const Context> contexts,
                               Eigen::VectorXd& r) const;

 private:
  const TrainSet& ts_;
};

// ---------------------------------------------------------------------------
// Multi-start committees

struct CommitteeSpec {
  int epochs = 6;
  std::uint64_t seed = 0;
  std::uint64_t frame_index = 0;
  LmSettings lm;
  bool parallel = true;
};

template <typename Net>
struct CommitteeResult {
  std::vector<Net> nets;
  /// Members whose training raised SingularNormalEquations; each was
  /// replaced by its untrained initialization.
  std::size_t failed_members = 0;
};

/// Uniform [-0.5, 0.5] initialization from the member's derived seed.
MlpNet initial_mlp(std::uint64_t seed, std::uint64_t frame_index, std::size_t member);
ElmanNet initial_elman(std::uint64_t seed, std::uint64_t frame_index, std::size_t member);

/// Runs `epochs` LM iterations with a Bayesian update after every accepted
/// step, stopping early if mu reaches its ceiling.
MlpNet train_mlp(MlpNet net, const TrainSet& ts, int epochs, const LmSettings& lm = {});
ElmanNet train_elman(ElmanNet net, const TrainSet& ts, int epochs, const LmSettings& lm = {});

/// Five independently initialized and trained members, returned in member
/// order. Bit-identical for identical inputs regardless of `parallel`.
CommitteeResult<MlpNet> train_mlp_committee(const TrainSet& ts, const CommitteeSpec& spec);
CommitteeResult<ElmanNet> train_elman_committee(const TrainSet& ts, const CommitteeSpec& spec);

// ---------------------------------------------------------------------------
// Greedy RBF construction

struct RbfTrainConfig {
  double spread = 0.22;
  std::size_t max_neurons = 20;
  double error_goal = 0.0;
  double ridge = 1e-10;
};

struct RbfTrainTrace {
  /// Selection-phase SSE; entry n is the error with n neurons and no bias.
  std::vector<double> sse_per_neuron;
  /// Training indices chosen as centers, in order of selection.
  std::vector<std::size_t> chosen;
  /// SSE of the returned net (final refit including the bias).
  double final_sse = 0.0;
};

/// Adds one neuron at a time, each time choosing the training input whose
/// gaussian lowers the least-squares error of the linear layer the most.
/// The returned net's linear layer (weights and bias) is refit by ridge
/// least squares.
RbfNet rbf_train_greedy(const TrainSet& ts, const RbfTrainConfig& cfg = {},
                        RbfTrainTrace* trace = nullptr);

/// Sum of squared errors of any predictor callable over a training set.
double sum_squared_error(const RbfNet& net, const TrainSet& ts);

}  // namespace nadp
