#include <cmath>
#include <limits>

#include "nadp/error.hpp"
#include "nadp/training.hpp"

namespace nadp {

namespace {

// A candidate whose activation column keeps less than this fraction of its
// energy after removing the span of the chosen neurons adds nothing new.
constexpr double kCollinearTolerance = 1e-10;

}  // namespace

double sum_squared_error(const RbfNet& net, const TrainSet& ts) {
  double sse = 0.0;
  for (std::size_t t = 0; t < ts.size(); ++t) {
    const double e = rbf_predict(net, ts.inputs[t]) - ts.targets[t];
    sse += e * e;
  }
  return sse;
}

RbfNet rbf_train_greedy(const TrainSet& ts, const RbfTrainConfig& cfg, RbfTrainTrace* trace) {
  if (ts.size() == 0) throw Error(Errc::FrameTooShort, "RBF training needs at least one pair");
  if (!(cfg.spread > 0.0)) throw Error(Errc::InvalidConfig, "RBF spread must be positive");

  RbfNet net = RbfNet::with_spread(cfg.spread);
  const auto m = static_cast<Eigen::Index>(ts.size());

  // activation(r, c): response of a neuron centered on input c to input r.
  Eigen::MatrixXd activation(m, m);
  for (Eigen::Index c = 0; c < m; ++c)
    for (Eigen::Index r = 0; r < m; ++r)
      activation(r, c) = rbf_neuron(ts.inputs[static_cast<std::size_t>(c)], net.bias,
                                    ts.inputs[static_cast<std::size_t>(r)]);

  const Eigen::VectorXd targets = Eigen::Map<const Eigen::VectorXd>(ts.targets.data(), m);

  // Each candidate column is kept orthogonalized against the chosen neurons,
  // so the error drop from adding candidate c is exactly (v_c . res)^2 / |v_c|^2:
  // the same value a full least-squares refit over the enlarged basis gives.
  Eigen::MatrixXd candidates = activation;
  const Eigen::VectorXd energy = activation.colwise().squaredNorm().transpose();
  Eigen::VectorXd residual = targets;
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  std::vector<std::size_t> chosen;

  RbfTrainTrace local;
  local.sse_per_neuron.push_back(residual.squaredNorm());

  while (chosen.size() < cfg.max_neurons && local.sse_per_neuron.back() > cfg.error_goal) {
    Eigen::Index best = -1;
    double best_gain = -1.0;
    double best_norm = 0.0;
    for (Eigen::Index c = 0; c < m; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      const double norm = candidates.col(c).squaredNorm();
      if (norm <= kCollinearTolerance * energy[c]) continue;
      const double proj = candidates.col(c).dot(residual);
      const double gain = proj * proj / norm;
      if (gain > best_gain) {
        best = c;
        best_gain = gain;
        best_norm = norm;
      }
    }
    if (best < 0) break;

    const Eigen::VectorXd q = candidates.col(best) / std::sqrt(best_norm);
    used[static_cast<std::size_t>(best)] = true;
    chosen.push_back(static_cast<std::size_t>(best));
    residual -= q.dot(residual) * q;
    for (Eigen::Index c = 0; c < m; ++c) {
      if (!used[static_cast<std::size_t>(c)]) candidates.col(c) -= q.dot(candidates.col(c)) * q;
    }
    local.sse_per_neuron.push_back(residual.squaredNorm());
  }

  // Final linear layer: ridge least squares over the chosen columns plus a bias.
  const auto s = static_cast<Eigen::Index>(chosen.size());
  Eigen::MatrixXd design(m, s + 1);
  for (Eigen::Index i = 0; i < s; ++i) design.col(i) = activation.col(static_cast<Eigen::Index>(chosen[static_cast<std::size_t>(i)]));
  design.col(s).setOnes();
  Eigen::MatrixXd gram = design.transpose() * design;
  gram.diagonal().array() += cfg.ridge;
  const Eigen::VectorXd coef = gram.ldlt().solve(design.transpose() * targets);

  net.centers.reserve(chosen.size());
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    net.centers.push_back(ts.inputs[chosen[i]]);
    net.lin_w.push_back(coef[static_cast<Eigen::Index>(i)]);
  }
  net.lin_b = coef[s];

  if (trace != nullptr) {
    local.chosen = std::move(chosen);
    local.final_sse = sum_squared_error(net, ts);
    *trace = std::move(local);
  }
  return net;
}

}  // namespace nadp
