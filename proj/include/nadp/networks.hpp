#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace nadp {

/// Prediction order: every predictor sees the last 10 reconstructed samples,
/// ordered oldest to newest.
inline constexpr std::size_t kOrder = 10;

using Window = std::array<double, kOrder>;
using WindowView = std::span<const double, kOrder>;

/// Hyperbolic-tangent sigmoid.
double tansig(double x);

/// Gaussian radial activation exp(-n^2).
double radbas(double n);

/// radbas(||center - x|| * bias)
double rbf_neuron(WindowView center, double bias, WindowView x);

/// Distance at which a gaussian neuron outputs 0.5 is 0.8326 / bias, so a
/// spread sigma maps to bias = 0.8326 / sigma.
inline constexpr double kHalfActivationDistance = 0.8326;

/// 10-2-1 perceptron: tansig hidden layer, linear output.
struct MlpNet {
  static constexpr std::size_t kHidden = 2;
  static constexpr std::size_t kParamCount = kHidden * kOrder + kHidden + kHidden + 1;

  std::array<Window, kHidden> w1{};
  std::array<double, kHidden> b1{};
  std::array<double, kHidden> w2{};
  double b2 = 0.0;

  /// Flat parameter order: w1 row-major, b1, w2, b2.
  std::array<double, kParamCount> params() const;
  void set_params(std::span<const double, kParamCount> p);
};

/// Elman network: the hidden layer also receives its own previous output.
struct ElmanNet {
  static constexpr std::size_t kHidden = 2;
  static constexpr std::size_t kParamCount = kHidden * kOrder + kHidden * kHidden + kHidden + kHidden + 1;

  std::array<Window, kHidden> w_in{};
  std::array<std::array<double, kHidden>, kHidden> w_rec{};
  std::array<double, kHidden> b1{};
  std::array<double, kHidden> w2{};
  double b2 = 0.0;
  std::array<double, kHidden> context{};

  /// Flat parameter order: w_in row-major, w_rec row-major, b1, w2, b2.
  /// The context is state, not a parameter.
  std::array<double, kParamCount> params() const;
  void set_params(std::span<const double, kParamCount> p);
  void reset_context() { context.fill(0.0); }
};

/// Gaussian RBF layer with one shared bias, followed by a linear neuron.
struct RbfNet {
  std::vector<Window> centers;
  double spread = 0.22;
  double bias = kHalfActivationDistance / 0.22;
  std::vector<double> lin_w;
  double lin_b = 0.0;

  static RbfNet with_spread(double spread);
  std::size_t size() const { return centers.size(); }
};

double mlp_predict(const MlpNet& net, WindowView x);

struct ElmanOutput {
  double y = 0.0;
  std::array<double, ElmanNet::kHidden> next_context{};
};

/// Pure evaluation against `context`; does not touch the net.
ElmanOutput elman_predict(const ElmanNet& net, WindowView x,
                          std::span<const double, ElmanNet::kHidden> context);
/// Evaluates with the net's stored context.
ElmanOutput elman_predict(const ElmanNet& net, WindowView x);
/// Evaluates and advances the net's context.
double elman_step(ElmanNet& net, WindowView x);

double rbf_predict(const RbfNet& net, WindowView x);

/// Arithmetic mean of committee member outputs.
double committee_average(std::span<const double> outputs);
double committee_average(std::span<const MlpNet> nets, WindowView x);
/// Advances every member's context.
double committee_average(std::span<ElmanNet> nets, WindowView x);

}  // namespace nadp
