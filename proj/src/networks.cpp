#include "nadp/networks.hpp"

#include <cmath>

namespace nadp {

double tansig(double x) { return std::tanh(x); }

double radbas(double n) { return std::exp(-n * n); }

double rbf_neuron(WindowView center, double bias, WindowView x) {
  double sq = 0.0;
  for (std::size_t i = 0; i < kOrder; ++i) {
    const double d = center[i] - x[i];
    sq += d * d;
  }
  return radbas(std::sqrt(sq) * bias);
}

std::array<double, MlpNet::kParamCount> MlpNet::params() const {
  std::array<double, kParamCount> p{};
  std::size_t k = 0;
  for (const auto& row : w1)
    for (double w : row) p[k++] = w;
  for (double b : b1) p[k++] = b;
  for (double w : w2) p[k++] = w;
  p[k] = b2;
  return p;
}

void MlpNet::set_params(std::span<const double, kParamCount> p) {
  std::size_t k = 0;
  for (auto& row : w1)
    for (double& w : row) w = p[k++];
  for (double& b : b1) b = p[k++];
  for (double& w : w2) w = p[k++];
  b2 = p[k];
}

std::array<double, ElmanNet::kParamCount> ElmanNet::params() const {
  std::array<double, kParamCount> p{};
  std::size_t k = 0;
  for (const auto& row : w_in)
    for (double w : row) p[k++] = w;
  for (const auto& row : w_rec)
    for (double w : row) p[k++] = w;
  for (double b : b1) p[k++] = b;
  for (double w : w2) p[k++] = w;
  p[k] = b2;
  return p;
}

void ElmanNet::set_params(std::span<const double, kParamCount> p) {
  std::size_t k = 0;
  for (auto& row : w_in)
    for (double& w : row) w = p[k++];
  for (auto& row : w_rec)
    for (double& w : row) w = p[k++];
  for (double& b : b1) b = p[k++];
  for (double& w : w2) w = p[k++];
  b2 = p[k];
}

RbfNet RbfNet::with_spread(double spread) {
  RbfNet net;
  net.spread = spread;
  net.bias = kHalfActivationDistance / spread;
  return net;
}

double mlp_predict(const MlpNet& net, WindowView x) {
  double y = 0.0;
  for (std::size_t j = 0; j < MlpNet::kHidden; ++j) {
    double a = 0.0;
    for (std::size_t i = 0; i < kOrder; ++i) a += net.w1[j][i] * x[i];
    a += net.b1[j];
    y += net.w2[j] * tansig(a);
  }
  return y + net.b2;
}

// Same summation order as mlp_predict, with the recurrent terms added before
// the bias, so a zero recurrent matrix reproduces the perceptron exactly.
ElmanOutput elman_predict(const ElmanNet& net, WindowView x,
                          std::span<const double, ElmanNet::kHidden> context) {
  ElmanOutput out;
  double y = 0.0;
  for (std::size_t j = 0; j < ElmanNet::kHidden; ++j) {
    double a = 0.0;
    for (std::size_t i = 0; i < kOrder; ++i) a += net.w_in[j][i] * x[i];
    for (std::size_t k = 0; k < ElmanNet::kHidden; ++k) a += net.w_rec[j][k] * context[k];
    a += net.b1[j];
    const double h = tansig(a);
    out.next_context[j] = h;
    y += net.w2[j] * h;
  }
  out.y = y + net.b2;
  return out;
}

ElmanOutput elman_predict(const ElmanNet& net, WindowView x) {
  return elman_predict(net, x, std::span<const double, ElmanNet::kHidden>(net.context));
}

double elman_step(ElmanNet& net, WindowView x) {
  const ElmanOutput out = elman_predict(net, x);
  net.context = out.next_context;
  return out.y;
}

double rbf_predict(const RbfNet& net, WindowView x) {
  double y = net.lin_b;
  for (std::size_t i = 0; i < net.centers.size(); ++i)
    y += net.lin_w[i] * rbf_neuron(net.centers[i], net.bias, x);
  return y;
}

double committee_average(std::span<const double> outputs) {
  double sum = 0.0;
  for (double v : outputs) sum += v;
  return sum / static_cast<double>(outputs.size());
}

double committee_average(std::span<const MlpNet> nets, WindowView x) {
  double sum = 0.0;
  for (const MlpNet& n : nets) sum += mlp_predict(n, x);
  return sum / static_cast<double>(nets.size());
}

double committee_average(std::span<ElmanNet> nets, WindowView x) {
  double sum = 0.0;
  for (ElmanNet& n : nets) sum += elman_step(n, x);
  return sum / static_cast<double>(nets.size());
}

}  // namespace nadp
