#include "passage/talbot.hpp"

#include <algorithm>
#include <stdexcept>

namespace passage {

namespace {

constexpr double kShift = -0.6122;
constexpr double kCot = 0.5017;
constexpr double kAngle = 0.6407;
constexpr double kImag = 0.2645;

}  // namespace

Complex talbot_contour(double theta, double scale) {
  const double real = theta == 0.0 ? kCot / kAngle : kCot * theta / std::tan(kAngle * theta);
  return scale * Complex(kShift + real, kImag * theta);
}

TalbotRule talbot_rule(int M, double t, ContourScaling scaling) {
  if (M < 1) throw std::invalid_argument("talbot_rule: M must be >= 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("talbot_rule: t must be positive and finite");
  const int scale_count = scaling == ContourScaling::kAuto ? std::min(M, kDefaultTalbotNodes) : M;
  const double scale = 2.0 * scale_count / t;
  TalbotRule rule;
  rule.M = M;
  rule.t = t;
  for (int k = 1; k <= M; ++k) {
    const double theta = (k - 0.5) * kPi / M;
    const double arg = kAngle * theta;
    const double sin_arg = std::sin(arg);
    const double cot = std::cos(arg) / sin_arg;
    rule.theta.push_back(theta);
    rule.nodes.push_back(talbot_contour(theta, scale));
    rule.derivatives.push_back(scale * Complex(kCot * (cot - arg / (sin_arg * sin_arg)), kImag));
  }
  return rule;
}

double talbot_sum(const TalbotRule& rule, const std::vector<Complex>& values) {
  if (values.size() != rule.nodes.size()) throw std::invalid_argument("talbot_sum: size mismatch");
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    sum += (std::exp(rule.nodes[k] * rule.t) * values[k] * rule.derivatives[k]).imag();
  }
  return sum / rule.M;
}

}  // namespace passage
