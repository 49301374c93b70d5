#pragma once

// Inverse Laplace transform by the midpoint rule on the Talbot contour
//   s(theta) = (2M/t)(-0.6122 + 0.5017 theta cot(0.6407 theta) + 0.2645 i theta),
// theta in (-pi, pi), with 2M nodes theta_k = +-(k - 1/2) pi/M. Only the upper
// half is stored; for real-valued f the lower half contributes the complex
// conjugate, so f(t) = (1/M) sum_k Im[e^{s_k t} F(s_k) s'_k].
//
// F is evaluated at the nodes independently and possibly concurrently; it
// must be safe to call from several threads.

#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <vector>

#include "passage/types.hpp"

namespace passage {

/// kAuto caps the contour scale at the M = 12 value when M > 12, which
/// keeps e^{s t} from amplifying round-off; kNone always uses 2M/t.
enum class ContourScaling { kAuto, kNone };

inline constexpr int kDefaultTalbotNodes = 12;

struct TalbotRule {
  int M = 0;
  double t = 0.0;
  std::vector<double> theta;
  std::vector<Complex> nodes;
  std::vector<Complex> derivatives;  // ds/dtheta
};

/// Throws std::invalid_argument unless M >= 1 and t > 0.
TalbotRule talbot_rule(int M, double t, ContourScaling scaling = ContourScaling::kAuto);

/// Contour value at an arbitrary angle for a given scale 2M/t (theta = 0
/// uses the limit theta cot(a theta) -> 1/a).
Complex talbot_contour(double theta, double scale);

/// Combines transform values F(s_k) at the rule's nodes into f(t).
double talbot_sum(const TalbotRule& rule, const std::vector<Complex>& values);

template <typename F>
double invert(F&& transform, double t, int M = kDefaultTalbotNodes,
              ContourScaling scaling = ContourScaling::kAuto) {
  const TalbotRule rule = talbot_rule(M, t, scaling);
  std::vector<Complex> values(rule.nodes.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = transform(rule.nodes[k]);
  return talbot_sum(rule, values);
}

struct BatchInversion {
  std::vector<double> values;       // NaN where the evaluation failed
  std::vector<std::string> errors;  // empty where it succeeded

  bool ok(std::size_t i) const { return errors[i].empty(); }
};

/// Inverts at each time independently; failures are recorded per time and
/// do not stop the batch.
template <typename F>
BatchInversion invert_batch(F&& transform, const std::vector<double>& times, int M = kDefaultTalbotNodes,
                            ContourScaling scaling = ContourScaling::kAuto) {
  BatchInversion out;
  out.values.assign(times.size(), std::numeric_limits<double>::quiet_NaN());
  out.errors.assign(times.size(), std::string());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < static_cast<long>(times.size()); ++i) {
    try {
      out.values[i] = invert(transform, times[i], M, scaling);
    } catch (const std::exception& e) {
      out.errors[i] = e.what();
      if (out.errors[i].empty()) out.errors[i] = "evaluation failed";
    }
  }
  return out;
}

}  // namespace passage
