#pragma once

// Convergence studies against the closed-form oracles, shared by the CLI
// validators and the acceptance checks.

#include <vector>

#include "passage/flux.hpp"
#include "passage/talbot.hpp"

namespace passage {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (x_i, y_i); needs two distinct x values.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Talbot M-sweep on the 1D heat problem on (-pi, pi).
struct TalbotSweep {
  std::vector<int> Ms;
  std::vector<double> times;
  std::vector<double> xs;
  Eigen::MatrixXd max_error;  // times x Ms, max over xs
  std::vector<double> slopes;  // per time, log10(error) against M
};

/// Throws std::invalid_argument for an empty sweep or fewer than two M.
TalbotSweep talbot_sweep(const std::vector<int>& Ms, const std::vector<double>& times, const std::vector<double>& xs);

/// Unit absorber at the origin with the source on the x axis.
Scene unit_disc_scene(double source_radius = 2.0);

struct DiscTarget {
  Vec2 x;
  /// |x| close to |x*|: the series oracle loses accuracy there, so the
  /// point is reported but left out of the order fit.
  bool gray = false;
};

/// The four study points plus one gray-region point.
std::vector<DiscTarget> default_disc_targets();

/// Field error against the series at the Talbot nodes for one time.
struct DiscFieldStudy {
  std::vector<int> Ns;
  std::vector<DiscTarget> targets;
  Eigen::MatrixXd errors;       // targets x Ns, max relative error over nodes
  std::vector<double> orders;   // per target, -slope of log2 error vs log2 N
  double min_order = 0.0;       // over non-gray targets
};

DiscFieldStudy disc_field_study(const std::vector<int>& Ns, const std::vector<DiscTarget>& targets,
                                double source_radius = 2.0, double t = 10.0, int M = kDefaultTalbotNodes);

/// Relative error of C(s) = J(s)/s against the exact transform.
struct DiscFluxStudy {
  std::vector<int> Ns;
  std::vector<double> errors;  // max relative error over nodes, per N
  double order = 0.0;
};

DiscFluxStudy disc_flux_study(const std::vector<int>& Ns, double source_radius = 2.0, double t = 10.0,
                              int M = kDefaultTalbotNodes, SelfQuadrature self = SelfQuadrature::kSubtracted);

/// Log-spaced times start..stop inclusive.
std::vector<double> log_spaced(double start, double stop, int count);

}  // namespace passage
