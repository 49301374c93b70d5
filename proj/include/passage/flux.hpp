#pragma once

// Absorption flux J(s) = int_{Gamma_D} dP/dn ds through each absorbing body
// (normals point away from the body), C(s) = J(s)/s, and their inversion to
// j(t) and c(t).

#include <string>
#include <vector>

#include "passage/system.hpp"
#include "passage/talbot.hpp"

namespace passage {

/// How the hypersingular self-interaction of an absorber is integrated.
enum class SelfQuadrature {
  kSubtracted,     // subtract the Laplace log kernel, odd-even rule on the remainder
  kLogCorrected,   // as kSubtracted, plus the analytic O(h) log correction (third order)
  kNaive,          // plain punctured trapezoid on the full kernel (does not converge)
};

/// Outer trapezoid / inner odd-even double sum over one closed body:
///   sum_n h jac_n sum_{l : l - n odd} 2h kernel(n, l) w_l.
/// Requires an even node count.
template <typename Kernel>
Complex odd_even_self_sum(const DiscretizedBody& body, Kernel&& kernel, const VectorXc& weighted_density) {
  if (body.n % 2 != 0) throw std::invalid_argument("odd-even rule needs an even node count");
  Complex total(0.0);
  for (int n = 0; n < body.n; ++n) {
    Complex inner(0.0);
    for (int l = (n + 1) % 2; l < body.n; l += 2) inner += kernel(n, l) * weighted_density(l);
    total += body.jacobian(n) * inner;
  }
  return 2.0 * body.h * body.h * total;
}

/// Self term of the flux through one absorber with the logarithmic part of
/// the kernel subtracted; the subtracted Laplace part integrates to zero.
/// The remainder still carries (s/8pi) log r^2, on which the odd-even rule
/// makes an O(h) error of 4h log 2 per unit coefficient; `log_corrected`
/// removes it.
Complex singularity_subtracted_self(const DiscretizedBody& body, const KernelContext& ctx,
                                    const VectorXc& weighted_density, bool log_corrected = false);

/// J(s) per absorbing body for solved densities at the same s.
VectorXc laplace_flux(const DiscretizedScene& scene, const KernelContext& ctx, const DensitySolution& solution,
                      SelfQuadrature self = SelfQuadrature::kSubtracted);

struct TransformFlux {
  VectorXc j;  // J(s) per absorber
  DensitySolution solution;
};

/// Solves the system at s and evaluates J(s).
TransformFlux transform_flux(const DiscretizedScene& scene, Complex s, const SolverOptions& options = {},
                             SelfQuadrature self = SelfQuadrature::kSubtracted);

struct SolveRecord {
  double t;
  Complex s;
  int iterations;
  double residual;
  double seconds;
};

struct FluxSeries {
  std::vector<double> times;
  std::vector<double> j_total;
  std::vector<double> c_total;
  Eigen::MatrixXd j;  // absorbers x times
  Eigen::MatrixXd c;
  std::vector<std::string> errors;  // per time; empty when the time succeeded
  std::vector<SolveRecord> solves;

  bool ok(std::size_t i) const { return errors[i].empty(); }
};

/// Inverts J and C at each time with its own Talbot rule (M solves per
/// time). Failed times are NaN with the error recorded.
FluxSeries flux_time_series(const Scene& scene, int base_n, const std::vector<double>& times,
                            int M = kDefaultTalbotNodes, const SolverOptions& options = {},
                            SelfQuadrature self = SelfQuadrature::kSubtracted);

/// Same, for an already discretized scene.
FluxSeries flux_time_series(const DiscretizedScene& scene, const std::vector<double>& times,
                            int M = kDefaultTalbotNodes, const SolverOptions& options = {},
                            SelfQuadrature self = SelfQuadrature::kSubtracted);

}  // namespace passage
