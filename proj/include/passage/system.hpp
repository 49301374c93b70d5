#pragma once

// Nystrom discretization of the mixed Dirichlet/Neumann second-kind system
// at one transform parameter s.
//
// Unknowns are Jacobian-weighted densities w = sigma |y'| stacked body by
// body (Dirichlet bodies first). Each row n is scaled by the Jacobian at its
// node, so the operator reads  +-1/2 w + J K H w  with J = diag(|y'|) and
// H = diag(2pi/N_m). Dirichlet rows carry +1/2, Neumann rows -1/2.

#include <stdexcept>
#include <vector>

#include "passage/geometry.hpp"
#include "passage/kernels.hpp"

namespace passage {

struct SolverOptions {
  double tolerance = 1e-12;
  int max_iterations = 500;
  /// Assemble a dense matrix when the unknown count is at most this many;
  /// otherwise apply the operator matrix-free in every iteration.
  int dense_limit = 6144;
};

struct DensitySolution {
  Complex s;
  std::vector<VectorXc> densities;  // weighted densities per body
  int gmres_iterations = 0;
  double residual = 0.0;

  VectorXc stacked() const;
};

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Applies the system operator to a stacked weighted density.
VectorXc apply_system(const DiscretizedScene& scene, const KernelContext& ctx, const VectorXc& density);

/// Dense matrix of the same operator.
MatrixXc assemble_system(const DiscretizedScene& scene, const KernelContext& ctx);

/// Right-hand side: -G(y_n - x*) on Dirichlet rows, -dG(y_n - x*)/dn on
/// Neumann rows, both scaled by the row Jacobian.
VectorXc system_rhs(const DiscretizedScene& scene, const KernelContext& ctx);

/// Solves for the weighted densities. Throws NoConvergence.
DensitySolution solve_densities(const DiscretizedScene& scene, const KernelContext& ctx,
                                const SolverOptions& options = {});

/// Splits a stacked vector into per-body blocks.
std::vector<VectorXc> split_by_body(const DiscretizedScene& scene, const VectorXc& stacked);

}  // namespace passage
