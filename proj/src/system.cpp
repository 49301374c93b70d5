#include "passage/system.hpp"

#include <string>

#include "passage/gmres.hpp"
#include "passage/specfun.hpp"

namespace passage {

namespace {

struct RowLocation {
  int body;
  int node;
};

std::vector<RowLocation> row_locations(const DiscretizedScene& scene) {
  std::vector<RowLocation> rows;
  rows.reserve(static_cast<std::size_t>(scene.total_nodes()));
  for (int k = 0; k < static_cast<int>(scene.bodies.size()); ++k) {
    for (int i = 0; i < scene.bodies[k].n; ++i) rows.push_back({k, i});
  }
  return rows;
}

// Fills one operator row (length total_nodes) for target node `i` on body `k`.
void fill_row(const DiscretizedScene& scene, const KernelContext& ctx, int k, int i, Complex* row) {
  const DiscretizedBody& target = scene.bodies[k];
  const bool dirichlet_row = target.bc == BoundaryCondition::kDirichlet;
  const Vec2 x = target.nodes.col(i);
  const Vec2 nx = target.normals.col(i);
  const double row_scale = target.jacobian(i);
  constexpr double inv_two_pi = 1.0 / kTwoPi;

  int col = 0;
  for (int m = 0; m < static_cast<int>(scene.bodies.size()); ++m) {
    const DiscretizedBody& source = scene.bodies[m];
    const bool dirichlet_col = source.bc == BoundaryCondition::kDirichlet;
    const double w = row_scale * source.h;
    for (int l = 0; l < source.n; ++l, ++col) {
      if (m == k && l == i) {
        const DiagonalLimits lim = diagonal_limits(target.curvature(i));
        row[col] = (dirichlet_row ? 0.5 + w * lim.dlp_self : -0.5 + w * lim.dlp_adj_self);
        continue;
      }
      const Vec2 d = x - source.nodes.col(l);
      const double r = d.norm();
      const Complex z = ctx.sqrt_s * r;
      const auto kp = bessel_k01(z);
      Complex value;
      if (dirichlet_row && dirichlet_col) {
        value = ctx.sqrt_s * inv_two_pi * kp.order1 * (d.dot(source.normals.col(l)) / r);
      } else if (dirichlet_row) {
        value = kp.order0 * inv_two_pi;
      } else if (!dirichlet_col) {
        value = -ctx.sqrt_s * inv_two_pi * kp.order1 * (d.dot(nx) / r);
      } else {
        const Vec2 ny = source.normals.col(l);
        const double dx = d.dot(nx) / r, dy = d.dot(ny) / r;
        const Complex f1 = -ctx.sqrt_s * kp.order1 * inv_two_pi;
        const Complex f2 = ctx.s * (kp.order0 + kp.order1 / z) * inv_two_pi;
        value = -f2 * dx * dy - f1 * (nx.dot(ny) - dx * dy) / r;
      }
      row[col] = w * value;
    }
  }
}

}  // namespace

VectorXc DensitySolution::stacked() const {
  Eigen::Index total = 0;
  for (const auto& d : densities) total += d.size();
  VectorXc out(total);
  Eigen::Index offset = 0;
  for (const auto& d : densities) {
    out.segment(offset, d.size()) = d;
    offset += d.size();
  }
  return out;
}

std::vector<VectorXc> split_by_body(const DiscretizedScene& scene, const VectorXc& stacked) {
  std::vector<VectorXc> out;
  Eigen::Index offset = 0;
  for (const auto& b : scene.bodies) {
    out.push_back(stacked.segment(offset, b.n));
    offset += b.n;
  }
  return out;
}

VectorXc apply_system(const DiscretizedScene& scene, const KernelContext& ctx, const VectorXc& density) {
  const int total = scene.total_nodes();
  if (density.size() != total) {
    throw std::invalid_argument("apply_system: density has " + std::to_string(density.size()) +
                                " entries, expected " + std::to_string(total));
  }
  const auto rows = row_locations(scene);
  VectorXc out(total);
#pragma omp parallel
  {
    Eigen::RowVectorXcd row(total);
#pragma omp for schedule(dynamic, 16)
    for (int r = 0; r < total; ++r) {
      fill_row(scene, ctx, rows[r].body, rows[r].node, row.data());
      out(r) = row * density;
    }
  }
  return out;
}

MatrixXc assemble_system(const DiscretizedScene& scene, const KernelContext& ctx) {
  const int total = scene.total_nodes();
  const auto rows = row_locations(scene);
  // Row-major storage lets each row be written contiguously.
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> a(total, total);
#pragma omp parallel for schedule(dynamic, 16)
  for (int r = 0; r < total; ++r) fill_row(scene, ctx, rows[r].body, rows[r].node, a.row(r).data());
  return a;
}

VectorXc system_rhs(const DiscretizedScene& scene, const KernelContext& ctx) {
  VectorXc rhs(scene.total_nodes());
  int r = 0;
  for (const auto& body : scene.bodies) {
    for (int i = 0; i < body.n; ++i, ++r) {
      const Vec2 y = body.nodes.col(i);
      const Complex value = body.bc == BoundaryCondition::kDirichlet
                                ? -kernel_slp(y, scene.source, ctx)
                                : -kernel_dlp_adj(y, scene.source, body.normals.col(i), ctx);
      rhs(r) = body.jacobian(i) * value;
    }
  }
  return rhs;
}

DensitySolution solve_densities(const DiscretizedScene& scene, const KernelContext& ctx,
                                const SolverOptions& options) {
  DensitySolution sol;
  sol.s = ctx.s;
  const int total = scene.total_nodes();
  if (total == 0) return sol;

  const VectorXc rhs = system_rhs(scene, ctx);
  GmresResult<Complex> result;
  if (total <= options.dense_limit) {
    const MatrixXc a = assemble_system(scene, ctx);
    result = gmres<Complex>([&a](const auto& v) -> VectorXc { return a * v; }, rhs, options.tolerance,
                            options.max_iterations);
  } else {
    result = gmres<Complex>([&](const auto& v) -> VectorXc { return apply_system(scene, ctx, v); }, rhs,
                            options.tolerance, options.max_iterations);
  }
  if (!result.converged) {
    throw NoConvergence("GMRES did not reach relative residual " + std::to_string(options.tolerance) +
                            " (got " + std::to_string(result.relative_residual) + " after " +
                            std::to_string(result.iterations) + " iterations)",
                        result.relative_residual, result.iterations);
  }
  sol.densities = split_by_body(scene, result.x);
  sol.gmres_iterations = result.iterations;
  sol.residual = result.relative_residual;
  return sol;
}

}  // namespace passage
