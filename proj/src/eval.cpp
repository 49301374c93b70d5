#include "passage/eval.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "passage/specfun.hpp"

namespace passage {

namespace {

constexpr double kNearFactor = 5.0;

}  // namespace

FieldValue eval_transform_field(const Vec2& x, const DiscretizedScene& scene, const KernelContext& ctx,
                                const DensitySolution& solution) {
  FieldValue out;
  out.value = kernel_slp(x, scene.source, ctx);
  constexpr double inv_two_pi = 1.0 / kTwoPi;
  for (std::size_t m = 0; m < scene.bodies.size(); ++m) {
    const DiscretizedBody& body = scene.bodies[m];
    const VectorXc& w = solution.densities[m];
    const bool dirichlet = body.bc == BoundaryCondition::kDirichlet;
    Complex sum(0.0);
    for (int l = 0; l < body.n; ++l) {
      const Vec2 d = x - body.nodes.col(l);
      const double r = d.norm();
      if (r < kNearFactor * body.jacobian(l) * body.h) out.near_boundary = true;
      const auto k = bessel_k01(ctx.sqrt_s * r);
      const Complex kernel = dirichlet ? ctx.sqrt_s * inv_two_pi * k.order1 * (d.dot(body.normals.col(l)) / r)
                                       : k.order0 * inv_two_pi;
      sum += kernel * w(l);
    }
    out.value += body.h * sum;
  }
  return out;
}

void GridSpec::validate() const {
  if (!(xmax > xmin) || !(ymax > ymin)) throw std::invalid_argument("grid: empty coordinate range");
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid: need at least two points per axis");
}

FieldGrid eval_density_grid(const Scene& scene, int base_n, const GridSpec& grid, double t, int M,
                            const SolverOptions& options) {
  grid.validate();
  const TalbotRule rule = talbot_rule(M, t);
  const DiscretizedScene disc = discretize(scene, base_n);

  std::vector<KernelContext> contexts;
  std::vector<DensitySolution> solutions;
  for (const Complex s : rule.nodes) {
    contexts.emplace_back(s);
    solutions.push_back(solve_densities(disc, contexts.back(), options));
  }

  FieldGrid out;
  out.spec = grid;
  out.t = t;
  out.M = M;
  out.solves = static_cast<int>(solutions.size());
  out.values = Eigen::MatrixXd::Constant(grid.ny, grid.nx, std::numeric_limits<double>::quiet_NaN());
  out.state.setConstant(grid.ny, grid.nx, kCellOpen);
  out.near_boundary.setConstant(grid.ny, grid.nx, false);

  const SceneMask mask(scene);
  const int cells = grid.nx * grid.ny;
#pragma omp parallel for schedule(dynamic, 8)
  for (int c = 0; c < cells; ++c) {
    const int j = c / grid.nx, i = c % grid.nx;
    const Vec2 x(grid.x(i), grid.y(j));
    if (mask.body_containing(x) >= 0) {
      out.state(j, i) = kCellInside;
      continue;
    }
    try {
      std::vector<Complex> values(rule.nodes.size());
      bool near = false;
      for (std::size_t q = 0; q < values.size(); ++q) {
        const FieldValue f = eval_transform_field(x, disc, contexts[q], solutions[q]);
        values[q] = f.value;
        near = near || f.near_boundary;
      }
      const double v = talbot_sum(rule, values);
      if (!std::isfinite(v)) throw std::runtime_error("non-finite value");
      out.values(j, i) = v;
      out.near_boundary(j, i) = near;
    } catch (const std::exception&) {
      out.state(j, i) = kCellFailed;
    }
  }
  return out;
}

}  // namespace passage
