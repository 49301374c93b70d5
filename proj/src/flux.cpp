#include "passage/flux.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "passage/specfun.hpp"

namespace passage {

namespace {

constexpr double kInvTwoPi = 1.0 / kTwoPi;

// d^2/dn_x dn_y of F(|x - y|) given F'(r), F''(r).
Complex second_normal_derivative(const Vec2& d, double r, const Vec2& nx, const Vec2& ny, Complex f1, Complex f2) {
  const double dx = d.dot(nx) / r, dy = d.dot(ny) / r;
  return -f2 * dx * dy - f1 * (nx.dot(ny) - dx * dy) / r;
}

// Remainder kernel d^2/dn_x dn_y [(K0(sqrt(s) r) + log r)/2pi]. Its radial
// derivatives are
//   H'  = (1 - z K1)/(2pi r),  H'' = (z^2 K0 + z K1 - 1)/(2pi r^2),
// taken from the cancellation-free combinations.
Complex remainder_kernel(const Vec2& x, const Vec2& y, const Vec2& nx, const Vec2& ny, const KernelContext& ctx) {
  const Vec2 d = x - y;
  const double r = d.norm();
  const auto sub = bessel_k_log_subtracted(ctx.sqrt_s * r);
  const Complex f1 = sub.one_minus_zk1 * (kInvTwoPi / r);
  const Complex f2 = sub.second_order * (kInvTwoPi / (r * r));
  return second_normal_derivative(d, r, nx, ny, f1, f2);
}

Complex naive_self(const DiscretizedBody& body, const KernelContext& ctx, const VectorXc& w) {
  Complex total(0.0);
  for (int n = 0; n < body.n; ++n) {
    Complex inner(0.0);
    for (int l = 0; l < body.n; ++l) {
      if (l == n) continue;
      inner += kernel_hyper(body.nodes.col(n), body.nodes.col(l), body.normals.col(n), body.normals.col(l), ctx) *
               w(l);
    }
    total += body.jacobian(n) * inner;
  }
  return body.h * body.h * total;
}

}  // namespace

Complex singularity_subtracted_self(const DiscretizedBody& body, const KernelContext& ctx,
                                    const VectorXc& weighted_density, bool log_corrected) {
  Complex total = odd_even_self_sum(
      body,
      [&](int n, int l) {
        return remainder_kernel(body.nodes.col(n), body.nodes.col(l), body.normals.col(n), body.normals.col(l), ctx);
      },
      weighted_density);
  if (log_corrected) {
    // Inner-sum error 4h log 2 * (s/8pi) w_n, summed with the outer weights.
    Complex diagonal(0.0);
    for (int n = 0; n < body.n; ++n) diagonal += body.jacobian(n) * weighted_density(n);
    total -= body.h * body.h * std::log(2.0) * ctx.s * kInvTwoPi * diagonal;
  }
  return total;
}

VectorXc laplace_flux(const DiscretizedScene& scene, const KernelContext& ctx, const DensitySolution& solution,
                      SelfQuadrature self) {
  const int absorbers = scene.num_dirichlet;
  if (solution.densities.size() != scene.bodies.size()) {
    throw std::invalid_argument("laplace_flux: densities do not match the scene");
  }
  VectorXc flux = VectorXc::Zero(absorbers);
  for (int k = 0; k < absorbers; ++k) {
    const DiscretizedBody& target = scene.bodies[k];
    // Per-node partial sums keep the reduction order fixed under threading.
    VectorXc partial(target.n);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < target.n; ++n) {
      const Vec2 x = target.nodes.col(n);
      const Vec2 nx = target.normals.col(n);
      Complex sum = kernel_dlp_adj(x, scene.source, nx, ctx);
      for (int m = 0; m < static_cast<int>(scene.bodies.size()); ++m) {
        if (m == k) continue;
        const DiscretizedBody& source = scene.bodies[m];
        const VectorXc& w = solution.densities[m];
        Complex inner(0.0);
        for (int l = 0; l < source.n; ++l) {
          const Vec2 d = x - source.nodes.col(l);
          const double r = d.norm();
          const auto kp = bessel_k01(ctx.sqrt_s * r);
          Complex value;
          if (source.bc == BoundaryCondition::kNeumann) {
            value = -ctx.sqrt_s * kInvTwoPi * kp.order1 * (d.dot(nx) / r);
          } else {
            const Complex f1 = -ctx.sqrt_s * kp.order1 * kInvTwoPi;
            const Complex f2 = ctx.s * (kp.order0 + kp.order1 / (ctx.sqrt_s * r)) * kInvTwoPi;
            value = second_normal_derivative(d, r, nx, source.normals.col(l), f1, f2);
          }
          inner += value * w(l);
        }
        sum += source.h * inner;
      }
      partial(n) = target.jacobian(n) * sum;
    }
    Complex total = target.h * partial.sum();
    total += self == SelfQuadrature::kNaive
                 ? naive_self(target, ctx, solution.densities[k])
                 : singularity_subtracted_self(target, ctx, solution.densities[k],
                                               self == SelfQuadrature::kLogCorrected);
    flux(k) = total;
  }
  return flux;
}

TransformFlux transform_flux(const DiscretizedScene& scene, Complex s, const SolverOptions& options,
                             SelfQuadrature self) {
  const KernelContext ctx(s);
  TransformFlux out;
  out.solution = solve_densities(scene, ctx, options);
  out.j = laplace_flux(scene, ctx, out.solution, self);
  return out;
}

FluxSeries flux_time_series(const Scene& scene, int base_n, const std::vector<double>& times, int M,
                            const SolverOptions& options, SelfQuadrature self) {
  return flux_time_series(discretize(scene, base_n), times, M, options, self);
}

FluxSeries flux_time_series(const DiscretizedScene& scene, const std::vector<double>& times, int M,
                            const SolverOptions& options, SelfQuadrature self) {
  const int absorbers = scene.num_dirichlet;
  const auto count = static_cast<Eigen::Index>(times.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  FluxSeries out;
  out.times = times;
  out.j_total.assign(times.size(), nan);
  out.c_total.assign(times.size(), nan);
  out.j = Eigen::MatrixXd::Constant(absorbers, count, nan);
  out.c = Eigen::MatrixXd::Constant(absorbers, count, nan);
  out.errors.assign(times.size(), std::string());

  for (std::size_t i = 0; i < times.size(); ++i) {
    try {
      const TalbotRule rule = talbot_rule(M, times[i]);
      std::vector<VectorXc> fluxes;
      for (const Complex s : rule.nodes) {
        const auto start = std::chrono::steady_clock::now();
        TransformFlux tf = transform_flux(scene, s, options, self);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.solves.push_back({times[i], s, tf.solution.gmres_iterations, tf.solution.residual, seconds});
        fluxes.push_back(std::move(tf.j));
      }
      double j_sum = 0.0, c_sum = 0.0;
      for (int k = 0; k < absorbers; ++k) {
        std::vector<Complex> jv, cv;
        for (std::size_t q = 0; q < fluxes.size(); ++q) {
          jv.push_back(fluxes[q](k));
          cv.push_back(fluxes[q](k) / rule.nodes[q]);
        }
        out.j(k, static_cast<Eigen::Index>(i)) = talbot_sum(rule, jv);
        out.c(k, static_cast<Eigen::Index>(i)) = talbot_sum(rule, cv);
        j_sum += out.j(k, static_cast<Eigen::Index>(i));
        c_sum += out.c(k, static_cast<Eigen::Index>(i));
      }
      out.j_total[i] = j_sum;
      out.c_total[i] = c_sum;
    } catch (const std::exception& e) {
      out.errors[i] = e.what();
      out.j.col(static_cast<Eigen::Index>(i)).setConstant(nan);
      out.c.col(static_cast<Eigen::Index>(i)).setConstant(nan);
    }
  }
  return out;
}

}  // namespace passage
