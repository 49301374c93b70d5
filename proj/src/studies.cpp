#include "passage/studies.hpp"

#include <cmath>
#include <stdexcept>

#include "passage/eval.hpp"
#include "passage/oracles.hpp"

namespace passage {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x values coincide");
  return {sxy / sxx, my - sxy / sxx * mx};
}

TalbotSweep talbot_sweep(const std::vector<int>& Ms, const std::vector<double>& times, const std::vector<double>& xs) {
  if (Ms.size() < 2 || times.empty() || xs.empty()) throw std::invalid_argument("talbot_sweep: empty sweep");
  TalbotSweep out{Ms, times, xs, Eigen::MatrixXd::Zero(times.size(), Ms.size()), {}};
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    std::vector<double> m_values, log_errors;
    for (std::size_t mi = 0; mi < Ms.size(); ++mi) {
      double worst = 0.0;
      for (const double x : xs) {
        const double approx = invert([x](Complex s) { return heat1d_laplace(x, s); }, times[ti], Ms[mi]);
        worst = std::max(worst, std::abs(approx - heat1d_series(x, times[ti]).value));
      }
      out.max_error(ti, mi) = worst;
      m_values.push_back(Ms[mi]);
      // An exact zero would break the log fit; floor it at 1e-17.
      log_errors.push_back(std::log10(std::max(worst, 1e-17)));
    }
    out.slopes.push_back(fit_line(m_values, log_errors).slope);
  }
  return out;
}

Scene unit_disc_scene(double source_radius) {
  Body body;
  body.shape.params = Circle{1.0};
  body.label = "disc";
  return make_scene({body}, Vec2(source_radius, 0.0), "disc", "unit absorbing disc");
}

std::vector<DiscTarget> default_disc_targets() {
  return {{Vec2(1.5 * std::cos(kPi / 3), 1.5 * std::sin(kPi / 3)), false},
          {Vec2(3.0 * std::cos(kPi / 4), 3.0 * std::sin(kPi / 4)), false},
          {Vec2(4.0 * std::cos(2.5), 4.0 * std::sin(2.5)), false},
          {Vec2(-2.5, 0.0), false},
          {Vec2(2.0 * std::cos(0.05), 2.0 * std::sin(0.05)), true}};
}

DiscFieldStudy disc_field_study(const std::vector<int>& Ns, const std::vector<DiscTarget>& targets,
                                double source_radius, double t, int M) {
  if (Ns.size() < 2 || targets.empty()) throw std::invalid_argument("disc_field_study: empty sweep");
  DiscFieldStudy out{Ns, targets, Eigen::MatrixXd::Zero(targets.size(), Ns.size()), {}, 0.0};
  const Scene scene = unit_disc_scene(source_radius);
  const TalbotRule rule = talbot_rule(M, t);
  for (std::size_t ni = 0; ni < Ns.size(); ++ni) {
    const DiscretizedScene disc = discretize(scene, Ns[ni]);
    for (const Complex s : rule.nodes) {
      const KernelContext ctx(s);
      const DensitySolution sol = solve_densities(disc, ctx);
      for (std::size_t k = 0; k < targets.size(); ++k) {
        const Vec2& x = targets[k].x;
        const Complex exact = disc_series(x.norm(), std::atan2(x.y(), x.x()), source_radius, s).value;
        const Complex value = eval_transform_field(x, disc, ctx, sol).value;
        out.errors(k, ni) = std::max(out.errors(k, ni), std::abs(value - exact) / std::abs(exact));
      }
    }
  }
  out.min_order = INFINITY;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    std::vector<double> lx, ly;
    for (std::size_t ni = 0; ni < Ns.size(); ++ni) {
      lx.push_back(std::log2(Ns[ni]));
      ly.push_back(std::log2(std::max(out.errors(k, ni), 1e-300)));
    }
    out.orders.push_back(-fit_line(lx, ly).slope);
    if (!targets[k].gray) out.min_order = std::min(out.min_order, out.orders.back());
  }
  return out;
}

DiscFluxStudy disc_flux_study(const std::vector<int>& Ns, double source_radius, double t, int M,
                              SelfQuadrature self) {
  if (Ns.size() < 2) throw std::invalid_argument("disc_flux_study: empty sweep");
  DiscFluxStudy out{Ns, std::vector<double>(Ns.size(), 0.0), 0.0};
  const Scene scene = unit_disc_scene(source_radius);
  const TalbotRule rule = talbot_rule(M, t);
  std::vector<double> lx, ly;
  for (std::size_t ni = 0; ni < Ns.size(); ++ni) {
    const DiscretizedScene disc = discretize(scene, Ns[ni]);
    for (const Complex s : rule.nodes) {
      const Complex c = transform_flux(disc, s, {}, self).j(0) / s;
      const Complex exact = disc_flux_exact(source_radius, s);
      out.errors[ni] = std::max(out.errors[ni], std::abs(c - exact) / std::abs(exact));
    }
    lx.push_back(std::log2(Ns[ni]));
    ly.push_back(std::log2(out.errors[ni]));
  }
  out.order = -fit_line(lx, ly).slope;
  return out;
}

std::vector<double> log_spaced(double start, double stop, int count) {
  if (!(start > 0.0) || !(stop >= start) || count < 1) throw std::invalid_argument("log_spaced: invalid range");
  std::vector<double> out;
  const double a = std::log10(start), b = std::log10(stop);
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? start : std::pow(10.0, a + (b - a) * i / (count - 1)));
  if (count > 1) out.back() = stop;
  return out;
}

}  // namespace passage
