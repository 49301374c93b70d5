#include "passage/kernels.hpp"

#include "passage/specfun.hpp"

namespace passage {

namespace detail {

RadialProfile radial_profile(double r, const KernelContext& ctx) {
  const Complex z = ctx.sqrt_s * r;
  const auto k = bessel_k01(z);
  constexpr double inv_two_pi = 1.0 / kTwoPi;
  return {k.order0 * inv_two_pi, -ctx.sqrt_s * k.order1 * inv_two_pi,
          ctx.s * (k.order0 + k.order1 / z) * inv_two_pi};
}

}  // namespace detail

Complex kernel_slp(const Vec2& x, const Vec2& y, const KernelContext& ctx) {
  return bessel_k0(ctx.sqrt_s * (x - y).norm()) / kTwoPi;
}

Complex kernel_dlp(const Vec2& x, const Vec2& y, const Vec2& n_y, const KernelContext& ctx) {
  const Vec2 d = x - y;
  const double r = d.norm();
  return ctx.sqrt_s / kTwoPi * bessel_k1(ctx.sqrt_s * r) * (d.dot(n_y) / r);
}

Complex kernel_dlp_adj(const Vec2& x, const Vec2& y, const Vec2& n_x, const KernelContext& ctx) {
  const Vec2 d = x - y;
  const double r = d.norm();
  return -ctx.sqrt_s / kTwoPi * bessel_k1(ctx.sqrt_s * r) * (d.dot(n_x) / r);
}

Complex kernel_hyper(const Vec2& x, const Vec2& y, const Vec2& n_x, const Vec2& n_y, const KernelContext& ctx) {
  const Vec2 d = x - y;
  const double r = d.norm();
  const auto p = detail::radial_profile(r, ctx);
  const double dx = d.dot(n_x) / r;
  const double dy = d.dot(n_y) / r;
  const double mixed = -(n_x.dot(n_y) - dx * dy) / r;
  return p.f2 * dx * (-dy) + p.f1 * mixed;
}

DiagonalLimits diagonal_limits(double kappa) {
  const double v = -kappa / (2.0 * kTwoPi);
  return {v, v};
}

}  // namespace passage
