#pragma once

// Modified Helmholtz kernels for (s - Laplacian) with G(r) = K0(sqrt(s) r)/2pi.
// Normal derivatives follow the layer-potential convention without an extra
// 1/2pi: D[sigma](x) = int dG(x - y)/dn_y sigma(y) ds_y.

#include "passage/types.hpp"

namespace passage {

struct KernelContext {
  Complex s;
  Complex sqrt_s;  // principal branch, Re >= 0

  explicit KernelContext(Complex s_value) : s(s_value), sqrt_s(principal_sqrt(s_value)) {}
};

/// G(x - y).
Complex kernel_slp(const Vec2& x, const Vec2& y, const KernelContext& ctx);
/// dG(x - y)/dn_y.
Complex kernel_dlp(const Vec2& x, const Vec2& y, const Vec2& n_y, const KernelContext& ctx);
/// dG(x - y)/dn_x.
Complex kernel_dlp_adj(const Vec2& x, const Vec2& y, const Vec2& n_x, const KernelContext& ctx);
/// d^2 G(x - y)/dn_x dn_y.
Complex kernel_hyper(const Vec2& x, const Vec2& y, const Vec2& n_x, const Vec2& n_y, const KernelContext& ctx);

/// Limits of the double-layer kernel and its adjoint as y -> x along a
/// smooth curve with signed curvature kappa (outward normals). Both equal
/// -kappa/(4pi), the Laplace values, because K0(z) + log(z) is smooth.
struct DiagonalLimits {
  double dlp_self;
  double dlp_adj_self;
};

DiagonalLimits diagonal_limits(double kappa);

namespace detail {

/// Radial profile F(r) = K0(sqrt(s) r)/2pi and its first two derivatives.
struct RadialProfile {
  Complex f0, f1, f2;
};

RadialProfile radial_profile(double r, const KernelContext& ctx);

}  // namespace detail

}  // namespace passage
