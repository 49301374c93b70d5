#pragma once

// Closed-form reference solutions: the 1D heat problem on (-pi, pi) with
// absorbing ends, the exterior of an absorbing (or reflecting) unit disc
// with a point source, and the exact cumulative-flux transform of the disc.

#include "passage/types.hpp"

namespace passage {

struct SeriesTruncation {
  int max_terms = 200;
  double tail_tolerance = 1e-15;
};

struct SeriesValue {
  double value = 0.0;
  int terms = 0;
  bool truncated = false;  // max_terms reached before the tail tolerance
};

/// p(x, t) = (1/pi) sum_{n>=1} exp(-(n-1/2)^2 t) cos((n-1/2) x).
SeriesValue heat1d_series(double x, double t, const SeriesTruncation& trunc = {});

/// Laplace transform sinh(sqrt(s)(pi - |x|)) / (2 sqrt(s) cosh(sqrt(s) pi)),
/// evaluated in exponentially scaled form.
Complex heat1d_laplace(double x, Complex s);

struct DiscSeriesValue {
  Complex value;
  int terms = 0;
  bool truncated = false;
  /// Set when term magnitudes exceed the sum by more than 1e8 (cancellation
  /// past 1e-8 relative) or the series was truncated.
  bool unreliable = false;
};

/// Transform-space solution outside the absorbing unit disc for a source at
/// (R, 0), evaluated at polar point (r, theta).
DiscSeriesValue disc_series(double r, double theta, double source_radius, Complex s,
                            const SeriesTruncation& trunc = {});

/// Same geometry with a reflecting unit disc (zero normal derivative).
DiscSeriesValue reflecting_disc_series(double r, double theta, double source_radius, Complex s,
                                       const SeriesTruncation& trunc = {});

/// Exact C(s) = K0(sqrt(s) R) / (s K0(sqrt(s))) for the absorbing unit disc.
Complex disc_flux_exact(double source_radius, Complex s);

/// Free-space heat kernel exp(-|x|^2/4t)/(4 pi t).
double free_heat_kernel(const Vec2& x, double t);

}  // namespace passage
