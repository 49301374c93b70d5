#include "passage/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "passage/specfun.hpp"

namespace passage {

namespace {

constexpr double kCancellationLimit = 1e8;

// log(e^a + e^b) without overflow.
Complex log_add(Complex a, Complex b) {
  const double top = std::max(a.real(), b.real());
  return top + std::log(std::exp(a - top) + std::exp(b - top));
}

// Shared summation for both disc oracles: `bracket(n)` returns the two log
// magnitudes whose exponentials are subtracted in term n, before c_n cos(n theta).
template <typename Bracket>
DiscSeriesValue sum_disc_series(double theta, const SeriesTruncation& trunc, Bracket&& bracket) {
  DiscSeriesValue out;
  Complex sum(0.0);
  double largest = 0.0;
  int small_run = 0;
  for (int n = 0; n < trunc.max_terms; ++n) {
    const auto [first, second] = bracket(n);
    const double cn = n == 0 ? 1.0 / kTwoPi : 1.0 / kPi;
    const Complex a = std::exp(first), b = std::exp(second);
    const Complex term = cn * (a - b);
    sum += term * std::cos(n * theta);
    largest = std::max(largest, cn * std::max(std::abs(a), std::abs(b)));
    out.terms = n + 1;
    // Two consecutive negligible brackets end the sum; the cosine factor is
    // excluded so that nodal angles cannot stop it early.
    small_run = std::abs(term) <= trunc.tail_tolerance * (std::abs(sum) + 1e-300) ? small_run + 1 : 0;
    if (small_run >= 2) break;
  }
  out.truncated = small_run < 2;
  out.value = sum;
  out.unreliable = out.truncated || largest > kCancellationLimit * std::abs(sum);
  return out;
}

void check_disc_args(double r, double source_radius) {
  if (!(r >= 1.0)) throw std::domain_error("disc oracle: r must be >= 1");
  if (!(source_radius > 1.0)) throw std::domain_error("disc oracle: source radius must exceed 1");
}

}  // namespace

SeriesValue heat1d_series(double x, double t, const SeriesTruncation& trunc) {
  if (!(t > 0.0)) throw std::domain_error("heat1d_series: t must be positive");
  SeriesValue out;
  if (std::abs(x) == kPi) return out;  // every cosine vanishes
  double sum = 0.0;
  for (int n = 1; n <= trunc.max_terms; ++n) {
    const double k = n - 0.5;
    const double decay = std::exp(-k * k * t) / kPi;
    sum += decay * std::cos(k * x);
    out.terms = n;
    if (decay <= trunc.tail_tolerance * (std::abs(sum) + 1e-300)) {
      out.value = sum;
      return out;
    }
  }
  out.value = sum;
  out.truncated = true;
  return out;
}

Complex heat1d_laplace(double x, Complex s) {
  const double ax = std::abs(x);
  if (ax >= kPi) return Complex(0.0);
  const Complex a = principal_sqrt(s);
  return (std::exp(-a * ax) - std::exp(-a * (2.0 * kPi - ax))) / (2.0 * a * (1.0 + std::exp(-2.0 * kPi * a)));
}

DiscSeriesValue disc_series(double r, double theta, double source_radius, Complex s,
                            const SeriesTruncation& trunc) {
  check_disc_args(r, source_radius);
  const Complex a = principal_sqrt(s);
  const int top = trunc.max_terms;
  const double inner = std::min(r, source_radius), outer = std::max(r, source_radius);
  const auto li_inner = log_bessel_i_sequence(top, a * inner);
  const auto lk_outer = log_bessel_k_sequence(top, a * outer);
  const auto li_1 = log_bessel_i_sequence(top, a);
  const auto lk_1 = log_bessel_k_sequence(top, a);
  const auto lk_r = log_bessel_k_sequence(top, a * r);
  const auto lk_src = log_bessel_k_sequence(top, a * source_radius);
  return sum_disc_series(theta, trunc, [&](int n) {
    return std::pair{li_inner[n] + lk_outer[n], li_1[n] + lk_r[n] + lk_src[n] - lk_1[n]};
  });
}

DiscSeriesValue reflecting_disc_series(double r, double theta, double source_radius, Complex s,
                                       const SeriesTruncation& trunc) {
  check_disc_args(r, source_radius);
  const Complex a = principal_sqrt(s);
  const int top = trunc.max_terms + 1;
  const double inner = std::min(r, source_radius), outer = std::max(r, source_radius);
  const auto li_inner = log_bessel_i_sequence(top, a * inner);
  const auto lk_outer = log_bessel_k_sequence(top, a * outer);
  const auto li_1 = log_bessel_i_sequence(top, a);
  const auto lk_1 = log_bessel_k_sequence(top, a);
  const auto lk_r = log_bessel_k_sequence(top, a * r);
  const auto lk_src = log_bessel_k_sequence(top, a * source_radius);
  // I_n'(a)/K_n'(a) = -(I_{n-1} + I_{n+1})/(K_{n-1} + K_{n+1}), with the
  // order -1 terms equal to order 1.
  return sum_disc_series(theta, trunc, [&](int n) {
    const int below = n == 0 ? 1 : n - 1;
    const Complex log_di = log_add(li_1[below], li_1[n + 1]);
    const Complex log_dk = log_add(lk_1[below], lk_1[n + 1]);
    // Minus sign of the ratio turns the subtraction into an addition.
    return std::pair{li_inner[n] + lk_outer[n], log_di - log_dk + lk_r[n] + lk_src[n] + Complex(0.0, kPi)};
  });
}

Complex disc_flux_exact(double source_radius, Complex s) {
  if (!(source_radius > 1.0)) throw std::domain_error("disc_flux_exact: source radius must exceed 1");
  const Complex a = principal_sqrt(s);
  return std::exp(-a * (source_radius - 1.0)) * bessel_k0_scaled(a * source_radius) / (bessel_k0_scaled(a) * s);
}

double free_heat_kernel(const Vec2& x, double t) {
  return std::exp(-x.squaredNorm() / (4.0 * t)) / (4.0 * kPi * t);
}

}  // namespace passage
