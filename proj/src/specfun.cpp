#include "passage/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace passage {

namespace {

template <typename Real>
constexpr Real kSeriesRadius = Real(2);
template <typename Real>
constexpr Real kAsymptoticRadius = Real(20);
constexpr int kMaxIterations = 100000;

template <typename Real>
void check_argument(std::complex<Real> z, const char* who) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::domain_error(std::string(who) + ": non-finite argument");
  }
  if (z.real() == Real(0) && z.imag() == Real(0)) {
    throw std::domain_error(std::string(who) + ": argument is zero");
  }
  if (z.imag() == Real(0) && z.real() < Real(0)) {
    throw std::domain_error(std::string(who) + ": argument on the branch cut");
  }
}

template <typename Real>
Real eps() {
  return std::numeric_limits<Real>::epsilon();
}

// Partial sums shared by the K0/K1/I0/I1 ascending series:
//   i0  = sum t_k
//   s0  = sum H_k t_k
//   i1s = sum t_k / (k+1)
//   k1s = sum t_k / (k+1) * (L - (H_k + H_{k+1}) / 2)
// with t_k = (z^2/4)^k / (k!)^2 and L = log(z/2) + gamma.
template <typename Real>
struct SeriesSums {
  std::complex<Real> log_term, i0, s0, i1s, k1s;
};

template <typename Real>
SeriesSums<Real> series_sums(std::complex<Real> z) {
  using C = std::complex<Real>;
  const C q = z * z / Real(4);
  const C log_term = std::log(z / Real(2)) + std::numbers::egamma_v<Real>;
  C term(1);
  C i0(0), s0(0), i1s(0), k1s(0);
  Real harmonic = 0;
  for (int k = 0; k < 200; ++k) {
    const Real next_harmonic = harmonic + Real(1) / Real(k + 1);
    i0 += term;
    s0 += harmonic * term;
    const C scaled = term / Real(k + 1);
    i1s += scaled;
    k1s += scaled * (log_term - Real(0.5) * (harmonic + next_harmonic));
    harmonic = next_harmonic;
    term *= q / (Real(k + 1) * Real(k + 1));
    if (k > 1 && std::abs(term) <= eps<Real>() * Real(0.25) * std::abs(i0)) break;
  }
  return {log_term, i0, s0, i1s, k1s};
}

// Asymptotic sums  sum a_k(nu)/z^k  and  sum (-1)^k a_k(nu)/z^k.
template <typename Real>
std::pair<std::complex<Real>, std::complex<Real>> hankel_sums(int nu, std::complex<Real> z) {
  using C = std::complex<Real>;
  const Real mu = Real(4 * nu * nu);
  C term(1);
  C plus(1), alternating(1);
  Real last = std::numeric_limits<Real>::infinity();
  for (int k = 1; k < 200; ++k) {
    const Real odd = Real(2 * k - 1);
    term *= (mu - odd * odd) / (Real(8 * k) * z);
    const Real mag = std::abs(term);
    if (mag > last) break;  // divergent tail: stop at the smallest term
    plus += term;
    alternating += (k % 2 == 0) ? term : -term;
    last = mag;
    if (mag <= eps<Real>() * Real(0.25)) break;
  }
  return {plus, alternating};
}

// I1(z)/I0(z) by modified Lentz on the continued fraction of the ratio
// recurrence, starting from order `n`: returns I_{n+1}/I_n.
template <typename Real>
std::complex<Real> i_ratio_continued_fraction(int n, std::complex<Real> z) {
  using C = std::complex<Real>;
  const Real tiny = std::numeric_limits<Real>::min() * Real(1e10);
  const C inv_z = Real(1) / z;
  C f(tiny), c(tiny), d(0);
  for (int j = 1; j < kMaxIterations; ++j) {
    const C b = Real(2 * (n + j)) * inv_z;
    d = b + d;
    if (std::abs(d) < tiny) d = tiny;
    c = b + Real(1) / c;
    if (std::abs(c) < tiny) c = tiny;
    d = Real(1) / d;
    const C delta = c * d;
    f *= delta;
    if (std::abs(delta - Real(1)) < eps<Real>()) return f;
  }
  throw std::runtime_error("bessel: I-ratio continued fraction did not converge");
}

}  // namespace

namespace detail {

template <typename Real>
BesselPair<Real> k01_series(std::complex<Real> z, bool scaled) {
  const auto sums = series_sums(z);
  std::complex<Real> k0 = -sums.log_term * sums.i0 + sums.s0;
  std::complex<Real> k1 = Real(1) / z + (z / Real(2)) * sums.k1s;
  if (scaled) {
    const auto factor = std::exp(z);
    k0 *= factor;
    k1 *= factor;
  }
  return {k0, k1};
}

template <typename Real>
BesselPair<Real> k01_continued_fraction(std::complex<Real> z, bool scaled) {
  using C = std::complex<Real>;
  // Steed's algorithm for Temme's CF2 at order zero.
  C b = Real(2) * (Real(1) + z);
  C d = Real(1) / b;
  C h = d, delh = d;
  C q1(0), q2(1);
  const Real a1 = Real(0.25);
  C q(a1), c(a1);
  Real a = -a1;
  C s = Real(1) + q * delh;
  int i = 2;
  for (; i < kMaxIterations; ++i) {
    a -= Real(2 * (i - 1));
    c = -a * c / Real(i);
    const C qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += Real(2);
    d = Real(1) / (b + a * d);
    delh = (b * d - Real(1)) * delh;
    h += delh;
    const C dels = q * delh;
    s += dels;
    if (std::abs(dels) < eps<Real>() * std::abs(s)) break;
  }
  if (i == kMaxIterations) {
    throw std::runtime_error("bessel: K continued fraction did not converge");
  }
  h *= a1;
  C k0 = std::sqrt(std::numbers::pi_v<Real> / (Real(2) * z)) / s;
  if (!scaled) k0 *= std::exp(-z);
  const C k1 = k0 * (z + Real(0.5) - h) / z;
  return {k0, k1};
}

template <typename Real>
BesselPair<Real> k01_asymptotic(std::complex<Real> z, bool scaled) {
  using C = std::complex<Real>;
  C prefactor = std::sqrt(std::numbers::pi_v<Real> / (Real(2) * z));
  if (!scaled) prefactor *= std::exp(-z);
  return {prefactor * hankel_sums(0, z).first, prefactor * hankel_sums(1, z).first};
}

}  // namespace detail

template <typename Real>
BesselPair<Real> bessel_k01(std::complex<Real> z, bool scaled) {
  check_argument(z, "bessel_k");
  const Real mag = std::abs(z);
  if (mag <= kSeriesRadius<Real>) return detail::k01_series(z, scaled);
  if (z.real() >= Real(0)) {
    if (mag > kAsymptoticRadius<Real>) return detail::k01_asymptotic(z, scaled);
    return detail::k01_continued_fraction(z, scaled);
  }
  // z = w e^{+-i pi} with Re w > 0:
  //   K0(z) = K0(w) -+ i pi I0(w),  K1(z) = -K1(w) -+ i pi I1(w).
  using C = std::complex<Real>;
  const C w = -z;
  const Real sign = z.imag() > Real(0) ? Real(1) : Real(-1);
  const C ipi(0, sign * std::numbers::pi_v<Real>);
  const auto k = bessel_k01(w, true);   // e^w K(w)
  const auto i = bessel_i01(w, true);   // e^-w I(w)
  // Scaled result e^z K(z) = e^-w K(z).
  if (scaled) {
    const C decay = std::exp(Real(-2) * w);
    return {decay * k.order0 - ipi * i.order0, -decay * k.order1 - ipi * i.order1};
  }
  const C ew = std::exp(w), emw = std::exp(-w);
  return {emw * k.order0 - ipi * ew * i.order0, -emw * k.order1 - ipi * ew * i.order1};
}

template <typename Real>
BesselPair<Real> bessel_i01(std::complex<Real> z, bool scaled) {
  using C = std::complex<Real>;
  check_argument(z, "bessel_i");
  const Real mag = std::abs(z);
  if (mag <= kSeriesRadius<Real>) {
    const auto sums = series_sums(z);
    C i0 = sums.i0, i1 = (z / Real(2)) * sums.i1s;
    if (scaled) {
      const C factor = std::exp(-z);
      i0 *= factor;
      i1 *= factor;
    }
    return {i0, i1};
  }
  if (z.real() < Real(0)) {
    // I0 even, I1 odd.
    const auto reflected = bessel_i01(-z, scaled);
    if (!scaled) return {reflected.order0, -reflected.order1};
    const C factor = std::exp(Real(-2) * z);  // e^-z I(z) = e^{-2z} e^{z} I(-z)
    return {factor * reflected.order0, -factor * reflected.order1};
  }
  C i0s, i1s;
  if (mag > kAsymptoticRadius<Real>) {
    // DLMF 10.40.5 with both exponentials retained.
    const Real sign = z.imag() >= Real(0) ? Real(1) : Real(-1);
    const C prefactor = Real(1) / std::sqrt(Real(2) * std::numbers::pi_v<Real> * z);
    const C reflected = C(0, sign) * std::exp(Real(-2) * z);
    const auto s0 = hankel_sums(0, z);
    const auto s1 = hankel_sums(1, z);
    i0s = prefactor * (s0.second + reflected * s0.first);
    i1s = prefactor * (s1.second - reflected * s1.first);
  } else {
    const auto k = bessel_k01(z, true);
    const C ratio = i_ratio_continued_fraction(0, z);
    i0s = Real(1) / (z * (k.order1 + ratio * k.order0));
    i1s = ratio * i0s;
  }
  if (scaled) return {i0s, i1s};
  const C factor = std::exp(z);
  return {factor * i0s, factor * i1s};
}

template <typename Real>
std::vector<std::complex<Real>> log_bessel_k_sequence(int max_order, std::complex<Real> z) {
  using C = std::complex<Real>;
  if (max_order < 0) throw std::domain_error("log_bessel_k_sequence: negative order");
  check_argument(z, "log_bessel_k_sequence");
  if (z.real() < Real(0) && std::abs(z) > kSeriesRadius<Real>) {
    // Forward recurrence from the continued K0/K1 would amplify their error
    // by e^{2|Re z|}; continue each order separately instead:
    //   K_n(z) = (-1)^n K_n(w) -+ i pi I_n(w),  w = -z.
    const C w = -z;
    const auto lk = log_bessel_k_sequence(max_order, w);
    const auto li = log_bessel_i_sequence(max_order, w);
    const Real pi = std::numbers::pi_v<Real>;
    const C shift = std::log(C(0, z.imag() > Real(0) ? -pi : pi));
    std::vector<C> out(static_cast<std::size_t>(max_order) + 1);
    for (int n = 0; n <= max_order; ++n) {
      const C a = lk[n] + C(0, n % 2 == 0 ? Real(0) : pi);
      const C b = li[n] + shift;
      const Real top = std::max(a.real(), b.real());
      out[n] = top + std::log(std::exp(a - top) + std::exp(b - top));
    }
    return out;
  }
  const auto k = bessel_k01(z, true);
  std::vector<C> out(static_cast<std::size_t>(max_order) + 1);
  out[0] = std::log(k.order0) - z;
  if (max_order == 0) return out;
  C ratio = k.order1 / k.order0;  // K_{n+1}/K_n at n = 0
  out[1] = out[0] + std::log(ratio);
  for (int n = 1; n < max_order; ++n) {
    ratio = Real(1) / ratio + Real(2 * n) / z;
    out[n + 1] = out[n] + std::log(ratio);
  }
  return out;
}

template <typename Real>
std::vector<std::complex<Real>> log_bessel_i_sequence(int max_order, std::complex<Real> z) {
  using C = std::complex<Real>;
  if (max_order < 0) throw std::domain_error("log_bessel_i_sequence: negative order");
  check_argument(z, "log_bessel_i_sequence");
  const bool reflect = z.real() < Real(0);
  const C w = reflect ? -z : z;
  std::vector<C> out(static_cast<std::size_t>(max_order) + 1);
  out[0] = std::log(bessel_i01(w, true).order0) + w;
  if (max_order > 0) {
    // ratios[n] = I_{n+1}/I_n, filled top-down.
    std::vector<C> ratios(static_cast<std::size_t>(max_order));
    ratios[max_order - 1] = i_ratio_continued_fraction(max_order - 1, w);
    for (int n = max_order - 1; n > 0; --n) {
      ratios[n - 1] = Real(1) / (Real(2 * n) / w + ratios[n]);
    }
    for (int n = 0; n < max_order; ++n) out[n + 1] = out[n] + std::log(ratios[n]);
  }
  if (reflect) {
    for (int n = 1; n <= max_order; n += 2) out[n] += C(0, std::numbers::pi_v<Real>);
  }
  return out;
}

namespace {

template <typename Real>
std::complex<Real> checked_exp(std::complex<Real> log_value, const char* who) {
  const Real limit = std::log(std::numeric_limits<Real>::max());
  if (log_value.real() > limit) throw std::overflow_error(std::string(who) + ": overflow");
  return std::exp(log_value);
}

}  // namespace

template <typename Real>
std::complex<Real> bessel_kn(int n, std::complex<Real> z) {
  if (n < 0) throw std::domain_error("bessel_kn: negative order");
  if (n <= 1) {
    const auto k = bessel_k01(z);
    return n == 0 ? k.order0 : k.order1;
  }
  return checked_exp(log_bessel_k_sequence(n, z)[n], "bessel_kn");
}

template <typename Real>
std::complex<Real> bessel_kn_scaled(int n, std::complex<Real> z) {
  if (n < 0) throw std::domain_error("bessel_kn_scaled: negative order");
  if (n <= 1) {
    const auto k = bessel_k01(z, true);
    return n == 0 ? k.order0 : k.order1;
  }
  return checked_exp(log_bessel_k_sequence(n, z)[n] + z, "bessel_kn_scaled");
}

template <typename Real>
std::complex<Real> bessel_in(int n, std::complex<Real> z) {
  if (n < 0) throw std::domain_error("bessel_in: negative order");
  if (n <= 1) {
    const auto i = bessel_i01(z);
    return n == 0 ? i.order0 : i.order1;
  }
  return checked_exp(log_bessel_i_sequence(n, z)[n], "bessel_in");
}

template <typename Real>
std::complex<Real> bessel_in_scaled(int n, std::complex<Real> z) {
  if (n < 0) throw std::domain_error("bessel_in_scaled: negative order");
  if (n <= 1) {
    const auto i = bessel_i01(z, true);
    return n == 0 ? i.order0 : i.order1;
  }
  return checked_exp(log_bessel_i_sequence(n, z)[n] - z, "bessel_in_scaled");
}

template <typename Real>
LogSubtractedK<Real> bessel_k_log_subtracted(std::complex<Real> z) {
  check_argument(z, "bessel_k_log_subtracted");
  if (std::abs(z) <= kSeriesRadius<Real>) {
    const auto sums = series_sums(z);
    const std::complex<Real> z2 = z * z;
    const std::complex<Real> one_minus_zk1 = -(z2 / Real(2)) * sums.k1s;
    const std::complex<Real> k0 = -sums.log_term * sums.i0 + sums.s0;
    return {one_minus_zk1, z2 * k0 - one_minus_zk1};
  }
  const auto k = bessel_k01(z);
  const std::complex<Real> zk1 = z * k.order1;
  return {Real(1) - zk1, z * z * k.order0 + zk1 - Real(1)};
}

#define PASSAGE_INSTANTIATE_SPECFUN(Real)                                                  \
  template BesselPair<Real> bessel_k01(std::complex<Real>, bool);                          \
  template BesselPair<Real> bessel_i01(std::complex<Real>, bool);                          \
  template std::complex<Real> bessel_kn(int, std::complex<Real>);                          \
  template std::complex<Real> bessel_kn_scaled(int, std::complex<Real>);                   \
  template std::complex<Real> bessel_in(int, std::complex<Real>);                          \
  template std::complex<Real> bessel_in_scaled(int, std::complex<Real>);                   \
  template std::vector<std::complex<Real>> log_bessel_k_sequence(int, std::complex<Real>); \
  template std::vector<std::complex<Real>> log_bessel_i_sequence(int, std::complex<Real>); \
  template LogSubtractedK<Real> bessel_k_log_subtracted(std::complex<Real>);               \
  template BesselPair<Real> detail::k01_series(std::complex<Real>, bool);                  \
  template BesselPair<Real> detail::k01_continued_fraction(std::complex<Real>, bool);      \
  template BesselPair<Real> detail::k01_asymptotic(std::complex<Real>, bool);

PASSAGE_INSTANTIATE_SPECFUN(double)
PASSAGE_INSTANTIATE_SPECFUN(long double)

#undef PASSAGE_INSTANTIATE_SPECFUN

}  // namespace passage
