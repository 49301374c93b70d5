#pragma once

// Modified Bessel functions of integer order and complex argument.
//
// Evaluation regimes for K0/K1:
//   |z| <= 2                 ascending power series
//   2 < |z| <= 20, Re z >= 0 Steed's continued fraction (Temme's CF2)
//   |z| > 20, Re z >= 0      Hankel asymptotic expansion
//   Re z < 0, |z| > 2        analytic continuation through I0/I1 of -z
// I0/I1 use the power series for |z| <= 2, the Wronskian with the K pair and
// the I1/I0 continued fraction up to |z| = 20, and the two-exponential
// asymptotic expansion beyond. Higher orders come from ratio recurrences:
// forward for K_n, backward (Miller style, seeded by a continued fraction)
// for I_n.
//
// All functions are pure and thread-safe. The argument must be nonzero,
// finite and off the negative real axis; otherwise std::domain_error.

#include <complex>
#include <vector>

namespace passage {

template <typename Real>
struct BesselPair {
  std::complex<Real> order0;
  std::complex<Real> order1;
};

/// K0(z) and K1(z) in one pass. With `scaled`, both are multiplied by e^z.
template <typename Real>
BesselPair<Real> bessel_k01(std::complex<Real> z, bool scaled = false);

/// I0(z) and I1(z) in one pass. With `scaled`, both are multiplied by e^-z.
template <typename Real>
BesselPair<Real> bessel_i01(std::complex<Real> z, bool scaled = false);

template <typename Real>
std::complex<Real> bessel_k0(std::complex<Real> z) {
  return bessel_k01(z).order0;
}
template <typename Real>
std::complex<Real> bessel_k1(std::complex<Real> z) {
  return bessel_k01(z).order1;
}
/// e^z K0(z)
template <typename Real>
std::complex<Real> bessel_k0_scaled(std::complex<Real> z) {
  return bessel_k01(z, true).order0;
}
/// e^z K1(z)
template <typename Real>
std::complex<Real> bessel_k1_scaled(std::complex<Real> z) {
  return bessel_k01(z, true).order1;
}
template <typename Real>
std::complex<Real> bessel_i0(std::complex<Real> z) {
  return bessel_i01(z).order0;
}
template <typename Real>
std::complex<Real> bessel_i1(std::complex<Real> z) {
  return bessel_i01(z).order1;
}

/// K_n(z), n >= 0. Throws std::overflow_error when the value is not
/// representable.
template <typename Real>
std::complex<Real> bessel_kn(int n, std::complex<Real> z);
/// e^z K_n(z).
template <typename Real>
std::complex<Real> bessel_kn_scaled(int n, std::complex<Real> z);
/// I_n(z), n >= 0. Throws std::overflow_error when the value is not
/// representable; underflows quietly to zero.
template <typename Real>
std::complex<Real> bessel_in(int n, std::complex<Real> z);
/// e^-z I_n(z).
template <typename Real>
std::complex<Real> bessel_in_scaled(int n, std::complex<Real> z);

/// log K_n(z) for n = 0..max_order (any branch of the log; only exp() of
/// sums of these is meaningful). Never overflows.
template <typename Real>
std::vector<std::complex<Real>> log_bessel_k_sequence(int max_order, std::complex<Real> z);

/// log I_n(z) for n = 0..max_order; same conventions as the K sequence.
template <typename Real>
std::vector<std::complex<Real>> log_bessel_i_sequence(int max_order, std::complex<Real> z);

/// Cancellation-free combinations that appear once the logarithmic
/// singularity is subtracted from K0:
///   one_minus_zk1   = 1 - z K1(z)
///   second_order    = z^2 K0(z) + z K1(z) - 1
/// Both are O(z^2 log z) as z -> 0 and are summed directly from the series
/// there instead of by differencing.
template <typename Real>
struct LogSubtractedK {
  std::complex<Real> one_minus_zk1;
  std::complex<Real> second_order;
};

template <typename Real>
LogSubtractedK<Real> bessel_k_log_subtracted(std::complex<Real> z);

namespace detail {

// Individual regimes, exposed for overlap tests. All return unscaled values
// unless `scaled` is set (then multiplied by e^z).
template <typename Real>
BesselPair<Real> k01_series(std::complex<Real> z, bool scaled);
template <typename Real>
BesselPair<Real> k01_continued_fraction(std::complex<Real> z, bool scaled);
template <typename Real>
BesselPair<Real> k01_asymptotic(std::complex<Real> z, bool scaled);

}  // namespace detail

}  // namespace passage
