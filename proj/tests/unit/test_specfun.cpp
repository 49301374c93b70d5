#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fixtures/reference_values.hpp"
#include "passage/specfun.hpp"
#include "passage/types.hpp"

using namespace passage;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Points with |arg z| <= max_arg and log-uniform modulus.
std::vector<Complex> sector_sample(int count, double rmin, double rmax, unsigned seed,
                                   double max_arg = 0.75 * kPi) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> log_r(std::log(rmin), std::log(rmax));
  std::uniform_real_distribution<double> arg(-max_arg, max_arg);
  std::vector<Complex> out;
  for (int i = 0; i < count; ++i) out.push_back(std::polar(std::exp(log_r(gen)), arg(gen)));
  return out;
}

}  // namespace

TEST_CASE("K0, K1, I0, I1 match the high-precision table") {
  for (const auto& p : reference::kBesselPoints) {
    CAPTURE(p.z);
    const auto k = bessel_k01(p.z);
    const auto i = bessel_i01(p.z);
    CHECK(rel(k.order0, p.k0) <= 1e-12);
    CHECK(rel(k.order1, p.k1) <= 1e-12);
    CHECK(rel(i.order0, p.i0) <= 1e-12);
    CHECK(rel(i.order1, p.i1) <= 1e-12);
  }
}

TEST_CASE("scaled K stays finite and accurate at large argument") {
  for (const auto& p : reference::kScaledPoints) {
    CAPTURE(p.z);
    CHECK(rel(bessel_k0_scaled(p.z), p.k0s) <= 1e-12);
    CHECK(rel(bessel_k1_scaled(p.z), p.k1s) <= 1e-12);
  }
  const Complex k700 = bessel_k0_scaled(Complex(700.0));
  CHECK(std::isfinite(k700.real()));
  CHECK(k700.real() > 0.0);
  CHECK(k700.imag() == 0.0);

  const Complex z(5.0, 1.0);
  CHECK(rel(bessel_k0_scaled(z) * std::exp(-z), bessel_k0(z)) <= 1e-12);

  double previous = 1.0;
  for (double x : {1e2, 1e4, 1e6, 1e8}) {
    const double gap = std::abs(bessel_k0_scaled(Complex(x)) * std::sqrt(2.0 * x / kPi) - 1.0);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 1e-8);
}

TEST_CASE("small-argument behaviour") {
  for (double x : {1e-4, 1e-6, 1e-8}) {
    const Complex z(x);
    CHECK(std::abs(bessel_k0(z) + std::log(z / 2.0) + kEulerGamma) < 10.0 * x * x * std::abs(std::log(x)));
    CHECK(std::abs(z * bessel_k1(z) - 1.0) < 10.0 * x * x * std::abs(std::log(x)));
  }
}

TEST_CASE("Wronskian identities") {
  const Complex z(0.7, 0.3);
  const auto k = bessel_k01(z);
  const auto i = bessel_i01(z);
  CHECK(std::abs(i.order0 * k.order1 + i.order1 * k.order0 - 1.0 / z) <= 1e-12 * std::abs(1.0 / z));

  std::mt19937 gen(7);
  std::uniform_int_distribution<int> order(0, 19);
  // Right half-plane only: for Re z < 0 both products grow like e^{2|Re z|}
  // and the identity itself cancels catastrophically.
  for (const Complex w : sector_sample(60, 0.05, 60.0, 11, 0.5 * kPi)) {
    const int n = order(gen);
    CAPTURE(w);
    CAPTURE(n);
    // Scaled products keep the check finite: e^{-w}I_n * e^{w}K_m = I_n K_m.
    const Complex lhs = bessel_in_scaled(n, w) * bessel_kn_scaled(n + 1, w) +
                        bessel_in_scaled(n + 1, w) * bessel_kn_scaled(n, w);
    CHECK(std::abs(lhs * w - 1.0) <= 1e-10);
  }
}

TEST_CASE("integer orders") {
  for (const auto& p : reference::kOrderPoints) {
    CAPTURE(p.n);
    CAPTURE(p.z);
    CHECK(rel(bessel_kn_scaled(p.n, p.z), p.kn_scaled) <= 1e-10);
    CHECK(rel(bessel_in_scaled(p.n, p.z), p.in_scaled) <= 1e-10);
  }
  CHECK(std::abs(bessel_in(0, Complex(1.0)) - 1.266065877752008) < 1e-14);

  const Complex z(3.0, 1.0);
  const int n = 5;
  const Complex lhs = bessel_kn(n + 1, z);
  const Complex rhs = bessel_kn(n - 1, z) + (2.0 * n / z) * bessel_kn(n, z);
  CHECK(rel(lhs, rhs) <= 1e-10);

  const Complex two(2.0);
  const double gap50 = std::abs(100.0 * bessel_in(50, two) * bessel_kn(50, two) - 1.0);
  const double gap100 = std::abs(200.0 * bessel_in(100, two) * bessel_kn(100, two) - 1.0);
  CHECK(gap100 < gap50);
  CHECK(gap50 < 1e-3);

  CHECK_THROWS_AS(bessel_kn(200, Complex(1e-3)), std::overflow_error);
  CHECK(bessel_in(200, Complex(1e-3)) == Complex(0.0));
}

TEST_CASE("conjugate symmetry") {
  for (const Complex z : sector_sample(100, 1e-3, 100.0, 3)) {
    CAPTURE(z);
    const auto k = bessel_k01(z), kc = bessel_k01(std::conj(z));
    const auto i = bessel_i01(z), ic = bessel_i01(std::conj(z));
    CHECK(rel(kc.order0, std::conj(k.order0)) <= 1e-14);
    CHECK(rel(kc.order1, std::conj(k.order1)) <= 1e-14);
    CHECK(rel(ic.order0, std::conj(i.order0)) <= 1e-14);
    CHECK(rel(ic.order1, std::conj(i.order1)) <= 1e-14);
    CHECK(rel(bessel_kn(4, std::conj(z)), std::conj(bessel_kn(4, z))) <= 1e-14);
  }
}

TEST_CASE("evaluation regimes agree where they overlap") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> arg(-0.5 * kPi, 0.5 * kPi);
  std::uniform_real_distribution<double> inner(1.5, 3.0), outer(18.0, 25.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Complex a = std::polar(inner(gen), arg(gen));
    const auto s = detail::k01_series(a, true);
    const auto c = detail::k01_continued_fraction(a, true);
    CAPTURE(a);
    CHECK(rel(s.order0, c.order0) <= 1e-11);
    CHECK(rel(s.order1, c.order1) <= 1e-11);

    const Complex b = std::polar(outer(gen), arg(gen));
    const auto cf = detail::k01_continued_fraction(b, true);
    const auto as = detail::k01_asymptotic(b, true);
    CAPTURE(b);
    CHECK(rel(cf.order0, as.order0) <= 1e-11);
    CHECK(rel(cf.order1, as.order1) <= 1e-11);
  }
}

TEST_CASE("log-subtracted combinations") {
  for (const Complex z : {Complex(1e-7, 2e-7), Complex(1e-3), Complex(0.3, -0.4), Complex(1.9, 0.5),
                          Complex(2.5, 1.0), Complex(6.0, -3.0)}) {
    CAPTURE(z);
    const auto k = bessel_k01(z);
    const auto sub = bessel_k_log_subtracted(z);
    const Complex direct1 = 1.0 - z * k.order1;
    const Complex direct2 = z * z * k.order0 + z * k.order1 - 1.0;
    // Direct differencing loses ~|1/z^2| digits near zero; compare at that scale.
    const double scale = std::max(1.0, 1.0 / std::norm(z)) * 1e-14;
    CHECK(std::abs(sub.one_minus_zk1 - direct1) <= scale + 1e-13 * std::abs(direct1));
    CHECK(std::abs(sub.second_order - direct2) <= scale + 1e-13 * std::abs(direct2));
  }
  // Leading small-z form: 1 - zK1 ~ -(z^2/2)(log(z/2) + gamma - 1/2).
  const Complex z(1e-5, 1e-5);
  const Complex lead = -(z * z / 2.0) * (std::log(z / 2.0) + kEulerGamma - 0.5);
  CHECK(rel(bessel_k_log_subtracted(z).one_minus_zk1, lead) <= 1e-8);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_k0(Complex(0.0)), std::domain_error);
  CHECK_THROWS_AS(bessel_k1(Complex(-2.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(bessel_i0(Complex(std::nan(""), 1.0)), std::domain_error);
  CHECK_THROWS_AS(bessel_kn(-1, Complex(1.0)), std::domain_error);
}

TEST_CASE("long double instantiation") {
  const std::complex<long double> z(1.0L, 0.0L);
  CHECK(std::abs(bessel_k0(z).real() - 0.421024438240708333335627379213L) < 1e-17L);
}
