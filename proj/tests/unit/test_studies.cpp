#include <doctest.h>

#include <cmath>

#include "passage/studies.hpp"
#include "unit/scenes.hpp"

using namespace passage;

TEST_CASE("line fit") {
  const LineFit fit = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_line({1}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(fit_line({2, 2}, {1, 3}), std::invalid_argument);
}

TEST_CASE("log-spaced times") {
  const std::vector<double> t = log_spaced(1.0, 1e10, 11);
  REQUIRE(t.size() == 11);
  CHECK(t.front() == 1.0);
  CHECK(t.back() == 1e10);
  CHECK(t[5] == doctest::Approx(1e5));
  CHECK(log_spaced(3.0, 3.0, 1) == std::vector<double>{3.0});
  CHECK_THROWS_AS(log_spaced(0.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(log_spaced(2.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("Talbot sweep follows the 10^(-1.2 M) model") {
  const TalbotSweep sweep = talbot_sweep({4, 6, 8, 10}, {1.0}, {0.5});
  REQUIRE(sweep.slopes.size() == 1);
  CHECK(sweep.slopes[0] == doctest::Approx(-1.2).epsilon(0.15));
  CHECK(sweep.max_error(0, 3) < sweep.max_error(0, 0));
  CHECK_THROWS_AS(talbot_sweep({}, {1.0}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(talbot_sweep({4, 6}, {}, {0.5}), std::invalid_argument);
}

TEST_CASE("disc study targets") {
  const auto targets = default_disc_targets();
  REQUIRE(targets.size() == 5);
  int gray = 0;
  for (const DiscTarget& t : targets) {
    gray += t.gray;
    // Gray means |x| near the source radius.
    CHECK(t.gray == (std::abs(t.x.norm() - 2.0) < 0.1));
    CHECK(t.x.norm() > 1.0);
  }
  CHECK(gray == 1);
}

TEST_CASE("small disc studies") {
  const DiscFieldStudy field = disc_field_study({32, 64}, {{Vec2(3, 1), false}});
  CHECK(field.orders[0] > 2.5);
  CHECK(field.min_order == field.orders[0]);
  const DiscFluxStudy flux = disc_flux_study({32, 64});
  CHECK(flux.order == doctest::Approx(1.0).epsilon(0.3));
  CHECK(flux.errors[1] < flux.errors[0]);
}

TEST_CASE("reflector ring detection") {
  using passage::testing::faraday_scene;
  const auto ring = find_reflector_ring(faraday_scene(1.0, 1.0));
  REQUIRE(ring.has_value());
  CHECK(ring->count == 8);
  CHECK(ring->ring_radius == doctest::Approx(3.0));
  CHECK(ring->rho == doctest::Approx(0.129).epsilon(0.01));
  CHECK(confining_ratio(0.75) == doctest::Approx(0.347).epsilon(0.002));
  CHECK(confining_ratio(1.1) == doctest::Approx(0.042).epsilon(0.01));
  CHECK(confining_ratio(1.125) == doctest::Approx(0.020).epsilon(0.02));
  CHECK_FALSE(find_reflector_ring(unit_disc_scene()).has_value());
}
