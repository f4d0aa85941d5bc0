#include <doctest.h>

#include <cmath>
#include <numbers>

#include "channelq/bounds.hpp"
#include "channelq/error.hpp"

using namespace channelq;

namespace {

bool near(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace

// Reference values from 40-digit evaluation of the closed forms with a
// general Gamma function.
TEST_CASE("nu reference values") {
  CHECK(near(nu(2), 1267.069374152493593138, 1e-14));
  CHECK(near(nu(3), 4058.898682065915219752, 1e-14));
  CHECK(near(nu(4), 9714.438470757107833810, 1e-14));
  CHECK(near(nu(5), 19090.95276937964507974, 1e-14));
  CHECK(near(nu(8), 78216.66044990972411184, 1e-14));
  CHECK(near(nu(16), 613070.5806917777839007, 1e-14));
}

TEST_CASE("kappa reference values") {
  CHECK(near(kappa(2), 1.0 / 24, 1e-15));
  CHECK(near(kappa(3), 0.03978873577297383394222, 1e-14));
  CHECK(near(kappa(4), 0.03496455577765587107864, 1e-14));
  CHECK(near(kappa(8), 0.02184279212125950707007, 1e-14));
  CHECK(near(kappa(16), 0.01215873513648783924505, 1e-14));
}

TEST_CASE("large-alphabet approximations") {
  const double x = 64;
  CHECK(std::abs(nu(64) / (16 * std::numbers::pi * std::numbers::e * x * x * x) - 1) < 0.25);
  CHECK(std::abs(kappa(64) * 4 * std::numbers::pi * (x - 1) / std::numbers::e - 1) < 0.25);
}

TEST_CASE("mu and ordering") {
  CHECK(mu(2) == 2 * nu(2));
  CHECK(near(mu(5), nu(5) / 2, 1e-15));
  for (std::size_t x = 2; x <= 16; ++x) CHECK(kappa(x) < nu(x));
}

TEST_CASE("log_gamma_half_shift") {
  for (std::size_t x = 2; x <= 40; ++x) {
    CHECK(std::abs(log_gamma_half_shift(x) - std::lgamma(1 + (x - 1) / 2.0)) < 1e-12);
  }
}

TEST_CASE("r_critical") {
  CHECK(near(r_critical(2, 100), 0.03167673435381233982846, 1e-13));
  CHECK(near(r_critical(3, 100), 3.382415568388262683127, 1e-13));
  for (std::size_t x : {2, 3, 5}) {
    for (std::size_t y : {2 * x + 1, 100ul, 1000ul}) {
      const double lhs = mu(x) * std::pow(static_cast<double>(y), -(x + 1.0) / (x - 1.0));
      const double rhs = 4.0 * x / y * r_critical(x, y);
      CHECK(near(lhs, rhs, 1e-9));
    }
  }
  CHECK(r_critical(3, 200) < r_critical(3, 100));
  CHECK(near(r_critical(2, 200) / r_critical(2, 100), 0.25, 1e-14));
  CHECK_THROWS_AS(r_critical(2, 4), Error);
}

TEST_CASE("envelopes") {
  CHECK(near(degrade_envelope(2, 8), nu(2) / 64, 1e-15));
  CHECK(near(degrade_envelope(3, 6), nu(3) / 6, 1e-15));
  CHECK(near(merge_step_envelope(2, 10), mu(2) / 1000, 1e-15));
  CHECK(near(upgrade_envelope(8), 2 * nu(2) / 64, 1e-15));
  CHECK(near(split_step_envelope(10), 2 * mu(2) / 1000, 1e-15));
  for (std::size_t l = 2; l < 200; ++l) CHECK(upgrade_lower_envelope(2, l) <= upgrade_envelope(l));
}

TEST_CASE("bound report") {
  const BoundReport b = bound_report(2, 16, 100);
  CHECK(b.nu == nu(2));
  CHECK(b.r_critical.has_value());
  CHECK(b.upgrade_envelope.has_value());
  const BoundReport c = bound_report(3, 16);
  CHECK_FALSE(c.r_critical.has_value());
  CHECK_FALSE(c.upgrade_envelope.has_value());
  CHECK_THROWS_AS(nu(1), Error);
  CHECK_THROWS_AS(kappa(0), Error);
}
