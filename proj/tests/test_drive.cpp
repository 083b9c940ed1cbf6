#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wfl/drive.hpp"

using namespace wfl;
namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("up-down kick layout") {
  const PeriodicDrive d = up_down_kick(2.0);
  REQUIRE(d.kicks.size() == 2);
  CHECK(d.kicks[0].time == 0.0);
  CHECK(d.kicks[0].amplitude == 1.0);
  CHECK(d.kicks[1].time == 1.0);
  CHECK(d.kicks[1].amplitude == -1.0);
  CHECK(d.segments.empty());
  CHECK(d.time_average() == doctest::Approx(0.0));
  CHECK(d.omega() == doctest::Approx(pi));
}

TEST_CASE("square wave layout") {
  const PeriodicDrive d = square_wave(4.0);
  REQUIRE(d.segments.size() == 2);
  CHECK(d.segments[0].begin == 0.0);
  CHECK(d.segments[0].end == 2.0);
  CHECK(d.segments[0].value == 1.0);
  CHECK(d.segments[1].value == -1.0);
  CHECK(d.kicks.empty());
  CHECK(d.time_average() == doctest::Approx(0.0));
}

TEST_CASE("kick fourier coefficients: 2/T on odd modes") {
  for (KickConvention conv : {KickConvention::symmetric, KickConvention::nonsymmetric}) {
    const double T = 0.7;
    const PeriodicDrive d = up_down_kick(T, conv);
    for (long long m = -9; m <= 9; ++m) {
      const cplx c = d.fourier_coefficient(m);
      if (m % 2 == 0)
        CHECK(std::abs(c) < 1e-15);
      else
        CHECK(std::abs(c - cplx(2.0 / T, 0.0)) < 1e-14);
    }
  }
}

TEST_CASE("square wave fourier coefficients: -2i/(pi m) on odd modes") {
  const double T = 2.0;
  const PeriodicDrive d = square_wave(T);
  CHECK(std::abs(d.fourier_coefficient(0)) < 1e-15);
  for (long long m : {1LL, 3LL, -5LL, 7LL}) {
    const cplx expect(0.0, -2.0 / (pi * double(m)));
    CHECK(std::abs(d.fourier_coefficient(m) - expect) < 1e-14);
  }
  for (long long m : {2LL, -4LL, 6LL}) CHECK(std::abs(d.fourier_coefficient(m)) < 1e-15);
}

TEST_CASE("grid compatibility") {
  const PeriodicDrive kick = up_down_kick(1.0);
  CHECK(kick.grid_compatible(2));
  CHECK(kick.grid_compatible(8));
  CHECK(!kick.grid_compatible(3));  // T/2 is not a multiple of T/3
  const PeriodicDrive sq = square_wave(1.0);
  CHECK(sq.grid_compatible(2));
  CHECK(sq.grid_compatible(4));
  CHECK(!sq.grid_compatible(5));
}

TEST_CASE("discretize: symmetric halves the boundary masses, nonsymmetric shifts right") {
  const double T = 1.0;
  const DiscretizedDrive sym = discretize(up_down_kick(T), 8);
  CHECK(sym.point_mass[0] == doctest::Approx(0.5));
  CHECK(sym.point_mass[7] == doctest::Approx(0.5));
  CHECK(sym.point_mass[3] == doctest::Approx(-0.5));
  CHECK(sym.point_mass[4] == doctest::Approx(-0.5));
  CHECK(sym.point_mass.cwiseAbs().sum() == doctest::Approx(2.0));
  CHECK(sym.block_value.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  const DiscretizedDrive non = discretize(up_down_kick(T, KickConvention::nonsymmetric), 8);
  CHECK(non.point_mass[0] == doctest::Approx(1.0));
  CHECK(non.point_mass[4] == doctest::Approx(-1.0));
  CHECK(non.point_mass.cwiseAbs().sum() == doctest::Approx(2.0));

  CHECK_THROWS_AS(discretize(up_down_kick(T), 3), std::invalid_argument);
}

TEST_CASE("sample points: kicks become blocks, jumps sample to midpoints") {
  const double T = 1.0;
  const Eigen::VectorXd kick = sample_points(up_down_kick(T), 8);
  CHECK(kick[0] == doctest::Approx(4.0));   // half weight * N / T
  CHECK(kick[7] == doctest::Approx(4.0));
  CHECK(kick[3] == doctest::Approx(-4.0));
  CHECK(kick[4] == doctest::Approx(-4.0));
  CHECK(kick[1] == doctest::Approx(0.0));

  const Eigen::VectorXd sq = sample_points(square_wave(T), 4);
  CHECK(sq[0] == doctest::Approx(0.0));  // mean of the one-sided limits
  CHECK(sq[1] == doctest::Approx(1.0));
  CHECK(sq[2] == doctest::Approx(0.0));
  CHECK(sq[3] == doctest::Approx(-1.0));

  const Eigen::VectorXd sqn = sample_points(square_wave(T, KickConvention::nonsymmetric), 4);
  CHECK(sqn[0] == doctest::Approx(1.0));  // right-side limit
  CHECK(sqn[2] == doctest::Approx(-1.0));
}
