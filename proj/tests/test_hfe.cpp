#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "wfl/hfe.hpp"

using namespace wfl;
namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

Eigen::Matrix2cd sigma_x() { Eigen::Matrix2cd m; m << 0, 1, 1, 0; return m; }
Eigen::Matrix2cd sigma_y() { Eigen::Matrix2cd m; m << 0, -I, I, 0; return m; }
Eigen::Matrix2cd sigma_z() { Eigen::Matrix2cd m; m << 1, 0, 0, -1; return m; }

Eigen::MatrixXcd random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (m + m.adjoint().eval());
}

// Two Walsh tones a quarter period out of step: the x field flips sign once
// per period, the y field twice.
std::vector<Eigen::MatrixXcd> two_tone_schedule(double bx, double by) {
  const WalshBasis wb = build_walsh_basis(2, 1.0);
  const int nat1 = natural_of(wb, 1);
  const int nat2 = natural_of(wb, 2);
  std::vector<Eigen::MatrixXcd> schedule;
  for (int j = 0; j < 4; ++j) {
    schedule.push_back(0.5 * bx * double(wb.rows(nat1, j)) * sigma_x() +
                       0.5 * by * double(wb.rows(nat2, j)) * sigma_y());
  }
  return schedule;
}

}  // namespace

TEST_CASE("rational arithmetic") {
  CHECK(Rational(2, 8) == Rational(1, 4));
  CHECK(Rational(-2, 8) == Rational(-1, 4));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0, 1));
  CHECK(Rational(1, 4).value() == 0.25);
  CHECK(!(Rational(1, 4) == Rational(1, 8)));
}

TEST_CASE("dyadic coupling table anchors") {
  const int n = 5;
  CHECK(fab(1, 0, n) == Rational(1, 4));
  CHECK(fab(3, 0, n) == Rational(1, 8));
  CHECK(fab(2, 1, n) == Rational(1, 8));
  for (int a = 4; a < 8; ++a) CHECK(fab(a, 7 - a, n) == Rational(1, 16));
  for (int a = 8; a < 16; ++a) CHECK(fab(a, 15 - a, n) == Rational(1, 32));
  CHECK(fab(0, 0, n) == Rational(-31, 64));
}

TEST_CASE("coupling table antisymmetry and support") {
  const int n = 5;
  int nonzero = 0;
  for (int a = 0; a < 32; ++a) {
    for (int b = 0; b < 32; ++b) {
      const Rational f = fab(a, b, n);
      if (a == 0 && b == 0) continue;
      const Rational g = fab(b, a, n);
      CHECK(f == Rational(-g.num, g.den));
      if (a > b && f.num != 0) {
        ++nonzero;
        // support: label sum fills a low bit block, value 2^-(p+1)
        const int sum = a + b;
        CHECK((sum & (sum + 1)) == 0);
        CHECK(f == Rational(1, 2 * (sum + 1)));
      }
    }
  }
  CHECK(nonzero == 31);
  // pairs whose label sum is not of the form 2^p - 1 vanish
  CHECK(fab(2, 0, n) == Rational(0, 1));
  CHECK(fab(5, 1, n) == Rational(0, 1));
  CHECK(fab(9, 2, n) == Rational(0, 1));
}

TEST_CASE("coupling table does not depend on the grid refinement") {
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b) {
      if (a == 0 && b == 0) continue;  // the only refinement-dependent entry
      CHECK(fab(a, b, 4) == fab(a, b, 7));
    }
  CHECK(fab(0, 0, 2) == Rational(-3, 8));
  CHECK(fab(0, 0, 3) == Rational(-7, 16));
}

TEST_CASE("natural-label table matches the sequency map") {
  const WalshBasis wb = build_walsh_basis(3, 1.0);
  const Eigen::MatrixXd table = fab_natural_table(wb);
  REQUIRE(table.rows() == 8);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const Rational f = fab(sequency_of(wb, a), sequency_of(wb, b), 3);
      CHECK(table(a, b) == f.value());
      if (!(a == 0 && b == 0)) CHECK(table(a, b) == -table(b, a));
    }
}

TEST_CASE("two-block effective hamiltonian matches the BCH expansion") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    const double T = 0.05;
    const Eigen::MatrixXcd h0 = random_hermitian(3, rng);
    const Eigen::MatrixXcd h1 = random_hermitian(3, rng);
    const EffectiveHamiltonian eff = walsh_heff({h0, h1}, T);
    CHECK((eff.order0 - 0.5 * (h0 + h1)).cwiseAbs().maxCoeff() < 1e-13);
    const Eigen::MatrixXcd bch = (I * T / 8.0) * (h0 * h1 - h1 * h0);
    CHECK((eff.order1 - bch).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("first-order term equals the double-integral form for any schedule") {
  std::mt19937 rng(11);
  for (int n_blocks : {2, 4, 8}) {
    const double T = 0.3;
    std::vector<Eigen::MatrixXcd> schedule;
    for (int j = 0; j < n_blocks; ++j) schedule.push_back(random_hermitian(2, rng));
    const EffectiveHamiltonian eff = walsh_heff(schedule, T);

    Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(2, 2);
    for (const auto& h : schedule) mean += h / double(n_blocks);
    CHECK((eff.order0 - mean).cwiseAbs().maxCoeff() < 1e-13);

    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
    for (int i = 0; i < n_blocks; ++i)
      for (int j = 0; j < i; ++j) acc += schedule[i] * schedule[j] - schedule[j] * schedule[i];
    const Eigen::MatrixXcd direct = -I * T / (2.0 * n_blocks * n_blocks) * acc;
    CHECK((eff.order1 - direct).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(walsh_heff({}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(walsh_heff({Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(2, 2),
                              Eigen::MatrixXcd::Zero(2, 2)},
                             1.0),
                  std::invalid_argument);
}

TEST_CASE("two-tone first order is the cross-field rotation") {
  const double T = 0.01;
  const double bx = 1.3, by = 0.7;
  const EffectiveHamiltonian eff = walsh_heff(two_tone_schedule(bx, by), T);
  CHECK(eff.order0.cwiseAbs().maxCoeff() < 1e-14);
  const Eigen::Matrix2cd expect = (T / 16.0) * bx * by * sigma_z();
  CHECK((eff.order1 - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact floquet hamiltonian from the block product") {
  // Commuting blocks: the log reproduces the mean exactly.
  const double T = 0.8;
  Eigen::MatrixXcd d0 = Eigen::Vector2cd(0.3, -0.2).asDiagonal();
  Eigen::MatrixXcd d1 = Eigen::Vector2cd(-0.1, 0.5).asDiagonal();
  const Eigen::MatrixXcd hf = floquet_log_hamiltonian({d0, d1}, T);
  CHECK((hf - 0.5 * (d0 + d1)).cwiseAbs().maxCoeff() < 1e-12);

  // A phase near the branch cut cannot be unwound.
  Eigen::MatrixXcd big = Eigen::Vector2cd(3.1, 0.0).asDiagonal();
  CHECK_THROWS_AS(floquet_log_hamiltonian({big}, 1.0), std::runtime_error);
}

TEST_CASE("truncation remainder shrinks with the expected powers") {
  auto schedule_at = [](double) { return two_tone_schedule(1.0, 1.0); };
  std::vector<double> omegas;
  for (int k = 0; k < 6; ++k) omegas.push_back(100.0 * std::pow(10.0, k / 2.0));

  const RemainderScaling first = remainder_scaling(schedule_at, omegas, 1);
  CHECK(first.slope == doctest::Approx(-2.0).epsilon(0.08));
  const RemainderScaling zeroth = remainder_scaling(schedule_at, omegas, 0);
  CHECK(zeroth.slope == doctest::Approx(-1.0).epsilon(0.08));
  CHECK_THROWS_AS(remainder_scaling(schedule_at, {50.0}, 0), std::invalid_argument);
}

TEST_CASE("micromotion generator of the kicked chain") {
  const double T = 0.8;
  const SpinModel model = build_mfim(2, 0.9, 0.4, 1.7);
  const PeriodicDrive drive = up_down_kick(T);

  const Eigen::MatrixXcd quarter = van_vleck_kick(model, drive, T / 4.0);
  Eigen::MatrixXcd expect = (-T / 4.0) * model.static_h.cast<cplx>() +
                            (model.field_x * 0.5) * model.drive_op.cast<cplx>();
  CHECK((quarter - expect).cwiseAbs().maxCoeff() < 1e-13);

  const Eigen::MatrixXcd three_quarter = van_vleck_kick(model, drive, 3.0 * T / 4.0);
  expect = (T / 4.0) * model.static_h.cast<cplx>() -
           (model.field_x * 0.5) * model.drive_op.cast<cplx>();
  CHECK((three_quarter - expect).cwiseAbs().maxCoeff() < 1e-13);

  // Zero mean over the period, probed on a fine midpoint grid.
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(4, 4);
  const int steps = 512;
  for (int j = 0; j < steps; ++j)
    mean += van_vleck_kick(model, drive, (j + 0.5) * T / steps) / double(steps);
  CHECK(mean.cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(van_vleck_kick(model, drive, T), std::invalid_argument);
  CHECK_THROWS_AS(van_vleck_kick(model, drive, -0.1), std::invalid_argument);
}

TEST_CASE("coupling table export") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "wfl_fab_table.csv").string();
  write_fab_table_csv(path, 5, Rational(1, 32));
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "a,b,numerator,denominator");
  REQUIRE(std::getline(in, line));
  CHECK(line == "1,0,1,4");
  int rows = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    std::istringstream ss(line);
    int a, b;
    long long num, den;
    char c;
    ss >> a >> c >> b >> c >> num >> c >> den;
    CHECK(a > b);
    CHECK(a < 32);
    CHECK(fab(a, b, 5) == Rational(num, den));
  }
  CHECK(rows == 15);
  std::remove(path.c_str());
}
