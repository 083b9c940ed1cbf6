#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "wfl/solve.hpp"

using namespace wfl;
namespace {

constexpr double pi = std::numbers::pi;

int zero_row(const FloquetSolution& sol) {
  for (int m = 0; m < sol.n_modes; ++m)
    if (sol.mode_labels[m] == 0) return m;
  return -1;
}

double brute_force_cost(const Eigen::VectorXd& rep_theta, const Eigen::VectorXd& exact_theta) {
  const int d = static_cast<int>(rep_theta.size());
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double total = 0.0;
    for (int r = 0; r < d; ++r) total += circular_distance(rep_theta[r], exact_theta[perm[r]]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("undriven solve pins one representative per static state") {
  const double T = 0.9;
  const SpinModel model = build_mfim(2, 0.8, 0.35, 0.0);
  const PeriodicDrive drive = up_down_kick(T);
  const ExactFloquetResult exact = exact_propagator(model, drive);
  const ExtendedOperator op = assemble_q(model, drive, Basis::fourier, 9);
  const FloquetSolution sol = solve(op, &exact);

  REQUIRE(static_cast<int>(sol.representatives.size()) == 4);
  std::vector<int> reps = sol.representatives;
  std::sort(reps.begin(), reps.end());
  CHECK(std::adjacent_find(reps.begin(), reps.end()) == reps.end());

  const int zb = zero_row(sol);
  REQUIRE(zb >= 0);
  for (int r : sol.representatives) {
    CHECK(sol.mode_weights(zb, r) > 1.0 - 1e-10);
    CHECK(participation_entropy(sol, r) < 1e-8);
  }

  const PhaseErrors errs = phase_error(sol, exact);
  CHECK(errs.max_abs < 1e-12);
  std::vector<int> assign = errs.assignment;
  std::sort(assign.begin(), assign.end());
  for (int e = 0; e < 4; ++e) CHECK(assign[e] == e);
}

TEST_CASE("mode weights are column normalized and theta folds the energies") {
  const double T = 0.68;
  const SpinModel model = build_mfim(1, 0.0, 1.1 * pi / T, 0.5 * pi / T);
  const ExtendedOperator op = assemble_q(model, up_down_kick(T), Basis::walsh, 16);
  const FloquetSolution sol = solve(op);
  const int total = sol.dim_h * sol.n_modes;
  for (int i = 0; i < total; ++i) {
    CHECK(sol.mode_weights.col(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.theta[i] == doctest::Approx(fold_phase(sol.energies[i] * T)).epsilon(1e-13));
    CHECK(sol.theta[i] <= pi);
    CHECK(sol.theta[i] > -pi);
  }
}

TEST_CASE("participation entropy bounds, components, and guards") {
  const double T = 0.68;
  const SpinModel model = build_mfim(1, 0.0, 1.1 * pi / T, 0.5 * pi / T);
  const ExtendedOperator op = assemble_q(model, up_down_kick(T), Basis::walsh, 16);
  const FloquetSolution sol = solve(op);
  const double cap = std::log(16.0) + 1e-12;
  for (int i = 0; i < sol.dim_h * sol.n_modes; ++i) {
    const double s = participation_entropy(sol, i);
    CHECK(s >= 0.0);
    CHECK(s <= cap);
    for (int c = 0; c < sol.dim_h; ++c) {
      const double sc = participation_entropy(sol, i, c);
      CHECK(sc >= 0.0);
      CHECK(sc <= cap);
    }
  }
  CHECK_THROWS_AS(participation_entropy(sol, -1), std::invalid_argument);
  CHECK_THROWS_AS(participation_entropy(sol, 32), std::invalid_argument);
  CHECK_THROWS_AS(participation_entropy(sol, 0, 2), std::invalid_argument);
}

TEST_CASE("empty component sets the flag") {
  FloquetSolution sol;
  sol.dim_h = 2;
  sol.n_modes = 2;
  sol.period = 1.0;
  sol.energies = Eigen::VectorXd::Zero(4);
  sol.theta = Eigen::VectorXd::Zero(4);
  sol.vectors = Eigen::MatrixXcd::Identity(4, 4);
  sol.mode_weights.resize(2, 4);
  sol.mode_weights << 1, 1, 0, 0,
                      0, 0, 1, 1;
  sol.mode_labels = {0, 1};
  sol.representatives = {0, 1};
  bool flagged = false;
  const double s = participation_entropy(sol, 0, 1, &flagged);
  CHECK(flagged);
  CHECK(s == 0.0);
  flagged = true;
  participation_entropy(sol, 0, 0, &flagged);
  CHECK(!flagged);
}

TEST_CASE("phase assignment matches brute force") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uni(-pi + 1e-6, pi);
  for (int trial = 0; trial < 24; ++trial) {
    const int d = 2 + int(rng() % 4);  // up to 5 states
    FloquetSolution sol;
    sol.dim_h = d;
    sol.n_modes = 1;
    sol.theta.resize(d);
    sol.representatives.resize(d);
    ExactFloquetResult exact;
    exact.theta.resize(d);
    for (int k = 0; k < d; ++k) {
      sol.theta[k] = uni(rng);
      sol.representatives[k] = k;
      exact.theta[k] = uni(rng);
    }
    const PhaseErrors errs = phase_error(sol, exact);

    std::vector<int> assign = errs.assignment;
    std::sort(assign.begin(), assign.end());
    for (int e = 0; e < d; ++e) REQUIRE(assign[e] == e);

    const double total = errs.per_state.sum();
    CHECK(total == doctest::Approx(brute_force_cost(sol.theta, exact.theta)).epsilon(1e-12));
    CHECK(errs.max_abs == doctest::Approx(errs.per_state.maxCoeff()));
  }
}

TEST_CASE("wrap-around phases pair across the branch cut") {
  FloquetSolution sol;
  sol.dim_h = 2;
  sol.n_modes = 1;
  sol.theta.resize(2);
  sol.theta << pi - 1e-4, -1.0;
  sol.representatives = {0, 1};
  ExactFloquetResult exact;
  exact.theta.resize(2);
  exact.theta << -pi + 1e-4, -1.0;
  const PhaseErrors errs = phase_error(sol, exact);
  CHECK(errs.max_abs == doctest::Approx(2e-4).epsilon(1e-6));
}

TEST_CASE("representatives are stable as the register grows") {
  const double omega = 50.0;
  const double T = 2.0 * pi / omega;
  const SpinModel model = build_mfim(1, 0.0, 1.0, 6.0);
  const PeriodicDrive drive = square_wave(T);
  const ExactFloquetResult exact = exact_propagator(model, drive);

  const FloquetSolution f9 = solve(assemble_q(model, drive, Basis::fourier, 9), &exact);
  const FloquetSolution f11 = solve(assemble_q(model, drive, Basis::fourier, 11), &exact);
  for (int s = 0; s < 2; ++s) {
    const double a = f9.theta[f9.representatives[s]];
    const double b = f11.theta[f11.representatives[s]];
    CHECK(circular_distance(a, b) < 1e-3);
  }

  const FloquetSolution w16 = solve(assemble_q(model, drive, Basis::walsh, 16), &exact);
  const FloquetSolution w32 = solve(assemble_q(model, drive, Basis::walsh, 32), &exact);
  for (int s = 0; s < 2; ++s) {
    const double a = w16.theta[w16.representatives[s]];
    const double b = w32.theta[w32.representatives[s]];
    CHECK(circular_distance(a, b) < 1e-3);
  }
}

TEST_CASE("fully degenerate propagator still yields distinct representatives") {
  const double T = 1.0;
  const SpinModel model = build_mfim(1, 0.0, 0.0, 0.63);
  const PeriodicDrive drive = up_down_kick(T);
  const ExactFloquetResult exact = exact_propagator(model, drive);
  CHECK(exact.degenerate);
  for (const ExactFloquetResult* ref : {static_cast<const ExactFloquetResult*>(nullptr), &exact}) {
    const FloquetSolution sol = solve(assemble_q(model, drive, Basis::walsh, 8), ref);
    REQUIRE(sol.representatives.size() == 2);
    CHECK(sol.representatives[0] != sol.representatives[1]);
    // The register spectrum only approaches the exact doubly degenerate
    // theta = 0; at eight modes the truncation error is a few 1e-3.
    for (int r : sol.representatives) CHECK(std::abs(sol.theta[r]) < 0.01);
  }
}

TEST_CASE("kick representatives localize better in the walsh basis") {
  const double T = 0.628;
  const SpinModel model = build_mfim(1, 0.0, 2.0, 1.0);
  const PeriodicDrive drive = up_down_kick(T);
  const ExactFloquetResult exact = exact_propagator(model, drive);

  const FloquetSolution w = solve(assemble_q(model, drive, Basis::walsh, 32), &exact);
  const FloquetSolution f = solve(assemble_q(model, drive, Basis::fourier, 31), &exact);
  double sw = 0.0, sf = 0.0;
  for (int s = 0; s < 2; ++s) {
    sw += participation_entropy(w, w.representatives[s]);
    sf += participation_entropy(f, f.representatives[s]);
  }
  CHECK(sw < sf);
}
