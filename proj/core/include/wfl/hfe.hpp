#pragma once

// Inverse-frequency expansion in the Walsh representation.  For a period
// built from N equal-length Hamiltonian blocks H_j the first correction is
//   H_eff = h_0 + i T sum_{a>b} f_ab [h_a, h_b] + O(T^2),
// where h_m are the Walsh coefficients of the schedule and f_ab is an exact,
// N-independent table of dyadic rationals.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wfl/drive.hpp"
#include "wfl/models.hpp"

namespace wfl {

// Exact rational with the usual reduced form; denominators stay powers of two.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long numerator, long long denominator);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// f_ab for sequency labels a, b evaluated on the 2^n_ref grid.  The value is
// independent of n_ref for every pair except (0, 0) as long as both labels
// fit, i.e. max(a, b) < 2^n_ref.
Rational fab(int sequency_a, int sequency_b, int n_ref);

// Dense f table in natural row labels for one basis size; entries are exact
// dyadic doubles.  Antisymmetric apart from (0, 0); nonzero only when the
// label sum is 2^p - 1.
Eigen::MatrixXd fab_natural_table(const WalshBasis& basis);

// CSV rows "a,b,numerator,denominator" for sequency labels a > b below
// 2^n_ref with |f_ab| >= min_magnitude, ordered by magnitude then labels.
void write_fab_table_csv(const std::string& path, int n_ref, const Rational& min_magnitude);

struct EffectiveHamiltonian {
  Eigen::MatrixXcd order0;  // time average h_0
  Eigen::MatrixXcd order1;  // i T sum_{a>b} f_ab [h_a, h_b]
};

// Schedule of N = 2^n equal-duration Hamiltonian blocks over one period.
EffectiveHamiltonian walsh_heff(const std::vector<Eigen::MatrixXcd>& schedule, double period);

// Exact Floquet Hamiltonian of the same schedule through the principal matrix
// log of the one-period product; throws std::runtime_error when a phase
// reaches the branch cut.
Eigen::MatrixXcd floquet_log_hamiltonian(const std::vector<Eigen::MatrixXcd>& schedule,
                                         double period);

struct RemainderScaling {
  std::vector<double> omegas;
  std::vector<double> remainders;  // spectral norm of H_F - H_eff(order)
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

// Log-log fit of the truncation remainder against frequency. subtract_order
// 0 removes only h_0; 1 removes the commutator correction as well.
RemainderScaling remainder_scaling(
    const std::function<std::vector<Eigen::MatrixXcd>(double)>& schedule_at_period,
    const std::vector<double>& omegas, int subtract_order);

// First-order kick (micromotion) generator K(t) = int_0^t H(s) ds minus its
// period average, so K has zero mean.  Kicks integrate to steps under the
// drive's convention; at t = 0 nothing has fired and only the centering
// offset remains.
Eigen::MatrixXcd van_vleck_kick(const SpinModel& model, const PeriodicDrive& drive, double t);

}  // namespace wfl
