#pragma once

// Quasienergy extraction: dense diagonalization of the extended operator,
// photon-weight bookkeeping, representative selection, and comparison against
// the exactly propagated single-period unitary.

#include <vector>

#include <Eigen/Dense>

#include "wfl/drive.hpp"
#include "wfl/lattice.hpp"
#include "wfl/models.hpp"

namespace wfl {

struct ExactFloquetResult {
  double period = 1.0;
  Eigen::MatrixXcd propagator;  // U(T)
  Eigen::VectorXd theta;        // -arg eig(U), folded to (-pi, pi], ascending
  Eigen::MatrixXcd vectors;     // columns follow theta
  bool degenerate = false;      // phase collisions (h_z = 0 collapses U to 1)
};

// Time-ordered product of segment exponentials and kick unitaries over one
// period.  The gauge argument controls only the t = 0 kick: symmetric splits
// it into half kicks at both period ends.  Quasienergies are gauge
// independent; eigenvectors are reported in the chosen gauge.
ExactFloquetResult exact_propagator(const SpinModel& model, const PeriodicDrive& drive,
                                    KickConvention gauge);
// Uses the drive's own convention as the gauge.
ExactFloquetResult exact_propagator(const SpinModel& model, const PeriodicDrive& drive);

struct FloquetSolution {
  Basis basis = Basis::fourier;
  double period = 1.0;
  int dim_h = 1;
  int n_modes = 1;
  Eigen::VectorXd energies;       // raw eigenvalues, ascending
  Eigen::VectorXd theta;          // energies * T folded to (-pi, pi]
  Eigen::MatrixXcd vectors;       // columns, mode-major layout
  Eigen::MatrixXd mode_weights;   // n_modes x n_eig, column sums are 1
  std::vector<long long> mode_labels;
  std::vector<int> representatives;  // dim_h eigenpair indices
};

// Diagonalizes the extended operator and picks one representative per
// physical state.  With a reference, each reference state takes the
// eigenvector whose constant-block (m = 0) component has the largest weight
// on it, matched greedily so no eigenvector serves twice.  Without one,
// candidates are ranked by total constant-block weight with |theta| ties
// broken towards zero, keeping the accepted mode-0 projections independent.
FloquetSolution solve(const ExtendedOperator& op, const ExactFloquetResult* reference = nullptr);

// Shannon entropy of the photon weight profile of eigenpair `eig_index`.
// component < 0 traces over the physical index; otherwise only that physical
// component's amplitudes enter, renormalized.  A component with no weight at
// all sets *flagged and returns 0.
double participation_entropy(const FloquetSolution& solution, int eig_index,
                             int component = -1, bool* flagged = nullptr);

struct PhaseErrors {
  Eigen::VectorXd per_state;    // |circular distance| per exact state, exact order
  double median_abs = 0.0;
  double max_abs = 0.0;
  std::vector<int> assignment;  // representative slot -> exact index
};

// Optimal pairing of representative phases with exact phases under circular
// distance.
PhaseErrors phase_error(const FloquetSolution& solution, const ExactFloquetResult& exact);

}  // namespace wfl
