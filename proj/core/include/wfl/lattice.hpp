#pragma once

// Extended-space (frequency-lattice) machinery: the discrete time-translation
// generator, mode-space drive matrices, and assembly of the quasienergy
// operator Q = H(t) - i d/dt over a truncated photon register.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wfl/basis.hpp"
#include "wfl/drive.hpp"
#include "wfl/models.hpp"

namespace wfl {

// Which mode functions span the photon register.
//   fourier:          continuous exponentials exp(i m w t), derivative exact.
//   discrete_fourier: exponentials restricted to the N sample points.
//   walsh:            Hadamard rows in natural ordering (N must be 2^n).
enum class Basis { fourier, discrete_fourier, walsh };

std::string basis_name(Basis basis);
Basis basis_from_name(const std::string& name);

// G = (N/T) log(S) where S is the cyclic shift f(t_j) -> f(t_{j+1}).  The log
// branch takes arg in [-pi, pi), so -iG has the spectrum
// {m w : m = -N/2 .. N/2-1} for even N (the extra level sits at -N w / 2, as
// the N = 4 case (-2w, -w, 0, w) shows) and the symmetric window for odd N.
struct TranslationGenerator {
  int size = 1;
  double period = 1.0;
  Eigen::MatrixXcd matrix;  // anti-Hermitian, acts on sample vectors
};

TranslationGenerator translation_generator(int n_samples, double period);

// The cyclic shift matrix S itself: ones on the subdiagonal plus a one in the
// upper-right corner.
Eigen::MatrixXd cyclic_shift(int n_samples);

// -iG expressed in the chosen mode basis; Hermitian.  fourier and
// discrete_fourier give diag(m w) over the mode window; walsh gives the
// block-diagonal form grouping rows with the same smallest unit cell.
Eigen::MatrixXcd generator_in_basis(const TranslationGenerator& generator, Basis basis);

// Mode-space matrix elements <a| V(t) |b> of the drive at truncation N.
// fourier uses the exact continuous coefficients (Toeplitz, no wrap-around);
// the discrete bases use the grid discretization, so kicks enter through the
// convention-resolved block weights and never through sampled deltas.
Eigen::MatrixXcd drive_matrix(const PeriodicDrive& drive, Basis basis, int n_modes);

struct ExtendedOperator {
  Basis basis = Basis::fourier;
  int dim_h = 1;
  int n_modes = 1;
  double period = 1.0;
  Eigen::MatrixXcd matrix;          // Hermitian, mode-major (photon index outer)
  Eigen::MatrixXcd mode_generator;  // -iG restricted to the register, Hermitian
  std::vector<long long> mode_labels;  // photon index (fourier) or natural row (walsh)
};

// Q = H_static x 1 + h_x drive_op x V + 1 x (-iG).  Hermitian to 1e-12 by
// construction; throws std::runtime_error if assembly breaks that.
ExtendedOperator assemble_q(const SpinModel& model, const PeriodicDrive& drive,
                            Basis basis, int n_modes);

// Strikes the lowest -iG eigenspace (-N w / 2 for a fresh even-N register,
// i.e. the fastest-alternating row) from a walsh-basis operator, shrinking it
// by dim_h rows.  Not idempotent: applying it again removes the new lowest
// level, so callers normally apply it once.
ExtendedOperator symmetrize_walsh(const ExtendedOperator& op);

// Plain-text export of a complex matrix: one row per line, entries written as
// "re,im" pairs separated by semicolons.  Lines starting with # are comments.
void save_matrix_csv(const std::string& path, const Eigen::MatrixXcd& matrix);
Eigen::MatrixXcd load_matrix_csv(const std::string& path);

}  // namespace wfl
