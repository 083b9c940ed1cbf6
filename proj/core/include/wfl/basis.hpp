#pragma once

// Mode bookkeeping for T-periodic signals sampled on the dyadic grid
// t_j = j T / N: Walsh (Hadamard) rows in natural ordering and the photon
// window used for Fourier-side truncations.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace wfl {

using cplx = std::complex<double>;

// Rows of the 2^n Hadamard matrix in natural (tensor-product) ordering:
// row(m)[j] = (-1)^popcount(m & j).  Row 0 is constant; the row with natural
// label N/2 is +1 on the first half period and -1 on the second.
struct WalshBasis {
  int n = 0;          // log2 of the row count
  int size = 1;       // N = 2^n
  double period = 1.0;
  Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> rows;  // N x N
  std::vector<int> natural_to_sequency;
  std::vector<int> sequency_to_natural;

  double sample_time(int j) const { return period * static_cast<double>(j) / size; }
};

// Throws std::invalid_argument for n < 0 and std::length_error for n > 12
// (the dense table stops being a reasonable object past 4096 rows).
WalshBasis build_walsh_basis(int n, double period);

// Sign-change count of a natural-order row across j = 0..N-1.  The map is a
// bijection onto 0..N-1; natural_of inverts it.
int sequency_of(const WalshBasis& basis, int natural_index);
int natural_of(const WalshBasis& basis, int sequency);

// Photon indices kept at truncation size N: symmetric window for odd N,
// {-N/2, ..., N/2 - 1} for even N.
struct FourierModeSet {
  int size = 1;
  double period = 1.0;
  std::vector<long long> modes;  // ascending

  double omega() const;
};

FourierModeSet build_fourier_modes(int count, double period);

// Forward transform carries the 1/N, so coefficient 0 is the time average;
// inverse_wht carries none.  wht is the dense int8 product evaluated in row
// order and is the reference the butterfly is checked against.
Eigen::VectorXcd wht(const WalshBasis& basis, const Eigen::VectorXcd& samples);
Eigen::VectorXcd inverse_wht(const WalshBasis& basis, const Eigen::VectorXcd& coefficients);

// O(N log N) in-place butterfly with the same normalization.  Floating-point
// sums associate differently from the dense product, so agreement is exact on
// integer-valued inputs and to rounding error otherwise.
Eigen::VectorXcd wht_butterfly(const WalshBasis& basis, const Eigen::VectorXcd& samples);

// Discrete coefficients c~_m = (1/N) sum_j f(t_j) exp(-i m w t_j) over the
// window of `modes`; sample count must equal modes.size.
Eigen::VectorXcd dft_coefficients(const Eigen::VectorXcd& samples, const FourierModeSet& modes);

struct AliasFoldResult {
  Eigen::VectorXcd values;    // folded coefficient per window mode
  Eigen::VectorXd remainder;  // per-mode tail estimate after the correction
  bool converged = true;      // false when any tail estimate exceeds the tolerance
};

// Aliasing sum c~_m = sum_k c(m + k N) evaluated with k = -k_max..k_max plus a
// fitted power-law tail correction.  Coefficient families whose paired terms
// c(m+kN) + c(m-kN) do not decay (delta-comb drives give constant ones) are
// reported as non-converged instead of being silently truncated.
AliasFoldResult alias_fold(const std::function<cplx(long long)>& coefficient,
                           const FourierModeSet& modes, int k_max, double tolerance);

// Phase folding helpers shared across the library: values in (-pi, pi].
double fold_phase(double x);
double circular_distance(double a, double b);

}  // namespace wfl
