#include "wfl/basis.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wfl {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

int bit_reverse(int value, int bits) {
  int out = 0;
  for (int b = 0; b < bits; ++b) {
    out = (out << 1) | ((value >> b) & 1);
  }
  return out;
}

int gray_to_binary(int gray) {
  int out = 0;
  for (int g = gray; g != 0; g >>= 1) out ^= g;
  return out;
}

}  // namespace

WalshBasis build_walsh_basis(int n, double period) {
  if (n < 0) throw std::invalid_argument("build_walsh_basis: n must be >= 0");
  if (n > 12) throw std::length_error("build_walsh_basis: n > 12 exceeds the dense-table budget");
  if (!(period > 0.0)) throw std::invalid_argument("build_walsh_basis: period must be positive");

  WalshBasis basis;
  basis.n = n;
  basis.size = 1 << n;
  basis.period = period;
  const int N = basis.size;

  basis.rows.resize(N, N);
  for (int m = 0; m < N; ++m) {
    for (int j = 0; j < N; ++j) {
      const unsigned overlap = static_cast<unsigned>(m & j);
      basis.rows(m, j) = (std::popcount(overlap) & 1) ? -1 : 1;
    }
  }

  // Natural index m has sequency gray_to_binary(bit_reverse(m)); the direct
  // sign-change count is kept as the test oracle for this closed form.
  basis.natural_to_sequency.resize(N);
  basis.sequency_to_natural.assign(N, -1);
  for (int m = 0; m < N; ++m) {
    const int s = gray_to_binary(bit_reverse(m, n));
    basis.natural_to_sequency[m] = s;
    basis.sequency_to_natural[s] = m;
  }
  return basis;
}

int sequency_of(const WalshBasis& basis, int natural_index) {
  if (natural_index < 0 || natural_index >= basis.size)
    throw std::invalid_argument("sequency_of: natural index out of range");
  return basis.natural_to_sequency[natural_index];
}

int natural_of(const WalshBasis& basis, int sequency) {
  if (sequency < 0 || sequency >= basis.size)
    throw std::invalid_argument("natural_of: sequency out of range");
  return basis.sequency_to_natural[sequency];
}

double FourierModeSet::omega() const { return two_pi / period; }

FourierModeSet build_fourier_modes(int count, double period) {
  if (count < 1) throw std::invalid_argument("build_fourier_modes: count must be >= 1");
  if (!(period > 0.0)) throw std::invalid_argument("build_fourier_modes: period must be positive");
  FourierModeSet set;
  set.size = count;
  set.period = period;
  set.modes.reserve(count);
  const long long lo = (count % 2 == 0) ? -count / 2 : -(count - 1) / 2;
  for (long long m = lo; m < lo + count; ++m) set.modes.push_back(m);
  return set;
}

Eigen::VectorXcd wht(const WalshBasis& basis, const Eigen::VectorXcd& samples) {
  const int N = basis.size;
  if (samples.size() != N) throw std::invalid_argument("wht: sample count mismatch");
  Eigen::VectorXcd out(N);
  for (int m = 0; m < N; ++m) {
    cplx acc(0.0, 0.0);
    for (int j = 0; j < N; ++j) {
      if (basis.rows(m, j) > 0)
        acc += samples[j];
      else
        acc -= samples[j];
    }
    out[m] = acc / static_cast<double>(N);
  }
  return out;
}

Eigen::VectorXcd inverse_wht(const WalshBasis& basis, const Eigen::VectorXcd& coefficients) {
  const int N = basis.size;
  if (coefficients.size() != N) throw std::invalid_argument("inverse_wht: coefficient count mismatch");
  Eigen::VectorXcd out(N);
  for (int j = 0; j < N; ++j) {
    cplx acc(0.0, 0.0);
    for (int m = 0; m < N; ++m) {
      if (basis.rows(m, j) > 0)
        acc += coefficients[m];
      else
        acc -= coefficients[m];
    }
    out[j] = acc;
  }
  return out;
}

Eigen::VectorXcd wht_butterfly(const WalshBasis& basis, const Eigen::VectorXcd& samples) {
  const int N = basis.size;
  if (samples.size() != N) throw std::invalid_argument("wht_butterfly: sample count mismatch");
  Eigen::VectorXcd work = samples;
  for (int half = 1; half < N; half <<= 1) {
    for (int block = 0; block < N; block += 2 * half) {
      for (int j = block; j < block + half; ++j) {
        const cplx a = work[j];
        const cplx b = work[j + half];
        work[j] = a + b;
        work[j + half] = a - b;
      }
    }
  }
  return work / static_cast<double>(N);
}

Eigen::VectorXcd dft_coefficients(const Eigen::VectorXcd& samples, const FourierModeSet& modes) {
  const int N = modes.size;
  if (samples.size() != N) throw std::invalid_argument("dft_coefficients: sample count mismatch");
  Eigen::VectorXcd out(N);
  for (int i = 0; i < N; ++i) {
    const double m = static_cast<double>(modes.modes[i]);
    cplx acc(0.0, 0.0);
    for (int j = 0; j < N; ++j) {
      acc += samples[j] * std::polar(1.0, -two_pi * m * j / N);
    }
    out[i] = acc / static_cast<double>(N);
  }
  return out;
}

namespace {

// Compensated accumulator; alias sums run over 1e4+ terms per mode.
struct KahanSum {
  cplx sum{0.0, 0.0};
  cplx carry{0.0, 0.0};
  void add(cplx value) {
    const cplx y = value - carry;
    const cplx t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Tails of sum_{k>K} k^-2 and k^-4 (Euler-Maclaurin, error O(K^-5)).
double tail_pow2(double k) { return 1.0 / k - 1.0 / (2.0 * k * k) + 1.0 / (6.0 * k * k * k); }
double tail_pow4(double k) {
  const double k3 = k * k * k;
  return 1.0 / (3.0 * k3) - 1.0 / (2.0 * k3 * k) + 1.0 / (3.0 * k3 * k * k);
}

}  // namespace

AliasFoldResult alias_fold(const std::function<cplx(long long)>& coefficient,
                           const FourierModeSet& modes, int k_max, double tolerance) {
  if (k_max < 4) throw std::invalid_argument("alias_fold: k_max must be >= 4");
  const int N = modes.size;
  AliasFoldResult result;
  result.values.resize(N);
  result.remainder.resize(N);
  result.converged = true;

  for (int i = 0; i < N; ++i) {
    const long long m = modes.modes[i];
    KahanSum acc;
    acc.add(coefficient(m));
    cplx pair_last(0.0, 0.0);
    cplx pair_mid(0.0, 0.0);
    double decay_ref = 0.0;
    for (int k = 1; k <= k_max; ++k) {
      const cplx pair = coefficient(m + static_cast<long long>(k) * N) +
                        coefficient(m - static_cast<long long>(k) * N);
      acc.add(pair);
      if (k == k_max / 2) {
        decay_ref = std::abs(pair);
        pair_mid = pair;
      }
      pair_last = pair;
    }

    // Model the paired terms as C/k^2 + D/k^4 and integrate the tail.  The
    // two-parameter fit uses samples at k_max/2 and k_max: adjacent samples
    // would put a k^3 noise amplification on coefficient rounding.  The gap
    // between the one- and two-parameter corrections is the reported
    // remainder estimate.
    const double K = static_cast<double>(k_max);
    const double Kmid = static_cast<double>(k_max / 2);
    const cplx c_only = pair_last * (K * K);
    const cplx tail1 = c_only * tail_pow2(K);
    const double det = 1.0 / (K * K) - 1.0 / (Kmid * Kmid);
    cplx tail2 = tail1;
    if (det != 0.0) {
      const cplx d_fit = (pair_last * (K * K) - pair_mid * (Kmid * Kmid)) / det;
      const cplx c_fit = pair_last * (K * K) - d_fit / (K * K);
      tail2 = c_fit * tail_pow2(K) + d_fit * tail_pow4(K);
    }

    const bool decaying = std::abs(pair_last) <= 0.5 * decay_ref ||
                          std::abs(pair_last) == 0.0;
    if (decaying) {
      acc.add(tail2);
      result.remainder[i] = std::abs(tail2 - tail1);
    } else {
      // Constant or growing pair terms: delta-comb style coefficients whose
      // alias series does not converge.  Leave the bare partial sum and
      // report the scale of what keeps arriving.
      result.remainder[i] = std::abs(pair_last) * K;
    }
    if (!(result.remainder[i] <= tolerance)) result.converged = false;
    result.values[i] = acc.sum;
  }
  return result;
}

double fold_phase(double x) {
  double r = std::remainder(x, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

double circular_distance(double a, double b) { return std::abs(fold_phase(a - b)); }

}  // namespace wfl
