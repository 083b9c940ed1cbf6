#include "wfl/drive.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wfl {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double grid_tol = 1e-9;

// Index of the grid point at `time`, or -1 when off-grid.
int grid_index(double time, double period, int n_samples) {
  const double x = time / period * n_samples;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) > grid_tol * n_samples) return -1;
  long long j = static_cast<long long>(nearest) % n_samples;
  if (j < 0) j += n_samples;
  return static_cast<int>(j);
}

// e^{-2 pi i m q} with m q reduced mod 1 before the 2 pi scaling.  Splitting
// q keeps both partial products exact for |m| < 2^26, so the phase error
// stays at the eps level instead of growing linearly with m; alias sums feed
// |m| ~ 1e6 through here and need the coefficients accurate in absolute
// terms.
cplx unit_phase(long long m, double q) {
  constexpr double split = 134217729.0;  // 2^27 + 1
  const double c = split * q;
  const double q_hi = c - (c - q);
  const double q_lo = q - q_hi;
  const double md = static_cast<double>(m);
  const double r = std::fmod(md * q_hi, 1.0) + std::fmod(md * q_lo, 1.0);
  return std::polar(1.0, -two_pi * r);
}

}  // namespace

double PeriodicDrive::omega() const { return two_pi / period; }

double PeriodicDrive::time_average() const {
  double acc = 0.0;
  for (const Kick& k : kicks) acc += k.amplitude;
  for (const Segment& s : segments) acc += s.value * (s.end - s.begin);
  return acc / period;
}

cplx PeriodicDrive::fourier_coefficient(long long m) const {
  const double w = omega();
  cplx acc(0.0, 0.0);
  for (const Kick& k : kicks) {
    acc += k.amplitude * unit_phase(m, k.time / period);
  }
  for (const Segment& s : segments) {
    if (m == 0) {
      acc += s.value * (s.end - s.begin);
    } else {
      // int_a^b exp(-i m w t) dt
      const cplx imw(0.0, static_cast<double>(m) * w);
      acc += s.value * (unit_phase(m, s.begin / period) - unit_phase(m, s.end / period)) / imw;
    }
  }
  return acc / period;
}

bool PeriodicDrive::grid_compatible(int n_samples) const {
  for (const Kick& k : kicks) {
    if (grid_index(k.time, period, n_samples) < 0) return false;
  }
  for (const Segment& s : segments) {
    if (grid_index(s.begin, period, n_samples) < 0) return false;
    if (grid_index(s.end, period, n_samples) < 0) return false;
  }
  return true;
}

PeriodicDrive up_down_kick(double period, KickConvention convention) {
  if (!(period > 0.0)) throw std::invalid_argument("up_down_kick: period must be positive");
  PeriodicDrive drive;
  drive.period = period;
  drive.convention = convention;
  drive.kicks = {{0.0, 1.0}, {period / 2.0, -1.0}};
  return drive;
}

PeriodicDrive square_wave(double period, KickConvention convention) {
  if (!(period > 0.0)) throw std::invalid_argument("square_wave: period must be positive");
  PeriodicDrive drive;
  drive.period = period;
  drive.convention = convention;
  drive.segments = {{0.0, period / 2.0, 1.0}, {period / 2.0, period, -1.0}};
  return drive;
}

DiscretizedDrive discretize(const PeriodicDrive& drive, int n_samples) {
  if (n_samples < 1) throw std::invalid_argument("discretize: need at least one sample");
  const int N = n_samples;
  DiscretizedDrive out;
  out.point_mass = Eigen::VectorXd::Zero(N);
  out.block_value = Eigen::VectorXd::Zero(N);

  for (const Kick& k : drive.kicks) {
    const int j = grid_index(k.time, drive.period, N);
    if (j < 0) throw std::invalid_argument("discretize: kick time is off the sample grid");
    if (drive.convention == KickConvention::symmetric && N > 1) {
      out.point_mass[(j + N - 1) % N] += 0.5 * k.amplitude;
      out.point_mass[j] += 0.5 * k.amplitude;
    } else {
      out.point_mass[j] += k.amplitude;
    }
  }

  for (const Segment& s : drive.segments) {
    const int a = grid_index(s.begin, drive.period, N);
    int b = grid_index(s.end, drive.period, N);
    if (a < 0 || b < 0) throw std::invalid_argument("discretize: segment boundary is off the sample grid");
    if (b == a && std::abs(s.end - s.begin - drive.period) < grid_tol * drive.period) b = a + N;
    if (b < a) b += N;
    for (int j = a; j < b; ++j) out.block_value[j % N] += s.value;
  }
  return out;
}

Eigen::VectorXd sample_points(const PeriodicDrive& drive, int n_samples) {
  const DiscretizedDrive grid = discretize(drive, n_samples);
  const int N = n_samples;
  Eigen::VectorXd samples(N);
  for (int j = 0; j < N; ++j) {
    double v = grid.block_value[j];
    if (drive.convention == KickConvention::symmetric) {
      // A block boundary separating different segment values samples to the
      // midpoint of the one-sided limits.
      v = 0.5 * (grid.block_value[(j + N - 1) % N] + grid.block_value[j]);
    }
    samples[j] = v + grid.point_mass[j] * N / drive.period;
  }
  return samples;
}

}  // namespace wfl
