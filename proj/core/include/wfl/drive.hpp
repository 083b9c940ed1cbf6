#pragma once

// T-periodic drive envelopes V(t) built from delta kicks and piecewise
// constant segments, together with their exact Fourier coefficients and their
// discretization onto the dyadic sample grid.

#include <vector>

#include <Eigen/Dense>

#include "wfl/basis.hpp"

namespace wfl {

// Placement rule for a delta kick sitting exactly on a grid point (every kick
// must).  symmetric splits the weight onto the two adjacent blocks, which for
// the kick at t = 0 means half at the start and half at the end of the period;
// nonsymmetric shifts each kick infinitesimally to the later side.
enum class KickConvention { symmetric, nonsymmetric };

struct Kick {
  double time = 0.0;
  double amplitude = 1.0;  // integrated weight of the delta
};

struct Segment {
  double begin = 0.0;
  double end = 0.0;  // half-open [begin, end)
  double value = 0.0;
};

struct PeriodicDrive {
  double period = 1.0;
  std::vector<Kick> kicks;
  std::vector<Segment> segments;
  KickConvention convention = KickConvention::symmetric;

  double omega() const;
  double time_average() const;

  // Continuous-time coefficient c_m = (1/T) int_0^T V(t) exp(-i m w t) dt,
  // evaluated in closed form (kicks never get sampled into deltas).
  cplx fourier_coefficient(long long m) const;

  // True when every kick time and segment boundary lies on t_j = j T / N.
  bool grid_compatible(int n_samples) const;
};

// +1 kick at t = 0 and -1 kick at t = T/2, no segments.
PeriodicDrive up_down_kick(double period, KickConvention convention = KickConvention::symmetric);

// Value +1 on [0, T/2), -1 on [T/2, T), no kicks.
PeriodicDrive square_wave(double period, KickConvention convention = KickConvention::symmetric);

// Grid representation used by the mode-space matrix builders: integrated kick
// weight attached to each block plus the segment value on the open block
// interior.  Throws std::invalid_argument when the drive is off-grid.
struct DiscretizedDrive {
  Eigen::VectorXd point_mass;   // sum of kick weights assigned to block j
  Eigen::VectorXd block_value;  // segment value on (t_j, t_{j+1})
};

DiscretizedDrive discretize(const PeriodicDrive& drive, int n_samples);

// Point samples V(t_j) with kicks rendered as block heights (weight * N / T).
// Under the symmetric convention a segment discontinuity at a grid point
// samples to the mean of its one-sided limits, which is what makes the
// discrete coefficients of these samples equal the aliased continuous ones.
Eigen::VectorXd sample_points(const PeriodicDrive& drive, int n_samples);

}  // namespace wfl
