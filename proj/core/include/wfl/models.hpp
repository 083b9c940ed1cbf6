#pragma once

// Dense mixed-field Ising chain used by every driven-spin experiment:
//   H(t) = -J sum_i sz_i sz_{i+1} - h_z sum_i sz_i + h_x V(t) * drive_op,
// open boundary, with drive_op = -(sum_i sx_i).  Chains are capped at 8 sites
// so all operators stay dense 2^L matrices.

#include <complex>

#include <Eigen/Dense>

namespace wfl {

struct SpinModel {
  int sites = 1;
  double exchange = 0.0;  // J
  double field_z = 0.0;   // h_z
  double field_x = 0.0;   // h_x, multiplies the drive envelope
  Eigen::MatrixXd static_h;  // 2^L x 2^L, real symmetric
  Eigen::MatrixXd drive_op;  // -(sum_i sx_i)

  int dim() const { return static_cast<int>(static_h.rows()); }
};

// Throws std::invalid_argument for sites < 1 and std::length_error for
// sites > 8.
SpinModel build_mfim(int sites, double exchange, double field_z, double field_x);

// exp(-i * amplitude * drive_op), assembled as the tensor product of
// single-site rotations rather than a dense matrix exponential.
Eigen::MatrixXcd kick_unitary(const SpinModel& model, double amplitude);

// Single-site Pauli operator embedded at `site` of an L-site chain.
Eigen::MatrixXd pauli_x_at(int sites, int site);
Eigen::MatrixXd pauli_z_at(int sites, int site);

}  // namespace wfl
