#include "wfl/models.hpp"

#include <cmath>
#include <stdexcept>

namespace wfl {

namespace {

void check_sites(int sites) {
  if (sites < 1) throw std::invalid_argument("build_mfim: need at least one site");
  if (sites > 8) throw std::length_error("build_mfim: dense chains are capped at 8 sites");
}

// kron(A, B) with the first factor owning the slow index.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd embed(int sites, int site, const Eigen::Matrix2d& op) {
  if (site < 0 || site >= sites) throw std::invalid_argument("pauli embed: site out of range");
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int i = 0; i < sites; ++i) {
    if (i == site)
      out = kron(out, op);
    else
      out = kron(out, Eigen::Matrix2d::Identity());
  }
  return out;
}

}  // namespace

Eigen::MatrixXd pauli_x_at(int sites, int site) {
  check_sites(sites);
  Eigen::Matrix2d sx;
  sx << 0, 1, 1, 0;
  return embed(sites, site, sx);
}

Eigen::MatrixXd pauli_z_at(int sites, int site) {
  check_sites(sites);
  Eigen::Matrix2d sz;
  sz << 1, 0, 0, -1;
  return embed(sites, site, sz);
}

SpinModel build_mfim(int sites, double exchange, double field_z, double field_x) {
  check_sites(sites);
  SpinModel model;
  model.sites = sites;
  model.exchange = exchange;
  model.field_z = field_z;
  model.field_x = field_x;

  const int dim = 1 << sites;
  model.static_h = Eigen::MatrixXd::Zero(dim, dim);
  model.drive_op = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i + 1 < sites; ++i) {
    model.static_h -= exchange * (pauli_z_at(sites, i) * pauli_z_at(sites, i + 1));
  }
  for (int i = 0; i < sites; ++i) {
    model.static_h -= field_z * pauli_z_at(sites, i);
    model.drive_op -= pauli_x_at(sites, i);
  }
  return model;
}

Eigen::MatrixXcd kick_unitary(const SpinModel& model, double amplitude) {
  // exp(-i a * drive_op) = prod_i exp(+i a sx_i); each factor is the 2x2
  // rotation cos(a) I + i sin(a) sx.
  const std::complex<double> c(std::cos(amplitude), 0.0);
  const std::complex<double> is(0.0, std::sin(amplitude));
  Eigen::Matrix2cd site;
  site << c, is, is, c;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int i = 0; i < model.sites; ++i) {
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c)
        next.block(r * 2, c * 2, 2, 2) = out(r, c) * site;
    out = next;
  }
  return out;
}

}  // namespace wfl
