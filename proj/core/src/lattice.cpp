#include "wfl/lattice.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wfl {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr cplx imag_unit(0.0, 1.0);

}  // namespace

std::string basis_name(Basis basis) {
  switch (basis) {
    case Basis::fourier: return "fourier";
    case Basis::discrete_fourier: return "discrete_fourier";
    case Basis::walsh: return "walsh";
  }
  throw std::logic_error("basis_name: unreachable");
}

Basis basis_from_name(const std::string& name) {
  if (name == "fourier") return Basis::fourier;
  if (name == "discrete_fourier") return Basis::discrete_fourier;
  if (name == "walsh") return Basis::walsh;
  throw std::invalid_argument("unknown basis name: " + name);
}

Eigen::MatrixXd cyclic_shift(int n_samples) {
  if (n_samples < 1) throw std::invalid_argument("cyclic_shift: need at least one sample");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n_samples, n_samples);
  for (int j = 0; j < n_samples; ++j) s((j + 1) % n_samples, j) = 1.0;
  return s;
}

TranslationGenerator translation_generator(int n_samples, double period) {
  if (n_samples < 1) throw std::invalid_argument("translation_generator: need at least one sample");
  if (!(period > 0.0)) throw std::invalid_argument("translation_generator: period must be positive");

  TranslationGenerator gen;
  gen.size = n_samples;
  gen.period = period;

  // Circulant spectral sum: G = sum_m (i m w) phi_m phi_m^dag.  First build
  // the defining sequence g[d] = (i w / N) sum_m m exp(-i 2 pi m d / N).
  const int N = n_samples;
  const double w = two_pi / period;
  const FourierModeSet window = build_fourier_modes(N, period);
  Eigen::VectorXcd g(N);
  for (int d = 0; d < N; ++d) {
    cplx acc(0.0, 0.0);
    for (long long m : window.modes) {
      acc += static_cast<double>(m) * std::polar(1.0, -two_pi * static_cast<double>(m) * d / N);
    }
    g[d] = imag_unit * w * acc / static_cast<double>(N);
  }
  gen.matrix.resize(N, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) gen.matrix(j, k) = g[((j - k) % N + N) % N];
  return gen;
}

Eigen::MatrixXcd generator_in_basis(const TranslationGenerator& generator, Basis basis) {
  const int N = generator.size;
  const double w = two_pi / generator.period;
  const FourierModeSet window = build_fourier_modes(N, generator.period);

  switch (basis) {
    case Basis::fourier:
    case Basis::discrete_fourier: {
      // Diagonal by construction; the continuous derivative acts the same way
      // on its exponentials.
      Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N, N);
      for (int i = 0; i < N; ++i) out(i, i) = static_cast<double>(window.modes[i]) * w;
      return out;
    }
    case Basis::walsh: {
      if ((N & (N - 1)) != 0) throw std::invalid_argument("generator_in_basis: walsh needs N = 2^n");
      int n = 0;
      while ((1 << n) < N) ++n;
      const WalshBasis wb = build_walsh_basis(n, generator.period);
      Eigen::MatrixXd h = wb.rows.cast<double>();
      // Rows have norm sqrt(N), so the orthonormal change of basis carries 1/N.
      Eigen::MatrixXcd out = (h * (-imag_unit * generator.matrix) * h) / static_cast<double>(N);
      return out;
    }
  }
  throw std::logic_error("generator_in_basis: unreachable");
}

Eigen::MatrixXcd drive_matrix(const PeriodicDrive& drive, Basis basis, int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("drive_matrix: need at least one mode");
  const int N = n_modes;

  if (basis == Basis::fourier) {
    const FourierModeSet window = build_fourier_modes(N, drive.period);
    Eigen::MatrixXcd out(N, N);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        out(a, b) = drive.fourier_coefficient(window.modes[a] - window.modes[b]);
    return out;
  }

  if (!drive.grid_compatible(N))
    throw std::invalid_argument("drive_matrix: drive is not aligned with the N-point grid");
  const DiscretizedDrive grid = discretize(drive, N);

  if (basis == Basis::discrete_fourier) {
    const FourierModeSet window = build_fourier_modes(N, drive.period);
    Eigen::MatrixXcd out(N, N);
    for (int a = 0; a < N; ++a) {
      for (int b = 0; b < N; ++b) {
        const double mu = static_cast<double>(window.modes[a] - window.modes[b]);
        cplx acc(0.0, 0.0);
        for (int j = 0; j < N; ++j) {
          const double weight = grid.point_mass[j] / drive.period + grid.block_value[j] / N;
          if (weight != 0.0) acc += weight * std::polar(1.0, two_pi * mu * j / N);
        }
        out(a, b) = acc;
      }
    }
    return out;
  }

  // walsh
  if ((N & (N - 1)) != 0) throw std::invalid_argument("drive_matrix: walsh needs N = 2^n");
  int n = 0;
  while ((1 << n) < N) ++n;
  const WalshBasis wb = build_walsh_basis(n, drive.period);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N, N);
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      double acc = 0.0;
      for (int j = 0; j < N; ++j) {
        const double weight = grid.point_mass[j] / drive.period + grid.block_value[j] / N;
        if (weight != 0.0) acc += weight * wb.rows(a, j) * wb.rows(b, j);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

ExtendedOperator assemble_q(const SpinModel& model, const PeriodicDrive& drive,
                            Basis basis, int n_modes) {
  const int N = n_modes;
  const int d = model.dim();
  ExtendedOperator op;
  op.basis = basis;
  op.dim_h = d;
  op.n_modes = N;
  op.period = drive.period;

  if (basis == Basis::fourier || basis == Basis::discrete_fourier) {
    const FourierModeSet window = build_fourier_modes(N, drive.period);
    op.mode_labels.assign(window.modes.begin(), window.modes.end());
    const double w = window.omega();
    op.mode_generator = Eigen::MatrixXcd::Zero(N, N);
    for (int i = 0; i < N; ++i) op.mode_generator(i, i) = static_cast<double>(window.modes[i]) * w;
  } else {
    op.mode_labels.resize(N);
    for (int i = 0; i < N; ++i) op.mode_labels[i] = i;
    op.mode_generator = generator_in_basis(translation_generator(N, drive.period), Basis::walsh);
  }

  const Eigen::MatrixXcd v = drive_matrix(drive, basis, N);
  const Eigen::MatrixXcd h_static = model.static_h.cast<cplx>();
  const Eigen::MatrixXcd coupling = (model.field_x * model.drive_op).cast<cplx>();
  const Eigen::MatrixXcd identity_h = Eigen::MatrixXcd::Identity(d, d);

  op.matrix.resize(N * d, N * d);
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      Eigen::MatrixXcd block = v(a, b) * coupling + op.mode_generator(a, b) * identity_h;
      if (a == b) block += h_static;
      op.matrix.block(a * d, b * d, d, d) = block;
    }
  }

  const double scale = std::max(1.0, op.matrix.cwiseAbs().maxCoeff());
  const double defect = (op.matrix - op.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (!(defect <= 1e-12 * scale))
    throw std::runtime_error("assemble_q: operator failed the Hermiticity check");
  op.matrix = 0.5 * (op.matrix + op.matrix.adjoint()).eval();
  return op;
}

ExtendedOperator symmetrize_walsh(const ExtendedOperator& op) {
  if (op.basis != Basis::walsh)
    throw std::invalid_argument("symmetrize_walsh: only walsh-basis operators");
  if (op.n_modes < 2)
    throw std::invalid_argument("symmetrize_walsh: register too small to shrink");

  // Identify the lowest -iG eigenspace and keep its orthogonal complement,
  // expressed so that coordinate-aligned eigenvectors shrink to a plain
  // row/column deletion.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.mode_generator);
  if (es.info() != Eigen::Success) throw std::runtime_error("symmetrize_walsh: eigensolver failed");
  const Eigen::VectorXd values = es.eigenvalues();
  const double lowest = values[0];
  const double gap_tol = 1e-9 * std::max(1.0, values.cwiseAbs().maxCoeff());
  int removed = 0;
  while (removed < op.n_modes && values[removed] - lowest <= gap_tol) ++removed;

  const int kept = op.n_modes - removed;
  Eigen::MatrixXcd dropped = es.eigenvectors().leftCols(removed);

  // Project the coordinate directions onto the kept subspace and orthonormalize.
  Eigen::MatrixXcd keep(op.n_modes, kept);
  int col = 0;
  for (int j = 0; j < op.n_modes && col < kept; ++j) {
    Eigen::VectorXcd cand = Eigen::VectorXcd::Zero(op.n_modes);
    cand[j] = 1.0;
    cand -= dropped * (dropped.adjoint() * cand);
    for (int c = 0; c < col; ++c) {
      cand -= keep.col(c) * (keep.col(c).adjoint() * cand);
    }
    const double norm = cand.norm();
    if (norm > 1e-8) keep.col(col++) = cand / norm;
  }
  if (col != kept) throw std::runtime_error("symmetrize_walsh: failed to span the kept subspace");

  ExtendedOperator out;
  out.basis = op.basis;
  out.dim_h = op.dim_h;
  out.n_modes = kept;
  out.period = op.period;
  out.mode_generator = keep.adjoint() * op.mode_generator * keep;
  out.mode_labels.resize(kept);
  for (int c = 0; c < kept; ++c) {
    // Keep the natural label when the column is still a coordinate direction.
    int best = -1;
    for (int j = 0; j < op.n_modes; ++j) {
      if (std::abs(keep(j, c)) > 0.999) best = j;
    }
    out.mode_labels[c] = best >= 0 ? op.mode_labels[best] : -1;
  }

  const int d = op.dim_h;
  Eigen::MatrixXcd lift = Eigen::MatrixXcd::Zero(op.n_modes * d, kept * d);
  for (int a = 0; a < op.n_modes; ++a)
    for (int b = 0; b < kept; ++b)
      lift.block(a * d, b * d, d, d) = keep(a, b) * Eigen::MatrixXcd::Identity(d, d);
  out.matrix = lift.adjoint() * op.matrix * lift;
  return out;
}

void save_matrix_csv(const std::string& path, const Eigen::MatrixXcd& matrix) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_matrix_csv: cannot open " + path);
  out << "# complex matrix, entries re,im separated by ';'\n";
  out << "# rows " << matrix.rows() << " cols " << matrix.cols() << "\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out << ';';
      out << matrix(i, j).real() << ',' << matrix(i, j).imag();
    }
    out << '\n';
  }
}

Eigen::MatrixXcd load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_matrix_csv: cannot open " + path);
  std::vector<std::vector<cplx>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<cplx> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ';')) {
      const auto comma = cell.find(',');
      if (comma == std::string::npos) throw std::runtime_error("load_matrix_csv: malformed cell");
      row.emplace_back(std::stod(cell.substr(0, comma)), std::stod(cell.substr(comma + 1)));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  Eigen::MatrixXcd out(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw std::runtime_error("load_matrix_csv: ragged rows");
    for (size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j];
  }
  return out;
}

}  // namespace wfl
