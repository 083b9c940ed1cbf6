#include "wfl/hfe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "wfl/basis.hpp"

namespace wfl {

namespace {

int bit_reverse(int value, int bits) {
  int out = 0;
  for (int i = 0; i < bits; ++i) out |= ((value >> i) & 1) << (bits - 1 - i);
  return out;
}

// Walsh row with a given sequency label, evaluated at time index j on the
// 2^n grid, without materializing the table.
int walsh_sign(int sequency, int j, int n) {
  const int gray = sequency ^ (sequency >> 1);
  const int natural = bit_reverse(gray, n);
  return (std::popcount(static_cast<unsigned>(natural & j)) & 1) ? -1 : 1;
}

// S_ab = sum_{alpha > beta} W_a[alpha] W_b[beta] over the 2^n grid.
long long ordered_pair_sum(int seq_a, int seq_b, int n) {
  const int N = 1 << n;
  long long acc = 0;
  long long prefix_b = 0;
  for (int alpha = 0; alpha < N; ++alpha) {
    acc += walsh_sign(seq_a, alpha, n) * prefix_b;
    prefix_b += walsh_sign(seq_b, alpha, n);
  }
  return acc;
}

}  // namespace

Rational::Rational(long long numerator, long long denominator) {
  if (denominator == 0) throw std::invalid_argument("rational with zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  const long long g = std::gcd(std::abs(numerator), denominator);
  num = numerator / (g == 0 ? 1 : g);
  den = denominator / (g == 0 ? 1 : g);
}

Rational fab(int sequency_a, int sequency_b, int n_ref) {
  if (n_ref < 1 || n_ref > 12) throw std::invalid_argument("fab: n_ref out of range");
  const int N = 1 << n_ref;
  if (sequency_a < 0 || sequency_b < 0 || sequency_a >= N || sequency_b >= N)
    throw std::out_of_range("fab: sequency label does not exist at this n_ref");
  const long long nn = static_cast<long long>(N) * N;
  if (sequency_a == 0 && sequency_b == 0)
    return Rational(-ordered_pair_sum(0, 0, n_ref), nn);
  // The direct double sum is only defined up to the a<->b redundancy; the
  // antisymmetrized value is what enters the commutator series and is the
  // one that is N-independent.
  const long long s_ab = ordered_pair_sum(sequency_a, sequency_b, n_ref);
  const long long s_ba = ordered_pair_sum(sequency_b, sequency_a, n_ref);
  return Rational(-(s_ab - s_ba), 2 * nn);
}

Eigen::MatrixXd fab_natural_table(const WalshBasis& basis) {
  const int N = basis.size;
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(N, N);
  const long long nn = static_cast<long long>(N) * N;
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < a; ++b) {
      long long s_ab = 0;
      long long s_ba = 0;
      long long prefix_a = 0;
      long long prefix_b = 0;
      for (int alpha = 0; alpha < N; ++alpha) {
        s_ab += basis.rows(a, alpha) * prefix_b;
        s_ba += basis.rows(b, alpha) * prefix_a;
        prefix_a += basis.rows(a, alpha);
        prefix_b += basis.rows(b, alpha);
      }
      const double value =
          -static_cast<double>(s_ab - s_ba) / static_cast<double>(2 * nn);
      table(a, b) = value;
      table(b, a) = -value;
    }
  }
  long long s_00 = 0;
  long long prefix = 0;
  for (int alpha = 0; alpha < N; ++alpha) {
    s_00 += basis.rows(0, alpha) * prefix;
    prefix += basis.rows(0, alpha);
  }
  table(0, 0) = -static_cast<double>(s_00) / static_cast<double>(nn);
  return table;
}

void write_fab_table_csv(const std::string& path, int n_ref, const Rational& min_magnitude) {
  const int N = 1 << n_ref;
  struct Row {
    int a, b;
    Rational value;
  };
  std::vector<Row> rows;
  for (int a = 1; a < N; ++a)
    for (int b = 0; b < a; ++b) {
      const Rational f = fab(a, b, n_ref);
      if (f.num == 0) continue;
      if (std::abs(f.value()) + 1e-18 < std::abs(min_magnitude.value())) continue;
      rows.push_back({a, b, f});
    }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    const double mx = std::abs(x.value.value());
    const double my = std::abs(y.value.value());
    if (mx != my) return mx > my;
    if (x.b != y.b) return x.b < y.b;
    return x.a < y.a;
  });
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "a,b,numerator,denominator\n";
  for (const Row& r : rows)
    out << r.a << ',' << r.b << ',' << r.value.num << ',' << r.value.den << '\n';
}

EffectiveHamiltonian walsh_heff(const std::vector<Eigen::MatrixXcd>& schedule, double period) {
  const int N = static_cast<int>(schedule.size());
  if (N == 0 || (N & (N - 1)) != 0)
    throw std::invalid_argument("walsh_heff: schedule length must be a power of two");
  const long dim = schedule.front().rows();
  for (const auto& h : schedule)
    if (h.rows() != dim || h.cols() != dim)
      throw std::invalid_argument("walsh_heff: inconsistent block dimensions");
  int n = 0;
  while ((1 << n) < N) ++n;
  const WalshBasis basis = build_walsh_basis(n, period);

  // Matrix-valued Walsh coefficients h_m = (1/N) sum_j H_j W_m[j],
  // natural labels.  The commutator series below is label-agnostic because
  // both the table and the commutator are antisymmetric in (a, b).
  std::vector<Eigen::MatrixXcd> coeff(N, Eigen::MatrixXcd::Zero(dim, dim));
  for (int m = 0; m < N; ++m) {
    for (int j = 0; j < N; ++j) {
      if (basis.rows(m, j) > 0)
        coeff[m] += schedule[j];
      else
        coeff[m] -= schedule[j];
    }
    coeff[m] /= static_cast<double>(N);
  }

  const Eigen::MatrixXd table = fab_natural_table(basis);
  EffectiveHamiltonian result;
  result.order0 = coeff[0];
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (int a = 1; a < N; ++a)
    for (int b = 0; b < a; ++b) {
      if (table(a, b) == 0.0) continue;
      sum += table(a, b) * (coeff[a] * coeff[b] - coeff[b] * coeff[a]);
    }
  result.order1 = cplx(0.0, 1.0) * period * sum;
  return result;
}

Eigen::MatrixXcd floquet_log_hamiltonian(const std::vector<Eigen::MatrixXcd>& schedule,
                                         double period) {
  const int N = static_cast<int>(schedule.size());
  if (N == 0) throw std::invalid_argument("empty schedule");
  const long dim = schedule.front().rows();
  const double tau = period / N;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (int j = 0; j < N; ++j) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(schedule[j]);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("floquet_log_hamiltonian: block eigensolver failed");
    Eigen::VectorXcd phases(dim);
    for (long k = 0; k < dim; ++k)
      phases(k) = std::polar(1.0, -es.eigenvalues()(k) * tau);
    u = (es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint()) * u;
  }
  // U is unitary, hence normal: its Schur form is diagonal and the principal
  // log is safe as long as no eigenphase approaches the branch cut.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("floquet_log_hamiltonian: Schur decomposition failed");
  Eigen::VectorXd theta(dim);
  for (long k = 0; k < dim; ++k) {
    theta(k) = -std::arg(schur.matrixT()(k, k));
    if (std::abs(theta(k)) >= 0.95 * std::numbers::pi)
      throw std::runtime_error(
          "floquet_log_hamiltonian: eigenphase near branch cut; frequency too low");
  }
  const Eigen::MatrixXcd q = schur.matrixU();
  return q * (theta / period).asDiagonal() * q.adjoint();
}

RemainderScaling remainder_scaling(
    const std::function<std::vector<Eigen::MatrixXcd>(double)>& schedule_at_period,
    const std::vector<double>& omegas, int subtract_order) {
  if (omegas.size() < 2) throw std::invalid_argument("remainder_scaling: need >= 2 frequencies");
  RemainderScaling out;
  out.omegas = omegas;
  out.remainders.reserve(omegas.size());
  for (double omega : omegas) {
    if (omega <= 0) throw std::invalid_argument("remainder_scaling: omega must be positive");
    const double period = 2.0 * std::numbers::pi / omega;
    const auto schedule = schedule_at_period(period);
    const Eigen::MatrixXcd hf = floquet_log_hamiltonian(schedule, period);
    const EffectiveHamiltonian heff = walsh_heff(schedule, period);
    Eigen::MatrixXcd remainder = hf - heff.order0;
    if (subtract_order >= 1) remainder -= heff.order1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(remainder);
    out.remainders.push_back(es.eigenvalues().cwiseAbs().maxCoeff());
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (out.remainders[i] > 0.0) {
      lx.push_back(std::log(omegas[i]));
      ly.push_back(std::log(out.remainders[i]));
    }
  }
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy * sxx - sx * sxy) / denom;
    double ss = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double r = ly[i] - (out.slope * lx[i] + out.intercept);
      ss += r * r;
    }
    out.rms_residual = std::sqrt(ss / n);
  }
  return out;
}

Eigen::MatrixXcd van_vleck_kick(const SpinModel& model, const PeriodicDrive& drive, double t) {
  const double period = drive.period;
  if (!(t >= 0.0) || t >= period)
    throw std::invalid_argument("van_vleck_kick: t outside [0, T)");

  // A(t) = int_0^t V(s) ds; kicks step when strictly passed, segments ramp.
  const auto drive_area = [&](double upto) {
    double area = 0.0;
    for (const Kick& k : drive.kicks)
      if (k.time < upto) area += k.amplitude;
    for (const Segment& s : drive.segments) {
      const double hi = std::min(upto, s.end);
      if (hi > s.begin) area += s.value * (hi - s.begin);
    }
    return area;
  };
  // Period mean of A: each kick contributes amp*(T - t_k)/T, each segment
  // value*((e-b)^2/2 + (e-b)(T-e))/T.
  double mean_area = 0.0;
  for (const Kick& k : drive.kicks) mean_area += k.amplitude * (period - k.time) / period;
  for (const Segment& s : drive.segments) {
    const double len = s.end - s.begin;
    mean_area += s.value * (0.5 * len * len + len * (period - s.end)) / period;
  }

  const Eigen::MatrixXcd static_part =
      (t - 0.5 * period) * model.static_h.cast<cplx>();
  const Eigen::MatrixXcd drive_part =
      model.field_x * (drive_area(t) - mean_area) * model.drive_op.cast<cplx>();
  return static_part + drive_part;
}

}  // namespace wfl
