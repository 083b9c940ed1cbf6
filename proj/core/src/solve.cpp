#include "wfl/solve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wfl/assignment.hpp"

namespace wfl {

namespace {

Eigen::MatrixXcd segment_exponential(const Eigen::MatrixXcd& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("segment_exponential: eigensolver failed");
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases[i] = std::polar(1.0, -es.eigenvalues()[i] * dt);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

ExactFloquetResult exact_propagator(const SpinModel& model, const PeriodicDrive& drive) {
  return exact_propagator(model, drive, drive.convention);
}

ExactFloquetResult exact_propagator(const SpinModel& model, const PeriodicDrive& drive,
                                    KickConvention gauge) {
  const int d = model.dim();
  const double T = drive.period;

  // Event times: kicks split the period into static stretches.  A kick at
  // t = 0 is applied in full at the start under the nonsymmetric gauge and as
  // half kicks at both ends under the symmetric one.
  struct Event {
    double time;
    double amplitude;
  };
  std::vector<Event> events;
  double boundary_amplitude = 0.0;
  for (const Kick& k : drive.kicks) {
    double t = std::fmod(k.time, T);
    if (t < 0) t += T;
    if (t < 1e-12 * T || T - t < 1e-12 * T) {
      boundary_amplitude += k.amplitude;
    } else {
      events.push_back({t, k.amplitude});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.time < b.time; });

  const Eigen::MatrixXcd h_static = model.static_h.cast<cplx>();
  const Eigen::MatrixXcd coupling = (model.field_x * model.drive_op).cast<cplx>();

  auto evolve_static = [&](Eigen::MatrixXcd& u, double t0, double t1) {
    // Piecewise-constant envelope between kicks; default segment value 0.
    double t = t0;
    while (t1 - t > 1e-14 * T) {
      double value = 0.0;
      double next = t1;
      for (const Segment& s : drive.segments) {
        if (s.begin - 1e-14 * T <= t && t < s.end - 1e-14 * T) {
          value = s.value;
          next = std::min(next, s.end);
        } else if (s.begin > t + 1e-14 * T) {
          next = std::min(next, s.begin);
        }
      }
      u = segment_exponential(h_static + value * coupling, next - t) * u;
      t = next;
    }
  };

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
  const double half = (gauge == KickConvention::symmetric) ? 0.5 : 1.0;
  if (boundary_amplitude != 0.0)
    u = kick_unitary(model, model.field_x * boundary_amplitude * half) * u;
  double t_prev = 0.0;
  for (const Event& e : events) {
    evolve_static(u, t_prev, e.time);
    u = kick_unitary(model, model.field_x * e.amplitude) * u;
    t_prev = e.time;
  }
  evolve_static(u, t_prev, T);
  if (boundary_amplitude != 0.0 && gauge == KickConvention::symmetric)
    u = kick_unitary(model, model.field_x * boundary_amplitude * 0.5) * u;

  ExactFloquetResult result;
  result.period = T;
  result.propagator = u;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u);
  if (es.info() != Eigen::Success) throw std::runtime_error("exact_propagator: eigensolver failed");
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd theta(d);
  for (int i = 0; i < d; ++i) {
    const cplx lambda = es.eigenvalues()[i];
    theta[i] = fold_phase(-std::arg(lambda));
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return theta[a] < theta[b]; });
  result.theta.resize(d);
  result.vectors.resize(d, d);
  for (int i = 0; i < d; ++i) {
    result.theta[i] = theta[order[i]];
    result.vectors.col(i) = es.eigenvectors().col(order[i]);
    const double norm = result.vectors.col(i).norm();
    if (norm > 0) result.vectors.col(i) /= norm;
  }

  result.degenerate = false;
  for (int i = 0; i < d; ++i) {
    const double gap = circular_distance(result.theta[(i + 1) % d], result.theta[i]);
    if (d > 1 && gap < 1e-9) result.degenerate = true;
  }
  return result;
}

FloquetSolution solve(const ExtendedOperator& op, const ExactFloquetResult* reference) {
  FloquetSolution sol;
  sol.basis = op.basis;
  sol.period = op.period;
  sol.dim_h = op.dim_h;
  sol.n_modes = op.n_modes;
  sol.mode_labels = op.mode_labels;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.matrix);
  if (es.info() != Eigen::Success) throw std::runtime_error("solve: eigensolver failed");
  const int total = op.dim_h * op.n_modes;
  sol.energies = es.eigenvalues();
  sol.vectors = es.eigenvectors();
  sol.theta.resize(total);
  for (int i = 0; i < total; ++i) sol.theta[i] = fold_phase(sol.energies[i] * op.period);

  sol.mode_weights.resize(op.n_modes, total);
  for (int i = 0; i < total; ++i) {
    for (int m = 0; m < op.n_modes; ++m) {
      sol.mode_weights(m, i) = sol.vectors.col(i).segment(m * op.dim_h, op.dim_h).squaredNorm();
    }
  }

  // Locate the constant-mode block: label 0 in every basis.
  int zero_block = 0;
  for (int m = 0; m < op.n_modes; ++m) {
    if (op.mode_labels[m] == 0) zero_block = m;
  }

  if (reference) {
    // One representative per reference state: score every eigenvector by how
    // much of its constant-block weight lands on that state, then match
    // greedily so no eigenvector serves two states.
    Eigen::MatrixXcd blocks(op.dim_h, total);
    for (int i = 0; i < total; ++i)
      blocks.col(i) = sol.vectors.col(i).segment(zero_block * op.dim_h, op.dim_h);
    const Eigen::MatrixXd score = (reference->vectors.adjoint() * blocks).cwiseAbs2();

    struct Pair { double s; int state; int vec; };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<size_t>(op.dim_h) * total);
    for (int s = 0; s < op.dim_h; ++s)
      for (int v = 0; v < total; ++v) pairs.push_back({score(s, v), s, v});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      if (a.s != b.s) return a.s > b.s;
      if (a.vec != b.vec) return a.vec < b.vec;
      return a.state < b.state;
    });

    std::vector<int> pick(op.dim_h, -1);
    std::vector<char> taken(total, 0);
    int assigned = 0;
    for (const Pair& p : pairs) {
      if (assigned == op.dim_h) break;
      if (pick[p.state] >= 0 || taken[p.vec]) continue;
      pick[p.state] = p.vec;
      taken[p.vec] = 1;
      ++assigned;
    }
    for (int s = 0; s < op.dim_h; ++s) sol.representatives.push_back(pick[s]);
    return sol;
  }

  // No reference: rank by weight in the constant block, then pick greedily
  // while the physical projections stay independent, so two photon copies of
  // the same state cannot both be chosen.
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double pa = sol.mode_weights(zero_block, a);
    const double pb = sol.mode_weights(zero_block, b);
    if (std::abs(pa - pb) > 1e-12) return pa > pb;
    return std::abs(sol.theta[a]) < std::abs(sol.theta[b]);
  });

  Eigen::MatrixXcd accepted(op.dim_h, op.dim_h);
  int n_accepted = 0;
  std::vector<char> taken(total, 0);
  for (int idx : order) {
    if (n_accepted == op.dim_h) break;
    Eigen::VectorXcd proj = sol.vectors.col(idx).segment(zero_block * op.dim_h, op.dim_h);
    const double raw = proj.norm();
    for (int c = 0; c < n_accepted; ++c) proj -= accepted.col(c) * (accepted.col(c).adjoint() * proj);
    if (proj.norm() > std::max(1e-8, 1e-6 * raw)) {
      accepted.col(n_accepted++) = proj / proj.norm();
      sol.representatives.push_back(idx);
      taken[idx] = 1;
    }
  }
  // Degenerate fallback: fill remaining slots with the best unused candidates.
  for (int idx : order) {
    if (static_cast<int>(sol.representatives.size()) == op.dim_h) break;
    if (!taken[idx]) {
      sol.representatives.push_back(idx);
      taken[idx] = 1;
    }
  }
  return sol;
}

double participation_entropy(const FloquetSolution& solution, int eig_index,
                             int component, bool* flagged) {
  if (eig_index < 0 || eig_index >= solution.theta.size())
    throw std::invalid_argument("participation_entropy: eigenpair index out of range");
  if (component >= solution.dim_h)
    throw std::invalid_argument("participation_entropy: component out of range");
  if (flagged) *flagged = false;

  Eigen::VectorXd p(solution.n_modes);
  if (component < 0) {
    p = solution.mode_weights.col(eig_index);
  } else {
    for (int m = 0; m < solution.n_modes; ++m) {
      p[m] = std::norm(solution.vectors(m * solution.dim_h + component, eig_index));
    }
  }
  const double total = p.sum();
  if (total <= 0.0) {
    if (flagged) *flagged = true;
    return 0.0;
  }
  double s = 0.0;
  for (int m = 0; m < solution.n_modes; ++m) {
    const double q = p[m] / total;
    if (q > 0.0) s -= q * std::log(q);
  }
  return s;
}

PhaseErrors phase_error(const FloquetSolution& solution, const ExactFloquetResult& exact) {
  const int d = solution.dim_h;
  if (static_cast<int>(solution.representatives.size()) != d)
    throw std::invalid_argument("phase_error: representative count does not match dim_h");
  if (exact.theta.size() != d)
    throw std::invalid_argument("phase_error: exact state count does not match dim_h");

  Eigen::MatrixXd cost(d, d);
  for (int r = 0; r < d; ++r) {
    const double th = solution.theta[solution.representatives[r]];
    for (int e = 0; e < d; ++e) cost(r, e) = circular_distance(th, exact.theta[e]);
  }
  PhaseErrors result;
  result.assignment = min_cost_assignment(cost);
  result.per_state.resize(d);
  std::vector<double> all(d);
  for (int r = 0; r < d; ++r) {
    const double err = cost(r, result.assignment[r]);
    result.per_state[result.assignment[r]] = err;
    all[r] = err;
  }
  result.median_abs = median_of(all);
  result.max_abs = *std::max_element(all.begin(), all.end());
  return result;
}

}  // namespace wfl
