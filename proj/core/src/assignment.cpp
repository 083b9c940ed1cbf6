#include "wfl/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wfl {

// Jonker-Volgenant style shortest augmenting paths with dual potentials.
// Rows are assigned one at a time; each augmentation runs a Dijkstra sweep
// over columns using reduced costs.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw std::invalid_argument("min_cost_assignment: cost matrix must be square");
  if (n == 0) return {};
  if (!cost.allFinite()) throw std::invalid_argument("min_cost_assignment: cost matrix must be finite");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, -1);  // match[col] = row, col n is the virtual start
  std::vector<int> path(n + 1, -1);

  for (int row = 0; row < n; ++row) {
    int col = n;
    match[n] = row;
    std::vector<double> dist(n + 1, inf);
    std::vector<bool> done(n + 1, false);
    do {
      done[col] = true;
      const int r = match[col];
      double best = inf;
      int best_col = -1;
      for (int c = 0; c < n; ++c) {
        if (done[c]) continue;
        const double reduced = cost(r, c) - u[r] - v[c];
        if (reduced < dist[c]) {
          dist[c] = reduced;
          path[c] = col;
        }
        if (dist[c] < best) {
          best = dist[c];
          best_col = c;
        }
      }
      if (best_col < 0) throw std::runtime_error("min_cost_assignment: no augmenting path");
      for (int c = 0; c <= n; ++c) {
        if (done[c]) {
          u[match[c]] += best;
          v[c] -= best;
        } else {
          dist[c] -= best;
        }
      }
      col = best_col;
    } while (match[col] != -1);

    while (col != n) {
      const int prev = path[col];
      match[col] = match[prev];
      col = prev;
    }
  }

  std::vector<int> assignment(n, -1);
  for (int c = 0; c < n; ++c) {
    if (match[c] >= 0) assignment[match[c]] = c;
  }
  return assignment;
}

}  // namespace wfl
