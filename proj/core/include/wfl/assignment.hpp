#pragma once

// Minimum-cost perfect matching on a square cost matrix (O(n^3) potentials
// method).  Used to pair truncated-basis phases with exact ones on the circle.

#include <vector>

#include <Eigen/Dense>

namespace wfl {

// Returns assignment[row] = column; cost must be square with finite entries.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

}  // namespace wfl
