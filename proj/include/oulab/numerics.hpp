#pragma once

#include <span>
#include <vector>

namespace oulab {

// Weights w_j with p(0) = sum_j w_j p(s_j) for the interpolating polynomial through the nodes.
std::vector<double> lagrange_at_zero(std::span<const double> nodes);

}  // namespace oulab
