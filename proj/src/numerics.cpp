#include "oulab/numerics.hpp"

#include <stdexcept>

namespace oulab {

std::vector<double> lagrange_at_zero(std::span<const double> nodes) {
  std::vector<double> w(nodes.size(), 1.0);
  for (std::size_t j = 0; j < nodes.size(); ++j)
    for (std::size_t m = 0; m < nodes.size(); ++m) {
      if (m == j) continue;
      if (nodes[m] == nodes[j]) throw std::invalid_argument("lagrange_at_zero: repeated node");
      w[j] *= nodes[m] / (nodes[m] - nodes[j]);
    }
  return w;
}

}  // namespace oulab
