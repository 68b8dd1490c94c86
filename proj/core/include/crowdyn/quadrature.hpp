#pragma once

#include <cstddef>
#include <vector>

namespace crowdyn::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

// n-point Gauss–Legendre rule on [a, b]; nodes ascending.
Rule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

} // namespace crowdyn::quad
