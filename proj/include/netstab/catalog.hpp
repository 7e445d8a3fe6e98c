#pragma once

#include <cstddef>
#include <vector>

#include "netstab/network.hpp"
#include "netstab/structural.hpp"

namespace netstab::catalog {

/// Undelayed Cohen-Grossberg ring on n nodes x1..xn:
///   x_j <- (1 - eps) x_j + a (tanh(b x_{j-1}) + tanh(b x_{j+1})) + c_j.
Network cohen_grossberg_ring(std::size_t n, double eps, double a, double b, const std::vector<double>& c = {});

/// Two nodes, leak read one step back and cross coupling three steps back:
///   x1 <- (1 - eps) x1[-1] + 2a tanh(b x2[-3]) + c1, and symmetrically.
Network delayed_pair(double eps, double a, double b, double c1 = 0.0, double c2 = 0.0);

/// The same pair with every delay removed.
Network undelayed_pair(double eps, double a, double b, double c1 = 0.0, double c2 = 0.0);

/// Two nodes driven by the difference of a current and a one-step-old read:
///   x1 <- (1 - eps) x1 + tanh(b x2) - tanh(b x2[-1]), and symmetrically.
Network delay_difference_pair(double eps = 0.5, double b = 1.0);

/// Ring v1..v{2n}: v_j <- tanh(v_{j-1}) + tanh(v_{j+1}) + c.
Network tanh_ring(std::size_t n, double c);

/// Even-numbered vertices v2, v4, ..., v{2n} of tanh_ring(n, .).
VertexSet even_vertices(std::size_t n);

/// Six-node network whose update j reads
///   v1: v6; v2: v1; v3: v2, v5, v6; v4: v3; v5: v2, v3, v4; v6: v5.
Network six_node_network();

/// Critical offset 2 + acosh(2) of the tanh ring: the expansion bound
/// 2 sech(c - 2) drops below 1 exactly for larger c.
double tanh_ring_critical_offset();

} // namespace netstab::catalog
