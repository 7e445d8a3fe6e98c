#pragma once

#include "netstab/delays.hpp"
#include "netstab/network.hpp"
#include "netstab/structural.hpp"

namespace netstab {

/// Network on the nodes of S in which every read of a node outside S is
/// replaced, recursively, by that node's update. Needs an undelayed network
/// and a complete structural set.
Network restrict_to(const Network& net, const VertexSet& s);

/// The restriction with the history of every inlined path made explicit: a
/// read that travelled along an admissible sequence of length N reads the
/// last of N - 2 shift-register coordinates fed by the sequence's source.
AugmentedNetwork expand(const Network& net, const VertexSet& s);

/// Like expand, but a read along a branch of length N reads the source node
/// N - 2 steps in the past instead of a shift-register coordinate.
Network delayed_expansion(const Network& net, const VertexSet& s);

} // namespace netstab
