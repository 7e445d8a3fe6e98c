#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "netstab/network.hpp"

namespace netstab {

/// One coordinate of an augmented state. Every kind projects to a pair
/// (node, depth): the base value of `node` read `depth` steps in the past.
struct StateIndex {
    enum class Kind { Base, Line, Chain };

    Kind kind = Kind::Base;
    std::string node;
    int depth = 0;
    /// Chain coordinates only: the admissible sequence that owns them.
    std::vector<std::string> sequence;
    /// Identifier used for this coordinate in the augmented network.
    std::string name;

    static StateIndex base(std::string node);
    static StateIndex line(std::string node, int depth);
    static StateIndex chain(std::vector<std::string> sequence, int position);

    [[nodiscard]] std::string label() const;
    friend bool operator==(const StateIndex&, const StateIndex&) = default;
};

/// An undelayed network over augmented coordinates. `indices[k]` describes
/// node k of `network`.
struct AugmentedNetwork {
    Network network;
    std::vector<StateIndex> indices;

    [[nodiscard]] VarRef projection(std::size_t k) const { return {indices[k].node, indices[k].depth}; }
};

/// Replaces delays by shift-register coordinates: one coordinate per
/// (node, depth) for depth 1..max delay of that node.
AugmentedNetwork dedelay(const Network& net);

/// Sets every delay to zero and re-normalizes, so terms that only differed by
/// their delay cancel or merge.
Network undelay(const Network& net);

/// Lowers the delay of the read of `source` at `tau` in the update of `target`
/// by one step.
Network shift_delay(const Network& net, const std::string& target, const std::string& source, int tau);

/// Picks `wanted`, or `wanted` followed by underscores, avoiding `taken`.
std::string unique_name(std::string wanted, const std::set<std::string>& taken);

} // namespace netstab
