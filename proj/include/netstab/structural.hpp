#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "netstab/network.hpp"

namespace netstab {

/// Vertex ids l_1, ..., l_N: endpoints in S, interior outside S.
using Branch = std::vector<std::string>;
using VertexSet = std::set<std::string>;

struct StructuralSetReport {
    VertexSet set;
    bool complete = false;
    bool basic = false;
    std::vector<Branch> branches;
    std::vector<Branch> admissible;
};

inline constexpr std::size_t kBranchCap = 1'000'000;

/// All S-to-S paths and cycles with no interior vertex in S, ordered
/// lexicographically by vertex position. Throws DomainError past `cap`.
std::vector<Branch> branch_set(const InteractionGraph& g, const VertexSet& s, std::size_t cap = kBranchCap);

/// Branches with more than two vertices.
std::vector<Branch> admissible_sequences(const InteractionGraph& g, const VertexSet& s,
                                         std::size_t cap = kBranchCap);

/// Every cycle meets S, and every vertex outside S lies on a branch.
[[nodiscard]] bool is_complete_structural(const InteractionGraph& g, const VertexSet& s);

/// Complete, and no endpoint pair carries more than one branch.
[[nodiscard]] bool is_basic_structural(const InteractionGraph& g, const VertexSet& s);

StructuralSetReport structural_report(const InteractionGraph& g, const VertexSet& s);

inline constexpr std::size_t kExhaustiveLimit = 20;

/// Complete (or basic, when `want_basic`) sets ordered by size and then
/// lexicographically by vertex position. Graphs above kExhaustiveLimit
/// vertices use a greedy feedback-vertex-set seed instead of enumeration.
std::vector<StructuralSetReport> find_structural_sets(const InteractionGraph& g, bool want_basic,
                                                      std::size_t max_results);

/// Parses "v2,v4" into a set, checking every id against the graph.
VertexSet parse_vertex_set(const std::string& text, const InteractionGraph& g);

} // namespace netstab
