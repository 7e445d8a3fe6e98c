#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "netstab/network.hpp"
#include "netstab/structural.hpp"

namespace netstab {

/// DOT digraph of the interaction graph. Vertices of `s` are drawn as filled
/// double circles; edges carry their delay sets when any delay is nonzero.
std::string emit_dot(const InteractionGraph& g, const VertexSet* s = nullptr, const std::string& name = "G");

struct RegressionResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// The bundled worked-example checks run by `netstab verify-paper`.
std::vector<RegressionResult> bundled_regressions();

/// Command-line entry point. `args` excludes the program name. Returns 0 on
/// success, 1 on domain errors and 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace netstab
