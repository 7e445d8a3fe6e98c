#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netstab/delays.hpp"
#include "netstab/network.hpp"
#include "netstab/spectral.hpp"

namespace netstab {

/// Where one nonzero matrix entry came from.
struct EntryProvenance {
    std::size_t row = 0;
    std::size_t col = 0;
    std::string update;      ///< coordinate whose update was differentiated
    std::string variable;    ///< coordinate differentiated against
    std::string derivative;  ///< printed partial derivative
    double bound = 0.0;
};

struct StabilityAssembly {
    NonnegMatrix matrix;
    std::vector<StateIndex> indices;
    std::vector<EntryProvenance> provenance;
};

/// Entry (row j, col i) bounds sup |dF_j / dx_i| over the domain box. A
/// delayed network is de-delayed first and the matrix lives on the augmented
/// coordinates. Throws UnboundedError when a bound is infinite because some
/// domain is unbounded and OverflowError when it overflows on a bounded box.
StabilityAssembly assemble_stability(const Network& net);
NonnegMatrix stability_matrix(const Network& net);

inline constexpr double kVerdictGuard = 1e-12;

struct CohenGrossbergCheck {
    double epsilon = 0.0;
    double lipschitz = 0.0;
    double rho_abs_weights = 0.0;
    double value = 0.0;  ///< |1 - epsilon| + lipschitz * rho(|W|)
};

struct StabilityReport {
    std::string network;
    StabilityAssembly assembly;
    double rho = 0.0;
    bool stable = false;
    bool boundary = false;  ///< |rho - 1| within the verdict guard
    std::optional<CohenGrossbergCheck> cohen_grossberg;

    [[nodiscard]] std::string verdict() const { return stable ? "stable" : "inconclusive"; }
};

StabilityReport analyze(const Network& net, const SpectralOptions& opts = {});

/// JSON text of the report (schema "netstab-report/1").
std::string report_json(const StabilityReport& report);

/// Signed Jacobian of the de-delayed map at the constant history x^k = fixed
/// for all k, over the coordinates of dedelay(net).
Matrix jacobian_at_fixed_point(const Network& net, const std::vector<double>& fixed);

} // namespace netstab
