#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "netstab/delays.hpp"
#include "netstab/network.hpp"

namespace netstab {

using State = std::vector<double>;

/// Snapshots x^{-T+1}, ..., x^0, x^1, ..., x^K in time order.
struct Trajectory {
    std::vector<std::string> nodes;
    int horizon = 1;
    std::vector<State> snapshots;
    std::optional<std::size_t> left_domain;  ///< first step whose state left the domain box
    std::optional<std::size_t> diverged;     ///< first step producing a non-finite value

    /// x^k for k >= -T+1.
    [[nodiscard]] const State& at(long k) const { return snapshots.at(static_cast<std::size_t>(k + horizon - 1)); }
    [[nodiscard]] const State& last() const { return snapshots.back(); }
    [[nodiscard]] std::size_t steps() const { return snapshots.size() - static_cast<std::size_t>(horizon); }
};

/// Evaluates the update rules of a network quickly over a rolling history.
class Simulator {
public:
    explicit Simulator(const Network& net);

    /// history[0] = x^0, history[1] = x^{-1}, ...; exactly T snapshots.
    [[nodiscard]] Trajectory run(const std::vector<State>& history, std::size_t steps) const;
    /// One application of the undelayed map x -> H(x, ..., x).
    [[nodiscard]] State undelayed_step(const State& x) const;

    [[nodiscard]] const Network& network() const noexcept { return net_; }

private:
    Network net_;
    std::vector<Program> programs_;
};

Trajectory iterate_orbit(const Network& net, const std::vector<State>& history, std::size_t steps);

/// sup-norm distance.
[[nodiscard]] double d_max(const State& a, const State& b);

inline constexpr std::size_t kFixedPointCap = 100000;

/// Damped fixed-point iteration on x -> H(x, ..., x). Throws ConvergenceError
/// after `max_iterations`.
State find_fixed_point(const Network& net, const State& guess, double tol, std::size_t max_iterations = kFixedPointCap);

struct AttractionOptions {
    std::size_t trials = 20;
    std::size_t steps = 5000;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    /// Per-node sampling box; empty means the domain, clipped to
    /// [-default_radius, default_radius] where it is unbounded.
    std::vector<Interval> sample_box;
    double default_radius = 10.0;
    /// Stop a trial early once successive states agree to tol * 1e-6.
    bool early_stop = true;
};

/// Empirical evidence (not a proof) that all sampled orbits meet at one
/// fixed point.
struct AttractionVerdict {
    bool converged = false;
    std::optional<State> witness;
    double final_diameter = 0.0;
    std::size_t iterations_used = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    bool diverged = false;
    double residual = 0.0;
};

/// The per-node sampling box described by `opts`.
std::vector<Interval> sampling_box(const Network& net, const AttractionOptions& opts);

/// T snapshots drawn uniformly from `box`, newest first.
std::vector<State> random_history(const Network& net, const std::vector<Interval>& box, std::mt19937_64& rng);

AttractionVerdict verify_global_attraction(const Network& net, const AttractionOptions& opts = {});

/// Runs the delayed orbit from `history` and the orbit of `augmented` from
/// the stacked history, and compares base coordinates to 1e-12 (relative to
/// max(1, |value|)).
[[nodiscard]] bool conjugacy_check(const Network& net, const AugmentedNetwork& augmented,
                                   const std::vector<State>& history, std::size_t steps);
[[nodiscard]] bool conjugacy_check(const Network& net, const std::vector<State>& history, std::size_t steps);

std::string trajectory_csv(const Trajectory& t);
std::string verdict_json(const AttractionVerdict& v, const std::vector<std::string>& nodes);

} // namespace netstab
