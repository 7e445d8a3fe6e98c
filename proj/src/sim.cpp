#include "netstab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"
#include "netstab/error.hpp"

namespace netstab {

Simulator::Simulator(const Network& net) : net_(net) {
    const std::size_t n = net.size();
    for (const auto& u : net.updates()) {
        programs_.emplace_back(u, [&](const VarRef& v) { return static_cast<std::size_t>(v.delay) * n + net.index_of(v.node); });
    }
}

Trajectory Simulator::run(const std::vector<State>& history, std::size_t steps) const {
    const std::size_t n = net_.size();
    const auto horizon = static_cast<std::size_t>(net_.horizon());
    if (history.size() != horizon) {
        throw DomainError("history has " + std::to_string(history.size()) + " snapshots; the network needs " +
                          std::to_string(horizon));
    }
    for (const auto& h : history) {
        if (h.size() != n) {
            throw DomainError("history snapshot has the wrong number of nodes");
        }
    }
    Trajectory t;
    t.nodes = net_.ids();
    t.horizon = net_.horizon();
    for (std::size_t d = horizon; d-- > 0;) {
        t.snapshots.push_back(history[d]);
    }
    auto inside = [&](const State& x) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!net_.nodes()[i].domain.contains(x[i])) {
                return false;
            }
        }
        return true;
    };
    for (std::size_t d = 0; d < horizon && !t.left_domain; ++d) {
        if (!inside(history[d])) {
            t.left_domain = 0;
        }
    }
    // window[d * n + i] = x^{k-d}_i
    std::vector<double> window(horizon * n);
    for (std::size_t d = 0; d < horizon; ++d) {
        std::copy(history[d].begin(), history[d].end(), window.begin() + static_cast<std::ptrdiff_t>(d * n));
    }
    State next(n);
    t.snapshots.reserve(t.snapshots.size() + steps);
    for (std::size_t k = 1; k <= steps; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            next[j] = programs_[j](window);
        }
        const bool finite = std::all_of(next.begin(), next.end(), [](double v) { return std::isfinite(v); });
        if (!finite && !t.diverged) {
            t.diverged = k;
        }
        if (!t.left_domain && !inside(next)) {
            t.left_domain = k;
        }
        std::copy_backward(window.begin(), window.end() - static_cast<std::ptrdiff_t>(n), window.end());
        std::copy(next.begin(), next.end(), window.begin());
        t.snapshots.push_back(next);
        if (!finite) {
            break;
        }
    }
    return t;
}

State Simulator::undelayed_step(const State& x) const {
    const std::size_t n = net_.size();
    std::vector<double> window(static_cast<std::size_t>(net_.horizon()) * n);
    for (std::size_t d = 0; d < static_cast<std::size_t>(net_.horizon()); ++d) {
        std::copy(x.begin(), x.end(), window.begin() + static_cast<std::ptrdiff_t>(d * n));
    }
    State out(n);
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = programs_[j](window);
    }
    return out;
}

Trajectory iterate_orbit(const Network& net, const std::vector<State>& history, std::size_t steps) {
    return Simulator(net).run(history, steps);
}

double d_max(const State& a, const State& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::fabs(a[i] - b[i]));
    }
    return d;
}

State find_fixed_point(const Network& net, const State& guess, double tol, std::size_t max_iterations) {
    if (!(tol > 0.0)) {
        throw DomainError("fixed-point tolerance must be positive");
    }
    if (guess.size() != net.size()) {
        throw DomainError("initial guess has the wrong number of nodes");
    }
    const Simulator sim(net);
    State x = guess;
    double previous = std::numeric_limits<double>::infinity();
    double damping = 1.0;
    for (std::size_t it = 0; it < max_iterations; ++it) {
        const State fx = sim.undelayed_step(x);
        const double step = d_max(fx, x);
        if (!std::isfinite(step)) {
            throw ConvergenceError("fixed-point iteration diverged");
        }
        if (step <= tol) {
            return x;
        }
        if (step >= previous) {
            damping = 0.5;
        }
        previous = step;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = (1.0 - damping) * x[i] + damping * fx[i];
        }
    }
    throw ConvergenceError("no fixed point within " + std::to_string(max_iterations) + " iterations");
}

namespace {

double diameter(const std::vector<State>& snaps, std::size_t begin, std::size_t end) {
    if (begin >= end) {
        return 0.0;
    }
    double d = 0.0;
    for (std::size_t i = 0; i < snaps[begin].size(); ++i) {
        double lo = snaps[begin][i];
        double hi = lo;
        for (std::size_t k = begin + 1; k < end; ++k) {
            lo = std::min(lo, snaps[k][i]);
            hi = std::max(hi, snaps[k][i]);
        }
        d = std::max(d, hi - lo);
    }
    return d;
}

} // namespace

std::vector<Interval> sampling_box(const Network& net, const AttractionOptions& opts) {
    if (!opts.sample_box.empty()) {
        if (opts.sample_box.size() != net.size()) {
            throw DomainError("sample box has the wrong number of nodes");
        }
        return opts.sample_box;
    }
    std::vector<Interval> box;
    const double r = opts.default_radius;
    for (const auto& node : net.nodes()) {
        const double lo = std::isfinite(node.domain.lo()) ? node.domain.lo() : std::min(-r, node.domain.hi());
        const double hi = std::isfinite(node.domain.hi()) ? node.domain.hi() : std::max(r, lo);
        box.emplace_back(lo, hi);
    }
    return box;
}

std::vector<State> random_history(const Network& net, const std::vector<Interval>& box, std::mt19937_64& rng) {
    std::vector<State> history(static_cast<std::size_t>(net.horizon()), State(net.size()));
    for (auto& h : history) {
        for (std::size_t i = 0; i < net.size(); ++i) {
            h[i] = std::uniform_real_distribution<double>(box[i].lo(), box[i].hi())(rng);
        }
    }
    return history;
}

AttractionVerdict verify_global_attraction(const Network& net, const AttractionOptions& opts) {
    if (opts.trials < 2) {
        throw DomainError("verify_global_attraction needs at least 2 trials");
    }
    const std::vector<Interval> box = sampling_box(net, opts);
    const Simulator sim(net);
    std::mt19937_64 rng(opts.seed);
    AttractionVerdict v;
    v.trials = opts.trials;
    v.seed = opts.seed;
    bool shrinking = true;
    std::vector<State> endpoints;
    const auto horizon = static_cast<std::size_t>(net.horizon());
    for (std::size_t trial = 0; trial < opts.trials; ++trial) {
        const std::vector<State> history = random_history(net, box, rng);
        // Run in chunks so a trial can stop once its orbit is stationary.
        std::vector<State> snaps;
        std::vector<State> window = history;
        std::size_t done = 0;
        while (done < opts.steps) {
            const std::size_t chunk = std::min<std::size_t>(opts.steps - done, 250);
            const Trajectory t = sim.run(window, chunk);
            if (t.diverged) {
                v.diverged = true;
                v.iterations_used = std::max(v.iterations_used, done + *t.diverged);
                return v;
            }
            snaps.insert(snaps.end(), t.snapshots.begin() + static_cast<std::ptrdiff_t>(horizon), t.snapshots.end());
            done += chunk;
            for (std::size_t d = 0; d < horizon; ++d) {
                window[d] = t.snapshots[t.snapshots.size() - 1 - d];
            }
            if (opts.early_stop && snaps.size() > horizon + 1) {
                const double still = diameter(snaps, snaps.size() - horizon - 1, snaps.size());
                if (still <= opts.tol * 1e-6) {
                    break;
                }
            }
        }
        v.iterations_used = std::max(v.iterations_used, done);
        const std::size_t k = snaps.size();
        const double third = diameter(snaps, k / 2, 3 * k / 4);
        const double last = diameter(snaps, 3 * k / 4, k);
        if (!(last <= third || last <= opts.tol * 1e-3)) {
            shrinking = false;
        }
        endpoints.push_back(snaps.back());
    }
    v.final_diameter = diameter(endpoints, 0, endpoints.size());
    v.witness = endpoints.front();
    v.residual = d_max(*v.witness, sim.undelayed_step(*v.witness));
    v.converged = shrinking && v.final_diameter <= opts.tol && v.residual <= opts.tol;
    return v;
}

bool conjugacy_check(const Network& net, const AugmentedNetwork& augmented, const std::vector<State>& history,
                     std::size_t steps) {
    const Trajectory delayed = iterate_orbit(net, history, steps);
    const Network& aug = augmented.network;
    if (!aug.undelayed() || augmented.indices.size() != aug.size()) {
        return false;
    }
    State start(aug.size());
    for (std::size_t k = 0; k < aug.size(); ++k) {
        const VarRef p = augmented.projection(k);
        if (p.delay >= static_cast<int>(history.size())) {
            return false;
        }
        start[k] = history[static_cast<std::size_t>(p.delay)][net.index_of(p.node)];
    }
    const Trajectory lifted = iterate_orbit(aug, {start}, steps);
    if (lifted.snapshots.size() != delayed.steps() + 1) {
        return false;
    }
    for (std::size_t step = 0; step <= delayed.steps(); ++step) {
        const State& y = lifted.snapshots[step];
        for (std::size_t k = 0; k < aug.size(); ++k) {
            const VarRef p = augmented.projection(k);
            const double x = delayed.at(static_cast<long>(step) - p.delay)[net.index_of(p.node)];
            if (!(std::fabs(x - y[k]) <= 1e-12 * std::max(1.0, std::fabs(x)))) {
                return false;
            }
        }
    }
    return true;
}

bool conjugacy_check(const Network& net, const std::vector<State>& history, std::size_t steps) {
    return conjugacy_check(net, dedelay(net), history, steps);
}

std::string trajectory_csv(const Trajectory& t) {
    std::string out = "step";
    for (const auto& id : t.nodes) {
        out += "," + id;
    }
    out += "\n";
    char buf[40];
    for (std::size_t s = 0; s < t.snapshots.size(); ++s) {
        out += std::to_string(static_cast<long>(s) - t.horizon + 1);
        for (double x : t.snapshots[s]) {
            std::snprintf(buf, sizeof buf, ",%.17g", x);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string verdict_json(const AttractionVerdict& v, const std::vector<std::string>& nodes) {
    nlohmann::json j;
    j["schema"] = "netstab-report/1";
    j["converged"] = v.converged;
    j["diverged"] = v.diverged;
    j["nodes"] = nodes;
    j["witness"] = v.witness ? nlohmann::json(*v.witness) : nlohmann::json(nullptr);
    j["final_diameter"] = v.final_diameter;
    j["fixed_point_residual"] = v.residual;
    j["iterations_used"] = v.iterations_used;
    j["trials"] = v.trials;
    j["seed"] = v.seed;
    return j.dump(2) + "\n";
}

} // namespace netstab
