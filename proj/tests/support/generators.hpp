#pragma once

// Hand-rolled random generators shared by the property tests and the
// acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "netstab/network.hpp"
#include "netstab/spectral.hpp"
#include "netstab/structural.hpp"

namespace netstab::testgen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "(%.17g)", v);
    return buf;
}

struct NetworkShape {
    int min_nodes = 2;
    int max_nodes = 8;
    int max_in_degree = 3;
    /// Largest delay drawn for a read; 0 gives undelayed networks.
    int max_delay = 3;
    /// Each target reads each source at a single delay.
    bool non_distributed = false;
    /// The sum of coupling scales per row is drawn from [0, max_gain].
    double max_gain = 1.6;
};

// A network in the bounded-derivative vocabulary: every rule is a sum of
// terms c*x, c*tanh(b*x + o), c*sin(b*x), c*cos(b*x), c*sech(b*x) and
// c*tanh(b1*x + b2*y). Linear coefficients in a row sum to less than 0.9 in
// absolute value, so orbits stay bounded.
inline Network random_network(Rng& rng, const NetworkShape& shape = {}) {
    const int n = uniform_int(rng, shape.min_nodes, shape.max_nodes);
    std::vector<NodeDecl> decls;
    for (int i = 1; i <= n; ++i) {
        decls.push_back({"v" + std::to_string(i), Interval::whole()});
    }
    std::vector<Rule> rules;
    for (int j = 0; j < n; ++j) {
        std::vector<int> sources(static_cast<std::size_t>(n));
        std::iota(sources.begin(), sources.end(), 0);
        std::shuffle(sources.begin(), sources.end(), rng);
        sources.resize(static_cast<std::size_t>(uniform_int(rng, 1, std::min(n, shape.max_in_degree))));
        std::vector<int> fixed_delay(static_cast<std::size_t>(n));
        for (auto& d : fixed_delay) {
            d = uniform_int(rng, 0, shape.max_delay);
        }
        auto read = [&](int s) {
            const int d = shape.non_distributed ? fixed_delay[static_cast<std::size_t>(s)]
                                                : uniform_int(rng, 0, shape.max_delay);
            std::string r = "v" + std::to_string(s + 1);
            return d == 0 ? r : r + "[-" + std::to_string(d) + "]";
        };
        const double gain = uniform(rng, 0.05, shape.max_gain);
        const std::size_t terms = sources.size() + static_cast<std::size_t>(uniform_int(rng, 0, 1));
        double linear_budget = 0.85;
        std::string rule;
        for (std::size_t t = 0; t < terms; ++t) {
            const int s = sources[t % sources.size()];
            const double c = (coin(rng) ? 1.0 : -1.0) * gain * uniform(rng, 0.3, 1.0) / static_cast<double>(terms);
            const double b = uniform(rng, 0.3, 1.5) * (coin(rng, 0.8) ? 1.0 : -1.0);
            std::string term;
            switch (uniform_int(rng, 0, 5)) {
            case 0: {
                const double lc = std::clamp(c, -linear_budget, linear_budget);
                linear_budget -= std::fabs(lc);
                term = num(lc) + "*" + read(s);
                break;
            }
            case 1:
                term = num(c) + "*tanh(" + num(b) + "*" + read(s) + " + " + num(uniform(rng, -1.0, 1.0)) + ")";
                break;
            case 2:
                term = num(c) + "*sin(" + num(b) + "*" + read(s) + ")";
                break;
            case 3:
                term = num(c) + "*cos(" + num(b) + "*" + read(s) + ")";
                break;
            case 4:
                term = num(c) + "*sech(" + num(b) + "*" + read(s) + ")";
                break;
            default: {
                const int other = sources[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(sources.size()) - 1))];
                const double b2 = uniform(rng, -0.8, 0.8);
                term = num(c) + "*tanh(" + num(b * 0.5) + "*" + read(s) + " + " + num(b2 * 0.5) + "*" + read(other) + ")";
                break;
            }
            }
            rule += (rule.empty() ? "" : " + ") + term;
        }
        if (coin(rng, 0.4)) {
            rule += " + " + num(uniform(rng, -0.5, 0.5));
        }
        rules.push_back({decls[static_cast<std::size_t>(j)].id, rule});
    }
    return build_network("random", decls, rules);
}

/// A random complete structural set: vertices are added in random order until
/// the set is complete, then removed again in random order while it stays
/// complete.
inline VertexSet random_complete_set(Rng& rng, const InteractionGraph& g) {
    std::vector<std::string> order = g.vertices();
    std::shuffle(order.begin(), order.end(), rng);
    VertexSet s;
    for (const auto& v : order) {
        if (is_complete_structural(g, s)) {
            break;
        }
        s.insert(v);
    }
    std::shuffle(order.begin(), order.end(), rng);
    for (const auto& v : order) {
        if (s.count(v) == 0) {
            continue;
        }
        VertexSet smaller = s;
        smaller.erase(v);
        if (is_complete_structural(g, smaller)) {
            s = std::move(smaller);
        }
    }
    return s;
}

/// Random nonnegative matrix with density `p` and entries in [0, scale).
inline Matrix random_nonneg(Rng& rng, std::size_t n, double p = 0.6, double scale = 2.0) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (coin(rng, p)) {
                m(i, j) = uniform(rng, 0.0, scale);
            }
        }
    }
    return m;
}

/// Random irreducible nonnegative matrix: a random cyclic permutation keeps
/// the digraph strongly connected.
inline Matrix random_irreducible(Rng& rng, std::size_t n, double p = 0.4, double scale = 2.0) {
    Matrix m = random_nonneg(rng, n, p, scale);
    std::vector<std::size_t> cycle(n);
    std::iota(cycle.begin(), cycle.end(), 0);
    std::shuffle(cycle.begin(), cycle.end(), rng);
    for (std::size_t k = 0; k < n; ++k) {
        double& e = m(cycle[k], cycle[(k + 1) % n]);
        if (e == 0.0) {
            e = uniform(rng, 0.1, scale);
        }
    }
    return m;
}

} // namespace netstab::testgen
