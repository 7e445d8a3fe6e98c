#include "netstab/catalog.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace netstab::catalog {

namespace {

std::string literal(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "(%.17g)", v);
    return buf;
}

} // namespace

Network cohen_grossberg_ring(std::size_t n, double eps, double a, double b, const std::vector<double>& c) {
    CohenGrossbergParams p;
    p.weights.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        p.weights[(j + n - 1) % n][j] += a;
        p.weights[(j + 1) % n][j] += a;
    }
    p.epsilon = eps;
    p.gain = b;
    p.inputs = c;
    p.name = "cg_ring";
    return make_cohen_grossberg(p);
}

namespace {

CohenGrossbergParams pair_params(double eps, double a, double b, double c1, double c2) {
    CohenGrossbergParams p;
    p.weights = {{0.0, 2.0 * a}, {2.0 * a, 0.0}};
    p.epsilon = eps;
    p.gain = b;
    p.inputs = {c1, c2};
    return p;
}

} // namespace

Network delayed_pair(double eps, double a, double b, double c1, double c2) {
    CohenGrossbergParams p = pair_params(eps, a, b, c1, c2);
    p.delays = {{0, 3}, {3, 0}};
    p.self_delays = {1, 1};
    p.name = "delayed_pair";
    return make_cohen_grossberg(p);
}

Network undelayed_pair(double eps, double a, double b, double c1, double c2) {
    CohenGrossbergParams p = pair_params(eps, a, b, c1, c2);
    p.name = "undelayed_pair";
    return make_cohen_grossberg(p);
}

Network delay_difference_pair(double eps, double b) {
    const std::string leak = literal(1.0 - eps);
    const std::string gain = literal(b);
    return build_network("delay_difference_pair", {{"x1", Interval::whole()}, {"x2", Interval::whole()}},
                         {{"x1", leak + "*x1 + tanh(" + gain + "*x2) - tanh(" + gain + "*x2[-1])"},
                          {"x2", leak + "*x2 + tanh(" + gain + "*x1) - tanh(" + gain + "*x1[-1])"}});
}

Network tanh_ring(std::size_t n, double c) {
    const std::size_t m = 2 * n;
    std::vector<NodeDecl> decls;
    std::vector<Rule> rules;
    auto v = [&](std::size_t j) { return "v" + std::to_string(j % m + 1); };
    for (std::size_t j = 0; j < m; ++j) {
        decls.push_back({v(j), Interval::whole()});
        rules.push_back({v(j), "tanh(" + v(j + m - 1) + ") + tanh(" + v(j + 1) + ") + " + literal(c)});
    }
    return build_network("tanh_ring", decls, rules);
}

VertexSet even_vertices(std::size_t n) {
    VertexSet s;
    for (std::size_t j = 2; j <= 2 * n; j += 2) {
        s.insert("v" + std::to_string(j));
    }
    return s;
}

Network six_node_network() {
    std::vector<NodeDecl> decls;
    for (int j = 1; j <= 6; ++j) {
        decls.push_back({"v" + std::to_string(j), Interval::whole()});
    }
    return build_network("six_node", decls,
                         {{"v1", "0.5*tanh(v6)"},
                          {"v2", "sin(v1)"},
                          {"v3", "0.3*tanh(v2) + 0.2*v5 + 0.1*cos(v6)"},
                          {"v4", "0.4*tanh(v3)"},
                          {"v5", "0.2*v2 + 0.5*sin(v3) - 0.3*tanh(v4)"},
                          {"v6", "0.6*tanh(v5)"}});
}

double tanh_ring_critical_offset() { return 2.0 + std::acosh(2.0); }

} // namespace netstab::catalog
