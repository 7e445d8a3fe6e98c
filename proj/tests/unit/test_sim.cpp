#include <gtest/gtest.h>

#include <cmath>

#include "json.hpp"
#include "netstab/catalog.hpp"
#include "netstab/error.hpp"
#include "netstab/sim.hpp"
#include "netstab/stability.hpp"
#include "support/generators.hpp"

using namespace netstab;

namespace {

Network halving(const std::string& extra = "") {
    return build_network("half", {{"x1", Interval::whole()}}, {{"x1", "0.5*x1" + extra}});
}

} // namespace

TEST(Simulate, GeometricOrbit) {
    const Trajectory t = iterate_orbit(halving(), {{2.0}}, 3);
    ASSERT_EQ(t.snapshots.size(), 4u);
    EXPECT_EQ(t.at(0)[0], 2.0);
    EXPECT_EQ(t.at(1)[0], 1.0);
    EXPECT_EQ(t.at(2)[0], 0.5);
    EXPECT_EQ(t.at(3)[0], 0.25);
    EXPECT_EQ(t.steps(), 3u);
}

TEST(Simulate, DelayedPairStaysAtZero) {
    const Network net = catalog::delayed_pair(0.5, 0.1, 1.0);
    const std::vector<State> zero(4, State{0.0, 0.0});
    const Trajectory t = iterate_orbit(net, zero, 50);
    for (const auto& s : t.snapshots) {
        EXPECT_EQ(s, (State{0.0, 0.0}));
    }
}

TEST(Simulate, SnapshotsFollowTheUpdateRule) {
    testgen::Rng rng(12);
    const Network net = catalog::delay_difference_pair(0.5, 1.0);
    const Trajectory t = iterate_orbit(net, {{0.3, -0.2}, {0.1, 0.4}}, 20);
    for (long k = 0; k < 20; ++k) {
        std::map<VarRef, double> p;
        for (int d = 0; d < 2; ++d) {
            p[{"x1", d}] = t.at(k - d)[0];
            p[{"x2", d}] = t.at(k - d)[1];
        }
        EXPECT_DOUBLE_EQ(t.at(k + 1)[0], eval_point(net.updates()[0], p));
        EXPECT_DOUBLE_EQ(t.at(k + 1)[1], eval_point(net.updates()[1], p));
    }
}

namespace {

double sup_norm_over(const Trajectory& t) {
    double far = 0.0;
    for (const auto& s : t.snapshots) {
        far = std::max(far, std::max(std::fabs(s[0]), std::fabs(s[1])));
    }
    return far;
}

} // namespace

TEST(Simulate, DelayDifferencePairLeavesSmallBall) {
    const Network net = catalog::delay_difference_pair(0.5, 1.0);
    // The symmetric mode x1 = x2 is neutral to first order, so this history
    // only drifts past its own radius.
    EXPECT_GT(sup_norm_over(iterate_orbit(net, {{0.1, 0.1}, {0.0, 0.0}}, 50)), 0.1);
    // The antisymmetric mode carries the eigenvalue -(1+sqrt17)/4.
    EXPECT_GT(sup_norm_over(iterate_orbit(net, {{1e-4, -1e-4}, {0.0, 0.0}}, 50)), 0.5);
}

TEST(Simulate, DomainAndDivergenceFlags) {
    const Network grow = build_network("grow", {{"x", Interval(-1.0, 1.0)}}, {{"x", "2*x"}});
    const Trajectory t = iterate_orbit(grow, {{0.3}}, 5);
    ASSERT_TRUE(t.left_domain.has_value());
    EXPECT_EQ(*t.left_domain, 2u);
    const Network boom = build_network("boom", {{"x", Interval::whole()}}, {{"x", "exp(x)"}});
    const Trajectory b = iterate_orbit(boom, {{5.0}}, 10);
    ASSERT_TRUE(b.diverged.has_value());
    EXPECT_LE(b.snapshots.size(), 11u);
}

TEST(Simulate, HistoryShapeIsChecked) {
    EXPECT_THROW(iterate_orbit(catalog::delayed_pair(0.5, 0.1, 1.0), {{0.0, 0.0}}, 1), DomainError);
    EXPECT_THROW(iterate_orbit(halving(), {{0.0, 1.0}}, 1), DomainError);
}

TEST(FixedPoint, Examples) {
    const State x = find_fixed_point(halving(" + 1"), {0.0}, 1e-13);
    EXPECT_NEAR(x[0], 2.0, 1e-12);
    const State z = find_fixed_point(catalog::delay_difference_pair(), {0.3, -0.4}, 1e-13);
    EXPECT_NEAR(z[0], 0.0, 1e-12);
    EXPECT_NEAR(z[1], 0.0, 1e-12);
    const State u = find_fixed_point(catalog::undelayed_pair(0.5, 0.1, 1.0), {1.0, 2.0}, 1e-13);
    EXPECT_NEAR(u[0], 0.0, 1e-12);
    EXPECT_NEAR(u[1], 0.0, 1e-12);
}

TEST(FixedPoint, DampingHandlesOscillation) {
    // x -> -x + 2 oscillates undamped; damping finds x = 1.
    const Network flip = build_network("flip", {{"x", Interval::whole()}}, {{"x", "-x + 2"}});
    EXPECT_NEAR(find_fixed_point(flip, {5.0}, 1e-12)[0], 1.0, 1e-11);
}

TEST(FixedPoint, CapThrows) {
    const Network drift = build_network("drift", {{"x", Interval::whole()}}, {{"x", "x + 1"}});
    EXPECT_THROW(find_fixed_point(drift, {0.0}, 1e-9, 100), ConvergenceError);
}

TEST(FixedPointProperty, DelayedAndUndelayedAgree) {
    testgen::Rng rng(81);
    int found = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Network net = testgen::random_network(rng);
        State x;
        try {
            x = find_fixed_point(net, State(net.size(), 0.0), 1e-12);
        } catch (const ConvergenceError&) {
            continue;
        }
        ++found;
        const Network u = undelay(net);
        const State ux = Simulator(u).undelayed_step(x);
        const State hx = Simulator(net).undelayed_step(x);
        EXPECT_LE(d_max(ux, x), 1e-9);
        EXPECT_LE(d_max(hx, ux), 1e-12);
        const State y = find_fixed_point(u, State(net.size(), 0.0), 1e-12);
        EXPECT_LE(d_max(Simulator(net).undelayed_step(y), y), 1e-9);
    }
    EXPECT_GT(found, 25);
}

TEST(Attraction, UndelayedPairConverges) {
    AttractionOptions opts;
    opts.tol = 1e-8;
    opts.seed = 3;
    const AttractionVerdict v = verify_global_attraction(catalog::undelayed_pair(0.5, 0.1, 1.0), opts);
    EXPECT_TRUE(v.converged);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_NEAR((*v.witness)[0], 0.0, 1e-8);
    EXPECT_LE(v.final_diameter, 1e-8);
    EXPECT_EQ(v.trials, 20u);
}

TEST(Attraction, DelayDifferencePairDoesNot) {
    const AttractionVerdict v = verify_global_attraction(catalog::delay_difference_pair());
    EXPECT_FALSE(v.converged);
}

TEST(Attraction, ContractionConvergesToZero) {
    const AttractionVerdict v = verify_global_attraction(halving());
    EXPECT_TRUE(v.converged);
    EXPECT_NEAR((*v.witness)[0], 0.0, 1e-6);
}

TEST(Attraction, DivergenceIsReported) {
    const Network boom = build_network("boom", {{"x", Interval::whole()}}, {{"x", "exp(x)"}});
    const AttractionVerdict v = verify_global_attraction(boom);
    EXPECT_TRUE(v.diverged);
    EXPECT_FALSE(v.converged);
}

TEST(Attraction, Deterministic) {
    AttractionOptions opts;
    opts.seed = 42;
    opts.steps = 100;
    opts.trials = 3;
    const Network net = catalog::delay_difference_pair();
    EXPECT_EQ(verdict_json(verify_global_attraction(net, opts), net.ids()),
              verdict_json(verify_global_attraction(net, opts), net.ids()));
}

TEST(AttractionProperty, CertifiedNetworksConverge) {
    testgen::Rng rng(82);
    int certified = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const Network net = testgen::random_network(rng);
        const StabilityReport r = analyze(net);
        if (!(r.rho < 1.0)) {
            continue;
        }
        ++certified;
        AttractionOptions opts;
        opts.seed = static_cast<std::uint64_t>(trial);
        const AttractionVerdict v = verify_global_attraction(net, opts);
        EXPECT_TRUE(v.converged) << "rho " << r.rho << " diameter " << v.final_diameter << "\n" << serialize(net);
    }
    EXPECT_GT(certified, 10);
}

TEST(Conjugacy, Examples) {
    EXPECT_TRUE(conjugacy_check(catalog::undelayed_pair(0.5, 0.1, 1.0), {{0.3, -2.0}}, 100));
    testgen::Rng rng(9);
    const Network net = catalog::delayed_pair(0.5, 0.1, 1.0, 0.2, -0.1);
    const auto history = random_history(net, std::vector<Interval>(2, Interval(-3, 3)), rng);
    EXPECT_TRUE(conjugacy_check(net, history, 100));
}

TEST(Conjugacy, CorruptedWiringIsDetected) {
    testgen::Rng rng(10);
    const Network net = catalog::delayed_pair(0.5, 0.1, 1.0);
    AugmentedNetwork a = dedelay(net);
    // Feed the deepest line of x1 from the wrong depth.
    std::vector<Expr> updates = a.network.updates();
    std::size_t deepest = 0;
    for (std::size_t k = 0; k < a.indices.size(); ++k) {
        if (a.indices[k].node == "x1" && a.indices[k].depth > a.indices[deepest].depth) {
            deepest = k;
        }
    }
    ASSERT_EQ(a.indices[deepest].depth, 3);
    updates[deepest] = Expr::variable("x1");
    a.network = Network(a.network.name(), a.network.nodes(), updates);
    const auto history = random_history(net, std::vector<Interval>(2, Interval(-3, 3)), rng);
    EXPECT_FALSE(conjugacy_check(net, a, history, 100));
    EXPECT_TRUE(conjugacy_check(net, dedelay(net), history, 100));
}

TEST(Output, TrajectoryCsvAndVerdictJson) {
    const Trajectory t = iterate_orbit(halving(), {{2.0}}, 2);
    EXPECT_EQ(trajectory_csv(t), "step,x1\n0,2\n1,1\n2,0.5\n");
    const AttractionVerdict v = verify_global_attraction(halving());
    const auto j = nlohmann::json::parse(verdict_json(v, {"x1"}));
    EXPECT_EQ(j.at("converged"), true);
    EXPECT_EQ(j.at("trials"), 20);
    EXPECT_EQ(j.at("nodes"), nlohmann::json::array({"x1"}));
}
