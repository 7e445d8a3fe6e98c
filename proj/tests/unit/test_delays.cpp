#include <gtest/gtest.h>

#include "netstab/catalog.hpp"
#include "netstab/delays.hpp"
#include "netstab/error.hpp"
#include "netstab/sim.hpp"
#include "support/generators.hpp"

using namespace netstab;

TEST(Dedelay, DelayedPairHasEightCoordinates) {
    const AugmentedNetwork a = dedelay(catalog::delayed_pair(0.5, 0.1, 1.0));
    EXPECT_EQ(a.network.size(), 8u);
    EXPECT_TRUE(a.network.undelayed());
    int lines = 0;
    for (std::size_t k = 0; k < a.indices.size(); ++k) {
        const StateIndex& ix = a.indices[k];
        EXPECT_EQ(a.network.ids()[k], ix.name);
        if (ix.kind == StateIndex::Kind::Line) {
            ++lines;
            EXPECT_GE(ix.depth, 1);
            EXPECT_LE(ix.depth, 3);
        }
    }
    EXPECT_EQ(lines, 6);
}

TEST(Dedelay, UndelayedNetworkIsUnchanged) {
    const Network net = catalog::undelayed_pair(0.5, 0.1, 1.0);
    const AugmentedNetwork a = dedelay(net);
    EXPECT_EQ(a.network.updates(), net.updates());
    EXPECT_EQ(a.network.ids(), net.ids());
}

TEST(Dedelay, PureDelayIsCyclicPermutation) {
    const Network net = build_network("shift", {{"x1", Interval::whole()}}, {{"x1", "x1[-2]"}});
    const AugmentedNetwork a = dedelay(net);
    ASSERT_EQ(a.network.size(), 3u);
    // base <- line 2, line 1 <- base, line 2 <- line 1.
    std::map<std::string, std::string> feeds;
    for (std::size_t k = 0; k < 3; ++k) {
        const Expr& u = a.network.updates()[k];
        ASSERT_EQ(u.op(), Op::Var);
        feeds[a.network.ids()[k]] = u.var().node;
    }
    const std::string base = a.indices[0].name;
    std::string at = base;
    std::set<std::string> seen;
    for (int step = 0; step < 3; ++step) {
        seen.insert(at);
        at = feeds.at(at);
    }
    EXPECT_EQ(at, base);
    EXPECT_EQ(seen.size(), 3u);
}

TEST(Dedelay, LineWiring) {
    const AugmentedNetwork a = dedelay(catalog::delayed_pair(0.5, 0.1, 1.0));
    for (std::size_t k = 0; k < a.indices.size(); ++k) {
        const StateIndex& ix = a.indices[k];
        if (ix.kind != StateIndex::Kind::Line) {
            continue;
        }
        const Expr& u = a.network.updates()[k];
        ASSERT_EQ(u.op(), Op::Var);
        const auto src = a.network.index_of(u.var().node);
        EXPECT_EQ(a.indices[src].node, ix.node);
        EXPECT_EQ(a.indices[src].depth, ix.depth - 1);
    }
}

TEST(Undelay, DelayedPairBecomesUndelayedPair) {
    const Network u = undelay(catalog::delayed_pair(0.5, 0.1, 1.0, 0.3, 0.0));
    const Network want = catalog::undelayed_pair(0.5, 0.1, 1.0, 0.3, 0.0);
    EXPECT_EQ(u.updates(), want.updates());
}

TEST(Undelay, DelayDifferenceCancels) {
    const Network u = undelay(catalog::delay_difference_pair(0.5, 1.0));
    EXPECT_EQ(u.updates()[0], normalize(parse_expression("0.5*x1")));
    EXPECT_EQ(u.updates()[1], normalize(parse_expression("0.5*x2")));
}

TEST(Undelay, IdentityOnUndelayed) {
    const Network net = catalog::tanh_ring(2, 1.5);
    EXPECT_EQ(undelay(net), net);
}

TEST(ShiftDelay, RepeatedShiftsEqualUndelay) {
    Network net = catalog::delayed_pair(0.5, 0.1, 1.0);
    for (int guard = 0; guard < 100 && !net.undelayed(); ++guard) {
        bool shifted = false;
        for (std::size_t j = 0; j < net.size() && !shifted; ++j) {
            for (const auto& v : variables(net.updates()[j])) {
                if (v.delay > 0) {
                    net = shift_delay(net, net.ids()[j], v.node, v.delay);
                    shifted = true;
                    break;
                }
            }
        }
    }
    EXPECT_EQ(net.updates(), undelay(catalog::delayed_pair(0.5, 0.1, 1.0)).updates());
}

TEST(ShiftDelay, DelayDifferenceMerges) {
    const Network net = catalog::delay_difference_pair(0.5, 1.0);
    const Network s = shift_delay(net, "x1", "x2", 1);
    EXPECT_EQ(s.updates()[0], normalize(parse_expression("0.5*x1")));
    EXPECT_EQ(s.updates()[1], net.updates()[1]);
}

TEST(ShiftDelay, MissingReferenceThrows) {
    const Network net = catalog::delayed_pair(0.5, 0.1, 1.0);
    EXPECT_THROW(shift_delay(net, "x1", "x2", 2), DomainError);
    EXPECT_THROW(shift_delay(net, "x1", "x1", 0), DomainError);
    EXPECT_THROW(shift_delay(net, "x9", "x1", 1), DomainError);
}

TEST(UniqueName, AppendsUnderscores) {
    EXPECT_EQ(unique_name("a", {"b"}), "a");
    EXPECT_EQ(unique_name("a", {"a", "a_"}), "a__");
}

TEST(DelaysProperty, UndelayAfterDedelayIsIdentityOnUndelayed) {
    testgen::Rng rng(3);
    testgen::NetworkShape shape;
    shape.max_delay = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Network net = testgen::random_network(rng, shape);
        const Network back = undelay(dedelay(net).network);
        EXPECT_EQ(back.updates(), net.updates());
        EXPECT_EQ(back.ids(), net.ids());
    }
}

TEST(DelaysProperty, ProjectedOrbitsAgree) {
    testgen::Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const Network net = testgen::random_network(rng);
        std::vector<Interval> box(net.size(), Interval(-5.0, 5.0));
        const auto history = random_history(net, box, rng);
        EXPECT_TRUE(conjugacy_check(net, history, 100)) << serialize(net);
    }
}

TEST(DelaysProperty, ShiftKeepsNonDistributedWithoutMerge) {
    testgen::Rng rng(41);
    testgen::NetworkShape shape;
    shape.non_distributed = true;
    int shifts = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Network net = testgen::random_network(rng, shape);
        ASSERT_TRUE(is_non_distributed(net));
        for (std::size_t j = 0; j < net.size(); ++j) {
            for (const auto& v : variables(net.updates()[j])) {
                if (v.delay == 0 || references(net.updates()[j], {v.node, v.delay - 1})) {
                    continue;
                }
                const Network s = shift_delay(net, net.ids()[j], v.node, v.delay);
                EXPECT_TRUE(is_non_distributed(s));
                EXPECT_TRUE(references(s.updates()[j], {v.node, v.delay - 1}));
                ++shifts;
            }
        }
    }
    EXPECT_GT(shifts, 50);
}
