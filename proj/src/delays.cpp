#include "netstab/delays.hpp"

#include <algorithm>
#include <map>

#include "netstab/error.hpp"

namespace netstab {

StateIndex StateIndex::base(std::string node) {
    StateIndex s;
    s.kind = Kind::Base;
    s.name = node;
    s.node = std::move(node);
    return s;
}

StateIndex StateIndex::line(std::string node, int depth) {
    StateIndex s;
    s.kind = Kind::Line;
    s.name = node + ".d" + std::to_string(depth);
    s.node = std::move(node);
    s.depth = depth;
    return s;
}

StateIndex StateIndex::chain(std::vector<std::string> sequence, int position) {
    if (sequence.size() < 3 || position < 2 || position > static_cast<int>(sequence.size()) - 1) {
        throw DomainError("chain coordinate position out of range");
    }
    StateIndex s;
    s.kind = Kind::Chain;
    s.node = sequence.front();
    s.depth = position - 1;
    for (const auto& v : sequence) {
        s.name += v + ".";
    }
    s.name += "p" + std::to_string(position);
    s.sequence = std::move(sequence);
    return s;
}

std::string StateIndex::label() const {
    switch (kind) {
        case Kind::Base: return node;
        case Kind::Line: return node + "[-" + std::to_string(depth) + "]";
        case Kind::Chain: {
            std::string out = "(";
            for (std::size_t i = 0; i < sequence.size(); ++i) {
                out += (i ? "," : "") + sequence[i];
            }
            return out + ";" + std::to_string(depth + 1) + ")";
        }
    }
    return name;
}

std::string unique_name(std::string wanted, const std::set<std::string>& taken) {
    while (taken.count(wanted) != 0) {
        wanted += "_";
    }
    return wanted;
}

AugmentedNetwork dedelay(const Network& net) {
    const auto profile = max_delay_profile(net);
    std::set<std::string> taken;
    for (const auto& n : net.nodes()) {
        taken.insert(n.id);
    }
    std::vector<StateIndex> indices;
    for (const auto& n : net.nodes()) {
        indices.push_back(StateIndex::base(n.id));
    }
    // line_name[(node, depth)] -> coordinate id
    std::map<std::pair<std::string, int>, std::string> line_name;
    for (const auto& n : net.nodes()) {
        for (int d = 1; d <= profile.at(n.id); ++d) {
            StateIndex s = StateIndex::line(n.id, d);
            s.name = unique_name(s.name, taken);
            taken.insert(s.name);
            line_name[{n.id, d}] = s.name;
            indices.push_back(std::move(s));
        }
    }

    std::vector<NodeDecl> nodes;
    std::vector<Expr> updates;
    for (std::size_t j = 0; j < net.size(); ++j) {
        nodes.push_back(net.nodes()[j]);
        updates.push_back(rename(net.updates()[j], [&](const VarRef& v) {
            return v.delay == 0 ? v : VarRef{line_name.at({v.node, v.delay}), 0};
        }));
    }
    for (std::size_t k = net.size(); k < indices.size(); ++k) {
        const StateIndex& s = indices[k];
        nodes.push_back({s.name, net.domain(s.node)});
        const std::string prev = s.depth == 1 ? s.node : line_name.at({s.node, s.depth - 1});
        updates.push_back(Expr::variable(prev));
    }
    return {Network(net.name() + "_dedelayed", std::move(nodes), std::move(updates)), std::move(indices)};
}

Network undelay(const Network& net) {
    std::vector<Expr> updates;
    for (const auto& u : net.updates()) {
        updates.push_back(normalize(rename(u, [](const VarRef& v) { return VarRef{v.node, 0}; })));
    }
    std::optional<CohenGrossbergTag> tag = net.cohen_grossberg();
    return Network(net.name(), net.nodes(), std::move(updates), std::move(tag));
}

Network shift_delay(const Network& net, const std::string& target, const std::string& source, int tau) {
    if (tau < 1) {
        throw DomainError("shift_delay needs a delay of at least 1, got " + std::to_string(tau));
    }
    const std::size_t j = net.index_of(target);
    (void)net.index_of(source);
    const VarRef from{source, tau};
    if (!references(net.updates()[j], from)) {
        throw DomainError("update of " + target + " does not read " + source + "[-" + std::to_string(tau) + "]");
    }
    std::vector<Expr> updates = net.updates();
    updates[j] = normalize(rename(updates[j], [&](const VarRef& v) { return v == from ? VarRef{source, tau - 1} : v; }));
    return Network(net.name(), net.nodes(), std::move(updates), net.cohen_grossberg());
}

} // namespace netstab
