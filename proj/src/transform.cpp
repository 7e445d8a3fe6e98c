#include "netstab/transform.hpp"

#include <functional>
#include <map>

#include "netstab/error.hpp"

namespace netstab {

namespace {

void require_structural(const Network& net, const InteractionGraph& g, const VertexSet& s, const char* what) {
    if (!net.undelayed()) {
        throw DomainError(std::string(what) + " needs an undelayed network; undelay it first");
    }
    for (const auto& v : s) {
        (void)net.index_of(v);
    }
    if (!is_complete_structural(g, s)) {
        std::string list;
        for (const auto& v : s) {
            list += (list.empty() ? "" : ",") + v;
        }
        throw DomainError(std::string(what) + ": {" + list + "} is not a complete structural set");
    }
}

std::vector<NodeDecl> restricted_nodes(const Network& net, const VertexSet& s) {
    std::vector<NodeDecl> nodes;
    for (const auto& n : net.nodes()) {
        if (s.count(n.id) != 0) {
            nodes.push_back(n);
        }
    }
    return nodes;
}

// Inlines the update of `node` as seen along `trail` = (node, ..., target).
// Every read of an S vertex u becomes leaf({u} + trail).
Expr inline_along(const Network& net, const VertexSet& s, const std::string& node, std::vector<std::string>& trail,
                  const std::function<Expr(const std::vector<std::string>&, const VarRef&)>& leaf) {
    return substitute(net.update(node), [&](const VarRef& v) -> std::optional<Expr> {
        trail.insert(trail.begin(), v.node);
        Expr out;
        if (s.count(v.node) != 0) {
            out = leaf(trail, v);
        } else {
            out = inline_along(net, s, v.node, trail, leaf);
        }
        trail.erase(trail.begin());
        return out;
    });
}

} // namespace

Network restrict_to(const Network& net, const VertexSet& s) {
    const InteractionGraph g = interaction_graph(net);
    require_structural(net, g, s, "restrict");
    std::map<std::string, Expr> memo;
    std::function<Expr(const std::string&)> resolved = [&](const std::string& node) -> Expr {
        if (auto it = memo.find(node); it != memo.end()) {
            return it->second;
        }
        Expr e = substitute(net.update(node), [&](const VarRef& v) -> std::optional<Expr> {
            if (s.count(v.node) != 0) {
                return std::nullopt;
            }
            return resolved(v.node);
        });
        memo.emplace(node, e);
        return e;
    };
    std::vector<Expr> updates;
    for (const auto& n : net.nodes()) {
        if (s.count(n.id) != 0) {
            updates.push_back(normalize(resolved(n.id)));
        }
    }
    return Network(net.name() + "_restricted", restricted_nodes(net, s), std::move(updates));
}

AugmentedNetwork expand(const Network& net, const VertexSet& s) {
    const InteractionGraph g = interaction_graph(net);
    require_structural(net, g, s, "expand");

    std::vector<StateIndex> indices;
    std::vector<NodeDecl> nodes;
    std::set<std::string> taken;
    for (const auto& n : net.nodes()) {
        taken.insert(n.id);
    }
    for (const auto& n : net.nodes()) {
        if (s.count(n.id) != 0) {
            indices.push_back(StateIndex::base(n.id));
            nodes.push_back(n);
        }
    }
    // coordinate[(sequence, position)] -> coordinate id
    std::map<std::pair<Branch, int>, std::string> coordinate;
    std::vector<Expr> chain_updates;
    for (const Branch& gamma : admissible_sequences(g, s)) {
        std::string prev = gamma.front();
        for (int pos = 2; pos <= static_cast<int>(gamma.size()) - 1; ++pos) {
            StateIndex idx = StateIndex::chain(gamma, pos);
            idx.name = unique_name(idx.name, taken);
            taken.insert(idx.name);
            coordinate[{gamma, pos}] = idx.name;
            nodes.push_back({idx.name, net.domain(gamma.front())});
            chain_updates.push_back(Expr::variable(prev));
            prev = idx.name;
            indices.push_back(std::move(idx));
        }
    }

    std::vector<Expr> updates;
    for (const auto& n : net.nodes()) {
        if (s.count(n.id) == 0) {
            continue;
        }
        std::vector<std::string> trail{n.id};
        updates.push_back(normalize(inline_along(
            net, s, n.id, trail, [&](const std::vector<std::string>& gamma, const VarRef& v) {
                if (gamma.size() == 2) {
                    return Expr::variable(v.node);
                }
                const auto it = coordinate.find({gamma, static_cast<int>(gamma.size()) - 1});
                if (it == coordinate.end()) {
                    throw DomainError("inlined path is not an admissible sequence");
                }
                return Expr::variable(it->second);
            })));
    }
    updates.insert(updates.end(), chain_updates.begin(), chain_updates.end());
    return {Network(net.name() + "_expanded", std::move(nodes), std::move(updates)), std::move(indices)};
}

Network delayed_expansion(const Network& net, const VertexSet& s) {
    const InteractionGraph g = interaction_graph(net);
    require_structural(net, g, s, "delayed_expansion");
    std::vector<Expr> updates;
    for (const auto& n : net.nodes()) {
        if (s.count(n.id) == 0) {
            continue;
        }
        std::vector<std::string> trail{n.id};
        updates.push_back(normalize(
            inline_along(net, s, n.id, trail, [](const std::vector<std::string>& gamma, const VarRef& v) {
                return Expr::variable(v.node, static_cast<int>(gamma.size()) - 2);
            })));
    }
    return Network(net.name() + "_delayed_expansion", restricted_nodes(net, s), std::move(updates));
}

} // namespace netstab
