#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netstab/expr.hpp"
#include "netstab/interval.hpp"

namespace netstab {

struct NodeDecl {
    std::string id;
    Interval domain = Interval::whole();
};

/// Closed-form data kept for networks built by make_cohen_grossberg, so that
/// analyze can report |1 - epsilon| + L * rho(|W|) next to the assembled bound.
struct CohenGrossbergTag {
    std::vector<std::vector<double>> weights;
    double epsilon = 0.0;
    double lipschitz = 0.0;
};

inline constexpr int kDefaultDelayCap = 64;

/// A (possibly time-delayed) network: one update expression per node. The
/// horizon T is 1 + the largest delay read anywhere.
class Network {
public:
    Network() = default;
    Network(std::string name, std::vector<NodeDecl> nodes, std::vector<Expr> updates,
            std::optional<CohenGrossbergTag> tag = std::nullopt, int delay_cap = kDefaultDelayCap);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const std::vector<NodeDecl>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<Expr>& updates() const noexcept { return updates_; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] int horizon() const noexcept { return horizon_; }
    [[nodiscard]] bool undelayed() const noexcept { return horizon_ == 1; }

    [[nodiscard]] std::optional<std::size_t> find(std::string_view id) const;
    /// Throws DomainError for an unknown id.
    [[nodiscard]] std::size_t index_of(std::string_view id) const;
    [[nodiscard]] const Expr& update(std::string_view id) const { return updates_[index_of(id)]; }
    [[nodiscard]] const Interval& domain(std::string_view id) const { return nodes_[index_of(id)].domain; }
    [[nodiscard]] std::vector<std::string> ids() const;

    [[nodiscard]] const std::optional<CohenGrossbergTag>& cohen_grossberg() const noexcept { return tag_; }

    friend bool operator==(const Network& a, const Network& b);

private:
    std::string name_;
    std::vector<NodeDecl> nodes_;
    std::vector<Expr> updates_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::optional<CohenGrossbergTag> tag_;
    int horizon_ = 1;
};

struct Rule {
    std::string id;
    std::string text;
};

/// Parses each rule against the declared ids and normalizes it, which drops
/// terms multiplied by a literal zero.
Network build_network(std::string name, const std::vector<NodeDecl>& decls, const std::vector<Rule>& rules,
                      int delay_cap = kDefaultDelayCap);

/// Network file text:
///   network <name>
///   node <id> domain [<lo>,<hi>]
///   update <id> = <expression>
/// `#` starts a comment. Errors carry the 1-based line number.
Network parse_network(std::string_view text, int delay_cap = kDefaultDelayCap);
Network load_network(const std::string& path, int delay_cap = kDefaultDelayCap);
std::string serialize(const Network& net);
void save_network(const Network& net, const std::string& path);

[[nodiscard]] bool is_valid_identifier(std::string_view id);

enum class Activation { Tanh, Linear };

struct CohenGrossbergParams {
    std::vector<std::vector<double>> weights;      ///< weights[i][j]: influence of node i on node j
    double epsilon = 0.0;
    Activation activation = Activation::Tanh;      ///< tanh(b x) or b x
    double gain = 1.0;                             ///< b
    std::vector<double> inputs;                    ///< c_j, empty means all zero
    std::vector<std::vector<int>> delays;          ///< tau[i][j], empty means all zero
    std::vector<int> self_delays;                  ///< delay of the leak term, empty means all zero
    std::string name = "cohen_grossberg";
};

/// Node j updates to (1 - eps) x_j[-s_j] + sum_i W_ij phi(x_i[-tau_ij]) + c_j
/// over nodes x1..xn with unbounded domains.
Network make_cohen_grossberg(const CohenGrossbergParams& p);

/// Dependency digraph: edge (i, j) when the update of j reads node i.
class InteractionGraph {
public:
    InteractionGraph() = default;
    InteractionGraph(std::vector<std::string> vertices, std::map<std::pair<std::size_t, std::size_t>, std::set<int>> edges);

    [[nodiscard]] const std::vector<std::string>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }
    /// Keyed by (source, target) vertex index; values are the delays read.
    [[nodiscard]] const std::map<std::pair<std::size_t, std::size_t>, std::set<int>>& edges() const noexcept {
        return edges_;
    }
    [[nodiscard]] bool has_edge(std::size_t source, std::size_t target) const {
        return edges_.count({source, target}) != 0;
    }
    [[nodiscard]] const std::vector<std::size_t>& successors(std::size_t v) const { return succ_[v]; }
    [[nodiscard]] const std::vector<std::size_t>& predecessors(std::size_t v) const { return pred_[v]; }
    [[nodiscard]] std::optional<std::size_t> find(std::string_view id) const;
    [[nodiscard]] std::size_t index_of(std::string_view id) const;

private:
    std::vector<std::string> vertices_;
    std::map<std::pair<std::size_t, std::size_t>, std::set<int>> edges_;
    std::vector<std::vector<std::size_t>> succ_;
    std::vector<std::vector<std::size_t>> pred_;
};

InteractionGraph interaction_graph(const Network& net);

/// True when no update reads the same source at two different delays.
[[nodiscard]] bool is_non_distributed(const Network& net);

/// Largest delay at which each node is read anywhere (0 if never delayed).
std::map<std::string, int> max_delay_profile(const Network& net);

} // namespace netstab
