#include "netstab/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "netstab/error.hpp"

namespace netstab {

namespace {

const std::set<std::string, std::less<>>& reserved_names() {
    static const std::set<std::string, std::less<>> names = {"tanh", "sech", "exp", "sin", "cos", "abs"};
    return names;
}

std::string format_bound(double v) {
    if (v == Interval::inf) {
        return "inf";
    }
    if (v == -Interval::inf) {
        return "-inf";
    }
    char buf[40];
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

double parse_bound(const std::string& text, std::size_t line) {
    const std::string t = trim(text);
    if (t == "inf" || t == "+inf") {
        return Interval::inf;
    }
    if (t == "-inf") {
        return -Interval::inf;
    }
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t[0] == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ParseError("line " + std::to_string(line) + ": bad domain bound '" + t + "'", 0, line);
    }
    return v;
}

} // namespace

bool is_valid_identifier(std::string_view id) {
    if (id.empty() || !(std::isalpha(static_cast<unsigned char>(id[0])) || id[0] == '_')) {
        return false;
    }
    for (char c : id) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) {
            return false;
        }
    }
    return reserved_names().count(id) == 0;
}

Network::Network(std::string name, std::vector<NodeDecl> nodes, std::vector<Expr> updates,
                 std::optional<CohenGrossbergTag> tag, int delay_cap)
    : name_(std::move(name)), nodes_(std::move(nodes)), updates_(std::move(updates)), tag_(std::move(tag)) {
    if (nodes_.size() != updates_.size()) {
        throw DomainError("network '" + name_ + "': " + std::to_string(nodes_.size()) + " nodes but " +
                          std::to_string(updates_.size()) + " updates");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!is_valid_identifier(nodes_[i].id)) {
            throw DomainError("invalid node id '" + nodes_[i].id + "'");
        }
        if (!index_.emplace(nodes_[i].id, i).second) {
            throw DomainError("duplicate node '" + nodes_[i].id + "'");
        }
    }
    int max_delay = 0;
    for (std::size_t j = 0; j < updates_.size(); ++j) {
        for (const VarRef& v : variables(updates_[j])) {
            if (index_.count(v.node) == 0) {
                throw DomainError("update of " + nodes_[j].id + " reads undeclared node '" + v.node + "'");
            }
            if (v.delay > delay_cap) {
                throw DomainError("update of " + nodes_[j].id + " reads " + v.node + "[-" + std::to_string(v.delay) +
                                  "], beyond the delay cap " + std::to_string(delay_cap));
            }
            max_delay = std::max(max_delay, v.delay);
        }
    }
    horizon_ = max_delay + 1;
}

std::optional<std::size_t> Network::find(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t Network::index_of(std::string_view id) const {
    if (auto i = find(id)) {
        return *i;
    }
    throw DomainError("unknown node '" + std::string(id) + "'");
}

std::vector<std::string> Network::ids() const {
    std::vector<std::string> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) {
        out.push_back(n.id);
    }
    return out;
}

bool operator==(const Network& a, const Network& b) {
    if (a.nodes_.size() != b.nodes_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
        if (a.nodes_[i].id != b.nodes_[i].id || !(a.nodes_[i].domain == b.nodes_[i].domain) ||
            a.updates_[i] != b.updates_[i]) {
            return false;
        }
    }
    return true;
}

Network build_network(std::string name, const std::vector<NodeDecl>& decls, const std::vector<Rule>& rules,
                      int delay_cap) {
    std::set<std::string> declared;
    for (const auto& d : decls) {
        if (!declared.insert(d.id).second) {
            throw DomainError("duplicate node '" + d.id + "'");
        }
    }
    std::map<std::string, Expr> parsed;
    for (const auto& r : rules) {
        if (declared.count(r.id) == 0) {
            throw DomainError("rule for undeclared node '" + r.id + "'");
        }
        if (parsed.count(r.id) != 0) {
            throw DomainError("duplicate rule for node '" + r.id + "'");
        }
        try {
            parsed.emplace(r.id, normalize(parse_expression(r.text, declared)));
        } catch (const ParseError& e) {
            throw ParseError("rule for " + r.id + ": " + e.what(), e.position(), e.line());
        }
    }
    std::vector<Expr> updates;
    updates.reserve(decls.size());
    for (const auto& d : decls) {
        auto it = parsed.find(d.id);
        if (it == parsed.end()) {
            throw DomainError("missing rule for node '" + d.id + "'");
        }
        updates.push_back(it->second);
    }
    return Network(std::move(name), decls, std::move(updates), std::nullopt, delay_cap);
}

Network parse_network(std::string_view text, int delay_cap) {
    std::string name;
    std::vector<NodeDecl> decls;
    std::vector<Rule> rules;
    std::vector<std::size_t> rule_lines;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("line " + std::to_string(lineno) + ": " + msg, 0, lineno);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        std::istringstream words(line);
        std::string keyword;
        words >> keyword;
        if (keyword == "network") {
            if (!name.empty()) {
                fail("second 'network' header");
            }
            words >> name;
            std::string extra;
            if (name.empty() || (words >> extra)) {
                fail("expected 'network <name>'");
            }
        } else if (keyword == "node") {
            std::string id;
            std::string kw;
            words >> id >> kw;
            if (id.empty() || kw != "domain") {
                fail("expected 'node <id> domain [<lo>,<hi>]'");
            }
            std::string rest;
            std::getline(words, rest);
            rest = trim(rest);
            if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']') {
                fail("domain must be written [<lo>,<hi>]");
            }
            const std::string body = rest.substr(1, rest.size() - 2);
            const auto comma = body.find(',');
            if (comma == std::string::npos) {
                fail("domain must be written [<lo>,<hi>]");
            }
            const double lo = parse_bound(body.substr(0, comma), lineno);
            const double hi = parse_bound(body.substr(comma + 1), lineno);
            if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == Interval::inf || hi == -Interval::inf) {
                fail("empty or degenerate domain for " + id);
            }
            if (!is_valid_identifier(id)) {
                fail("invalid node id '" + id + "'");
            }
            decls.push_back({id, Interval(lo, hi)});
        } else if (keyword == "update") {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                fail("expected 'update <id> = <expression>'");
            }
            const std::string id = trim(std::string_view(line).substr(6, eq - 6));
            if (id.empty()) {
                fail("expected 'update <id> = <expression>'");
            }
            rules.push_back({id, line.substr(eq + 1)});
            rule_lines.push_back(lineno);
        } else {
            fail("unknown keyword '" + keyword + "'");
        }
    }
    if (name.empty()) {
        throw ParseError("missing 'network <name>' header", 0, 0);
    }
    // Re-run rules individually so errors report their own line.
    std::set<std::string> declared;
    for (const auto& d : decls) {
        declared.insert(d.id);
    }
    for (std::size_t k = 0; k < rules.size(); ++k) {
        try {
            (void)parse_expression(rules[k].text, declared);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(rule_lines[k]) + ": update " + rules[k].id + ": " + e.what(),
                             e.position(), rule_lines[k]);
        }
    }
    return build_network(name, decls, rules, delay_cap);
}

Network load_network(const std::string& path, int delay_cap) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot read network file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str(), delay_cap);
}

std::string serialize(const Network& net) {
    std::string out = "network " + (net.name().empty() ? std::string("unnamed") : net.name()) + "\n";
    for (const auto& n : net.nodes()) {
        out += "node " + n.id + " domain [" + format_bound(n.domain.lo()) + "," + format_bound(n.domain.hi()) + "]\n";
    }
    for (std::size_t j = 0; j < net.size(); ++j) {
        out += "update " + net.nodes()[j].id + " = " + to_string(net.updates()[j]) + "\n";
    }
    return out;
}

void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DomainError("cannot write network file '" + path + "'");
    }
    out << serialize(net);
}

Network make_cohen_grossberg(const CohenGrossbergParams& p) {
    const std::size_t n = p.weights.size();
    for (const auto& row : p.weights) {
        if (row.size() != n) {
            throw DomainError("weight matrix must be square");
        }
    }
    if (!p.inputs.empty() && p.inputs.size() != n) {
        throw DomainError("input vector has the wrong length");
    }
    if (!p.delays.empty()) {
        if (p.delays.size() != n) {
            throw DomainError("delay matrix has the wrong shape");
        }
        for (const auto& row : p.delays) {
            if (row.size() != n) {
                throw DomainError("delay matrix has the wrong shape");
            }
        }
    }
    if (!p.self_delays.empty() && p.self_delays.size() != n) {
        throw DomainError("self-delay vector has the wrong length");
    }
    std::vector<NodeDecl> nodes;
    for (std::size_t j = 0; j < n; ++j) {
        nodes.push_back({"x" + std::to_string(j + 1), Interval::whole()});
    }
    auto activation = [&](const Expr& x) {
        Expr inner = p.gain == 1.0 ? x : Expr::constant(p.gain) * x;
        return p.activation == Activation::Tanh ? tanh(inner) : inner;
    };
    std::vector<Expr> updates;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Expr> terms;
        const double leak = 1.0 - p.epsilon;
        if (leak != 0.0) {
            const int s = p.self_delays.empty() ? 0 : p.self_delays[j];
            terms.push_back(Expr::constant(leak) * Expr::variable(nodes[j].id, s));
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double w = p.weights[i][j];
            if (w == 0.0) {
                continue;
            }
            const int tau = p.delays.empty() ? 0 : p.delays[i][j];
            terms.push_back(Expr::constant(w) * activation(Expr::variable(nodes[i].id, tau)));
        }
        if (!p.inputs.empty() && p.inputs[j] != 0.0) {
            terms.push_back(Expr::constant(p.inputs[j]));
        }
        Expr sum = terms.empty() ? Expr::constant(0.0) : terms.front();
        for (std::size_t k = 1; k < terms.size(); ++k) {
            sum = sum + terms[k];
        }
        updates.push_back(normalize(sum));
    }
    CohenGrossbergTag tag{p.weights, p.epsilon, std::fabs(p.gain)};
    return Network(p.name, std::move(nodes), std::move(updates), std::move(tag));
}

InteractionGraph::InteractionGraph(std::vector<std::string> vertices,
                                   std::map<std::pair<std::size_t, std::size_t>, std::set<int>> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), succ_(vertices_.size()), pred_(vertices_.size()) {
    for (const auto& [e, delays] : edges_) {
        if (e.first >= vertices_.size() || e.second >= vertices_.size() || delays.empty()) {
            throw DomainError("malformed interaction graph edge");
        }
        succ_[e.first].push_back(e.second);
        pred_[e.second].push_back(e.first);
    }
    for (auto& s : succ_) {
        std::sort(s.begin(), s.end());
    }
    for (auto& p : pred_) {
        std::sort(p.begin(), p.end());
    }
}

std::optional<std::size_t> InteractionGraph::find(std::string_view id) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i] == id) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t InteractionGraph::index_of(std::string_view id) const {
    if (auto i = find(id)) {
        return *i;
    }
    throw DomainError("unknown vertex '" + std::string(id) + "'");
}

InteractionGraph interaction_graph(const Network& net) {
    std::map<std::pair<std::size_t, std::size_t>, std::set<int>> edges;
    for (std::size_t j = 0; j < net.size(); ++j) {
        for (const VarRef& v : variables(net.updates()[j])) {
            edges[{net.index_of(v.node), j}].insert(v.delay);
        }
    }
    return InteractionGraph(net.ids(), std::move(edges));
}

bool is_non_distributed(const Network& net) {
    const InteractionGraph g = interaction_graph(net);
    for (const auto& [edge, delays] : g.edges()) {
        if (delays.size() > 1) {
            return false;
        }
    }
    return true;
}

std::map<std::string, int> max_delay_profile(const Network& net) {
    std::map<std::string, int> profile;
    for (const auto& n : net.nodes()) {
        profile[n.id] = 0;
    }
    for (const auto& u : net.updates()) {
        for (const VarRef& v : variables(u)) {
            profile[v.node] = std::max(profile[v.node], v.delay);
        }
    }
    return profile;
}

} // namespace netstab
