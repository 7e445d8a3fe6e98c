#include "netstab/structural.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "netstab/error.hpp"

namespace netstab {

namespace {

std::vector<bool> membership(const InteractionGraph& g, const VertexSet& s) {
    std::vector<bool> in(g.size(), false);
    for (const auto& id : s) {
        in[g.index_of(id)] = true;
    }
    return in;
}

// Kahn's algorithm on the subgraph induced by vertices outside S. Returns
// the topological order, or nothing if that subgraph has a cycle.
std::optional<std::vector<std::size_t>> outside_order(const InteractionGraph& g, const std::vector<bool>& in_s) {
    std::vector<std::size_t> indeg(g.size(), 0);
    std::size_t outside = 0;
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (in_s[v]) {
            continue;
        }
        ++outside;
        for (std::size_t p : g.predecessors(v)) {
            if (!in_s[p]) {
                ++indeg[v];
            }
        }
    }
    std::vector<std::size_t> order;
    std::vector<std::size_t> ready;
    for (std::size_t v = g.size(); v-- > 0;) {
        if (!in_s[v] && indeg[v] == 0) {
            ready.push_back(v);
        }
    }
    while (!ready.empty()) {
        const std::size_t v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (std::size_t w : g.successors(v)) {
            if (!in_s[w] && --indeg[w] == 0) {
                ready.push_back(w);
            }
        }
    }
    if (order.size() != outside) {
        return std::nullopt;
    }
    return order;
}

// Vertices outside S that lie on no branch, assuming the outside is acyclic.
std::vector<std::size_t> uncovered(const InteractionGraph& g, const std::vector<bool>& in_s) {
    // With the outside acyclic, a vertex lies on a branch iff S reaches it and
    // it reaches S through outside vertices; the two halves cannot share a
    // vertex without closing an outside cycle.
    auto sweep = [&](bool forward) {
        std::vector<bool> seen(g.size(), false);
        std::vector<std::size_t> todo;
        for (std::size_t v = 0; v < g.size(); ++v) {
            if (!in_s[v]) {
                continue;
            }
            for (std::size_t w : forward ? g.successors(v) : g.predecessors(v)) {
                if (!in_s[w] && !seen[w]) {
                    seen[w] = true;
                    todo.push_back(w);
                }
            }
        }
        while (!todo.empty()) {
            const std::size_t v = todo.back();
            todo.pop_back();
            for (std::size_t w : forward ? g.successors(v) : g.predecessors(v)) {
                if (!in_s[w] && !seen[w]) {
                    seen[w] = true;
                    todo.push_back(w);
                }
            }
        }
        return seen;
    };
    const auto from_s = sweep(true);
    const auto to_s = sweep(false);
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (!in_s[v] && !(from_s[v] && to_s[v])) {
            out.push_back(v);
        }
    }
    return out;
}

bool complete_given(const InteractionGraph& g, const std::vector<bool>& in_s) {
    return outside_order(g, in_s).has_value() && uncovered(g, in_s).empty();
}

bool basic_given(const InteractionGraph& g, const std::vector<bool>& in_s) {
    const auto order = outside_order(g, in_s);
    if (!order || !complete_given(g, in_s)) {
        return false;
    }
    // paths[v]: number (capped at 2) of walks from the current source through
    // outside vertices ending at v.
    std::vector<int> paths(g.size());
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (!in_s[s]) {
            continue;
        }
        std::fill(paths.begin(), paths.end(), 0);
        for (std::size_t w : g.successors(s)) {
            if (!in_s[w]) {
                paths[w] = 1;
            }
        }
        for (std::size_t v : *order) {
            if (paths[v] == 0) {
                continue;
            }
            for (std::size_t w : g.successors(v)) {
                if (!in_s[w]) {
                    paths[w] = std::min(2, paths[w] + paths[v]);
                }
            }
        }
        for (std::size_t t = 0; t < g.size(); ++t) {
            if (!in_s[t]) {
                continue;
            }
            int count = g.has_edge(s, t) ? 1 : 0;
            for (std::size_t p : g.predecessors(t)) {
                if (!in_s[p]) {
                    count += paths[p];
                }
            }
            if (count > 1) {
                return false;
            }
        }
    }
    return true;
}

VertexSet to_set(const InteractionGraph& g, const std::vector<bool>& in_s) {
    VertexSet s;
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (in_s[v]) {
            s.insert(g.vertices()[v]);
        }
    }
    return s;
}

} // namespace

std::vector<Branch> branch_set(const InteractionGraph& g, const VertexSet& s, std::size_t cap) {
    const auto in_s = membership(g, s);
    std::vector<std::vector<std::size_t>> found;
    std::vector<std::size_t> path;
    std::vector<bool> on_path(g.size(), false);
    std::function<void(std::size_t)> extend = [&](std::size_t v) {
        for (std::size_t w : g.successors(v)) {
            if (in_s[w]) {
                path.push_back(w);
                found.push_back(path);
                path.pop_back();
                if (found.size() > cap) {
                    throw DomainError("branch set exceeds " + std::to_string(cap) + " branches");
                }
            } else if (!on_path[w]) {
                on_path[w] = true;
                path.push_back(w);
                extend(w);
                path.pop_back();
                on_path[w] = false;
            }
        }
    };
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (in_s[v]) {
            path = {v};
            extend(v);
        }
    }
    std::sort(found.begin(), found.end());
    std::vector<Branch> out;
    out.reserve(found.size());
    for (const auto& p : found) {
        Branch b;
        for (std::size_t v : p) {
            b.push_back(g.vertices()[v]);
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<Branch> admissible_sequences(const InteractionGraph& g, const VertexSet& s, std::size_t cap) {
    std::vector<Branch> out;
    for (auto& b : branch_set(g, s, cap)) {
        if (b.size() > 2) {
            out.push_back(std::move(b));
        }
    }
    return out;
}

bool is_complete_structural(const InteractionGraph& g, const VertexSet& s) {
    return complete_given(g, membership(g, s));
}

bool is_basic_structural(const InteractionGraph& g, const VertexSet& s) { return basic_given(g, membership(g, s)); }

StructuralSetReport structural_report(const InteractionGraph& g, const VertexSet& s) {
    StructuralSetReport r;
    r.set = s;
    const auto in_s = membership(g, s);
    r.complete = complete_given(g, in_s);
    r.basic = r.complete && basic_given(g, in_s);
    r.branches = branch_set(g, s);
    for (const auto& b : r.branches) {
        if (b.size() > 2) {
            r.admissible.push_back(b);
        }
    }
    return r;
}

std::vector<StructuralSetReport> find_structural_sets(const InteractionGraph& g, bool want_basic,
                                                      std::size_t max_results) {
    const std::size_t n = g.size();
    std::vector<std::vector<bool>> chosen;
    auto accept = [&](const std::vector<bool>& in_s) {
        return want_basic ? basic_given(g, in_s) : complete_given(g, in_s);
    };
    if (n <= kExhaustiveLimit) {
        std::vector<bool> in_s(n);
        for (std::size_t k = 0; k <= n && chosen.size() < max_results; ++k) {
            // Lexicographic combinations of k positions.
            std::vector<std::size_t> pick(k);
            for (std::size_t i = 0; i < k; ++i) {
                pick[i] = i;
            }
            for (;;) {
                std::fill(in_s.begin(), in_s.end(), false);
                for (std::size_t p : pick) {
                    in_s[p] = true;
                }
                if (accept(in_s)) {
                    chosen.push_back(in_s);
                    if (chosen.size() >= max_results) {
                        break;
                    }
                }
                std::size_t i = k;
                while (i > 0 && pick[i - 1] == n - k + i - 1) {
                    --i;
                }
                if (i == 0) {
                    break;
                }
                ++pick[i - 1];
                for (std::size_t t = i; t < k; ++t) {
                    pick[t] = pick[t - 1] + 1;
                }
            }
        }
    } else if (max_results > 0) {
        std::vector<bool> in_s(n, false);
        // Greedy feedback vertex set: peel sources/sinks, then take the vertex
        // with the largest in*out degree inside the remaining core.
        for (;;) {
            std::vector<bool> alive(n);
            for (std::size_t v = 0; v < n; ++v) {
                alive[v] = !in_s[v];
            }
            bool changed = true;
            while (changed) {
                changed = false;
                for (std::size_t v = 0; v < n; ++v) {
                    if (!alive[v]) {
                        continue;
                    }
                    std::size_t in = 0;
                    std::size_t out = 0;
                    for (std::size_t p : g.predecessors(v)) {
                        in += alive[p] ? 1 : 0;
                    }
                    for (std::size_t w : g.successors(v)) {
                        out += alive[w] ? 1 : 0;
                    }
                    if (in == 0 || out == 0) {
                        alive[v] = false;
                        changed = true;
                    }
                }
            }
            std::size_t best = n;
            std::size_t best_score = 0;
            for (std::size_t v = 0; v < n; ++v) {
                if (!alive[v]) {
                    continue;
                }
                if (g.has_edge(v, v)) {
                    best = v;
                    break;
                }
                std::size_t in = 0;
                std::size_t out = 0;
                for (std::size_t p : g.predecessors(v)) {
                    in += alive[p] ? 1 : 0;
                }
                for (std::size_t w : g.successors(v)) {
                    out += alive[w] ? 1 : 0;
                }
                if (best == n || in * out > best_score) {
                    best = v;
                    best_score = in * out;
                }
            }
            if (best == n) {
                break;
            }
            in_s[best] = true;
        }
        // Vertices on no branch join S.
        for (std::size_t v : uncovered(g, in_s)) {
            in_s[v] = true;
        }
        if (want_basic) {
            for (std::size_t v = 0; v < n && !basic_given(g, in_s); ++v) {
                in_s[v] = true;
            }
        }
        if (accept(in_s)) {
            chosen.push_back(in_s);
        }
    }
    std::sort(chosen.begin(), chosen.end(), [&](const auto& a, const auto& b) {
        const auto ca = std::count(a.begin(), a.end(), true);
        const auto cb = std::count(b.begin(), b.end(), true);
        if (ca != cb) {
            return ca < cb;
        }
        std::vector<std::size_t> pa;
        std::vector<std::size_t> pb;
        for (std::size_t v = 0; v < a.size(); ++v) {
            if (a[v]) pa.push_back(v);
            if (b[v]) pb.push_back(v);
        }
        return pa < pb;
    });
    std::vector<StructuralSetReport> out;
    for (const auto& in_s : chosen) {
        out.push_back(structural_report(g, to_set(g, in_s)));
    }
    return out;
}

VertexSet parse_vertex_set(const std::string& text, const InteractionGraph& g) {
    VertexSet s;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) {
            continue;
        }
        (void)g.index_of(item);
        s.insert(item);
    }
    return s;
}

} // namespace netstab
