#include "netstab/stability.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <algorithm>
#include <map>

#include "json.hpp"
#include "netstab/error.hpp"

namespace netstab {

namespace {

AugmentedNetwork as_augmented(const Network& net) {
    if (!net.undelayed()) {
        return dedelay(net);
    }
    std::vector<StateIndex> indices;
    for (const auto& n : net.nodes()) {
        indices.push_back(StateIndex::base(n.id));
    }
    return {net, std::move(indices)};
}


using Box = std::function<Interval(const VarRef&)>;

bool mentions(const Expr& e, const VarRef& v) {
    switch (e.op()) {
    case Op::Const:
        return false;
    case Op::Var:
        return e.var() == v;
    default:
        return is_unary(e.op()) ? mentions(e.arg(), v) : mentions(e.lhs(), v) || mentions(e.rhs(), v);
    }
}

Expr replace_subtree(const Expr& e, const Expr& target, const Expr& with) {
    if (e.size() < target.size()) {
        return e;
    }
    if (e.size() == target.size() && e == target) {
        return with;
    }
    if (is_unary(e.op())) {
        Expr a = replace_subtree(e.arg(), target, with);
        return a.identity() == e.arg().identity() ? e : Expr::unary(e.op(), std::move(a));
    }
    if (is_binary(e.op())) {
        Expr l = replace_subtree(e.lhs(), target, with);
        Expr r = replace_subtree(e.rhs(), target, with);
        if (l.identity() == e.lhs().identity() && r.identity() == e.rhs().identity()) {
            return e;
        }
        return Expr::binary(e.op(), std::move(l), std::move(r));
    }
    return e;
}

void count_copies(const Expr& e, const VarRef& v, std::map<Expr, int>& counts) {
    if (!mentions(e, v)) {
        return;
    }
    ++counts[e];
    if (is_unary(e.op())) {
        count_copies(e.arg(), v, counts);
    } else if (is_binary(e.op())) {
        count_copies(e.lhs(), v, counts);
        count_copies(e.rhs(), v, counts);
    }
}

double direct_bound(const Expr& e, const VarRef& v, const Box& box) {
    try {
        return eval_interval(differentiate(e, v), box).mag();
    } catch (const EvalError&) {
        return std::numeric_limits<double>::infinity();
    }
}

double times(double a, double b) { return a == 0.0 || b == 0.0 ? 0.0 : a * b; }

// Chain-rule bound on sup |de/dv|. Subtrees G_k that contain `v` and occur
// more than once become placeholders g_k, giving e' with
//   |de/dv| <= sup |de'/dv| + sum_k sup |de'/dg_k| * sup |dG_k/dv|.
// Interval evaluation of the flat derivative bounds every copy of G_k on its
// own and so loses cancellation inside de'/dg_k; the grouped form keeps it.
double factored_bound(const Expr& e, const VarRef& v, const Box& box, int depth) {
    const double direct = direct_bound(e, v, box);
    constexpr std::size_t kMaxSize = 20000;
    if (depth > 48 || direct == 0.0 || e.size() > kMaxSize) {
        return direct;
    }
    std::map<Expr, int> counts;
    count_copies(e, v, counts);
    std::vector<Expr> repeated;
    for (const auto& [sub, n] : counts) {
        if (n > 1 && sub.op() != Op::Var) {
            repeated.push_back(sub);
        }
    }
    if (repeated.empty()) {
        // A single subtree wrapping every occurrence still splits the chain.
        for (const auto& [sub, n] : counts) {
            if (sub.op() != Op::Var && sub.size() < e.size() &&
                (repeated.empty() || sub.size() > repeated.front().size()) &&
                !mentions(replace_subtree(e, sub, Expr::variable("~")), v)) {
                repeated.assign(1, sub);
            }
        }
    }
    if (repeated.empty()) {
        return direct;
    }
    std::sort(repeated.begin(), repeated.end(), [](const Expr& x, const Expr& y) { return x.size() > y.size(); });

    Expr reduced = e;
    std::vector<std::pair<VarRef, Expr>> groups;
    std::map<VarRef, Interval> ranges;
    for (const Expr& sub : repeated) {
        const VarRef g{"~g" + std::to_string(depth) + "." + std::to_string(groups.size()), 0};
        Expr next = replace_subtree(reduced, sub, Expr::variable(g.node));
        if (next.identity() == reduced.identity()) {
            continue;
        }
        try {
            ranges[g] = eval_interval(sub, box);
        } catch (const EvalError&) {
            return direct;
        }
        reduced = std::move(next);
        groups.emplace_back(g, sub);
    }
    const Box outer_box = [&](const VarRef& w) {
        const auto it = ranges.find(w);
        return it == ranges.end() ? box(w) : it->second;
    };
    double total = mentions(reduced, v) ? factored_bound(reduced, v, outer_box, depth + 1) : 0.0;
    for (const auto& [g, sub] : groups) {
        if (!(total < direct)) {
            return direct;
        }
        const double outer = factored_bound(reduced, g, outer_box, depth + 1);
        if (outer != 0.0) {
            total += times(outer, factored_bound(sub, v, box, depth + 1));
        }
    }
    return std::min(direct, total);
}

} // namespace

StabilityAssembly assemble_stability(const Network& input) {
    const AugmentedNetwork aug = as_augmented(input);
    const Network& net = aug.network;
    const std::size_t n = net.size();
    Matrix m(n);
    std::vector<std::string> labels;
    for (const auto& s : aug.indices) {
        labels.push_back(s.name);
    }
    m.set_labels(labels);
    const Box box = [&](const VarRef& v) { return net.domain(v.node); };

    std::vector<EntryProvenance> provenance;
    for (std::size_t j = 0; j < n; ++j) {
        const Expr& f = net.updates()[j];
        for (const VarRef& v : variables(f)) {
            const std::size_t i = net.index_of(v.node);
            const Expr d = differentiate(f, v);
            Interval range;
            try {
                range = eval_interval(d, box);
            } catch (const EvalError& e) {
                throw DomainError("d(" + net.nodes()[j].id + ")/d(" + v.node + ") = " + to_string(d) + ": " +
                                  e.what());
            }
            double sup = range.mag();
            if (sup > 0.0) {
                sup = std::min(sup, factored_bound(f, v, box, 0));
            }
            if (!std::isfinite(sup)) {
                bool unbounded = false;
                for (const VarRef& w : variables(d)) {
                    unbounded = unbounded || !net.domain(w.node).bounded();
                }
                const std::string what = "sup |d(" + net.nodes()[j].id + ")/d(" + v.node + ")| is infinite for " +
                                         to_string(d);
                if (unbounded) {
                    throw UnboundedError(what + " over an unbounded domain");
                }
                throw OverflowError(what + " (overflow on a bounded domain)");
            }
            m(j, i) = sup;
            if (sup > 0.0) {
                provenance.push_back({j, i, net.nodes()[j].id, v.node, to_string(d), sup});
            }
        }
    }
    return {NonnegMatrix(std::move(m)), aug.indices, std::move(provenance)};
}

NonnegMatrix stability_matrix(const Network& net) { return assemble_stability(net).matrix; }

StabilityReport analyze(const Network& net, const SpectralOptions& opts) {
    StabilityReport r;
    r.network = net.name();
    r.assembly = assemble_stability(net);
    r.rho = spectral_radius(r.assembly.matrix, opts);
    r.stable = r.rho < 1.0 - kVerdictGuard;
    r.boundary = std::fabs(r.rho - 1.0) <= kVerdictGuard;
    if (const auto& tag = net.cohen_grossberg()) {
        Matrix w = Matrix::from_rows(tag->weights);
        CohenGrossbergCheck cg;
        cg.epsilon = tag->epsilon;
        cg.lipschitz = tag->lipschitz;
        cg.rho_abs_weights = w.size() == 0 ? 0.0 : spectral_radius(abs(w), opts);
        cg.value = std::fabs(1.0 - tag->epsilon) + tag->lipschitz * cg.rho_abs_weights;
        r.cohen_grossberg = cg;
    }
    return r;
}

std::string report_json(const StabilityReport& report) {
    using nlohmann::json;
    json j;
    j["schema"] = "netstab-report/1";
    j["network"] = report.network;
    json indices = json::array();
    for (const auto& s : report.assembly.indices) {
        json idx;
        idx["name"] = s.name;
        idx["node"] = s.node;
        idx["depth"] = s.depth;
        switch (s.kind) {
            case StateIndex::Kind::Base: idx["kind"] = "base"; break;
            case StateIndex::Kind::Line: idx["kind"] = "line"; break;
            case StateIndex::Kind::Chain:
                idx["kind"] = "chain";
                idx["sequence"] = s.sequence;
                break;
        }
        indices.push_back(idx);
    }
    j["indices"] = indices;
    j["matrix"] = report.assembly.matrix.matrix().rows();
    j["rho"] = report.rho;
    j["verdict"] = report.verdict();
    j["boundary"] = report.boundary;
    json prov = json::object();
    for (const auto& p : report.assembly.provenance) {
        prov[p.update + "," + p.variable] = {{"row", p.row}, {"col", p.col}, {"derivative", p.derivative},
                                             {"bound", p.bound}};
    }
    j["provenance"] = prov;
    if (report.cohen_grossberg) {
        const auto& cg = *report.cohen_grossberg;
        j["cohen_grossberg"] = {{"epsilon", cg.epsilon},
                                {"lipschitz", cg.lipschitz},
                                {"rho_abs_weights", cg.rho_abs_weights},
                                {"closed_form", cg.value},
                                {"stable", cg.value < 1.0 - kVerdictGuard}};
    } else {
        j["cohen_grossberg"] = nullptr;
    }
    return j.dump(2) + "\n";
}

Matrix jacobian_at_fixed_point(const Network& input, const std::vector<double>& fixed) {
    if (fixed.size() != input.size()) {
        throw DomainError("fixed point has " + std::to_string(fixed.size()) + " entries, network has " +
                          std::to_string(input.size()) + " nodes");
    }
    const AugmentedNetwork aug = as_augmented(input);
    const Network& net = aug.network;
    std::map<std::string, double> value;
    for (std::size_t k = 0; k < aug.indices.size(); ++k) {
        value[net.nodes()[k].id] = fixed[input.index_of(aug.indices[k].node)];
    }
    auto at = [&](const VarRef& v) { return value.at(v.node); };
    Matrix j(net.size());
    for (std::size_t r = 0; r < net.size(); ++r) {
        for (const VarRef& v : variables(net.updates()[r])) {
            j(r, net.index_of(v.node)) = eval_point(differentiate(net.updates()[r], v), at);
        }
    }
    std::vector<std::string> labels;
    for (const auto& s : aug.indices) {
        labels.push_back(s.name);
    }
    j.set_labels(std::move(labels));
    return j;
}

} // namespace netstab
