#include "netstab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "netstab/catalog.hpp"
#include "netstab/config.hpp"
#include "netstab/delays.hpp"
#include "netstab/error.hpp"
#include "netstab/sim.hpp"
#include "netstab/spectral.hpp"
#include "netstab/stability.hpp"
#include "netstab/transform.hpp"

namespace netstab {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw DomainError("cannot write '" + path + "'");
    }
    f << content;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file(path, content);
    }
}

std::string set_text(const VertexSet& s, const InteractionGraph& g) {
    std::vector<std::size_t> pos;
    for (const auto& v : s) {
        pos.push_back(g.index_of(v));
    }
    std::sort(pos.begin(), pos.end());
    std::string out = "{";
    for (std::size_t k = 0; k < pos.size(); ++k) {
        out += (k ? "," : "") + g.vertices()[pos[k]];
    }
    return out + "}";
}

SpectralOptions spectral_options() {
    SpectralOptions o;
    o.max_iterations = iteration_cap(o.max_iterations);
    return o;
}

} // namespace

std::string emit_dot(const InteractionGraph& g, const VertexSet* s, const std::string& name) {
    bool delayed = false;
    for (const auto& [e, delays] : g.edges()) {
        delayed = delayed || *delays.rbegin() > 0;
    }
    std::string out = "digraph " + quoted(name) + " {\n";
    for (const auto& v : g.vertices()) {
        out += "  " + quoted(v);
        if (s != nullptr && s->count(v) != 0) {
            out += " [shape=doublecircle, style=filled, fillcolor=lightgrey]";
        }
        out += ";\n";
    }
    for (const auto& [e, delays] : g.edges()) {
        out += "  " + quoted(g.vertices()[e.first]) + " -> " + quoted(g.vertices()[e.second]);
        if (delayed) {
            std::string label = "{";
            for (int d : delays) {
                label += (label.size() > 1 ? "," : "") + std::to_string(d);
            }
            out += " [label=" + quoted(label + "}") + "]";
        }
        out += ";\n";
    }
    return out + "}\n";
}

std::vector<RegressionResult> bundled_regressions() {
    std::vector<RegressionResult> rows;
    auto check = [&](std::string name, auto&& body) {
        RegressionResult r;
        r.name = std::move(name);
        try {
            std::tie(r.passed, r.detail) = body();
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        rows.push_back(std::move(r));
    };
    const SpectralOptions opts = spectral_options();

    check("ring rho(|W|) = 2|a|", [&] {
        const Network net = catalog::cohen_grossberg_ring(6, 0.5, 0.3, 0.2);
        const double w = analyze(net, opts).cohen_grossberg->rho_abs_weights;
        return std::pair{std::fabs(w - 0.6) <= 1e-10, "rho(|W|) = " + format("%.12g", w)};
    });
    check("delayed pair quartic", [&] {
        const double eps = 0.5;
        const double ab = 0.1;
        const double rho = analyze(catalog::delayed_pair(eps, 0.1, 1.0), opts).rho;
        const double p = std::fabs(1.0 - eps);
        const double r = std::pow(rho, 4) - p * rho * rho - 2.0 * ab;
        return std::pair{std::fabs(r) <= 1e-8, "rho = " + format("%.12g", rho)};
    });
    check("delay difference pair repels", [&] {
        const Network net = catalog::delay_difference_pair();
        const double rho = spectral_radius_general(jacobian_at_fixed_point(net, {0.0, 0.0}));
        const double want = (1.0 + std::sqrt(17.0)) / 4.0;
        const Network u = undelay(net);
        const bool halves = to_string(u.updates()[0]) == "0.5 * x1" && to_string(u.updates()[1]) == "0.5 * x2";
        return std::pair{std::fabs(rho - want) <= 1e-9 && halves, "rho = " + format("%.12g", rho)};
    });
    check("undelayed pair rho = |1-eps| + 2|ab|", [&] {
        const StabilityReport r = analyze(catalog::undelayed_pair(0.5, 0.1, 1.0), opts);
        return std::pair{std::fabs(r.rho - 0.7) <= 1e-10 && r.stable, "rho = " + format("%.12g", r.rho)};
    });
    check("tanh ring expansion", [&] {
        const double c = 3.0;
        const Network net = catalog::tanh_ring(3, c);
        const double rho = analyze(net, opts).rho;
        const AugmentedNetwork x = expand(net, catalog::even_vertices(3));
        const double rx = analyze(x.network, opts).rho;
        const double want = 2.0 / std::cosh(c - 2.0);
        const bool ok = std::fabs(rho - 2.0) <= 1e-10 && std::fabs(rx - want) <= 1e-8 && x.network.size() == 15;
        return std::pair{ok, "rho = " + format("%.12g", rho) + ", expansion rho = " + format("%.12g", rx)};
    });
    check("six-node structural set", [&] {
        const Network net = catalog::six_node_network();
        const InteractionGraph g = interaction_graph(net);
        const VertexSet s{"v1", "v3", "v5"};
        const bool structure = is_complete_structural(g, s) && !is_basic_structural(g, s);
        const Network r = restrict_to(net, s);
        const bool reads = variables(r.update("v1")) == std::set<VarRef>{{"v5", 0}} &&
                           variables(r.update("v3")) == std::set<VarRef>{{"v1", 0}, {"v5", 0}} &&
                           variables(r.update("v5")) == std::set<VarRef>{{"v1", 0}, {"v3", 0}};
        return std::pair{structure && reads, std::string(structure ? "complete, not basic" : "wrong structure")};
    });
    check("tanh ring restriction", [&] {
        const double c = 3.0;
        const Network net = catalog::tanh_ring(3, c);
        const VertexSet s = catalog::even_vertices(3);
        const Network r = restrict_to(net, s);
        const double rho = analyze(r, opts).rho;
        const double sech = 1.0 / std::cosh(c - 2.0);
        const bool identity = undelay(delayed_expansion(net, s)).updates() == r.updates();
        return std::pair{std::fabs(rho - 4.0 * sech * sech) <= 1e-8 && identity,
                         "rho = " + format("%.12g", rho)};
    });
    return rows;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"netstab: global stability of delayed dynamical networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "netstab 1.0.0");

    std::string input;
    std::string output;
    std::string set_arg;
    std::string report_path;

    auto* analyze_cmd = app.add_subcommand("analyze", "Assemble the stability matrix and report rho");
    analyze_cmd->add_option("input", input, "Network file")->required();
    analyze_cmd->add_option("-o,--output", output, "JSON report path (default: <input>.report.json)");

    bool dedelayed = false;
    auto* graph_cmd = app.add_subcommand("graph", "Write the interaction graph as DOT");
    graph_cmd->add_option("input", input, "Network file")->required();
    graph_cmd->add_option("-o,--output", output, "DOT output path (default: stdout)");
    graph_cmd->add_option("--set", set_arg, "Comma-separated vertices to highlight");
    graph_cmd->add_flag("--dedelayed", dedelayed, "Draw the graph of the de-delayed network");

    bool show_basic = false;
    bool only_basic = false;
    std::size_t max_results = 100;
    auto* sets_cmd = app.add_subcommand("sets", "List complete structural sets");
    sets_cmd->add_option("input", input, "Network file")->required();
    sets_cmd->add_flag("--basic", show_basic, "Also report whether each set is basic");
    sets_cmd->add_flag("--only-basic", only_basic, "List basic structural sets only");
    sets_cmd->add_option("--max-results", max_results, "Largest number of sets to list")->check(CLI::PositiveNumber);
    sets_cmd->add_option("-o,--output", output, "JSON output path");

    std::vector<CLI::App*> transforms;
    for (const char* verb : {"restrict", "expand", "undelay", "dedelay"}) {
        auto* cmd = app.add_subcommand(verb, std::string("Write the ") + verb + " transform of a network");
        cmd->add_option("input", input, "Network file")->required();
        cmd->add_option("-o,--output", output, "Network output path (default: stdout)");
        cmd->add_option("--report", report_path, "Also write a JSON stability report of the result");
        if (std::string(verb) == "restrict" || std::string(verb) == "expand") {
            cmd->add_option("--set", set_arg, "Complete structural set, e.g. v2,v4")->required();
        }
        transforms.push_back(cmd);
    }

    std::size_t trials = 20;
    std::size_t steps = 5000;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    std::string csv_path;
    auto* sim_cmd = app.add_subcommand("simulate", "Sample orbits and test for a global attractor");
    sim_cmd->add_option("input", input, "Network file")->required();
    sim_cmd->add_option("--trials", trials, "Number of random histories")->check(CLI::Range(2, 1000000));
    sim_cmd->add_option("--steps", steps, "Steps per orbit")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", seed, "Random seed");
    sim_cmd->add_option("--tol", tol, "Agreement tolerance")->check(CLI::PositiveNumber);
    sim_cmd->add_option("-o,--output", output, "Verdict JSON path (default: stdout)");
    sim_cmd->add_option("--csv", csv_path, "Trajectory CSV of the first trial");

    auto* verify_cmd = app.add_subcommand("verify-paper", "Run the bundled worked-example regressions");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const SpectralOptions opts = spectral_options();
        if (analyze_cmd->parsed()) {
            const Network net = load_network(input);
            const StabilityReport r = analyze(net, opts);
            out << "rho = " << format("%.10g", r.rho) << " verdict = " << r.verdict()
                << (r.boundary ? " (boundary)" : "") << "\n";
            if (r.cohen_grossberg) {
                out << "closed form |1-eps| + L rho(|W|) = " << format("%.10g", r.cohen_grossberg->value) << "\n";
            }
            if (output.empty()) {
                const std::filesystem::path p(input);
                output = (p.parent_path() / p.stem()).string() + ".report.json";
            }
            write_file(output, report_json(r));
            return 0;
        }
        if (graph_cmd->parsed()) {
            const Network net = load_network(input);
            const Network shown = dedelayed ? dedelay(net).network : net;
            const InteractionGraph g = interaction_graph(shown);
            VertexSet s;
            if (!set_arg.empty()) {
                s = parse_vertex_set(set_arg, g);
            }
            emit(output, emit_dot(g, set_arg.empty() ? nullptr : &s, shown.name()), out);
            return 0;
        }
        if (sets_cmd->parsed()) {
            const Network net = load_network(input);
            const InteractionGraph g = interaction_graph(net);
            const auto found = find_structural_sets(g, only_basic, max_results);
            nlohmann::json j = nlohmann::json::array();
            for (const auto& r : found) {
                out << set_text(r.set, g) << " complete";
                if (show_basic || only_basic) {
                    out << (r.basic ? " basic" : " non-basic");
                }
                out << "\n";
                j.push_back({{"set", std::vector<std::string>(r.set.begin(), r.set.end())},
                             {"complete", r.complete},
                             {"basic", r.basic},
                             {"branches", r.branches},
                             {"admissible", r.admissible}});
            }
            if (found.empty()) {
                out << "no " << (only_basic ? "basic" : "complete") << " structural sets found\n";
            }
            if (!output.empty()) {
                write_file(output, nlohmann::json{{"schema", "netstab-report/1"}, {"sets", j}}.dump(2) + "\n");
            }
            return 0;
        }
        for (auto* cmd : transforms) {
            if (!cmd->parsed()) {
                continue;
            }
            const Network net = load_network(input);
            const std::string verb = cmd->get_name();
            Network result;
            if (verb == "undelay") {
                result = undelay(net);
            } else if (verb == "dedelay") {
                result = dedelay(net).network;
            } else {
                const VertexSet s = parse_vertex_set(set_arg, interaction_graph(net));
                result = verb == "restrict" ? restrict_to(net, s) : expand(net, s).network;
            }
            emit(output, serialize(result), out);
            if (!report_path.empty()) {
                write_file(report_path, report_json(analyze(result, opts)));
            }
            return 0;
        }
        if (sim_cmd->parsed()) {
            const Network net = load_network(input);
            AttractionOptions a;
            a.trials = trials;
            a.steps = steps;
            a.seed = seed;
            a.tol = tol;
            const AttractionVerdict v = verify_global_attraction(net, a);
            emit(output, verdict_json(v, net.ids()), out);
            if (!csv_path.empty()) {
                std::mt19937_64 rng(seed);
                const auto history = random_history(net, sampling_box(net, a), rng);
                write_file(csv_path, trajectory_csv(iterate_orbit(net, history, steps)));
            }
            if (!output.empty() && output != "-") {
                out << "converged = " << (v.converged ? "yes" : "no")
                    << " diameter = " << format("%.3g", v.final_diameter) << "\n";
            }
            return 0;
        }
        if (verify_cmd->parsed()) {
            const auto rows = bundled_regressions();
            std::size_t width = 0;
            for (const auto& r : rows) {
                width = std::max(width, r.name.size());
            }
            bool all = true;
            for (const auto& r : rows) {
                out << (r.passed ? "PASS  " : "FAIL  ") << r.name << std::string(width - r.name.size() + 2, ' ')
                    << r.detail << "\n";
                all = all && r.passed;
            }
            out << (all ? "all checks passed" : "some checks failed") << "\n";
            return all ? 0 : 1;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace netstab
