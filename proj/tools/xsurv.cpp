// xsurv: survivable-probability toolkit for logical-over-physical networks.
//
// Subcommands: validate, eval, solve, sweep, reliability, export-milp.
// Exit codes: 0 success, 1 usage/input error, 2 infeasible, 3 budget exceeded.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "xsurv/experiments.hpp"
#include "xsurv/failure_sim.hpp"
#include "xsurv/milp.hpp"
#include "xsurv/model.hpp"
#include "xsurv/optimizer.hpp"
#include "xsurv/paths.hpp"
#include "xsurv/survivability.hpp"

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

std::string link_list(const std::set<xsurv::Link>& links) {
    std::string out;
    for (const auto& e : links) {
        if (!out.empty()) out += " ";
        out += xsurv::link_str(e);
    }
    return out;
}

xsurv::PathPolicy make_policy(const xsurv::CrossLayerInstance& inst, const std::string& paths_mode,
                              int k, int max_hops) {
    if (paths_mode == "all") {
        int hops = max_hops > 0 ? max_hops : static_cast<int>(inst.physical.nodes.size()) - 1;
        return xsurv::PathPolicy::all_paths(hops);
    }
    if (paths_mode == "ksp") return xsurv::PathPolicy::k_shortest(k);
    return xsurv::PathPolicy::default_for(inst);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw xsurv::ValidationError("cannot write to '" + path + "'");
    out << content;
}

int run(int argc, char** argv) {
    CLI::App app{"survivable probability of logical-over-physical networks"};
    app.require_subcommand(1);

    std::string file;
    std::string objective = "baseset", weights_mode = "random", paths_mode = "default";
    std::string method = "exact", out_path;
    int k = 16, max_hops = 0, replicates = 5;
    double budget_s = 450.0;
    double rho_start = 0.15, rho_end = 0.0, rho_step = 0.005, variance = 0.02;
    bool random_mode = false, stable_timing = false;
    std::uint64_t samples = 1000000, seed = 1;

    auto* validate = app.add_subcommand("validate", "parse and validate an instance file");
    validate->add_option("file", file)->required();

    auto* eval = app.add_subcommand("eval", "evaluate the survivable probability of the bundled routing");
    eval->add_option("file", file)->required();

    auto* solve = app.add_subcommand("solve", "find an optimal design");
    solve->add_option("--objective", objective)->check(CLI::IsMember({"maxtree", "baseset"}))->required();
    solve->add_option("--weights", weights_mode)->check(CLI::IsMember({"uniform", "random"}))->required();
    solve->add_option("--paths", paths_mode)->check(CLI::IsMember({"all", "ksp"}));
    solve->add_option("--k", k);
    solve->add_option("--max-hops", max_hops);
    solve->add_option("--budget-s", budget_s);
    solve->add_option("file", file)->required();

    auto* sweep = app.add_subcommand("sweep", "solve over a grid of failure probabilities, write CSV");
    sweep->add_option("--rho-start", rho_start)->required();
    sweep->add_option("--rho-end", rho_end)->required();
    sweep->add_option("--rho-step", rho_step)->required();
    sweep->add_flag("--random", random_mode, "truncated-normal scenarios instead of uniform");
    sweep->add_option("--variance", variance, "standard deviation of the random scenarios");
    sweep->add_option("--replicates", replicates);
    sweep->add_option("--seed", seed);
    sweep->add_flag("--stable-timing", stable_timing, "write 0 in solve_ms for byte-stable output");
    sweep->add_option("--out", out_path)->required();
    sweep->add_option("file", file)->required();

    auto* reliability = app.add_subcommand("reliability", "ground-truth reliability of the bundled routing");
    reliability->add_option("--method", method)->check(CLI::IsMember({"exact", "mc"}))->required();
    reliability->add_option("--samples", samples);
    reliability->add_option("--seed", seed);
    reliability->add_option("file", file)->required();

    auto* export_milp = app.add_subcommand("export-milp", "write the exact formulation in LP format");
    export_milp->add_option("--objective", objective)->check(CLI::IsMember({"maxtree", "baseset"}))->required();
    export_milp->add_option("--weights", weights_mode)->check(CLI::IsMember({"uniform", "random"}));
    export_milp->add_option("--out", out_path)->required();
    export_milp->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e); // prints help or the usage error
        return code == 0 ? 0 : 1;
    }

    auto parsed = xsurv::load_instance(file);
    const auto& inst = parsed.instance;

    if (validate->parsed()) {
        std::cout << "instance " << (inst.name.empty() ? "(unnamed)" : inst.name) << "\n"
                  << "physical_nodes " << inst.physical.nodes.size() << "\n"
                  << "physical_links " << inst.physical.failure_prob.size() << "\n"
                  << "logical_nodes " << inst.logical.nodes.size() << "\n"
                  << "logical_links " << inst.logical.links.size() << "\n"
                  << "routes " << (parsed.routes ? "present" : "absent") << "\n"
                  << "ok\n";
        return 0;
    }

    if (eval->parsed()) {
        if (!parsed.routes)
            throw xsurv::ValidationError("eval needs a [routes] section in the instance file");
        auto critical = xsurv::critical_links(inst, *parsed.routes);
        std::cout << "instance " << inst.name << "\n"
                  << "phi " << fmt(xsurv::mapping_probability(inst, *parsed.routes)) << "\n"
                  << "critical_count " << critical.size() << "\n"
                  << "critical " << link_list(critical) << "\n";
        return 0;
    }

    if (solve->parsed()) {
        auto policy = make_policy(inst, paths_mode, k, max_hops);
        auto weights = xsurv::build_weights(
            inst, weights_mode == "uniform" ? xsurv::WeightKind::Uniform : xsurv::WeightKind::Random);
        xsurv::SolveLimits limits{budget_s, 0};
        std::cerr << "solving " << objective << " with " << policy.describe() << ", "
                  << weights_mode << " weights\n";
        if (objective == "maxtree") {
            auto res = xsurv::solve_max_prct_tree(inst, policy, weights, limits);
            std::cout << "objective maxtree\nstatus optimal\n"
                      << "objective_value " << fmt(res.objective) << "\n"
                      << "phi " << fmt(res.phi) << "\n"
                      << "tree_links " << link_list(xsurv::tree_links(res.tree)) << "\n"
                      << "nodes_explored " << res.stats.nodes_explored << "\n"
                      << "solve_ms " << fmt(res.stats.wall_ms) << "\n[routes]\n";
            for (const auto& [u, seq] : res.tree.routes) {
                std::cout << u.a << " " << u.b << " :";
                for (auto n : seq) std::cout << " " << n;
                std::cout << "\n";
            }
            return 0;
        }
        auto res = xsurv::solve_base_mapping(inst, policy, weights, limits);
        std::cout << "objective baseset\nstatus optimal\n"
                  << "objective_value " << fmt(res.objective) << "\n"
                  << "phi " << fmt(res.phi) << "\n"
                  << "unprotected_count " << res.unprotected.size() << "\n"
                  << "unprotected " << link_list(res.unprotected) << "\n"
                  << "trees " << res.base_set.trees.size() << "\n"
                  << "nodes_explored " << res.stats.nodes_explored << "\n"
                  << "solve_ms " << fmt(res.stats.wall_ms) << "\n[routes]\n";
        for (const auto& [u, seq] : res.mapping.routes) {
            std::cout << u.a << " " << u.b << " :";
            for (auto n : seq) std::cout << " " << n;
            std::cout << "\n";
        }
        std::cout << xsurv::serialize_base_tree_set(inst, res.base_set);
        return 0;
    }

    if (sweep->parsed()) {
        xsurv::SweepConfig cfg;
        cfg.rho_start = rho_start;
        cfg.rho_end = rho_end;
        cfg.rho_step = rho_step;
        cfg.random = random_mode;
        cfg.sigma = variance;
        cfg.replicates = replicates;
        cfg.seed = seed;
        cfg.stable_timing = stable_timing;
        auto rows = xsurv::run_sweep(inst, cfg);
        write_file(out_path, xsurv::render_csv(rows));
        std::cerr << "wrote " << rows.size() << " rows to " << out_path << "\n";
        for (const auto& r : rows)
            if (r.status != "ok") {
                std::cerr << "warning: row " << r.scenario << "/" << fmt(r.rho_or_mean) << "/"
                          << r.replicate << " status " << r.status << "\n";
            }
        return 0;
    }

    if (reliability->parsed()) {
        if (!parsed.routes)
            throw xsurv::ValidationError("reliability needs a [routes] section in the instance file");
        xsurv::ReliabilityReport rep =
            method == "exact" ? xsurv::exact_reliability(inst, *parsed.routes)
                              : xsurv::mc_reliability(inst, *parsed.routes, samples, seed);
        std::cout << "method " << (method == "exact" ? "exact" : "mc") << "\n"
                  << "value " << fmt(rep.value) << "\n"
                  << "stderr " << fmt(rep.std_error) << "\n"
                  << "samples " << rep.samples << "\n"
                  << "seed " << rep.seed << "\n";
        return 0;
    }

    if (export_milp->parsed()) {
        auto weights = xsurv::build_weights(
            inst, weights_mode == "uniform" ? xsurv::WeightKind::Uniform : xsurv::WeightKind::Random);
        auto which = objective == "maxtree" ? xsurv::MilpObjective::MaxTree
                                            : xsurv::MilpObjective::BaseSet;
        auto model = xsurv::build_milp(inst, which, weights);
        write_file(out_path, xsurv::write_lp(model));
        std::cout << "variables " << model.vars.size() << "\n"
                  << "constraints " << model.constraints.size() << "\n"
                  << "wrote " << out_path << "\n";
        return 0;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const xsurv::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const xsurv::BudgetExceededError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
