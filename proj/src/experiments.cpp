#include "xsurv/experiments.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "xsurv/rng.hpp"

namespace xsurv {

FailureScenario uniform_scenario(const CrossLayerInstance& inst, double rho) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw ValidationError("uniform failure probability must lie in [0,1)");
    FailureScenario scn;
    scn.kind = FailureScenario::Kind::Uniform;
    scn.mu = rho;
    for (const auto& [e, _] : inst.physical.failure_prob) scn.prob[e] = rho;
    return scn;
}

FailureScenario gen_random_probs(const CrossLayerInstance& inst, double mu, double sigma,
                                 std::uint64_t seed) {
    if (!(mu >= 0.0 && mu < 1.0)) throw ValidationError("mean must lie in [0,1)");
    if (sigma < 0.0) throw ValidationError("standard deviation must be non-negative");
    if (sigma == 0.0 && !(mu > 0.0 && mu < 1.0))
        throw ValidationError("sigma = 0 needs a mean strictly inside (0,1)");

    FailureScenario scn;
    scn.kind = FailureScenario::Kind::Random;
    scn.mu = mu;
    scn.sigma = sigma;
    scn.seed = seed;
    std::mt19937_64 rng(seed);
    for (const auto& [e, _] : inst.physical.failure_prob) {
        if (sigma == 0.0) {
            scn.prob[e] = mu;
            continue;
        }
        bool accepted = false;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            double x = mu + sigma * standard_normal(rng);
            if (x > 0.0 && x < 1.0) {
                scn.prob[e] = x;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw ValidationError("rejection sampling exceeded 1000 attempts for link " +
                                  link_str(e));
    }
    return scn;
}

CrossLayerInstance apply_scenario(const CrossLayerInstance& inst, const FailureScenario& scn) {
    CrossLayerInstance out = inst;
    for (auto& [e, p] : out.physical.failure_prob) p = scn.prob.at(e);
    return out;
}

std::vector<double> sweep_grid(const SweepConfig& cfg) {
    if (!(cfg.rho_start >= 0.0 && cfg.rho_start < 1.0) ||
        !(cfg.rho_end >= 0.0 && cfg.rho_end < 1.0))
        throw ValidationError("sweep grid values must lie in [0,1)");
    if (cfg.rho_start < cfg.rho_end)
        throw ValidationError("sweep grid is descending: rho_start must be >= rho_end");
    std::vector<double> grid;
    if (cfg.rho_step <= 0.0) {
        grid.push_back(cfg.rho_start);
        return grid;
    }
    long long steps = std::llround((cfg.rho_start - cfg.rho_end) / cfg.rho_step);
    for (long long i = 0; i <= steps; ++i) {
        double v = cfg.rho_start - static_cast<double>(i) * cfg.rho_step;
        if (std::abs(v) < 1e-12) v = 0.0;
        grid.push_back(v);
    }
    return grid;
}

namespace {

struct RowSolves {
    double base_phi = 0.0;
    double maxtree_phi = 0.0;
    double num_unprotected = 0.0;
    long long solve_ms = 0;
};

RowSolves solve_row(const CrossLayerInstance& scenario_inst, const std::vector<PathSet>& paths,
                    WeightKind weight_kind, double budget_s) {
    using Clock = std::chrono::steady_clock;
    auto t0 = Clock::now();
    WeightModel weights = build_weights(scenario_inst, weight_kind);
    SolveLimits limits{budget_s, 0};
    SolveResult base = solve_base_mapping(scenario_inst, paths, weights, limits);
    TreeResult tree = solve_max_prct_tree(scenario_inst, paths, weights, limits);
    RowSolves out;
    out.base_phi = base.phi;
    out.maxtree_phi = tree.phi;
    out.num_unprotected = static_cast<double>(base.unprotected.size());
    out.solve_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    return out;
}

SweepRow make_row(const std::string& scenario, double rho_or_mean, const std::string& replicate) {
    SweepRow row;
    row.scenario = scenario;
    row.rho_or_mean = rho_or_mean;
    row.replicate = replicate;
    return row;
}

void fill_row(SweepRow& row, const RowSolves& s, bool stable_timing) {
    row.base_phi = s.base_phi;
    row.maxtree_phi = s.maxtree_phi;
    row.ratio = s.base_phi > 0.0 ? s.maxtree_phi / s.base_phi : 0.0;
    row.num_unprotected = s.num_unprotected;
    row.solve_ms = stable_timing ? 0 : s.solve_ms;
    row.status = "ok";
    row.has_values = true;
}

} // namespace

std::vector<SweepRow> run_sweep(const CrossLayerInstance& inst, const SweepConfig& cfg) {
    std::vector<double> grid = sweep_grid(cfg);
    std::vector<SweepRow> rows;

    PathPolicy policy = cfg.policy ? *cfg.policy : PathPolicy::default_for(inst);
    std::vector<PathSet> paths;
    std::string enum_failure;
    try {
        paths = enumerate_all_path_sets(inst, policy);
    } catch (const InfeasibleError& e) {
        enum_failure = e.what();
    }

    auto run_one = [&](SweepRow row, const FailureScenario& scn, WeightKind kind) {
        if (!enum_failure.empty()) {
            row.status = "infeasible";
            rows.push_back(std::move(row));
            return;
        }
        try {
            CrossLayerInstance scenario_inst = apply_scenario(inst, scn);
            fill_row(row, solve_row(scenario_inst, paths, kind, cfg.budget_s), cfg.stable_timing);
        } catch (const BudgetExceededError&) {
            row.status = "budget_exceeded";
        } catch (const InfeasibleError&) {
            row.status = "infeasible";
        } catch (const std::exception&) {
            row.status = "error";
        }
        rows.push_back(std::move(row));
    };

    for (double v : grid) {
        if (!cfg.random) {
            run_one(make_row("uniform", v, "-"), uniform_scenario(inst, v), WeightKind::Uniform);
            continue;
        }
        std::size_t first = rows.size();
        for (int r = 0; r < cfg.replicates; ++r) {
            FailureScenario scn;
            SweepRow row = make_row("random", v, std::to_string(r));
            try {
                scn = gen_random_probs(inst, v, cfg.sigma, cfg.seed + static_cast<std::uint64_t>(r));
                scn.replicate = r;
            } catch (const std::exception&) {
                row.status = "error";
                rows.push_back(std::move(row));
                continue;
            }
            run_one(std::move(row), scn, WeightKind::Random);
        }
        // mean over the successful replicates; ratio recomputed from the means
        SweepRow mean = make_row("random", v, "mean");
        int ok_count = 0;
        long long ms = 0;
        for (std::size_t i = first; i < rows.size(); ++i) {
            if (!rows[i].has_values) continue;
            ++ok_count;
            mean.base_phi += rows[i].base_phi;
            mean.maxtree_phi += rows[i].maxtree_phi;
            mean.num_unprotected += rows[i].num_unprotected;
            ms += rows[i].solve_ms;
        }
        if (ok_count > 0) {
            mean.base_phi /= ok_count;
            mean.maxtree_phi /= ok_count;
            mean.num_unprotected /= ok_count;
            mean.ratio = mean.base_phi > 0.0 ? mean.maxtree_phi / mean.base_phi : 0.0;
            mean.solve_ms = cfg.stable_timing ? 0 : ms;
            mean.has_values = true;
            mean.status = ok_count == cfg.replicates ? "ok" : "partial";
        } else {
            mean.status = "error";
        }
        rows.push_back(std::move(mean));
    }
    return rows;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

} // namespace

std::string render_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "scenario,rho_or_mean,replicate,base_phi,maxtree_phi,ratio,num_unprotected,solve_ms,status\n";
    for (const auto& r : rows) {
        out << r.scenario << "," << fmt(r.rho_or_mean) << "," << r.replicate << ",";
        if (r.has_values)
            out << fmt(r.base_phi) << "," << fmt(r.maxtree_phi) << "," << fmt(r.ratio) << ","
                << fmt(r.num_unprotected) << "," << r.solve_ms;
        else
            out << ",,,,";
        out << "," << r.status << "\n";
    }
    return out.str();
}

} // namespace xsurv
