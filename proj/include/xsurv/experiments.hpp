#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xsurv/model.hpp"
#include "xsurv/optimizer.hpp"
#include "xsurv/paths.hpp"

namespace xsurv {

// Per-link failure probability assignment used by a sweep row.
struct FailureScenario {
    enum class Kind { Uniform, Random };
    Kind kind = Kind::Uniform;
    double mu = 0.0;    // uniform rho, or truncated-normal mean
    double sigma = 0.0; // truncated-normal standard deviation
    int replicate = -1;
    std::uint64_t seed = 0;
    std::map<Link, double> prob;
};

FailureScenario uniform_scenario(const CrossLayerInstance& inst, double rho);

// Per-link probabilities sampled from normal(mu, sigma) truncated to (0,1) by
// rejection (at most 1000 attempts per link). sigma = 0 degenerates to mu,
// which must then lie strictly inside (0,1). Deterministic for a fixed seed.
FailureScenario gen_random_probs(const CrossLayerInstance& inst, double mu, double sigma,
                                 std::uint64_t seed);

// Copy of the instance with failure probabilities replaced by the scenario's.
CrossLayerInstance apply_scenario(const CrossLayerInstance& inst, const FailureScenario& scn);

struct SweepRow {
    std::string scenario;   // "uniform" | "random"
    double rho_or_mean = 0.0;
    std::string replicate;  // "-" for uniform rows, index or "mean" for random
    double base_phi = 0.0;
    double maxtree_phi = 0.0;
    double ratio = 0.0;     // maxtree_phi / base_phi
    double num_unprotected = 0.0;
    long long solve_ms = 0;
    std::string status;     // ok | infeasible | budget_exceeded | error | partial
    bool has_values = false;
};

struct SweepConfig {
    double rho_start = 0.15;
    double rho_end = 0.0;
    double rho_step = 0.005;
    bool random = false;     // truncated-normal scenarios instead of uniform
    double sigma = 0.02;
    int replicates = 5;
    std::uint64_t seed = 1;  // replicate r draws with seed + r
    double budget_s = 450.0;
    bool stable_timing = false; // write 0 in solve_ms for byte-stable CSV
    std::optional<PathPolicy> policy; // default_for(inst) when unset
};

// Descending grid rho_start, rho_start - rho_step, ..., rho_end.
std::vector<double> sweep_grid(const SweepConfig& cfg);

// One row per grid value (uniform) or per replicate plus a mean row (random).
// Solver failures mark the row's status and never abort the sweep.
std::vector<SweepRow> run_sweep(const CrossLayerInstance& inst, const SweepConfig& cfg);

// CSV with the fixed header
// scenario,rho_or_mean,replicate,base_phi,maxtree_phi,ratio,num_unprotected,solve_ms,status
std::string render_csv(const std::vector<SweepRow>& rows);

} // namespace xsurv
