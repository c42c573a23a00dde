#include "xsurv/failure_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "xsurv/rng.hpp"

namespace xsurv {

namespace {

// Flattened view of an instance + mapping used by the inner loops here.
// Connectivity is answered with union-find over logical node indices, which
// keeps this module's survival test independent of the BFS-based one in the
// model module.
struct FlatMapping {
    std::vector<Link> phys;                       // canonical order
    std::vector<double> rho;                      // by physical index
    std::vector<std::uint64_t> route_mask;        // by logical index, bits = physical indices
    std::vector<std::pair<int, int>> logical_end; // logical node indices per logical link
    int num_logical_nodes = 0;

    FlatMapping(const CrossLayerInstance& inst, const LinkMapping& m) {
        std::map<Link, int> phys_index;
        for (const auto& [e, p] : inst.physical.failure_prob) {
            phys_index[e] = static_cast<int>(phys.size());
            phys.push_back(e);
            rho.push_back(p);
        }
        std::map<NodeId, int> node_index;
        for (NodeId n : inst.logical.nodes)
            node_index[n] = num_logical_nodes++;
        for (const auto& u : inst.logical.links) {
            auto it = m.routes.find(u);
            if (it == m.routes.end())
                throw ValidationError("mapping is missing a route for " + link_str(u));
            std::uint64_t mask = 0;
            const auto& seq = it->second;
            for (size_t i = 0; i + 1 < seq.size(); ++i)
                mask |= std::uint64_t{1} << phys_index.at(make_link(seq[i], seq[i + 1]));
            route_mask.push_back(mask);
            logical_end.emplace_back(node_index.at(u.a), node_index.at(u.b));
        }
    }

    bool connected_under(std::uint64_t fail_mask) const {
        std::vector<int> parent(num_logical_nodes);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        int components = num_logical_nodes;
        for (size_t i = 0; i < route_mask.size(); ++i) {
            if (route_mask[i] & fail_mask) continue; // logical link cascaded away
            int ra = find(logical_end[i].first), rb = find(logical_end[i].second);
            if (ra != rb) {
                parent[ra] = rb;
                --components;
            }
        }
        return components <= 1;
    }
};

} // namespace

std::map<Link, bool> single_failure_scan(const CrossLayerInstance& inst, const LinkMapping& m) {
    FlatMapping flat(inst, m);
    std::map<Link, bool> out;
    for (size_t e = 0; e < flat.phys.size(); ++e)
        out[flat.phys[e]] = flat.connected_under(std::uint64_t{1} << e);
    return out;
}

ReliabilityReport exact_reliability(const CrossLayerInstance& inst, const LinkMapping& m) {
    FlatMapping flat(inst, m);
    const size_t n = flat.phys.size();
    if (n > 22)
        throw EnumerationCapError("exact enumeration capped at 22 physical links (instance has " +
                                  std::to_string(n) + "); use mc_reliability instead");
    double total = 0.0;
    const std::uint64_t patterns = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        if (!flat.connected_under(mask)) continue;
        double p = 1.0;
        for (size_t e = 0; e < n; ++e)
            p *= (mask >> e) & 1 ? flat.rho[e] : 1.0 - flat.rho[e];
        total += p;
    }
    ReliabilityReport rep;
    rep.method = ReliabilityReport::Method::Exact;
    rep.value = total;
    rep.std_error = 0.0;
    rep.samples = patterns;
    rep.seed = 0;
    return rep;
}

ReliabilityReport mc_reliability(const CrossLayerInstance& inst, const LinkMapping& m,
                                 std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) throw ValidationError("mc_reliability needs at least one sample");
    FlatMapping flat(inst, m);
    const size_t n = flat.phys.size();
    std::mt19937_64 rng(seed);
    std::uint64_t survived = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::uint64_t mask = 0;
        for (size_t e = 0; e < n; ++e)
            if (uniform01(rng) < flat.rho[e]) mask |= std::uint64_t{1} << e;
        if (flat.connected_under(mask)) ++survived;
    }
    ReliabilityReport rep;
    rep.method = ReliabilityReport::Method::MonteCarlo;
    rep.value = static_cast<double>(survived) / static_cast<double>(samples);
    rep.std_error = std::sqrt(rep.value * (1.0 - rep.value) / static_cast<double>(samples));
    rep.samples = samples;
    rep.seed = seed;
    return rep;
}

} // namespace xsurv
