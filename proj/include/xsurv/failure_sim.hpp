#pragma once

#include <cstdint>
#include <map>

#include "xsurv/model.hpp"

namespace xsurv {

struct ReliabilityReport {
    enum class Method { Exact, MonteCarlo };
    Method method = Method::Exact;
    double value = 0.0;
    double std_error = 0.0; // 0 for exact
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Per physical link: does the logical network stay connected when exactly
// that link fails? The `false` set equals critical_links(inst, m).
std::map<Link, bool> single_failure_scan(const CrossLayerInstance& inst, const LinkMapping& m);

// Ground-truth probability that the logical network stays connected under
// independent link failures, by enumerating all 2^|E_P| failure patterns in
// bitmask order. Throws EnumerationCapError for |E_P| > 22.
ReliabilityReport exact_reliability(const CrossLayerInstance& inst, const LinkMapping& m);

// Unbiased Monte Carlo estimate of the same quantity. Deterministic for a
// fixed (seed, samples): mt19937_64 with one uniform per link per sample, links
// in canonical order.
ReliabilityReport mc_reliability(const CrossLayerInstance& inst, const LinkMapping& m,
                                 std::uint64_t samples, std::uint64_t seed);

} // namespace xsurv
