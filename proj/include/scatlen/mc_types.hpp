#pragma once

#include <cstdint>

#include "scatlen/core.hpp"

namespace scatlen {

// Controls for the Feynman-Kac Monte Carlo estimator. Chunking defines the
// deterministic sub-streams: path j lives in chunk j / chunk_size and the
// stream is keyed by (seed, chunk index), so results are independent of the
// number of worker threads.
struct McConfig {
    std::int64_t n_paths = 100000;
    int n_steps = 1000;
    std::uint64_t seed = 1;
    double sample_radius = 0.0; // 0 -> range scale + 6 sqrt(beta)
    std::int64_t chunk_size = 1024;
    int threads = 0; // 0 -> hardware concurrency (SCATLEN_THREADS overrides)
    bool bridge_correction = false; // Brownian-bridge hard-core crossing test
};

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::int64_t n_effective = 0;
    Beta beta{1.0};
    double sample_radius = 0.0;
    bool tail_truncated = false; // infinite-range V truncated at sample_radius
};

} // namespace scatlen
