#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "scatlen/core.hpp"
#include "scatlen/gibbs.hpp"
#include "scatlen/mc_types.hpp"
#include "scatlen/potential.hpp"

namespace scatlen {
namespace detail {

// Counter-based generator: output i is a stateless 64-bit mix of
// key + i * golden, so streams keyed by (seed, chunk) can be evaluated in any
// order with bit-identical results.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) {
        key_ = mix64(seed + 0x9E3779B97F4A7C15ull * (stream + 1));
    }

    std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ull;
        return mix64(key_ ^ counter_);
    }

    // uniform in (0, 1]
    double next_open_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal, Box-Muller with a cached second value
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_open_unit();
        const double u2 = next_unit();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * pi * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

private:
    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline int resolve_threads(int requested) {
    if (const char* env = std::getenv("SCATLEN_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) return t;
    }
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

struct ChunkSums {
    double sum = 0.0;
    double sum_sq = 0.0;
};

} // namespace detail

// Monte Carlo estimate of g(beta) via the Feynman-Kac identity
//   g(beta) = (1/beta) int dx E_x[ 1 - exp(-int_0^beta V(X_s) ds) ],
// where X has generator 2*Laplacian (per-coordinate increment variance
// 4*dt). Starting points are sampled uniformly in the ball of sample_radius;
// paths entering the hard core are killed (their exponential vanishes). The
// occupation integral uses midpoint evaluation; steps crossing a delta shell
// add the local-time weight gamma*dt/|dr|.
inline McEstimate estimate_g(const RadialPotential& v, Dim d, Beta beta, const McConfig& cfg) {
    require_valid(beta);
    if (cfg.n_paths <= 0) throw std::invalid_argument("estimate_g: n_paths must be positive");
    if (cfg.n_steps <= 0) throw std::invalid_argument("estimate_g: n_steps must be positive");
    if (cfg.chunk_size <= 0) throw std::invalid_argument("estimate_g: chunk_size must be positive");

    const double range = v.range_scale();
    double rho = cfg.sample_radius;
    if (rho <= 0.0) rho = range + 6.0 * std::sqrt(beta.value);
    if (rho < range)
        throw std::invalid_argument("estimate_g: sample_radius smaller than the potential range");

    const int dim = dim_value(d);
    const double core = v.hard_core_radius();
    const double dt = beta.value / cfg.n_steps;
    const double step_sigma = std::sqrt(4.0 * dt);
    const double vol = ball_volume(d, rho);

    const std::int64_t n_chunks = (cfg.n_paths + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<detail::ChunkSums> partial(static_cast<std::size_t>(n_chunks));

    auto run_chunk = [&](std::int64_t chunk) {
        detail::CounterRng rng(cfg.seed, static_cast<std::uint64_t>(chunk));
        const std::int64_t begin = chunk * cfg.chunk_size;
        const std::int64_t end = std::min(begin + cfg.chunk_size, cfg.n_paths);
        detail::ChunkSums sums;

        double x[3] = {0.0, 0.0, 0.0};
        double xn[3] = {0.0, 0.0, 0.0};
        for (std::int64_t p = begin; p < end; ++p) {
            // uniform point in the ball: gaussian direction, radius ~ rho*U^(1/dim)
            double norm2 = 0.0;
            for (int c = 0; c < dim; ++c) {
                x[c] = rng.next_normal();
                norm2 += x[c] * x[c];
            }
            const double norm = std::sqrt(norm2);
            const double rad = rho * std::pow(rng.next_open_unit(), 1.0 / dim);
            double r_cur = 0.0;
            for (int c = 0; c < dim; ++c) {
                x[c] = norm > 0.0 ? x[c] / norm * rad : 0.0;
                r_cur += x[c] * x[c];
            }
            r_cur = std::sqrt(r_cur);

            double occupation = 0.0;
            bool killed = core > 0.0 && r_cur <= core;

            for (int s = 0; !killed && s < cfg.n_steps; ++s) {
                double r_new2 = 0.0, rm2 = 0.0;
                for (int c = 0; c < dim; ++c) {
                    xn[c] = x[c] + step_sigma * rng.next_normal();
                    r_new2 += xn[c] * xn[c];
                    const double mid = 0.5 * (x[c] + xn[c]);
                    rm2 += mid * mid;
                }
                const double r_new = std::sqrt(r_new2);

                if (core > 0.0) {
                    if (r_new <= core) {
                        killed = true;
                        break;
                    }
                    if (cfg.bridge_correction) {
                        // crossing probability of the locally flat barrier,
                        // exp(-d0*d1/(2*dt)) for per-coordinate variance 4*dt
                        const double d0 = r_cur - core, d1 = r_new - core;
                        const double p_hit = std::exp(-d0 * d1 / (2.0 * dt));
                        if (rng.next_unit() < p_hit) {
                            killed = true;
                            break;
                        }
                    }
                }

                const double rm = std::sqrt(rm2);
                if (core > 0.0 && rm <= core) {
                    killed = true;
                    break;
                }
                occupation += dt * v.density(rm);
                for (const auto& sh : v.shells()) {
                    if ((r_cur - sh.radius) * (r_new - sh.radius) < 0.0) {
                        const double dr = std::abs(r_new - r_cur);
                        if (dr > 0.0) occupation += sh.strength * dt / dr;
                    }
                }
                for (int c = 0; c < dim; ++c) x[c] = xn[c];
                r_cur = r_new;
            }

            const double contrib = killed ? 1.0 : -std::expm1(-occupation);
            sums.sum += contrib;
            sums.sum_sq += contrib * contrib;
        }
        partial[static_cast<std::size_t>(chunk)] = sums;
    };

    const int n_threads = std::min<std::int64_t>(detail::resolve_threads(cfg.threads), n_chunks);
    if (n_threads <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::int64_t c = t; c < n_chunks; c += n_threads) run_chunk(c);
            });
        }
        for (auto& th : pool) th.join();
    }

    // deterministic reduction in chunk order
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& s : partial) {
        sum += s.sum;
        sum_sq += s.sum_sq;
    }

    const double n = static_cast<double>(cfg.n_paths);
    const double mean_c = sum / n;
    const double var_c = n > 1.0 ? std::max(0.0, (sum_sq / n - mean_c * mean_c) * n / (n - 1.0))
                                 : 0.0;
    McEstimate est;
    est.beta = beta;
    est.n_effective = cfg.n_paths;
    est.sample_radius = rho;
    est.tail_truncated = v.infinite_range();
    est.mean = vol / beta.value * mean_c;
    est.stderr_ = vol / beta.value * std::sqrt(var_c / n);
    return est;
}

struct SandwichReport {
    McEstimate g;
    double e_lower = 0.0; // e(2 beta), lower end of the sandwich
    double e_upper = 0.0; // e(beta), upper end
    double eps_lower = 0.0;
    double eps_upper = 0.0;
    bool pass = false;
};

// Check the sandwich e(2 beta) <= g(beta) <= e(beta) against the Monte Carlo
// estimate, with three-sigma plus solver-error tolerances on both sides.
inline SandwichReport sandwich_check(const RadialPotential& v, Dim d, Beta beta,
                                     const McConfig& cfg) {
    SandwichReport rep;
    rep.g = estimate_g(v, d, beta, cfg);
    auto lo = solve_ebeta(v, d, Beta{2.0 * beta.value});
    auto hi = solve_ebeta(v, d, beta);
    rep.e_lower = lo.e_beta;
    rep.e_upper = hi.e_beta;
    rep.eps_lower = lo.error_estimate * std::abs(lo.e_beta);
    rep.eps_upper = hi.error_estimate * std::abs(hi.e_beta);
    const double sig = rep.g.stderr_;
    rep.pass = rep.e_lower - 3.0 * (sig + rep.eps_lower) <= rep.g.mean &&
               rep.g.mean <= rep.e_upper + 3.0 * (sig + rep.eps_upper);
    return rep;
}

} // namespace scatlen
