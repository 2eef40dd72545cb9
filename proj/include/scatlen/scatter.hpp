#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "scatlen/core.hpp"
#include "scatlen/ode.hpp"
#include "scatlen/potential.hpp"

namespace scatlen {

// Zero-energy profile w = 1 - psi_R on [0, R], normalized so w(R) = 1.
// w vanishes on the hard core and is non-decreasing. w_prime holds one-sided
// derivatives: the left limit at shell radii and at R, the right limit at the
// start of integration, two-sided elsewhere.
struct ZeroEnergyProfile {
    Dim d = Dim::three;
    double R = 0.0;
    std::vector<double> grid;
    std::vector<double> w;
    std::vector<double> w_prime;
};

struct ScatteringResult {
    double a_R = 0.0;
    double lambda_R = 0.0;
    ZeroEnergyProfile profile;
};

// R -> infinity limit of a_R with a certified bracket.
struct ScatteringLimit {
    double a = 0.0; // +inf when the finiteness criterion fails
    double a_lo = 0.0;
    double a_hi = 0.0;
    double R_used = 0.0;
    bool converged = false;
};

namespace detail {

inline std::vector<double> scatter_grid(const RadialPotential& v, double R, int n_output) {
    std::vector<double> nodes = v.breakpoints(R);
    nodes.push_back(0.0);
    nodes.push_back(R);
    const int fill = std::max(n_output - static_cast<int>(nodes.size()), 16);
    for (int i = 1; i < fill; ++i) nodes.push_back(R * i / fill);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [R](double x, double y) { return y - x < 1e-14 * R; }),
                nodes.end());
    if (nodes.back() != R) nodes.back() = R;
    return nodes;
}

// Density form valid on the open interval (lo, hi); segments are resolved at
// the midpoint so panel-end evaluations never read the neighbouring form.
inline const Segment* segment_on(const RadialPotential& v, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    for (const auto& seg : v.segments())
        if (seg.covers(mid)) return &seg;
    return nullptr;
}

struct RawScatterSolution {
    std::vector<double> grid;
    std::vector<double> w;  // unnormalized
    std::vector<double> wp; // unnormalized, one-sided at shells
    double end_y = 0.0;     // u(R) (d=3) or w(R) (d=2), unnormalized
    double end_yp = 0.0;    // u'(R) or w'(R)
};

inline RawScatterSolution solve_raw(const RadialPotential& v, Dim d, double R,
                                    const MeshParams& mesh) {
    const double core = v.hard_core_radius();
    if (!(R > core) || !std::isfinite(R))
        throw std::invalid_argument("solve_zero_energy: R must be finite and exceed the hard core");
    if (mesh.n_output < 2) throw std::invalid_argument("solve_zero_energy: mesh too coarse");

    RawScatterSolution out;
    out.grid = scatter_grid(v, R, mesh.n_output);

    // Radius where integration starts and the exact solution below it. A
    // density segment touching the origin forces a series start at small eps.
    double r_start;
    bool singular_start = false;
    if (core > 0.0) {
        r_start = core;
    } else {
        double r_act = R;
        for (const auto& seg : v.segments())
            if (detail::form_peak(seg) > 0.0) { r_act = std::min(r_act, seg.r_lo); break; }
        if (!v.shells().empty()) r_act = std::min(r_act, v.shells().front().radius);
        singular_start = r_act <= 0.0;
        r_start = singular_start ? 1e-9 * std::min(R, 1.0) : std::min(r_act, R * (1.0 - 1e-12));
    }

    const std::size_t n = out.grid.size();
    out.w.assign(n, 0.0);
    out.wp.assign(n, 0.0);

    // d=3 integrates u = r w with u'' = (V/2) u; d=2 integrates w directly
    // with w'' = (V/2) w - w'/r. Shells impose derivative jumps.
    State2 s;
    if (d == Dim::three)
        s = core > 0.0 ? State2{0.0, 1.0} : State2{r_start, 1.0};
    else if (core > 0.0)
        s = State2{0.0, 1.0};
    else
        s = State2{1.0, singular_start ? 0.25 * v.density(r_start) * r_start : 0.0};

    auto record = [&](std::size_t i, double r, const State2& st) {
        if (d == Dim::three) {
            if (r <= 0.0) {
                out.w[i] = core > 0.0 ? 0.0 : 1.0;
                out.wp[i] = 0.0;
            } else {
                out.w[i] = st.y / r;
                out.wp[i] = (st.yp - st.y / r) / r;
            }
        } else {
            out.w[i] = st.y;
            out.wp[i] = st.yp;
        }
    };

    std::size_t i = 0;
    for (; i < n && out.grid[i] < r_start; ++i) {
        // exact region: inside the core (w = 0) or before V acts
        if (core > 0.0) {
            out.w[i] = 0.0;
            out.wp[i] = 0.0;
        } else {
            out.w[i] = 1.0;
            out.wp[i] = 0.0;
        }
    }

    double r = r_start;
    std::size_t shell_idx = 0;
    const auto& shells = v.shells();
    while (shell_idx < shells.size() && shells[shell_idx].radius < r_start) ++shell_idx;

    for (; i < n; ++i) {
        const double target = out.grid[i];
        if (target > r) {
            const Segment* seg = segment_on(v, r, target);
            if (d == Dim::three) {
                auto rhs = [seg](double x, const State2& u) {
                    const double dens = seg ? seg->density(x) : 0.0;
                    return State2{u.yp, 0.5 * dens * u.y};
                };
                s = integrate_dp45(rhs, r, target, s, mesh.rel_tol, mesh.abs_tol);
            } else {
                auto rhs = [seg](double x, const State2& u) {
                    const double dens = seg ? seg->density(x) : 0.0;
                    return State2{u.yp, 0.5 * dens * u.y - u.yp / x};
                };
                s = integrate_dp45(rhs, r, target, s, mesh.rel_tol, mesh.abs_tol);
            }
            r = target;
        }
        record(i, r, s); // left limit at shell nodes
        if (shell_idx < shells.size() &&
            std::abs(shells[shell_idx].radius - r) <= 1e-14 * std::max(1.0, r) && r < R) {
            const double gamma = shells[shell_idx].strength;
            s.yp += 0.5 * gamma * s.y;
            ++shell_idx;
        }
    }
    out.end_y = s.y;
    out.end_yp = s.yp;
    return out;
}

} // namespace detail

// Solve the zero-energy equation 2*Lap(w) = V w on the ball of radius R for
// the truncated potential, returning the profile normalized to w(R) = 1.
inline ZeroEnergyProfile solve_zero_energy(const RadialPotential& v, Dim d, double R,
                                           const MeshParams& mesh = {}) {
    auto raw = detail::solve_raw(v, d, R, mesh);
    ZeroEnergyProfile p;
    p.d = d;
    p.R = R;
    p.grid = std::move(raw.grid);
    p.w = std::move(raw.w);
    p.w_prime = std::move(raw.wp);
    const double z = p.w.back();
    if (!(z > 0.0)) throw std::runtime_error("solve_zero_energy: degenerate normalization");
    for (auto& x : p.w) x /= z;
    for (auto& x : p.w_prime) x /= z;
    return p;
}

// a_R and lambda(R) of the truncated potential.
inline ScatteringResult scattering_length_at(const RadialPotential& v, Dim d, double R,
                                             const MeshParams& mesh = {}) {
    auto raw = detail::solve_raw(v, d, R, mesh);
    ScatteringResult res;

    if (d == Dim::three) {
        // exterior solution u = c (r - a_R)
        const double u = raw.end_y, up = raw.end_yp;
        res.a_R = up != 0.0 ? R - u / up : 0.0;
        res.a_R = std::clamp(res.a_R, 0.0, R);
        res.lambda_R = res.a_R > 0.0 ? 8.0 * pi * res.a_R / (1.0 - res.a_R / R) : 0.0;
    } else {
        // exterior solution w = c ln(r / a_R)
        const double w = raw.end_y, wp = raw.end_yp;
        if (wp <= 0.0) {
            res.a_R = 0.0;
            res.lambda_R = 0.0;
        } else {
            res.a_R = R * std::exp(-w / (R * wp));
            res.a_R = std::clamp(res.a_R, 0.0, R);
            res.lambda_R = res.a_R > 0.0 ? 4.0 * pi / std::log(R / res.a_R) : 0.0;
        }
    }

    ZeroEnergyProfile p;
    p.d = d;
    p.R = R;
    p.grid = std::move(raw.grid);
    p.w = std::move(raw.w);
    p.w_prime = std::move(raw.wp);
    const double z = p.w.back();
    for (auto& x : p.w) x /= z;
    for (auto& x : p.w_prime) x /= z;
    res.profile = std::move(p);
    return res;
}

// Quadrature of the scattering functional on the computed profile,
//   S_{d-1} * int r^{d-1} (2 w'^2 + V w^2) dr  + shell surface terms,
// with the piecewise-linear profile and midpoint density sampling. Agrees
// with lambda(R) to the mesh's convergence order.
inline double lambda_from_profile(const ZeroEnergyProfile& p, const RadialPotential& v) {
    const double s_unit = p.d == Dim::three ? 4.0 * pi : 2.0 * pi;
    const int k = dim_value(p.d) - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < p.grid.size(); ++i) {
        const double r0 = p.grid[i], r1 = p.grid[i + 1];
        const double h = r1 - r0;
        if (h <= 0.0) continue;
        const double m0 = (std::pow(r1, k + 1) - std::pow(r0, k + 1)) / (k + 1);
        const double slope = (p.w[i + 1] - p.w[i]) / h;
        const double wm = 0.5 * (p.w[i] + p.w[i + 1]);
        const double rm = 0.5 * (r0 + r1);
        const double dens = v.inside_core(rm) ? 0.0 : v.density(rm);
        acc += m0 * (2.0 * slope * slope + dens * wm * wm);
    }
    for (const auto& sh : v.shells()) {
        if (sh.radius >= p.R) continue;
        const auto it = std::lower_bound(p.grid.begin(), p.grid.end(), sh.radius);
        if (it == p.grid.end()) continue;
        const std::size_t j = static_cast<std::size_t>(it - p.grid.begin());
        const double ws = p.w[j];
        acc += std::pow(sh.radius, k) * sh.strength * ws * ws;
    }
    return s_unit * acc;
}

// Limit a = lim_{R->inf} a_R. For finite-range potentials a_R is independent
// of R beyond the range, so a single solve suffices and the bracket is exact.
// Infinite-range tails are bracketed from below by a_R and from above by the
// trial-function tail bounds; the iteration doubles R until the bracket is
// within tol or the cap is hit (flagged via `converged`).
inline ScatteringLimit scattering_length(const RadialPotential& v, Dim d, double tol = 1e-9) {
    ScatteringLimit lim;
    if (v.is_zero()) {
        lim.a = lim.a_lo = lim.a_hi = 0.0;
        lim.R_used = 1.0;
        lim.converged = true;
        return lim;
    }

    const auto fin = finiteness_check(v, d);
    if (fin.verdict == Finiteness::infinite) {
        lim.a = inf;
        lim.a_lo = 0.0;
        lim.a_hi = inf;
        lim.R_used = 0.0;
        lim.converged = true;
        return lim;
    }

    const double rs = v.range_scale();
    if (!v.infinite_range()) {
        const double R = std::max(2.0 * rs, rs + 1.0);
        auto res = scattering_length_at(v, d, R);
        lim.a = lim.a_lo = lim.a_hi = res.a_R;
        lim.R_used = R;
        lim.converged = true;
        return lim;
    }

    double a_hi = d == Dim::three ? fin.a_upper_3d.value() : fin.a_upper_2d.value();
    double R = std::max(2.0 * rs, 1.0);
    double a_lo = 0.0;
    for (int iter = 0; iter < 60; ++iter) {
        auto res = scattering_length_at(v, d, R);
        a_lo = std::max(a_lo, res.a_R);
        if (d == Dim::three) {
            const double tail = volume_integral(v, R, d);
            if (res.a_R < R)
                a_hi = std::min(a_hi, res.a_R / (1.0 - res.a_R / R) + tail / (8.0 * pi));
        }
        lim.R_used = R;
        if (a_lo > 0.0 && a_hi - a_lo <= tol * a_lo) {
            lim.a = a_lo;
            lim.a_lo = a_lo;
            lim.a_hi = a_hi;
            lim.converged = true;
            return lim;
        }
        R *= 2.0;
    }
    lim.a = a_lo;
    lim.a_lo = a_lo;
    lim.a_hi = a_hi;
    lim.converged = false;
    return lim;
}

// Audit of the tail inequality (d=3: int_{|x|>=R} V <= 8 pi a/(1-a/R) - 8 pi a_R/(1-a_R/R);
// the logarithmic analogue in d=2). A failure indicates a solver bug.
inline bool check_tail_bound(const RadialPotential& v, Dim d, double R, double a, double a_R) {
    if (!(R > a)) throw std::invalid_argument("check_tail_bound: requires R > a");
    const double lhs = volume_integral(v, R, d);
    double rhs;
    if (d == Dim::three) {
        const double full = a > 0.0 ? 8.0 * pi * a / (1.0 - a / R) : 0.0;
        const double trunc = a_R > 0.0 ? 8.0 * pi * a_R / (1.0 - a_R / R) : 0.0;
        rhs = full - trunc;
    } else {
        const double full = a > 0.0 ? 4.0 * pi / std::log(R / a) : 0.0;
        const double trunc = a_R > 0.0 ? 4.0 * pi / std::log(R / a_R) : 0.0;
        rhs = full - trunc;
    }
    return lhs <= rhs + 1e-9 * (1.0 + std::abs(rhs));
}

} // namespace scatlen
