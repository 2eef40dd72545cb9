#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scatlen/core.hpp"
#include "scatlen/mc_types.hpp"
#include "scatlen/potential.hpp"
#include "scatlen/scatter.hpp"

namespace scatlen {

// Radial function given by nodal values, interpreted as piecewise linear
// between nodes, constant below the first node and zero beyond the last.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> value;
};

// Minimizer of the positive-temperature functional on a truncated domain.
struct GibbsSolution {
    Dim d = Dim::three;
    Beta beta{1.0};
    std::vector<double> grid;
    std::vector<double> phi;
    double e_beta = 0.0;
    double error_estimate = 0.0; // relative, from mesh refinement
    double R_max = 0.0;
    bool certified = true; // false when the finiteness criterion fails
    std::vector<double> level_energies; // energy per refinement level, coarse to fine
};

struct InequalityCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct BoundsReport {
    double a = 0.0;
    double theorem1 = 0.0;
    std::optional<double> trial;
    std::optional<double> numeric;
    std::optional<McEstimate> mc;
    std::vector<InequalityCheck> checks;
};

// Value of the functional
//   int ( 2 |grad phi|^2 + V (1-phi)^2 + (2/beta) phi^2 ) dx
// for the piecewise-linear radial profile, extended by zero beyond its last
// node. The hard core contributes only its (2/beta) volume term (phi must be
// 1 there); shells contribute surface-weighted (1-phi)^2; the potential tail
// beyond the last node enters through its exact volume integral.
inline double energy_functional(const RadialProfile& phi, const RadialPotential& v, Dim d,
                                Beta beta) {
    require_valid(beta);
    const std::size_t n = phi.r.size();
    if (n < 2 || phi.value.size() != n)
        throw std::invalid_argument("energy_functional: profile needs at least two nodes");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(phi.r[i] < phi.r[i + 1]))
            throw std::invalid_argument("energy_functional: grid must be strictly increasing");

    const double core = v.hard_core_radius();
    if (core > 0.0) {
        if (phi.r.front() > core)
            throw std::invalid_argument("energy_functional: grid must reach into the hard core");
        for (std::size_t i = 0; i < n && phi.r[i] <= core; ++i)
            if (std::abs(phi.value[i] - 1.0) > 1e-9)
                throw std::invalid_argument("energy_functional: profile must equal 1 on the hard core");
    } else if (phi.r.front() != 0.0) {
        throw std::invalid_argument("energy_functional: grid must start at r = 0");
    }
    if (std::abs(phi.value.back()) > 1e-8)
        throw std::invalid_argument("energy_functional: profile must vanish at its last node");

    const int k = dim_value(d) - 1;
    const double s_unit = d == Dim::three ? 4.0 * pi : 2.0 * pi;
    const double R_last = phi.r.back();

    double acc = 0.0;
    // region below the first node: phi constant, zero gradient; only occurs
    // inside a hard core (validated above), where V reads as zero
    const double r_f = phi.r.front();
    if (r_f > 0.0) acc += (2.0 / beta.value) * std::pow(r_f, k + 1) / (k + 1);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double r0 = phi.r[i], r1 = phi.r[i + 1];
        const double h = r1 - r0;
        const double m0 = (std::pow(r1, k + 1) - std::pow(r0, k + 1)) / (k + 1);
        const double v1 = i + 1 == n - 1 ? 0.0 : phi.value[i + 1]; // boundary snapped to 0
        const double slope = (v1 - phi.value[i]) / h;
        const double pm = 0.5 * (phi.value[i] + v1);
        const double rm = 0.5 * (r0 + r1);
        const double dens = v.inside_core(rm) ? 0.0 : v.density(rm);
        acc += m0 * (2.0 * slope * slope + dens * (1.0 - pm) * (1.0 - pm) +
                     (2.0 / beta.value) * pm * pm);
    }

    for (const auto& sh : v.shells()) {
        if (sh.radius > R_last) continue; // counted in the tail integral
        const auto it = std::lower_bound(phi.r.begin(), phi.r.end(), sh.radius);
        double ps;
        if (it == phi.r.begin()) {
            ps = phi.value.front();
        } else {
            const std::size_t j = static_cast<std::size_t>(it - phi.r.begin());
            if (j < n && phi.r[j] == sh.radius) {
                ps = phi.value[j];
            } else {
                const double t = (sh.radius - phi.r[j - 1]) / (phi.r[j] - phi.r[j - 1]);
                ps = phi.value[j - 1] + t * (phi.value[j] - phi.value[j - 1]);
            }
        }
        acc += std::pow(sh.radius, k) * sh.strength * (1.0 - ps) * (1.0 - ps);
    }

    return s_unit * acc + volume_integral(v, R_last, d);
}

namespace detail {

// Graded mesh on [r_start, R_max]: spacing grows with distance from r_start on
// the scale ell (nodes follow r_start + ell*(exp(a t)-1)), then potential
// breakpoints are snapped in. Refinement inserts interval midpoints, keeping
// meshes nested across levels.
inline std::vector<double> gibbs_mesh(const RadialPotential& v, double r_start, double R_max,
                                      int n, double ell) {
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(n) + 8);
    const double span = R_max - r_start;
    const double alpha = std::log(1.0 + span / ell);
    for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        nodes.push_back(r_start + ell * (std::exp(alpha * t) - 1.0));
    }
    nodes.front() = r_start;
    nodes.back() = R_max;
    for (double b : v.breakpoints(R_max))
        if (b > r_start && b < R_max) nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [&](double x, double y) { return y - x < 1e-13 * std::max(1.0, R_max); }),
                nodes.end());
    return nodes;
}

inline std::vector<double> refine_mesh(const std::vector<double>& mesh) {
    std::vector<double> out;
    out.reserve(mesh.size() * 2);
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
        out.push_back(mesh[i]);
        out.push_back(0.5 * (mesh[i] + mesh[i + 1]));
    }
    out.push_back(mesh.back());
    return out;
}

// Assemble and solve the Euler-Lagrange system of the discretized functional:
// tridiagonal, symmetric positive definite; Thomas elimination.
inline std::vector<double> solve_el_system(const RadialPotential& v, Dim d, Beta beta,
                                           const std::vector<double>& mesh, bool core_fixed) {
    const std::size_t nn = mesh.size();
    const int k = dim_value(d) - 1;
    const std::size_t ni = nn - 1; // intervals

    std::vector<double> kk(ni), cc(ni), mv(ni);
    for (std::size_t i = 0; i < ni; ++i) {
        const double r0 = mesh[i], r1 = mesh[i + 1];
        const double h = r1 - r0;
        const double m0 = (std::pow(r1, k + 1) - std::pow(r0, k + 1)) / (k + 1);
        const double rm = 0.5 * (r0 + r1);
        const double dens = v.density(rm);
        kk[i] = 4.0 * m0 / (h * h);
        cc[i] = m0 * (0.5 * dens + 1.0 / beta.value);
        mv[i] = m0 * dens;
    }

    std::vector<double> shell_w(nn, 0.0);
    for (const auto& sh : v.shells()) {
        if (sh.radius >= mesh.back()) continue;
        const auto it = std::lower_bound(mesh.begin(), mesh.end(), sh.radius);
        if (it != mesh.end() && *it == sh.radius)
            shell_w[static_cast<std::size_t>(it - mesh.begin())] +=
                std::pow(sh.radius, k) * sh.strength;
    }

    // unknowns: nodes [first .. nn-2], with phi(last) = 0 and, when core_fixed,
    // phi(first) = 1 removed from the system
    const std::size_t lo = core_fixed ? 1 : 0;
    const std::size_t m = nn - 1 - lo;
    std::vector<double> diag(m, 0.0), upper(m, 0.0), lower(m, 0.0), rhs(m, 0.0);

    for (std::size_t j = lo; j < nn - 1; ++j) {
        const std::size_t idx = j - lo;
        double dg = 0.0, rh = 0.0;
        if (j > 0) { // left interval j-1
            dg += kk[j - 1] + cc[j - 1];
            rh += mv[j - 1];
        }
        dg += kk[j] + cc[j]; // right interval j
        rh += mv[j];
        dg += 2.0 * shell_w[j];
        rh += 2.0 * shell_w[j];
        diag[idx] = dg;
        rhs[idx] = rh;
        if (j > lo) lower[idx] = -kk[j - 1] + cc[j - 1];
        if (j + 1 < nn - 1) upper[idx] = -kk[j] + cc[j];
    }
    if (core_fixed && m > 0) rhs[0] += kk[0] - cc[0]; // phi(first) = 1

    // Thomas elimination
    for (std::size_t i = 1; i < m; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(m);
    if (m > 0) {
        x[m - 1] = rhs[m - 1] / diag[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    }

    std::vector<double> phi(nn, 0.0);
    if (core_fixed) phi[0] = 1.0;
    for (std::size_t j = lo; j < nn - 1; ++j) phi[j] = x[j - lo];
    phi[nn - 1] = 0.0;
    return phi;
}

} // namespace detail

// Minimize the positive-temperature functional: direct solve of its
// Euler-Lagrange system on a graded mesh, with one refinement for the error
// estimate and automatic domain enlargement when the boundary is felt.
inline GibbsSolution solve_ebeta(const RadialPotential& v, Dim d, Beta beta,
                                 const MeshParams& mesh = {}) {
    require_valid(beta);
    const auto fin = finiteness_check(v, d);

    GibbsSolution sol;
    sol.d = d;
    sol.beta = beta;
    sol.certified = fin.verdict == Finiteness::finite;

    const double core = v.hard_core_radius();
    const double r_start = core > 0.0 ? core : 0.0;
    const double sb = std::sqrt(beta.value);
    const double ell = std::min(sb, std::max(v.range_scale(), 0.5));
    double R_max = v.range_scale() + mesh.rmax_factor * sb;
    if (R_max <= r_start) R_max = r_start + mesh.rmax_factor * sb;

    const int levels = std::max(mesh.error_levels, 0);
    for (int attempt = 0;; ++attempt) {
        auto base = detail::gibbs_mesh(v, r_start, R_max, mesh.n_intervals, ell);
        sol.level_energies.clear();

        std::vector<double> grid, phi;
        auto m = base;
        for (int lev = 0;; ++lev) {
            auto p = detail::solve_el_system(v, d, beta, m, core > 0.0);
            grid = m;
            phi = std::move(p);
            RadialProfile prof{grid, phi};
            if (core > 0.0) {
                prof.r.insert(prof.r.begin(), 0.0);
                prof.value.insert(prof.value.begin(), 1.0);
            }
            sol.level_energies.push_back(energy_functional(prof, v, d, beta));
            if (lev == levels) break;
            m = detail::refine_mesh(m);
        }

        // boundary monitor: the minimizer must have decayed before R_max
        double peak = 0.0;
        for (double p : phi) peak = std::max(peak, std::abs(p));
        const double edge = std::abs(phi[phi.size() - 2]);
        if (peak > 0.0 && edge > 1e-4 * peak && attempt < 4) {
            R_max *= 1.6;
            continue;
        }
        if (peak > 0.0 && edge > 1e-3 * peak)
            throw std::runtime_error("solve_ebeta: domain cutoff too small");

        sol.grid = std::move(grid);
        sol.phi = std::move(phi);
        if (core > 0.0) {
            sol.grid.insert(sol.grid.begin(), 0.0);
            sol.phi.insert(sol.phi.begin(), 1.0);
        }
        sol.R_max = R_max;
        sol.e_beta = sol.level_energies.back();
        if (sol.level_energies.size() >= 2) {
            const double e1 = sol.level_energies[sol.level_energies.size() - 1];
            const double e0 = sol.level_energies[sol.level_energies.size() - 2];
            sol.error_estimate = std::abs(e0 - e1) / (3.0 * std::max(std::abs(e1), 1e-300));
        }
        return sol;
    }
}

// Theorem-1 closed-form upper bounds on e(beta) in terms of the scattering
// length alone.
inline double theorem1_bound(double a, Beta beta, Dim d) {
    require_valid(beta);
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("theorem1_bound: a must be positive and finite");
    if (d == Dim::three) {
        const double t = a / std::sqrt(3.0 * beta.value);
        return 8.0 * pi * a * (1.0 + t) * (1.0 + t);
    }
    const double L = std::log(1.0 + beta.value / (a * a));
    return (8.0 * pi / L) * (1.0 + (1.0 + a * a / beta.value) / (2.0 * L));
}

// Energy of the zero-energy trial state psi_R (extended by zero beyond R).
// R defaults to the optimizing choice a + sqrt(3 beta) (d=3) resp.
// sqrt(a^2 + beta) (d=2).
inline double trial_state_energy(const RadialPotential& v, Dim d, Beta beta,
                                 std::optional<double> R_opt = std::nullopt) {
    require_valid(beta);
    auto lim = scattering_length(v, d, 1e-10);
    if (std::isinf(lim.a))
        throw std::runtime_error("trial_state_energy: scattering length is infinite");
    const double a = lim.a;
    if (a == 0.0 && v.is_zero()) return 0.0;

    double R;
    if (R_opt) {
        R = *R_opt;
        if (!(R > a)) throw std::invalid_argument("trial_state_energy: requires R > a");
    } else {
        R = d == Dim::three ? a + std::sqrt(3.0 * beta.value)
                            : std::sqrt(a * a + beta.value);
    }

    MeshParams mp;
    mp.n_output = 2400;
    auto prof = solve_zero_energy(v, d, R, mp);
    RadialProfile psi;
    psi.r = prof.grid;
    psi.value.resize(prof.w.size());
    for (std::size_t i = 0; i < prof.w.size(); ++i) psi.value[i] = 1.0 - prof.w[i];
    return energy_functional(psi, v, d, beta);
}

// Side-by-side record of Theorem 1, the trial-state energy, and the numeric
// minimum, with the ordering checks between them.
inline BoundsReport bounds_report(const RadialPotential& v, Dim d, Beta beta) {
    require_valid(beta);
    BoundsReport rep;

    auto lim = scattering_length(v, d, 1e-10);
    if (std::isinf(lim.a))
        throw std::runtime_error("bounds_report: scattering length is infinite");
    rep.a = lim.a;

    auto sol = solve_ebeta(v, d, beta);
    rep.numeric = sol.e_beta;
    const double eps_abs = sol.error_estimate * std::abs(sol.e_beta);

    auto push = [&](const std::string& name, double lhs, double rhs, double slack) {
        rep.checks.push_back({name, lhs, rhs, lhs <= rhs + slack});
    };

    if (rep.a == 0.0) {
        rep.theorem1 = 0.0;
        rep.trial = 0.0;
        push("numeric <= trial", sol.e_beta, 0.0, 1e-12);
        push("numeric <= theorem1", sol.e_beta, 0.0, 1e-12);
        return rep;
    }

    rep.theorem1 = theorem1_bound(rep.a, beta, d);

    const double R = d == Dim::three ? rep.a + std::sqrt(3.0 * beta.value)
                                     : std::sqrt(rep.a * rep.a + beta.value);
    const double trial = trial_state_energy(v, d, beta, R);
    rep.trial = trial;

    const double a_R = scattering_length_at(v, d, R).a_R;
    double trial_rhs;
    if (d == Dim::three)
        trial_rhs = 8.0 * pi * rep.a / (1.0 - rep.a / R) +
                    8.0 * pi * a_R * a_R * R / (3.0 * beta.value);
    else {
        const double lra = std::log(R / rep.a);
        const double lrar = std::log(R / a_R);
        trial_rhs = 4.0 * pi / lra + pi * R * R / (beta.value * lrar * lrar);
    }

    const double quad_slack = 1e-4; // trial-state quadrature tolerance, relative
    push("numeric <= trial", sol.e_beta, trial, 3.0 * eps_abs + quad_slack * std::abs(trial));
    push("trial <= analytic trial bound", trial, trial_rhs, quad_slack * std::abs(trial_rhs));
    push("numeric <= theorem1", sol.e_beta, rep.theorem1, 3.0 * eps_abs);
    if (d == Dim::three)
        push("8 pi a lower bound <= numeric", 8.0 * pi * rep.a * (1.0 - 1e-6), sol.e_beta,
             3.0 * eps_abs);
    return rep;
}

} // namespace scatlen
