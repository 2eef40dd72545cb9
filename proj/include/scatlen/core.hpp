#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace scatlen {

inline constexpr double pi = 3.14159265358979323846264338328;

// Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.57721566490153286061;

inline constexpr double inf = std::numeric_limits<double>::infinity();

// Spatial dimension. Only 2 and 3 are supported.
enum class Dim : int { two = 2, three = 3 };

inline int dim_value(Dim d) { return static_cast<int>(d); }

inline Dim dim_from_int(int d) {
    if (d == 2) return Dim::two;
    if (d == 3) return Dim::three;
    throw std::invalid_argument("dimension must be 2 or 3, got " + std::to_string(d));
}

// Surface measure of the sphere of radius r: 4*pi*r^2 in 3d, 2*pi*r in 2d.
inline double sphere_surface(Dim d, double r) {
    return d == Dim::three ? 4.0 * pi * r * r : 2.0 * pi * r;
}

// Measure of the ball of radius r.
inline double ball_volume(Dim d, double r) {
    return d == Dim::three ? 4.0 * pi * r * r * r / 3.0 : pi * r * r;
}

// Inverse temperature. Carries length^2 semantics: sqrt(beta) is the
// thermal length, the decay scale of the positive-temperature minimizer.
struct Beta {
    double value = 1.0;
};

inline void require_valid(Beta beta) {
    if (!(beta.value > 0.0) || !std::isfinite(beta.value))
        throw std::invalid_argument("beta must be positive and finite");
}

// Discretization controls shared by the ODE and boundary-value solvers.
struct MeshParams {
    // Zero-energy ODE solver: output nodes and adaptive step tolerances.
    int n_output = 600;
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;

    // Finite-difference solver: base interval budget, refinement levels used
    // for the error estimate, and the domain cutoff R_max = range + rmax_factor*sqrt(beta).
    int n_intervals = 4000;
    int error_levels = 1;
    double rmax_factor = 12.0;
};

} // namespace scatlen
