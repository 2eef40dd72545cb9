#pragma once

// Reference potentials shared across the test suites.

#include "scatlen/potential.hpp"

namespace corpus {

using scatlen::ConstantForm;
using scatlen::ExponentialForm;
using scatlen::PowerForm;
using scatlen::RadialPotential;
using scatlen::Segment;
using scatlen::Shell;

inline RadialPotential zero() { return RadialPotential::validated(0.0, {}, {}); }

inline RadialPotential hard_core(double a = 1.0) {
    return RadialPotential::validated(a, {}, {});
}

inline RadialPotential square_well(double c = 1.0, double r1 = 1.0) {
    return RadialPotential::validated(0.0, {}, {Segment{0.0, r1, ConstantForm{c}}});
}

inline RadialPotential delta_shell(double s = 1.0, double gamma = 2.0) {
    return RadialPotential::validated(0.0, {Shell{s, gamma}}, {});
}

inline RadialPotential power_tail(double coeff = 1.0, double p = 4.0, double r_lo = 1.0) {
    return RadialPotential::validated(0.0, {},
                                      {Segment{r_lo, scatlen::inf, PowerForm{coeff, p}}});
}

inline RadialPotential power_tail_with_core(double core = 0.5, double coeff = 1.0, double p = 4.0,
                                            double r_lo = 1.0) {
    return RadialPotential::validated(core, {},
                                      {Segment{r_lo, scatlen::inf, PowerForm{coeff, p}}});
}

inline RadialPotential exp_tail(double coeff = 1.0, double mu = 2.0, double r_lo = 0.5) {
    return RadialPotential::validated(0.0, {},
                                      {Segment{r_lo, scatlen::inf, ExponentialForm{coeff, mu}}});
}

} // namespace corpus
