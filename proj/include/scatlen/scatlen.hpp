#pragma once

#include "scatlen/bessel.hpp"
#include "scatlen/core.hpp"
#include "scatlen/fk.hpp"
#include "scatlen/gibbs.hpp"
#include "scatlen/hardcore.hpp"
#include "scatlen/potential.hpp"
#include "scatlen/scatter.hpp"
#include "scatlen/spec_io.hpp"

namespace scatlen {

inline constexpr const char* version = "0.1.0";

} // namespace scatlen
