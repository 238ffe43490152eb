#pragma once

// Fixed reference designs used for comparison with the robust optimum.

#include "secrecy/types.hpp"

namespace secrecy
{

/// Half the power beamformed along h, half spread evenly over the orthogonal
/// complement of h:
///   W = (P/2) h h^H / |h|^2,  Sigma = (P/2) / (N_t - 1) (I - h h^H / |h|^2).
/// Throws Errc::requires_multiple_antennas when N_t = 1.
[[nodiscard]] TransmitDesign isotropic_an(const ProblemInstance& instance);

/// Maximum-ratio transmission with no artificial noise: W = P h h^H / |h|^2.
[[nodiscard]] TransmitDesign no_an_mrt(const ProblemInstance& instance);

} // namespace secrecy
