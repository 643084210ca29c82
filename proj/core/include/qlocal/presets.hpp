#pragma once

#include <cstdint>

#include "qlocal/liouvillian.hpp"

namespace qlocal {
namespace presets {

// Transverse-field Ising chain with local amplitude damping:
//   H = J * sum Z_i Z_{i+1} + g * sum X_i,  jump operators sqrt(gamma) * s-_i.
LiouvillianSpec dissipative_ising_chain(int n_sites, double j_coupling, double g_field,
                                        double gamma);

// XY chain with local dephasing: H = (j/2) * sum (X_i X_{i+1} + Y_i Y_{i+1}),
// jump operators sqrt(gamma) * Z_i.
LiouvillianSpec xy_dephasing_chain(int n_sites, double j_coupling, double gamma);

// Seeded random nearest-neighbour chain model: random Hermitian pair
// Hamiltonians and one random onsite Lindblad per site, scaled by `strength`.
LiouvillianSpec random_chain_model(int n_sites, std::uint64_t seed,
                                   double strength = 1.0);

}  // namespace presets
}  // namespace qlocal
