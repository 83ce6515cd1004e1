#pragma once

// Physical constants, 2019 SI exact values.

namespace cqt {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double h_planck = 6.62607015e-34;    // J s
inline constexpr double e_charge = 1.602176634e-19;   // C
inline constexpr double k_boltzmann = 1.380649e-23;   // J/K
inline constexpr double hbar = h_planck / (2.0 * pi); // J s

// Reduced flux quantum hbar/2e; the Josephson phase is Phi_branch / phi0_reduced.
inline constexpr double phi0_reduced = hbar / (2.0 * e_charge); // Wb
// Superconducting flux quantum h/2e.
inline constexpr double flux_quantum = h_planck / (2.0 * e_charge); // Wb
// Resistance quantum h/(2e)^2, the scale separating charge- and flux-like circuits.
inline constexpr double r_quantum = h_planck / (4.0 * e_charge * e_charge); // ohm

} // namespace cqt
