#pragma once

namespace dimersim::constants {

// Reduced Planck constant in eV*ns.
inline constexpr double hbar_ev_ns = 6.582119569e-7;

// Coulomb energy of two elementary charges at 1 nm separation, e^2/(4*pi*eps0),
// in eV*nm.  Converts dipole-dipole expressions written with dipole moments in
// e*nm and lengths in nm into eV.
inline constexpr double coulomb_ev_nm = 1.4399645478;

// 1 V/m expressed in V/nm.
inline constexpr double volt_per_m_in_volt_per_nm = 1e-9;

}  // namespace dimersim::constants
