#pragma once

#include <complex>
#include <string>

#include "dimersim/errors.hpp"

namespace dimersim {

using Complex = std::complex<double>;

// Driving-field polarization relative to the dimer axis.  The principal
// orientations carry the exact near-field tensor factors (+2 along the axis,
// -1 across it); "angled" is a model extension using the projected factors
// for an arbitrary angle between field and axis.
enum class Orientation {
    parallel,
    perpendicular,
    angled,
};

// Geometry, material and dynamical parameters of the emitter-nanoparticle
// dimer.  Defaults describe a 3.3 nm CdSe-type quantum dot next to a 10 nm
// gold sphere in vacuum, driven on resonance.
struct SystemConfig {
    double transition_energy_ev = 2.36;  // two-level transition (also drive photon energy)
    double eps_s = 6.2;                  // emitter dielectric constant
    double eps_b = 1.0;                  // host dielectric constant
    double mnp_radius_nm = 10.0;         // nanoparticle radius a
    double center_distance_nm = 17.0;    // center-to-center distance d
    double dipole_moment_e_nm = 0.65;    // transition dipole, e*nm (typical CdSe value)
    double population_decay_rate = 1.0 / 0.8;  // ns^-1
    double dephasing_rate = 1.0 / 0.3;         // ns^-1
    double detuning = 0.0;                     // drive-transition offset, ns^-1
    Orientation orientation = Orientation::parallel;
    double field_angle_rad = 0.0;  // used only when orientation == angled

    // Throws ConfigError naming the violated constraint.
    void validate() const;
};

// Derived drive parameters of the coupled system.
struct CouplingParams {
    double screening = 0.0;        // local-field screening of the emitter
    Complex enhancement{0.0, 0.0}; // maps the bare external Rabi rate to the renormalized one
    Complex self_action{0.0, 0.0}; // feedback rate per unit coherence, ns^-1
};

// Local-field screening factor 3*eps_b / (eps_s + 2*eps_b).
double screening_factor(double eps_s, double eps_b);

// Angular factor of the near-field dipole coupling for a principal
// orientation: +2 along the axis, -1 perpendicular to it.
int green_tensor_factor(Orientation orientation);

// Builds the renormalized-drive enhancement factor and the complex
// self-action constant from geometry and the nanoparticle polarizability
// factor alpha.  Lengths in nm, dipole in e*nm, rates in ns^-1.
CouplingParams derive_coupling(const SystemConfig& config, Complex alpha);

// Bare Rabi rate mu*E0/hbar in ns^-1, for mu in e*nm and E0 in V/m.
double rabi_from_field(double dipole_moment_e_nm, double field_v_per_m);

Orientation orientation_from_string(const std::string& name);
std::string to_string(Orientation orientation);

}  // namespace dimersim
