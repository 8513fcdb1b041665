#pragma once

#include <complex>
#include <istream>
#include <string>
#include <vector>

#include "dimersim/errors.hpp"

namespace dimersim {

using Complex = std::complex<double>;

// One sample of a tabulated complex permittivity.
struct DielectricSample {
    double photon_energy_ev = 0.0;
    double eps_re = 0.0;
    double eps_im = 0.0;
};

// Tabulated metal permittivity versus photon energy.  Rows are strictly
// increasing in energy and passive (eps_im >= 0); construction rejects
// anything else rather than repairing it.
struct DielectricTable {
    std::vector<DielectricSample> rows;
    std::string source_label;

    double min_energy_ev() const { return rows.front().photon_energy_ev; }
    double max_energy_ev() const { return rows.back().photon_energy_ev; }
};

// Input column convention for material files.
enum class MaterialFormat {
    n_k,  // columns are refractive index n and extinction k
    eps,  // columns are Re(eps) and Im(eps)
};

// Analytic free-electron permittivity, used as a controllable stand-in for
// tabulated data:  eps(E) = eps_inf - Ep^2 / (E^2 + i E Eg).
struct DrudeParams {
    double eps_inf = 1.0;
    double plasma_energy_ev = 0.0;
    double damping_energy_ev = 0.0;
};

// Parses a material table from line-oriented text.  Data lines hold three
// whitespace-separated numbers (energy_eV, a, b); '#' starts a comment.
// Throws MaterialError with a line number on malformed input, non-increasing
// energies, fewer than 2 rows, or negative k / eps_im.
DielectricTable parse_material_table(std::istream& text, MaterialFormat format,
                                     std::string source_label = "");

// File-based convenience wrapper around parse_material_table.
DielectricTable load_material_table(const std::string& path, MaterialFormat format);

// Linear interpolation of the tabulated permittivity; exact at row energies.
// Throws MaterialError if photon_energy_ev is outside the tabulated span.
Complex permittivity_at(const DielectricTable& table, double photon_energy_ev);

Complex drude_permittivity(const DrudeParams& params, double photon_energy_ev);

// Dipolar polarizability factor (eps_m - eps_b) / (eps_m + 2 eps_b).
// Throws SingularityError when the denominator is within pole_tolerance of
// the Froehlich resonance eps_m = -2 eps_b.
Complex clausius_mossotti(Complex eps_m, double eps_b);

inline constexpr double clausius_mossotti_pole_tolerance = 1e-9;

MaterialFormat material_format_from_string(const std::string& name);
std::string to_string(MaterialFormat format);

}  // namespace dimersim
