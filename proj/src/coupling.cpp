#include "dimersim/coupling.hpp"

#include <cmath>
#include <sstream>

#include "dimersim/constants.hpp"

namespace dimersim {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid system config: ") + what);
}

}  // namespace

void SystemConfig::validate() const {
    require(transition_energy_ev > 0.0, "transition_energy_ev must be > 0");
    require(eps_s > 0.0, "eps_s must be > 0");
    require(eps_b > 0.0, "eps_b must be > 0");
    require(mnp_radius_nm > 0.0, "mnp_radius_nm must be > 0");
    require(center_distance_nm > mnp_radius_nm,
            "center_distance_nm must exceed mnp_radius_nm (d > a)");
    require(dipole_moment_e_nm > 0.0, "dipole_moment_e_nm must be > 0");
    require(population_decay_rate > 0.0, "population_decay_rate must be > 0");
    require(dephasing_rate > 0.0, "dephasing_rate must be > 0");
    require(std::isfinite(detuning), "detuning must be finite");
}

double screening_factor(double eps_s, double eps_b) {
    return 3.0 * eps_b / (eps_s + 2.0 * eps_b);
}

int green_tensor_factor(Orientation orientation) {
    switch (orientation) {
        case Orientation::parallel:
            return 2;
        case Orientation::perpendicular:
            return -1;
        case Orientation::angled:
            break;
    }
    throw ConfigError("green_tensor_factor requires a principal orientation");
}

CouplingParams derive_coupling(const SystemConfig& config, Complex alpha) {
    config.validate();

    // Linear and quadratic angular factors.  For the principal orientations
    // the quadratic factor is the square of the linear one; at a general
    // field angle the two come from different tensor contractions.
    double s_linear = 0.0;
    double s_squared = 0.0;
    if (config.orientation == Orientation::angled) {
        const double c2 = std::cos(config.field_angle_rad) * std::cos(config.field_angle_rad);
        const double s2 = 1.0 - c2;
        s_linear = 2.0 * c2 - s2;
        s_squared = 4.0 * c2 + s2;
    } else {
        const int s = green_tensor_factor(config.orientation);
        s_linear = static_cast<double>(s);
        s_squared = static_cast<double>(s * s);
    }

    const double a3 = std::pow(config.mnp_radius_nm, 3);
    const double d3 = std::pow(config.center_distance_nm, 3);
    const double d6 = d3 * d3;

    CouplingParams out;
    out.screening = screening_factor(config.eps_s, config.eps_b);
    out.enhancement = (1.0 + s_linear * alpha * a3 / (config.eps_b * d3)) / out.screening;

    const double mu2 = config.dipole_moment_e_nm * config.dipole_moment_e_nm;
    // mu^2/d^3 carries e^2/nm; the Coulomb factor turns that into eV.
    out.self_action = (s_squared / 2.0) * alpha * a3 * mu2 * constants::coulomb_ev_nm /
                      (constants::hbar_ev_ns * out.screening * config.eps_b * d6);
    return out;
}

double rabi_from_field(double dipole_moment_e_nm, double field_v_per_m) {
    return dipole_moment_e_nm * field_v_per_m * constants::volt_per_m_in_volt_per_nm /
           constants::hbar_ev_ns;
}

Orientation orientation_from_string(const std::string& name) {
    if (name == "parallel") return Orientation::parallel;
    if (name == "perpendicular") return Orientation::perpendicular;
    if (name == "angled") return Orientation::angled;
    throw ConfigError("unknown orientation '" + name +
                      "' (expected parallel, perpendicular or angled)");
}

std::string to_string(Orientation orientation) {
    switch (orientation) {
        case Orientation::parallel:
            return "parallel";
        case Orientation::perpendicular:
            return "perpendicular";
        case Orientation::angled:
            return "angled";
    }
    return "?";
}

}  // namespace dimersim
