#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dimersim/bloch.hpp"
#include "dimersim/coupling.hpp"

namespace dimersim {

// One row of a steady-state branch diagram.
struct BranchDiagramRow {
    double drive_magnitude = 0.0;
    std::vector<BranchPoint> branches;
};

// Steady-state solutions across a grid of drive magnitudes.  The drive
// template supplies detuning, rates, self-action and the drive phase; only
// the magnitude is swept.
std::vector<BranchDiagramRow> branch_diagram(const DriveParams& drive_template,
                                             const std::vector<double>& drive_grid);

// Drive-magnitude interval with three coexisting steady states.
struct BistableInterval {
    double lower = 0.0;
    double upper = 0.0;

    double width() const { return upper - lower; }
    bool contains(double w) const { return w >= lower && w <= upper; }
};

struct BistableSearch {
    double lower = 0.0;
    double upper = 0.0;
    double tolerance = 1e-6;   // fold bracketing tolerance, ns^-1
    int scan_points = 1024;    // coarse root-count scan resolution
};

// Brackets the fold points by scanning the steady-state root count and
// bisecting each edge down to the requested tolerance.  Empty optional when
// no three-root drive exists in the search range.
std::optional<BistableInterval> bistable_interval(const DriveParams& drive_template,
                                                  const BistableSearch& search);

// Triangular drive-amplitude ramp |Omega0|(t): up from magnitude_min to
// magnitude_max at ramp_rate, then back down.  The complex phase is fixed.
struct SweepProtocol {
    double magnitude_min = 0.0;   // ns^-1
    double magnitude_max = 0.0;   // ns^-1
    double ramp_rate = 0.0;       // ns^-2
    double phase = 0.0;           // radians

    void validate() const;
    double leg_duration() const { return (magnitude_max - magnitude_min) / ramp_rate; }
    double total_duration() const { return 2.0 * leg_duration(); }
    // Instantaneous drive magnitude at time t in [0, total_duration].
    double magnitude_at(double t) const;
};

// Default ramp: each leg crosses the scan range in 200 / min(gamma, Gamma),
// slow compared to relaxation.
double default_ramp_rate(const DriveParams& drive_template, double magnitude_min,
                         double magnitude_max);

struct SweepSample {
    double t = 0.0;
    double drive_magnitude = 0.0;
    BlochState state;
};

struct HysteresisResult {
    std::vector<SweepSample> up_branch;
    std::vector<SweepSample> down_branch;
    std::optional<double> threshold_up;    // ns^-1
    std::optional<double> threshold_down;  // ns^-1
    double loop_area = 0.0;                // |Omega0|-integrated branch separation
};

struct HysteresisOptions {
    int samples_per_leg = 2000;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double jump_threshold = 0.1;  // |dZ| between consecutive samples marking a switch
};

// Integrates the equations of motion through one triangular sweep starting
// from the ground state, splits the trajectory into up/down legs, extracts
// switching thresholds and the enclosed loop area.
HysteresisResult hysteresis_run(const DriveParams& drive_template, const SweepProtocol& protocol,
                                const HysteresisOptions& options = {});

// Projection of a hysteresis run onto the coherence magnitude.
std::vector<std::pair<double, double>> polarization_loop(const HysteresisResult& result);

// Parameters that a phase map can sweep.
enum class SweepParameter {
    center_distance,
    mnp_radius,
    detuning,
    dipole_moment,
    field_angle,
    eps_b,
    eps_s,
    transition_energy,
};

struct ParameterAxis {
    SweepParameter parameter = SweepParameter::center_distance;
    std::vector<double> values;
};

enum class CellState { monostable, bistable };

struct PhaseMapCell {
    double axis1_value = 0.0;
    double axis2_value = 0.0;
    // Either a classification or the per-cell failure message.
    std::variant<CellState, std::string> result;

    bool is_bistable() const {
        return std::holds_alternative<CellState>(result) &&
               std::get<CellState>(result) == CellState::bistable;
    }
    bool is_error() const { return std::holds_alternative<std::string>(result); }
};

struct PhaseMap {
    ParameterAxis axis1;
    ParameterAxis axis2;
    std::vector<PhaseMapCell> cells;  // row-major: axis1 outer, axis2 inner

    const PhaseMapCell& at(std::size_t i1, std::size_t i2) const {
        return cells[i1 * axis2.values.size() + i2];
    }
};

// Looks up the nanoparticle permittivity for a cell's transition energy.
using PermittivityFn = std::function<Complex(double photon_energy_ev)>;

struct PhaseMapOptions {
    double omega_scan_max = 500.0;  // ns^-1, upper end of the bistability search
    double tolerance = 1e-3;        // ns^-1
    int scan_points = 512;
};

// Classifies each (axis1, axis2) cell as monostable or bistable by rebuilding
// the coupling and searching for a three-root drive window.  Per-cell
// failures (e.g. a polarizability pole) are captured in the cell.
PhaseMap phase_map(const SystemConfig& base, const PermittivityFn& permittivity,
                   const ParameterAxis& axis1, const ParameterAxis& axis2,
                   const PhaseMapOptions& options = {});

SweepParameter sweep_parameter_from_string(const std::string& name);
std::string to_string(SweepParameter parameter);

}  // namespace dimersim
