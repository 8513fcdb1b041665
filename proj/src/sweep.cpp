#include "dimersim/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "dimersim/materials.hpp"

namespace dimersim {

namespace {

Complex unit_phase(const DriveParams& drive_template) {
    const Complex w = drive_template.drive_amplitude;
    const double mag = std::abs(w);
    return mag > 0.0 ? w / mag : Complex(1.0, 0.0);
}

DriveParams with_magnitude(const DriveParams& drive_template, Complex phase, double magnitude) {
    DriveParams d = drive_template;
    d.drive_amplitude = magnitude * phase;
    return d;
}

}  // namespace

std::vector<BranchDiagramRow> branch_diagram(const DriveParams& drive_template,
                                             const std::vector<double>& drive_grid) {
    for (std::size_t i = 1; i < drive_grid.size(); ++i) {
        if (drive_grid[i] <= drive_grid[i - 1]) {
            throw ConfigError("branch_diagram grid must be strictly increasing");
        }
    }
    const Complex phase = unit_phase(drive_template);
    std::vector<BranchDiagramRow> rows;
    rows.reserve(drive_grid.size());
    for (double mag : drive_grid) {
        rows.push_back({mag, steady_states(with_magnitude(drive_template, phase, mag))});
    }
    return rows;
}

std::optional<BistableInterval> bistable_interval(const DriveParams& drive_template,
                                                  const BistableSearch& search) {
    if (search.tolerance <= 0.0) throw ConfigError("bistable search tolerance must be > 0");
    if (search.upper <= search.lower) throw ConfigError("bistable search range is empty");
    if (search.scan_points < 2) throw ConfigError("bistable search needs at least 2 scan points");

    const Complex phase = unit_phase(drive_template);
    auto is_bistable = [&](double mag) {
        return steady_states(with_magnitude(drive_template, phase, mag)).size() == 3;
    };

    // Coarse scan for any three-root drive.  The model's response curve has
    // a single fold pair, so the bistable set is one interval; the scan only
    // needs to land one point inside it.
    const int n = search.scan_points;
    const double step = (search.upper - search.lower) / (n - 1);
    int first_inside = -1, last_inside = -1;
    for (int i = 0; i < n; ++i) {
        const double mag = search.lower + step * i;
        if (is_bistable(mag)) {
            if (first_inside < 0) first_inside = i;
            last_inside = i;
        }
    }
    if (first_inside < 0) return std::nullopt;

    auto bisect = [&](double outside, double inside) {
        // Invariant: is_bistable(inside), !is_bistable(outside).
        while (std::abs(inside - outside) > search.tolerance) {
            const double mid = 0.5 * (inside + outside);
            if (is_bistable(mid)) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        return 0.5 * (inside + outside);
    };

    BistableInterval interval;
    const double lo_inside = search.lower + step * first_inside;
    const double hi_inside = search.lower + step * last_inside;
    interval.lower = (first_inside == 0) ? search.lower
                                         : bisect(lo_inside - step, lo_inside);
    interval.upper = (last_inside == n - 1) ? search.upper
                                            : bisect(hi_inside + step, hi_inside);
    return interval;
}

void SweepProtocol::validate() const {
    if (magnitude_min < 0.0 || magnitude_max <= magnitude_min) {
        throw ConfigError("sweep protocol requires 0 <= magnitude_min < magnitude_max");
    }
    if (ramp_rate <= 0.0) throw ConfigError("sweep protocol requires ramp_rate > 0");
}

double SweepProtocol::magnitude_at(double t) const {
    const double leg = leg_duration();
    if (t <= 0.0) return magnitude_min;
    if (t <= leg) return magnitude_min + ramp_rate * t;
    if (t <= 2.0 * leg) return magnitude_max - ramp_rate * (t - leg);
    return magnitude_min;
}

double default_ramp_rate(const DriveParams& drive_template, double magnitude_min,
                         double magnitude_max) {
    const double min_rate =
        std::min(drive_template.population_decay_rate, drive_template.dephasing_rate);
    return (magnitude_max - magnitude_min) * min_rate / 200.0;
}

namespace {

// First drive magnitude where the population jumps by more than the
// threshold between consecutive samples; the jump is located midway.
std::optional<double> first_jump(const std::vector<SweepSample>& leg, double jump_threshold) {
    for (std::size_t i = 1; i < leg.size(); ++i) {
        const double dz = leg[i].state.population_difference -
                          leg[i - 1].state.population_difference;
        if (std::abs(dz) > jump_threshold) {
            return 0.5 * (leg[i].drive_magnitude + leg[i - 1].drive_magnitude);
        }
    }
    return std::nullopt;
}

// Linear interpolation of Z over a leg, ordered by drive magnitude.
double interp_population(const std::vector<std::pair<double, double>>& curve, double mag) {
    if (mag <= curve.front().first) return curve.front().second;
    if (mag >= curve.back().first) return curve.back().second;
    const auto it = std::lower_bound(curve.begin(), curve.end(), mag,
                                     [](const auto& p, double m) { return p.first < m; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi.first == lo.first) return hi.second;
    const double t = (mag - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

}  // namespace

HysteresisResult hysteresis_run(const DriveParams& drive_template, const SweepProtocol& protocol,
                                const HysteresisOptions& options) {
    protocol.validate();
    if (options.samples_per_leg < 2) throw ConfigError("need at least 2 samples per leg");

    const Complex phase = unit_phase(drive_template);
    const double leg = protocol.leg_duration();
    const double total = protocol.total_duration();

    DriveProtocol drive = [&](double t) {
        return with_magnitude(drive_template, phase, protocol.magnitude_at(t));
    };

    IntegratorOptions opts;
    opts.rel_tol = options.rel_tol;
    opts.abs_tol = options.abs_tol;
    opts.sample_stride = leg / options.samples_per_leg;

    const BlochState ground{-1.0, Complex(0.0, 0.0)};
    Trajectory traj;
    try {
        traj = integrate(ground, drive, 0.0, total, opts);
    } catch (const IntegrationError& e) {
        throw IntegrationError(std::string(e.what()) + " (during hysteresis sweep)");
    }

    HysteresisResult result;
    for (const auto& pt : traj.points) {
        SweepSample sample{pt.t, protocol.magnitude_at(pt.t), pt.state};
        if (pt.t <= leg) {
            result.up_branch.push_back(sample);
        } else {
            result.down_branch.push_back(sample);
        }
    }

    result.threshold_up = first_jump(result.up_branch, options.jump_threshold);
    result.threshold_down = first_jump(result.down_branch, options.jump_threshold);

    // Loop area: trapezoidal integral of |Z_up - Z_down| over a common
    // drive-magnitude grid.
    std::vector<std::pair<double, double>> up, down;
    up.reserve(result.up_branch.size());
    for (const auto& s : result.up_branch) {
        up.emplace_back(s.drive_magnitude, s.state.population_difference);
    }
    down.reserve(result.down_branch.size());
    for (const auto& s : result.down_branch) {
        down.emplace_back(s.drive_magnitude, s.state.population_difference);
    }
    std::sort(up.begin(), up.end());
    std::sort(down.begin(), down.end());
    if (up.size() >= 2 && down.size() >= 2) {
        const int n = options.samples_per_leg;
        const double lo = protocol.magnitude_min;
        const double hi = protocol.magnitude_max;
        const double dm = (hi - lo) / n;
        double area = 0.0;
        double prev = std::abs(interp_population(up, lo) - interp_population(down, lo));
        for (int i = 1; i <= n; ++i) {
            const double mag = lo + dm * i;
            const double cur = std::abs(interp_population(up, mag) - interp_population(down, mag));
            area += 0.5 * (prev + cur) * dm;
            prev = cur;
        }
        result.loop_area = area;
    }
    return result;
}

std::vector<std::pair<double, double>> polarization_loop(const HysteresisResult& result) {
    std::vector<std::pair<double, double>> loop;
    loop.reserve(result.up_branch.size() + result.down_branch.size());
    for (const auto& s : result.up_branch) {
        loop.emplace_back(s.drive_magnitude, std::abs(s.state.coherence));
    }
    for (const auto& s : result.down_branch) {
        loop.emplace_back(s.drive_magnitude, std::abs(s.state.coherence));
    }
    return loop;
}

namespace {

void apply_parameter(SystemConfig& config, SweepParameter parameter, double value) {
    switch (parameter) {
        case SweepParameter::center_distance:
            config.center_distance_nm = value;
            return;
        case SweepParameter::mnp_radius:
            config.mnp_radius_nm = value;
            return;
        case SweepParameter::detuning:
            config.detuning = value;
            return;
        case SweepParameter::dipole_moment:
            config.dipole_moment_e_nm = value;
            return;
        case SweepParameter::field_angle:
            config.orientation = Orientation::angled;
            config.field_angle_rad = value;
            return;
        case SweepParameter::eps_b:
            config.eps_b = value;
            return;
        case SweepParameter::eps_s:
            config.eps_s = value;
            return;
        case SweepParameter::transition_energy:
            config.transition_energy_ev = value;
            return;
    }
    throw ConfigError("unhandled sweep parameter");
}

}  // namespace

PhaseMap phase_map(const SystemConfig& base, const PermittivityFn& permittivity,
                   const ParameterAxis& axis1, const ParameterAxis& axis2,
                   const PhaseMapOptions& options) {
    if (axis1.values.empty() || axis2.values.empty()) {
        throw ConfigError("phase_map axes must be non-empty");
    }

    PhaseMap map;
    map.axis1 = axis1;
    map.axis2 = axis2;
    map.cells.reserve(axis1.values.size() * axis2.values.size());

    for (double v1 : axis1.values) {
        for (double v2 : axis2.values) {
            PhaseMapCell cell;
            cell.axis1_value = v1;
            cell.axis2_value = v2;
            try {
                SystemConfig config = base;
                apply_parameter(config, axis1.parameter, v1);
                apply_parameter(config, axis2.parameter, v2);
                config.validate();

                const Complex eps_m = permittivity(config.transition_energy_ev);
                const Complex alpha = clausius_mossotti(eps_m, config.eps_b);
                const CouplingParams coupling = derive_coupling(config, alpha);

                DriveParams drive_template;
                drive_template.detuning = config.detuning;
                drive_template.population_decay_rate = config.population_decay_rate;
                drive_template.dephasing_rate = config.dephasing_rate;
                drive_template.self_action = coupling.self_action;

                BistableSearch search;
                search.lower = 0.0;
                search.upper = options.omega_scan_max;
                search.tolerance = options.tolerance;
                search.scan_points = options.scan_points;
                cell.result = bistable_interval(drive_template, search).has_value()
                                  ? CellState::bistable
                                  : CellState::monostable;
            } catch (const Error& e) {
                cell.result = std::string(e.what());
            }
            map.cells.push_back(std::move(cell));
        }
    }
    return map;
}

SweepParameter sweep_parameter_from_string(const std::string& name) {
    if (name == "center_distance_nm") return SweepParameter::center_distance;
    if (name == "mnp_radius_nm") return SweepParameter::mnp_radius;
    if (name == "detuning") return SweepParameter::detuning;
    if (name == "dipole_moment_e_nm") return SweepParameter::dipole_moment;
    if (name == "field_angle_rad") return SweepParameter::field_angle;
    if (name == "eps_b") return SweepParameter::eps_b;
    if (name == "eps_s") return SweepParameter::eps_s;
    if (name == "transition_energy_ev") return SweepParameter::transition_energy;
    throw ConfigError("unknown sweep parameter '" + name + "'");
}

std::string to_string(SweepParameter parameter) {
    switch (parameter) {
        case SweepParameter::center_distance:
            return "center_distance_nm";
        case SweepParameter::mnp_radius:
            return "mnp_radius_nm";
        case SweepParameter::detuning:
            return "detuning";
        case SweepParameter::dipole_moment:
            return "dipole_moment_e_nm";
        case SweepParameter::field_angle:
            return "field_angle_rad";
        case SweepParameter::eps_b:
            return "eps_b";
        case SweepParameter::eps_s:
            return "eps_s";
        case SweepParameter::transition_energy:
            return "transition_energy_ev";
    }
    return "?";
}

}  // namespace dimersim
