#include "dimersim/materials.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dimersim {

namespace {

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;  // blank
}

[[noreturn]] void fail_line(const std::string& label, int line_no, const std::string& what) {
    std::ostringstream os;
    os << label << ":" << line_no << ": " << what;
    throw MaterialError(os.str());
}

}  // namespace

DielectricTable parse_material_table(std::istream& text, MaterialFormat format,
                                     std::string source_label) {
    DielectricTable table;
    table.source_label = source_label.empty() ? std::string("<stream>") : std::move(source_label);

    std::string line;
    int line_no = 0;
    while (std::getline(text, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;

        std::istringstream fields(line);
        double energy = 0.0, a = 0.0, b = 0.0;
        if (!(fields >> energy >> a >> b)) {
            fail_line(table.source_label, line_no, "expected 3 numeric fields, got '" + line + "'");
        }
        std::string trailing;
        if (fields >> trailing) {
            fail_line(table.source_label, line_no, "trailing field '" + trailing + "'");
        }
        if (!std::isfinite(energy) || !std::isfinite(a) || !std::isfinite(b)) {
            fail_line(table.source_label, line_no, "non-finite value");
        }

        DielectricSample sample;
        sample.photon_energy_ev = energy;
        if (format == MaterialFormat::n_k) {
            if (b < 0.0) fail_line(table.source_label, line_no, "negative extinction k");
            sample.eps_re = a * a - b * b;
            sample.eps_im = 2.0 * a * b;
        } else {
            sample.eps_re = a;
            sample.eps_im = b;
        }
        if (sample.eps_im < 0.0) {
            fail_line(table.source_label, line_no, "negative Im(eps) (passive medium required)");
        }
        if (!table.rows.empty() && energy <= table.rows.back().photon_energy_ev) {
            fail_line(table.source_label, line_no, "photon energies must be strictly increasing");
        }
        table.rows.push_back(sample);
    }

    if (table.rows.size() < 2) {
        throw MaterialError(table.source_label + ": need at least 2 data rows, got " +
                            std::to_string(table.rows.size()));
    }
    return table;
}

DielectricTable load_material_table(const std::string& path, MaterialFormat format) {
    std::ifstream in(path);
    if (!in) throw MaterialError("cannot open material file '" + path + "'");
    return parse_material_table(in, format, path);
}

Complex permittivity_at(const DielectricTable& table, double photon_energy_ev) {
    const auto& rows = table.rows;
    if (photon_energy_ev < table.min_energy_ev() || photon_energy_ev > table.max_energy_ev()) {
        std::ostringstream os;
        os << table.source_label << ": photon energy " << photon_energy_ev
           << " eV outside tabulated span [" << table.min_energy_ev() << ", "
           << table.max_energy_ev() << "] eV";
        throw MaterialError(os.str());
    }

    // Bracketing row: first row with energy >= request.
    const auto it = std::lower_bound(
        rows.begin(), rows.end(), photon_energy_ev,
        [](const DielectricSample& s, double e) { return s.photon_energy_ev < e; });
    const std::size_t hi = static_cast<std::size_t>(it - rows.begin());
    if (rows[hi].photon_energy_ev == photon_energy_ev) {
        return {rows[hi].eps_re, rows[hi].eps_im};
    }
    const auto& r0 = rows[hi - 1];
    const auto& r1 = rows[hi];
    const double t =
        (photon_energy_ev - r0.photon_energy_ev) / (r1.photon_energy_ev - r0.photon_energy_ev);
    return {r0.eps_re + t * (r1.eps_re - r0.eps_re), r0.eps_im + t * (r1.eps_im - r0.eps_im)};
}

Complex drude_permittivity(const DrudeParams& params, double photon_energy_ev) {
    const double e = photon_energy_ev;
    const Complex denom(e * e, e * params.damping_energy_ev);
    return params.eps_inf - params.plasma_energy_ev * params.plasma_energy_ev / denom;
}

Complex clausius_mossotti(Complex eps_m, double eps_b) {
    const Complex denom = eps_m + 2.0 * eps_b;
    if (std::abs(denom) < clausius_mossotti_pole_tolerance) {
        std::ostringstream os;
        os << "polarizability pole: eps_m = " << eps_m.real() << (eps_m.imag() < 0 ? "" : "+")
           << eps_m.imag() << "i is at the Froehlich resonance eps_m = -2*eps_b = " << -2.0 * eps_b;
        throw SingularityError(os.str());
    }
    return (eps_m - eps_b) / denom;
}

MaterialFormat material_format_from_string(const std::string& name) {
    if (name == "n_k" || name == "nk") return MaterialFormat::n_k;
    if (name == "eps") return MaterialFormat::eps;
    throw ConfigError("unknown material format '" + name + "' (expected n_k or eps)");
}

std::string to_string(MaterialFormat format) {
    return format == MaterialFormat::n_k ? "n_k" : "eps";
}

}  // namespace dimersim
