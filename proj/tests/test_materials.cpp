#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "dimersim/materials.hpp"
#include "doctest.h"

using namespace dimersim;

namespace {

const std::string gold_path = std::string(DIMERSIM_DATA_DIR) + "/gold_nk.txt";

DielectricTable two_row_table() {
    std::istringstream in("2.0 -4.0 1.0\n3.0 -8.0 3.0\n");
    return parse_material_table(in, MaterialFormat::eps, "two-row");
}

}  // namespace

TEST_CASE("parse_material_table: n,k conversion") {
    SUBCASE("vacuum-like index") {
        std::istringstream in("2.0 1.0 0.0\n3.0 1.0 0.0\n");
        const auto table = parse_material_table(in, MaterialFormat::n_k);
        REQUIRE(table.rows.size() == 2);
        CHECK(table.rows[0].eps_re == 1.0);
        CHECK(table.rows[0].eps_im == 0.0);
        CHECK(table.rows[1].eps_re == 1.0);
        CHECK(table.rows[1].eps_im == 0.0);
    }
    SUBCASE("pure imaginary index gives eps = (ik)^2") {
        std::istringstream in("2.0 0.0 2.0\n3.0 0.0 3.0\n");
        const auto table = parse_material_table(in, MaterialFormat::n_k);
        CHECK(table.rows[0].eps_re == -4.0);
        CHECK(table.rows[0].eps_im == 0.0);
        CHECK(table.rows[1].eps_re == -9.0);
        CHECK(table.rows[1].eps_im == 0.0);
    }
    SUBCASE("comments and blank lines are skipped") {
        std::istringstream in("# header\n\n2.0 1.0 0.5\n # indented comment\n3.0 1.5 0.5\n");
        const auto table = parse_material_table(in, MaterialFormat::n_k);
        CHECK(table.rows.size() == 2);
    }
}

TEST_CASE("parse_material_table: rejection paths name the line") {
    SUBCASE("malformed line") {
        std::istringstream in("2.0 1.0 0.0\nnot a number row\n");
        CHECK_THROWS_WITH_AS(parse_material_table(in, MaterialFormat::n_k, "f"),
                             doctest::Contains("f:2"), MaterialError);
    }
    SUBCASE("trailing junk") {
        std::istringstream in("2.0 1.0 0.0 7.5\n3.0 1.0 0.0\n");
        CHECK_THROWS_AS(parse_material_table(in, MaterialFormat::n_k), MaterialError);
    }
    SUBCASE("non-increasing energies are rejected, not sorted") {
        std::istringstream in("2.0 1.0 0.0\n1.5 1.0 0.0\n");
        CHECK_THROWS_WITH_AS(parse_material_table(in, MaterialFormat::n_k, "f"),
                             doctest::Contains("strictly increasing"), MaterialError);
    }
    SUBCASE("fewer than 2 rows") {
        std::istringstream in("2.0 1.0 0.0\n");
        CHECK_THROWS_AS(parse_material_table(in, MaterialFormat::n_k), MaterialError);
    }
    SUBCASE("negative extinction") {
        std::istringstream in("2.0 1.0 -0.1\n3.0 1.0 0.0\n");
        CHECK_THROWS_WITH_AS(parse_material_table(in, MaterialFormat::n_k),
                             doctest::Contains("extinction"), MaterialError);
    }
    SUBCASE("negative Im(eps)") {
        std::istringstream in("2.0 1.0 -0.1\n3.0 1.0 0.0\n");
        CHECK_THROWS_AS(parse_material_table(in, MaterialFormat::eps), MaterialError);
    }
}

TEST_CASE("bundled gold table loads and spans the visible range") {
    const auto table = load_material_table(gold_path, MaterialFormat::n_k);
    CHECK(table.min_energy_ev() <= 1.5);
    CHECK(table.max_energy_ev() >= 3.5);
    CHECK(table.min_energy_ev() <= 2.36);
    CHECK(2.36 <= table.max_energy_ev());
    for (const auto& row : table.rows) {
        CHECK(row.eps_im >= 0.0);
    }
}

TEST_CASE("permittivity_at: interpolation") {
    const auto table = two_row_table();

    SUBCASE("grid points are exact") {
        CHECK(permittivity_at(table, 2.0) == Complex(-4.0, 1.0));
        CHECK(permittivity_at(table, 3.0) == Complex(-8.0, 3.0));
    }
    SUBCASE("linear midpoint") {
        CHECK(permittivity_at(table, 2.5) == Complex(-6.0, 2.0));
    }
    SUBCASE("out-of-range errors name the span") {
        CHECK_THROWS_WITH_AS(permittivity_at(table, 1.0), doctest::Contains("[2, 3]"),
                             MaterialError);
        CHECK_THROWS_AS(permittivity_at(table, 3.5), MaterialError);
    }
}

TEST_CASE("permittivity_at: every table node reproduces the stored value bit-for-bit") {
    const auto table = load_material_table(gold_path, MaterialFormat::n_k);
    for (const auto& row : table.rows) {
        const Complex eps = permittivity_at(table, row.photon_energy_ev);
        CHECK(eps.real() == row.eps_re);
        CHECK(eps.imag() == row.eps_im);
    }
}

TEST_CASE("permittivity_at: interpolated values lie on the segment between rows") {
    const auto table = load_material_table(gold_path, MaterialFormat::n_k);
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t i =
            std::uniform_int_distribution<std::size_t>(0, table.rows.size() - 2)(rng);
        const auto& r0 = table.rows[i];
        const auto& r1 = table.rows[i + 1];
        const double t = pick(rng);
        const double e = r0.photon_energy_ev + t * (r1.photon_energy_ev - r0.photon_energy_ev);
        const Complex eps = permittivity_at(table, e);
        // Segment parameterization recovered from the energy.
        const double s = (e - r0.photon_energy_ev) / (r1.photon_energy_ev - r0.photon_energy_ev);
        const Complex expected(r0.eps_re + s * (r1.eps_re - r0.eps_re),
                               r0.eps_im + s * (r1.eps_im - r0.eps_im));
        CHECK(std::abs(eps - expected) < 1e-14 * (1.0 + std::abs(expected)));
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
    }
}

TEST_CASE("gold permittivity at the default transition energy (regression)") {
    const auto table = load_material_table(gold_path, MaterialFormat::n_k);
    const Complex eps = permittivity_at(table, 2.36);

    // Independent route: hand interpolation of the two bracketing rows
    // (2.350 and 2.375 eV) read straight from data/gold_nk.txt.
    const double n0 = 0.60039134, k0 = 2.15007468;
    const double n1 = 0.631985343, k1 = 2.09635129;
    const double t = (2.36 - 2.35) / (2.375 - 2.35);
    const double re = (n0 * n0 - k0 * k0) + t * ((n1 * n1 - k1 * k1) - (n0 * n0 - k0 * k0));
    const double im = (2 * n0 * k0) + t * ((2 * n1 * k1) - (2 * n0 * k0));
    CHECK(eps.real() == doctest::Approx(re).epsilon(1e-12));
    CHECK(eps.imag() == doctest::Approx(im).epsilon(1e-12));

    // Frozen regression constant for the bundled dataset.
    CHECK(eps.real() == doctest::Approx(-4.15464514).epsilon(1e-8));
    CHECK(eps.imag() == doctest::Approx(2.60809003).epsilon(1e-8));
}

TEST_CASE("drude_permittivity") {
    SUBCASE("undamped plasma edge") {
        CHECK(drude_permittivity({1.0, 3.0, 0.0}, 3.0) == Complex(0.0, 0.0));
    }
    SUBCASE("below the plasma edge") {
        const Complex eps = drude_permittivity({1.0, 3.0, 0.0}, 3.0 / std::sqrt(2.0));
        CHECK(eps.real() == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(eps.imag() == 0.0);
    }
    SUBCASE("undamped response is purely real") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> energy(0.1, 10.0);
        for (int i = 0; i < 100; ++i) {
            CHECK(drude_permittivity({2.5, 7.0, 0.0}, energy(rng)).imag() == 0.0);
        }
    }
    SUBCASE("damped response regression") {
        // eps = 9 - 81/(E^2 + 0.1 i E) at E = 2.36, evaluated once by hand.
        const Complex eps = drude_permittivity({9.0, 9.0, 0.1}, 2.36);
        CHECK(eps.real() == doctest::Approx(-5.5186378257055).epsilon(1e-12));
        CHECK(eps.imag() == doctest::Approx(0.61548226790019).epsilon(1e-12));
    }
}

TEST_CASE("clausius_mossotti") {
    SUBCASE("index-matched particle vanishes") {
        CHECK(clausius_mossotti(Complex(1.0, 0.0), 1.0) == Complex(0.0, 0.0));
    }
    SUBCASE("perfect-conductor limit") {
        const Complex alpha = clausius_mossotti(Complex(1e12, 0.0), 1.0);
        CHECK(std::abs(alpha - Complex(1.0, 0.0)) < 1e-11);
    }
    SUBCASE("pole raises a singularity error") {
        CHECK_THROWS_WITH_AS(clausius_mossotti(Complex(-2.0, 1e-15), 1.0),
                             doctest::Contains("Froehlich"), SingularityError);
    }
    SUBCASE("passivity: Im(alpha) >= 0 for passive metal in lossless host") {
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> re(-10.0, 10.0);
        std::uniform_real_distribution<double> im(0.0, 10.0);
        std::uniform_real_distribution<double> host(0.5, 5.0);
        int checked = 0;
        while (checked < 500) {
            const Complex eps_m(re(rng), im(rng));
            const double eps_b = host(rng);
            if (std::abs(eps_m + 2.0 * eps_b) < 1e-3) continue;  // skip the pole disk
            CHECK(clausius_mossotti(eps_m, eps_b).imag() >= 0.0);
            ++checked;
        }
    }
}
