#!/usr/bin/env python3
"""Regenerate data/gold_nk.txt, the bundled optical-constant table for gold.

The table is sampled from the Drude-Lorentz parameterization of Au from
Rakic, Djurisic, Elazar, Majewski, "Optical properties of metallic films
for vertical-cavity optoelectronic devices", Appl. Opt. 37, 5271 (1998),
Table 1 (LD model).  The model reproduces tabulated gold optical constants
to within a few percent across the visible range, which is sufficient for
a point-dipole polarizability.

Run from the repository root:  python3 tools/generate_gold_table.py
"""

import cmath

# LD model parameters for Au (energies in eV).
OMEGA_P = 9.03
OSCILLATORS = [
    # (f_j, Gamma_j, omega_j); j = 0 is the free-electron (Drude) term.
    (0.760, 0.053, 0.000),
    (0.024, 0.241, 0.415),
    (0.010, 0.345, 0.830),
    (0.071, 0.870, 2.969),
    (0.601, 2.494, 4.304),
    (4.384, 2.214, 13.32),
]

E_MIN = 1.000
E_STEP = 0.025
N_ROWS = 121  # covers 1.000 .. 4.000 eV


def permittivity(e):
    f0, g0, _ = OSCILLATORS[0]
    eps = 1.0 - f0 * OMEGA_P**2 / (e * (e + 1j * g0))
    for f, g, w in OSCILLATORS[1:]:
        eps += f * OMEGA_P**2 / (w * w - e * e - 1j * e * g)
    return eps


def main():
    rows = []
    for i in range(N_ROWS):
        e = E_MIN + E_STEP * i
        eps = permittivity(e)
        assert eps.imag > 0.0, f"non-passive permittivity at {e} eV"
        mod = abs(eps)
        n = ((mod + eps.real) / 2.0) ** 0.5
        k = ((mod - eps.real) / 2.0) ** 0.5
        rows.append((e, n, k))

    # Sanity anchors: gold in the red/green should be a lossy metal with
    # a large negative real permittivity.
    eps_196 = permittivity(1.96)
    assert -14.0 < eps_196.real < -8.0 and 0.5 < eps_196.imag < 3.0, eps_196
    eps_236 = permittivity(2.36)
    assert -7.0 < eps_236.real < -3.0 and 1.5 < eps_236.imag < 3.5, eps_236

    with open("data/gold_nk.txt", "w") as f:
        f.write("# Gold (Au) optical constants: refractive index n and extinction k\n")
        f.write("# versus photon energy.\n")
        f.write("#\n")
        f.write("# Generated by tools/generate_gold_table.py from the Drude-Lorentz\n")
        f.write("# parameterization of Au: Rakic et al., Appl. Opt. 37, 5271 (1998),\n")
        f.write("# LD model, omega_p = 9.03 eV, terms (f, Gamma, omega) in eV:\n")
        for f_, g_, w_ in OSCILLATORS:
            f.write(f"#   ({f_:.3f}, {g_:.3f}, {w_:.3f})\n")
        f.write("#\n")
        f.write("# columns: photon_energy_eV  n  k\n")
        for e, n, k in rows:
            f.write(f"{e:.6g} {n:.9g} {k:.9g}\n")

    print(f"wrote data/gold_nk.txt ({len(rows)} rows)")
    print(f"eps(1.96 eV) = {eps_196:.6f}")
    print(f"eps(2.36 eV) = {eps_236:.6f}")
    a = (eps_236 - 1.0) / (eps_236 + 2.0)
    print(f"alpha(2.36 eV, eps_b=1) = {a:.6f}")


if __name__ == "__main__":
    main()
