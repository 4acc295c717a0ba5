"""Regenerates the reference data used by the integral/FCI oracle tests.

Requires pyscf. Run from this directory:  python3 generate_oracle.py
"""
import json

import numpy as np
from pyscf import fci, gto, scf
from pyscf.tools import fcidump

BOND_BOHR = 1.4
BASES = {"sto-3g": "sto3g", "6-31g": "631g", "cc-pvdz": "ccpvdz"}


def h2(r_bohr, basis):
    return gto.M(atom=f"H 0 0 0; H 0 0 {r_bohr}", unit="bohr", basis=basis,
                 cart=True, verbose=0)


reference = {"bond_bohr": BOND_BOHR, "energies": {}, "ao": {}, "scan": {}}
for basis, tag in BASES.items():
    mol = h2(BOND_BOHR, basis)
    mf = scf.RHF(mol).run(conv_tol=1e-13)
    e_fci = fci.FCI(mf).kernel()[0]
    fcidump.from_scf(mf, f"h2_{tag}.fcidump", tol=1e-16)
    reference["energies"][basis] = {"rhf": mf.e_tot, "fci": float(e_fci),
                                    "e_nuc": mol.energy_nuc()}
    reference["ao"][basis] = {
        "overlap": mol.intor("int1e_ovlp").tolist(),
        "kinetic": mol.intor("int1e_kin").tolist(),
        "nuclear": mol.intor("int1e_nuc").tolist(),
        "eri": mol.intor("int2e").ravel().tolist(),
    }
    rows = []
    for r_ang in np.round(np.arange(0.3, 2.5001, 0.1), 10):
        m = gto.M(atom=f"H 0 0 0; H 0 0 {r_ang}", unit="angstrom", basis=basis,
                  cart=True, verbose=0)
        mfs = scf.RHF(m).run(conv_tol=1e-13)
        rows.append([float(r_ang), mfs.e_tot, float(fci.FCI(mfs).kernel()[0])])
    reference["scan"][basis] = rows

with open("pyscf_reference.json", "w") as f:
    json.dump(reference, f, indent=1)
