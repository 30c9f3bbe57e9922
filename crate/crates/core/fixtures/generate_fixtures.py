#!/usr/bin/env python3
"""Regenerate the FCIDUMP fixtures shipped with this crate.

Requires pyscf and basis_set_exchange. Integrals are computed at canonical
RHF orbitals; the frozen-core electronic energy is written to the
non-standard E_FROZEN_CORE namelist key and the nuclear repulsion to the
"0 0 0 0" line.

    python3 generate_fixtures.py [output_dir]
"""
import sys
import numpy as np
import basis_set_exchange as bse
from pyscf import gto, scf, ao2mo, symm

MOLPRO_C2V = {"A1": 1, "B1": 2, "B2": 3, "A2": 4}


def basis(name, elements):
    txt = bse.get_basis(name, elements=elements, fmt="nwchem", version="1")
    return {e: gto.basis.parse(txt, e) for e in elements}


def active_integrals(mol, mf, core, active):
    c = mf.mo_coeff
    cc, ca = c[:, core], c[:, active]
    hcore = mf.get_hcore()
    dm = 2.0 * cc @ cc.T
    vj, vk = mf.get_jk(mol, dm)
    veff = vj - 0.5 * vk
    e_core = float(np.einsum("ij,ji", dm, hcore + 0.5 * veff))
    h1 = ca.T @ (hcore + veff) @ ca
    h2 = ao2mo.restore(1, ao2mo.kernel(mol, ca), len(active))
    return h1, h2, e_core


def write_fcidump(path, h1, h2, nelec, orbsym, e_core, e_nuc, cutoff=1e-12):
    n = h1.shape[0]
    lines = []
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if i * (i + 1) // 2 + j < k * (k + 1) // 2 + l:
                        continue
                    v = h2[i, j, k, l]
                    if abs(v) > cutoff:
                        lines.append(f"{v: .16E} {i + 1:3d} {j + 1:3d} {k + 1:3d} {l + 1:3d}")
    for i in range(n):
        for j in range(i + 1):
            v = h1[i, j]
            if abs(v) > cutoff:
                lines.append(f"{v: .16E} {i + 1:3d} {j + 1:3d}   0   0")
    lines.append(f"{e_nuc: .16E}   0   0   0   0")
    with open(path, "w") as f:
        f.write(f" &FCI NORB={n},NELEC={nelec},MS2=0,\n")
        f.write("  ORBSYM=" + ",".join(str(s) for s in orbsym) + ",\n")
        f.write("  ISYM=1,\n")
        f.write(f"  E_FROZEN_CORE={e_core:.16E},\n")
        f.write(" &END\n")
        f.write("\n".join(lines) + "\n")


def run(out, name, mol, core, active, nelec):
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-13
    mf.kernel()
    labels = symm.label_orb_symm(mol, mol.irrep_name, mol.symm_orb, mf.mo_coeff)
    h1, h2, e_core = active_integrals(mol, mf, core, active)
    orbsym = [MOLPRO_C2V[labels[i]] for i in active]
    write_fcidump(f"{out}/{name}", h1, h2, nelec, orbsym, e_core, mol.energy_nuc())
    print(name, "E(RHF) =", mf.e_tot, "V_nn =", mol.energy_nuc(), "E_core =", e_core,
          "active =", [labels[i] for i in active])


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "."
    lih = gto.M(atom="Li 0 0 0; H 0 0 3.20", unit="Angstrom",
                basis=basis("sto-3g", ["Li", "H"]), symmetry="C2v", verbose=0)
    # RHF orbitals: 1a1 2a1 3a1 1b1 1b2 4a1; active 2a1 3a1 4a1
    run(out, "lih_sto3g.fcidump",
        lih, core=[0], active=[1, 2, 5], nelec=2)

    r, theta = 2.05, np.deg2rad(107.6)
    x, z = r * np.sin(theta / 2), r * np.cos(theta / 2)
    h2o = gto.M(atom=f"O 0 0 0; H {x} 0 {z}; H {-x} 0 {z}", unit="Angstrom",
                basis=basis("6-31g", ["O", "H"]), symmetry="C2v", verbose=0)
    # molecule in the xz plane: RHF orbitals 1a1 2a1 1b2 3a1 1b1 | 4a1 2b1 ...
    run(out, "h2o_631g.fcidump",
        h2o, core=[0, 1, 2], active=[4, 3, 5, 6], nelec=4)


if __name__ == "__main__":
    main()
