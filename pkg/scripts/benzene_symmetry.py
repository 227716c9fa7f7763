"""Benzene Hückel model: HF symmetry, single-excitation manifold, projection and filtering of a random state."""

import argparse

import numpy as np

from psym.fockstate import FockState, energy, filter_state, project, weights
from psym.huckel import HuckelModel
from psym.slater import enumerate_single_excitations, reduce_manifold, weights_sd


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--hubbard-u", type=float, default=2.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    m = HuckelModel(hubbard_u=args.hubbard_u)
    print("orbital energies:", np.round(m.energies, 6).tolist())
    print("shells:", [(s.label, [i + 1 for i in s.orbitals]) for s in m.rep.shells])

    hf = m.hf_determinant()
    w = weights_sd(hf, m.group, m.rep).weights
    print("HF weights:", {k: round(v, 12) for k, v in w.items() if abs(v) > 1e-10})

    configs = enumerate_single_excitations(hf, m.shell_orbitals("e1g"), m.shell_orbitals("e2u"))
    red = reduce_manifold(configs, m.group, m.rep)
    print(f"e1g -> e2u manifold ({len(configs)} configurations):",
          {k: round(v, 9) for k, v in red.totals.items() if abs(v) > 1e-9})
    for i, c in enumerate(configs[:4], 1):
        wc = weights_sd(c, m.group, m.rep).weights
        print(f"  config {i}:", {k: round(v, 4) for k, v in wc.items() if abs(v) > 1e-10})

    ham = m.hamiltonian()
    s = FockState.random(6, np.random.default_rng(args.seed), 3, 3)
    ws = weights(s, m.group, m.rep).weights
    print("random state weights:", {k: round(v, 4) for k, v in ws.items() if v > 1e-10})
    p, norm = project(s, m.group, m.rep, "A1g")
    p = p.normalized()
    f = filter_state(p, ham, energy(p, ham)).normalized()
    print(f"A1g projection: norm {norm:.4f}, energy {energy(p, ham):.6f}; filtered energy {energy(f, ham):.6f}")


if __name__ == "__main__":
    main()
