"""Command-line front end: ``psym <subcommand>``.

Exit codes: 0 success, 2 input error, 3 strict-mode failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import _jsonio
from .fockstate import FockState, apply_ucj, energy, filter_state, load_params, load_state, read_fcidump, save_state
from .fockstate import project as project_state
from .fockstate import weights as state_weights
from .fockstate.hamiltonian import apply_hamiltonian, write_fcidump
from .huckel import HuckelModel
from .pointgroup import CharacterTable, PointGroup, WeightReport, load_group, validate_table
from .representation import RepSet, load_basis, load_rep, save_rep, validate
from .slater import (
    enumerate_single_excitations,
    load_dets,
    reduce_manifold,
    save_dets,
    weights_sd,
)
from .tncompress import (
    CompressConfig,
    compress,
    infidelity,
    load_circuit,
    load_mps,
    mps_from_statevector,
    mps_to_statevector,
    save_circuit,
)

EXIT_OK, EXIT_INPUT, EXIT_STRICT = 0, 2, 3
DISPLAY_ZERO = 1e-10
STRICT_SUM_TOL = 1e-8
ZERO_NORM = 1e-10

D5D_NOTE = (
    "D5d: A2g under 2S10^3 is +1 and E2u under 5sigma_d is 0; "
    "the alternatives (-1 and +1) violate the orthogonality relations."
)


class InputError(Exception):
    """Bad command-line input; reported with exit code 2."""


class StrictFailure(Exception):
    """A --strict check failed; reported with exit code 3."""


def _clamp(x: float) -> float:
    return 0.0 if abs(x) < DISPLAY_ZERO else x


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


# --- input loading -------------------------------------------------------------

def _group(args) -> PointGroup:
    if not args.group:
        raise InputError("--group is required")
    return load_group(args.group)


def _rep(args, group: PointGroup | None) -> RepSet:
    if not args.rep:
        raise InputError("--rep is required")
    data = _jsonio.load(args.rep)
    rep = load_basis(args.rep, group) if "S" in data else load_rep(args.rep)
    if group is not None:
        problems = validate(rep, group)
        if problems:
            raise InputError(f"representation fails validation: {problems[0]}")
    return rep


def _sources(args, allowed=("state", "dets", "mps")) -> str:
    given = [s for s in allowed if getattr(args, s, None)]
    if len(given) != 1:
        flags = ", ".join(f"--{s}" for s in allowed)
        raise InputError(f"give exactly one wavefunction source ({flags}); got {len(given)}")
    return given[0]


def _single_state(args) -> tuple[FockState, str]:
    """One statevector from --state, --dets (single determinant) or --mps, with --ucj applied on top."""
    src = _sources(args)
    if src == "state":
        state, backend = load_state(args.state), "statevector"
    elif src == "mps":
        state, backend = mps_to_statevector(load_mps(args.mps)), "mps"
    else:
        dets = load_dets(args.dets)
        if len(dets) != 1:
            raise InputError(f"{args.dets} holds {len(dets)} determinants; this command needs exactly one")
        d = dets[0]
        state, backend = FockState.from_occupations(d.n_spatial, d.up, d.down), "statevector"
    if getattr(args, "ucj", None):
        state, backend = apply_ucj(state, load_params(args.ucj)), "statevector"
    return state, backend


# --- subcommands -----------------------------------------------------------------

def _table_rows(table: CharacterTable) -> list[list]:
    head = ["irrep"] + [f"{size}{label}" if size > 1 and not label[0].isdigit() else label
                        for label, size in table.classes]
    rows = [head]
    for k, label in enumerate(table.irrep_labels):
        vals = []
        for v in table.chi[k]:
            v = complex(v)
            vals.append(f"{v.real:.6g}" if abs(v.imag) < 1e-12 else f"{v.real:.6g}{v.imag:+.6g}j")
        rows.append([label] + vals)
    return rows


def cmd_characters(args) -> int:
    group = _group(args)
    table = group.table
    bad = validate_table(table)
    if args.format == "csv":
        text = _csv(_table_rows(table))
    else:
        text = _json({
            "group": group.name,
            "classes": [{"label": c, "size": r} for c, r in table.classes],
            "irreps": {label: [[complex(v).real, complex(v).imag] for v in table.chi[k]]
                       for k, label in enumerate(table.irrep_labels)},
            "valid": not bad,
            "violations": [str(v) for v in bad],
        })
    _emit(text, args.out)
    if group.name == "D5d":
        print(D5D_NOTE, file=sys.stderr)
    for v in bad:
        print(f"violation: {v}", file=sys.stderr)
    return EXIT_OK if not bad else EXIT_STRICT


def _report_rows(report: WeightReport, table: CharacterTable, prefix: list | None = None) -> list[list]:
    prefix = prefix or []
    return [prefix + [label, _clamp(report.weights[label]), d] for label, d in table.irreps]


def _report_json(report: WeightReport, table: CharacterTable) -> dict:
    out = report.to_dict(table)
    out["weights"] = {k: _clamp(v) for k, v in out["weights"].items()}
    return out


def _check_report(report: WeightReport) -> None:
    if abs(report.sum_of_weights - 1.0) > STRICT_SUM_TOL:
        raise StrictFailure(f"sum of weights {report.sum_of_weights:.12f} differs from 1")
    low = min(report.weights.values())
    if low < -STRICT_SUM_TOL and report.mode == "exact":
        raise StrictFailure(f"negative weight {low:.3e} in exact mode")


def cmd_weights(args) -> int:
    group = _group(args)
    rep = _rep(args, group)
    table = group.table
    src = _sources(args)
    reports: list[WeightReport] = []
    if src == "dets" and not args.ucj:
        dets = load_dets(args.dets)
        for d in dets:
            if args.mode == "exact":
                reports.append(weights_sd(d, group, rep))
            else:
                st = FockState.from_occupations(d.n_spatial, d.up, d.down)
                reports.append(state_weights(st, group, rep, args.mode, args.shots, args.seed))
    else:
        state, backend = _single_state(args)
        rep_ = state_weights(state, group, rep, args.mode, args.shots, args.seed)
        rep_.backend = backend
        reports.append(rep_)
    if args.format == "csv":
        if len(reports) == 1:
            rows = [["irrep", "weight", "d_gamma"]] + _report_rows(reports[0], table)
        else:
            rows = [["config", "irrep", "weight", "d_gamma"]]
            for i, r in enumerate(reports, 1):
                rows += _report_rows(r, table, [i])
        text = _csv(rows)
    else:
        payload = [_report_json(r, table) for r in reports]
        text = _json(payload[0] if len(payload) == 1 else {"reports": payload})
    _emit(text, args.out)
    if args.strict:
        for r in reports:
            _check_report(r)
    return EXIT_OK


def cmd_reduce(args) -> int:
    group = _group(args)
    rep = _rep(args, group)
    if not args.dets:
        raise InputError("--dets is required")
    dets = load_dets(args.dets)
    if args.from_shell or args.to_shell:
        if not (args.from_shell and args.to_shell):
            raise InputError("--from-shell and --to-shell go together")
        if len(dets) != 1:
            raise InputError("enumerating excitations needs a single reference determinant")
        src, dst = _shell(rep, args.from_shell), _shell(rep, args.to_shell)
        dets = enumerate_single_excitations(dets[0], src, dst)
    red = reduce_manifold(dets, group, rep)
    table = group.table
    if args.format == "csv":
        rows = [["irrep", "total", "occurrences", "d_gamma"]]
        rows += [[label, _clamp(red.totals[label]), _clamp(red.occurrences[label]), d] for label, d in table.irreps]
        text = _csv(rows)
    else:
        text = _json({
            "group": group.name,
            "n_configs": len(dets),
            "totals": {k: _clamp(v) for k, v in red.totals.items()},
            "occurrences": {k: _clamp(v) for k, v in red.occurrences.items()},
        })
    _emit(text, args.out)
    if args.strict:
        off = max(abs(v - round(v)) for v in red.totals.values())
        if off > 1e-9:
            raise StrictFailure(f"totals are not integers (max deviation {off:.2e})")
    return EXIT_OK


def _shell(rep: RepSet, label: str) -> tuple[int, ...]:
    hits = [s.orbitals for s in rep.shells if s.label == label]
    if len(hits) != 1:
        raise InputError(f"shell label {label!r} matches {len(hits)} shells")
    return hits[0]


def _eigen_residual(state: FockState, ham) -> tuple[float, float]:
    h = apply_hamiltonian(state, ham).amplitudes
    e = float(np.vdot(state.amplitudes, h).real)
    return e, float(np.linalg.norm(h - e * state.amplitudes))


def cmd_project(args) -> int:
    group = _group(args)
    rep = _rep(args, group)
    if not args.irrep:
        raise InputError("--irrep is required")
    state, _ = _single_state(args)
    state = state.normalized()
    proj, norm = project_state(state, group, rep, args.irrep)
    report: dict = {"irrep": args.irrep, "norm": norm, "weight": norm**2, "zero": norm <= ZERO_NORM}
    if norm > ZERO_NORM:
        proj = proj.normalized()
        if args.out:
            save_state(proj, args.out)
            report["state_file"] = args.out
    if args.fcidump:
        ham = read_fcidump(args.fcidump)
        energies = {"original": energy(state, ham)}
        if norm > ZERO_NORM:
            energies["projected"] = energy(proj, ham)
            if args.cutoff is not None:
                filt = filter_state(proj, ham, args.cutoff)
                if filt.norm > ZERO_NORM:
                    filt = filt.normalized()
                    e, res = _eigen_residual(filt, ham)
                    energies["filtered"] = e
                    report["filtered_norm"] = filt.norm
                    report["filtered_residual"] = res
                    if args.filtered_out:
                        save_state(filt, args.filtered_out)
                else:
                    report["filtered_norm"] = 0.0
        report["energies"] = energies
    text = _json(report)
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    if args.strict and norm <= ZERO_NORM:
        raise StrictFailure(f"projection onto {args.irrep} has zero norm ({norm:.2e})")
    return EXIT_OK


def _layer_range(spec: str) -> list[int]:
    try:
        if "-" in spec:
            a, b = (int(x) for x in spec.split("-"))
            return list(range(a, b + 1))
        return [int(x) for x in spec.split(",")]
    except ValueError:
        raise InputError(f"cannot parse layer spec {spec!r}; use e.g. 4, 1-4 or 2,4,6") from None


def _target_mps(args):
    src = _sources(args, ("state", "mps"))
    if src == "mps":
        return load_mps(args.mps)
    state = load_state(args.state).normalized()
    return mps_from_statevector(state, 2**state.n_spatial)[0]


def cmd_compress(args) -> int:
    target = _target_mps(args)
    if not target.right_normalized:
        raise InputError("target MPS is not right-normalized")
    if args.score:
        circ = load_circuit(args.score)
        value = infidelity(target, circ, args.bond)
        _emit(_json({"layers": circ.depth, "infidelity": value}), args.out)
        return EXIT_OK
    rows = [["layers", "best_infidelity", "sweeps", "converged"]]
    best = None
    for n_layers in _layer_range(args.layers):
        cfg = CompressConfig(
            layers=n_layers, max_bond=args.bond, max_sweeps=args.max_sweeps, inner_iters=args.inner_iters,
            tol=args.tol, init=args.init, restarts=args.restarts, seed=args.seed,
        )
        res = compress(target, cfg)
        rows.append([n_layers, res.infidelity, res.best.sweeps, res.best.converged])
        best = res
    if args.circuit_out:
        save_circuit(best.circuit, args.circuit_out)
    text = _csv(rows) if args.format == "csv" else _json(
        [dict(zip(rows[0], r)) for r in rows[1:]]
    )
    _emit(text, args.out)
    return EXIT_OK


def cmd_model(args) -> int:
    if args.model != "huckel":
        raise InputError(f"unknown model {args.model!r}")
    model = HuckelModel(args.n, args.alpha, args.beta, args.group or "D6h", args.hubbard_u)
    problems = validate(model.rep, model.group)
    if problems:
        raise StrictFailure(f"fixture representation failed validation: {problems[0]}")
    out = Path(args.out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    hf = model.hf_determinant()
    files = {
        "rep": out / "rep.json",
        "dets": out / "hf_dets.json",
        "fcidump": out / "FCIDUMP",
        "state": out / "hf.psym",
    }
    save_rep(model.rep, files["rep"])
    save_dets([hf], files["dets"])
    write_fcidump(model.hamiltonian(), files["fcidump"])
    save_state(FockState.from_occupations(hf.n_spatial, hf.up, hf.down), files["state"])
    summary = {
        "model": "huckel",
        "n_sites": model.n_sites,
        "group": model.group_name,
        "energies": model.energies.tolist(),
        "shells": [{"label": s.label, "orbitals": [i + 1 for i in s.orbitals]} for s in model.rep.shells],
        "files": {k: str(v) for k, v in files.items()},
    }
    sys.stdout.write(_json(summary))
    return EXIT_OK


# --- parser --------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, sources: bool = True) -> None:
    p.add_argument("--group", help="built-in group name (D2h, D6h, D5d) or group-spec JSON")
    p.add_argument("--rep", help="rep-spec JSON or raw-basis JSON {S, x, DB}")
    if sources:
        p.add_argument("--state", help="binary wavefunction file")
        p.add_argument("--dets", help="determinant list JSON")
        p.add_argument("--mps", help="binary MPS file")
        p.add_argument("--ucj", help="UCJ parameter JSON applied to the given reference")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--strict", action="store_true", help="exit 3 when a consistency check fails")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="psym", description="Point-group symmetry analysis of fermionic states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("characters", help="print and validate a character table")
    _common(p, sources=False)
    p.set_defaults(func=cmd_characters)

    p = sub.add_parser("weights", help="irrep weights of a wavefunction")
    _common(p)
    p.add_argument("--mode", choices=("exact", "pauli", "sampled"), default="exact")
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("reduce", help="reduce the representation spanned by determinants")
    _common(p)
    p.add_argument("--from-shell", help="shell label to excite from (enumerates single excitations)")
    p.add_argument("--to-shell", help="shell label to excite into")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("project", help="project onto an irrep, optionally filter by energy")
    _common(p)
    p.add_argument("--irrep", help="irrep label")
    p.add_argument("--fcidump", help="FCIDUMP file for energies")
    p.add_argument("--cutoff", type=float, help="keep eigencomponents with energy below this value")
    p.add_argument("--report", help="path for the JSON report (default stdout)")
    p.add_argument("--filtered-out", help="path for the filtered state")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("compress", help="brick-wall circuit compression of an MPS or statevector")
    _common(p)
    p.add_argument("--layers", default="1-4", help="layer counts, e.g. 4, 1-4 or 2,4,6")
    p.add_argument("--bond", type=int, default=256, help="bond cap for intermediate MPSs")
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-sweeps", type=int, default=500)
    p.add_argument("--inner-iters", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--init", choices=("random", "identity"), default="random")
    p.add_argument("--circuit-out", help="write the circuit for the last layer count")
    p.add_argument("--score", help="re-score an existing circuit file instead of optimizing")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("model", help="generate fixture files")
    p.add_argument("model", choices=("huckel",))
    p.add_argument("--n", type=int, default=6, help="ring size")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=-1.0)
    p.add_argument("--group", default="D6h")
    p.add_argument("--hubbard-u", type=float, default=0.0)
    p.add_argument("--out-dir", help="directory for the generated files")
    p.set_defaults(func=cmd_model)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StrictFailure as exc:
        print(f"psym: strict check failed: {exc}", file=sys.stderr)
        return EXIT_STRICT
    except (InputError, ValueError, OSError) as exc:
        print(f"psym: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
