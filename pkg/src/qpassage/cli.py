"""Command-line front end.

Every command reads one JSON problem document (a path, or ``-`` for stdin)
and writes a JSON result to stdout; ``trajectory`` writes CSV instead.

Exit codes: 0 result found, 1 valid run without a passage, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from . import bounds, ensemble, geometry, rational, solver
from .errors import EigenstateInput, IncommensurateEnsemble, PassageError
from .state import EnergyState, make_state

EXIT_OK, EXIT_NO_PASSAGE, EXIT_INVALID = 0, 1, 2


class SpecError(ValueError):
    pass


@dataclass
class ProblemSpec:
    energies: list[float]
    hbar: float = 1.0
    amplitudes: Optional[list[complex]] = None
    ensemble: Optional[list[dict]] = None
    solver: dict = field(default_factory=dict)


def _line_of(text: str, key: str) -> int:
    needle = f'"{key}"'
    for lineno, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return lineno
    return 1


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"field '{where}': expected a number, got {value!r}")
    if not math.isfinite(value):
        raise SpecError(f"field '{where}': must be finite")
    return float(value)


_SOLVER_KEYS = {"t_max", "zero_tol", "tol", "max_den"}


def parse_spec(text: str) -> ProblemSpec:
    """Parse a problem document; errors carry the line and field name."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise SpecError("line 1: top level must be an object")

    def fail(key: str, msg: str):
        raise SpecError(f"line {_line_of(text, key)}: {msg}")

    try:
        hbar = _number(doc.get("hbar", 1.0), "hbar")
        if hbar <= 0:
            raise SpecError("field 'hbar': must be positive")

        energies: list[float] = []
        if "energies" in doc:
            if not isinstance(doc["energies"], list):
                raise SpecError("field 'energies': expected a list")
            energies = [_number(e, f"energies[{i}]") for i, e in enumerate(doc["energies"])]

        amplitudes = None
        if "amplitudes" in doc:
            raw = doc["amplitudes"]
            if not isinstance(raw, list):
                raise SpecError("field 'amplitudes': expected a list of [re, im] pairs")
            amplitudes = []
            for i, pair in enumerate(raw):
                if not (isinstance(pair, list) and len(pair) == 2):
                    raise SpecError(f"field 'amplitudes[{i}]': expected an [re, im] pair")
                amplitudes.append(complex(_number(pair[0], f"amplitudes[{i}][0]"),
                                          _number(pair[1], f"amplitudes[{i}][1]")))
            if len(amplitudes) != len(energies):
                raise SpecError(f"field 'amplitudes': {len(amplitudes)} entries for "
                                f"{len(energies)} energies")

        members = None
        if "ensemble" in doc:
            if not isinstance(doc["ensemble"], list) or not doc["ensemble"]:
                raise SpecError("field 'ensemble': expected a non-empty list")
            members = []
            for i, m in enumerate(doc["ensemble"]):
                where = f"ensemble[{i}]"
                if not isinstance(m, dict):
                    raise SpecError(f"field '{where}': expected an object")
                pair = m.get("energies")
                if not (isinstance(pair, list) and len(pair) == 2):
                    raise SpecError(f"field '{where}.energies': expected [E_a, E_b]")
                members.append({
                    "weight": _number(m.get("weight"), f"{where}.weight"),
                    "energies": [_number(e, f"{where}.energies") for e in pair],
                    "phase": _number(m.get("phase", 0.0), f"{where}.phase"),
                })

        settings = doc.get("solver", {})
        if not isinstance(settings, dict):
            raise SpecError("field 'solver': expected an object")
        unknown = set(settings) - _SOLVER_KEYS
        if unknown:
            raise SpecError(f"field 'solver': unknown keys {sorted(unknown)}")
        settings = {k: _number(v, f"solver.{k}") for k, v in settings.items()}
    except SpecError as exc:
        msg = str(exc)
        key = msg.split("'")[1].split("[")[0].split(".")[0] if "'" in msg else ""
        fail(key, msg)

    return ProblemSpec(energies, hbar, amplitudes, members, settings)


def _state(spec: ProblemSpec) -> EnergyState:
    if spec.amplitudes is None:
        raise SpecError("field 'amplitudes': required by this command")
    return make_state(spec.energies, spec.amplitudes, spec.hbar)


def _num(x: Optional[float]):
    """JSON-safe number: infinities become the string "inf"."""
    if x is None:
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(x)


def _over_pi(doc: dict, keys: list[str]) -> None:
    for k in keys:
        v = doc.get(k)
        if isinstance(v, float):
            doc[f"{k}_over_pi"] = v / math.pi


def _solver_opts(spec: ProblemSpec, args) -> dict:
    s = spec.solver
    return {
        "t_max": args.t_max if args.t_max is not None else s.get("t_max"),
        "zero_tol": args.zero_tol if args.zero_tol is not None
        else s.get("zero_tol", solver.ZERO_TOL),
        "tol": s.get("tol", rational.DEFAULT_TOL),
        "max_den": int(s.get("max_den", rational.DEFAULT_MAX_DEN)),
    }


def cmd_bounds(spec: ProblemSpec, args) -> tuple[dict, int]:
    rep = bounds.bounds_report(_state(spec))
    doc = {
        "command": "bounds",
        "delta_h": rep.delta_h,
        "fleming": _num(rep.fleming),
        "delta_e_passage": _num(rep.delta_e_passage),
        "margolus_levitin": _num(rep.margolus_levitin),
        "ml_never_sharper": rep.ml_never_sharper,
    }
    if args.report_in_pi:
        _over_pi(doc, ["fleming", "delta_e_passage", "margolus_levitin"])
    return doc, EXIT_OK


def cmd_passage(spec: ProblemSpec, args) -> tuple[dict, int]:
    state = _state(spec)
    opts = _solver_opts(spec, args)
    report = bounds.bounds_report(state)
    try:
        res = solver.find_passage(state, opts["t_max"], opts["zero_tol"],
                                  tol=opts["tol"], max_den=opts["max_den"])
    except EigenstateInput:
        doc = {"command": "passage", "found": False, "time": None, "residual": 1.0,
               "min_location": None, "window": _num(opts["t_max"]), "method": None,
               "fleming_ratio": None, "attainment": solver.Attainment.NO_PASSAGE.value,
               "geodesic": None, "note": "energy eigenstate: a(t) never vanishes"}
        return doc, EXIT_NO_PASSAGE
    attainment = solver.classify_attainment(res, report)
    doc = {
        "command": "passage",
        "found": res.found,
        "time": res.time,
        "residual": res.residual,
        "min_location": res.min_location,
        "window": res.window,
        "method": res.method.value,
        "fleming_ratio": res.fleming_ratio,
        "attainment": attainment.value,
        "geodesic": geometry.geodesic_check(state, res.time) if res.found else None,
    }
    if args.report_in_pi:
        _over_pi(doc, ["time", "window"])
    return doc, EXIT_OK if res.found else EXIT_NO_PASSAGE


def cmd_trajectory(spec: ProblemSpec, args) -> tuple[str, int]:
    state = _state(spec)
    opts = _solver_opts(spec, args)
    t_max = opts["t_max"]
    if t_max is None:
        try:
            t_max = solver.default_window(state, opts["tol"], opts["max_den"])
        except EigenstateInput:
            raise SpecError("field 'solver': an eigenstate needs an explicit t_max") from None
    samples = solver.survival_scan(state, t_max, args.samples)
    origin = geometry.evolve(state, 0.0)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "re_a", "im_a", "survival_prob", "fs_distance"])
    for smp in samples:
        d = geometry.fs_distance(origin, geometry.evolve(state, smp.t))
        writer.writerow([f"{v:.17g}" for v in
                         (smp.t, smp.amplitude.real, smp.amplitude.imag, smp.probability, d)])
    return buf.getvalue(), EXIT_OK


def cmd_check_spectrum(spec: ProblemSpec, args) -> tuple[dict, int]:
    opts = _solver_opts(spec, args)
    if len(set(spec.energies)) < 2:
        raise SpecError("field 'energies': need at least two distinct levels")
    st = rational.analyze_spectrum(spec.energies, opts["tol"], opts["max_den"], spec.hbar)
    entries = []
    base = st.frequencies[0]
    for w, r in zip(st.frequencies, st.ratios):
        mn = rational.odd_odd_ratio(w, base, opts["tol"], opts["max_den"])
        entries.append({
            "omega": w,
            "ratio": None if r is None else f"{r[0]}/{r[1]}",
            "odd_odd": mn is not None,
            "m": None if mn is None else mn[0],
            "n": None if mn is None else mn[1],
        })
    doc = {
        "command": "check-spectrum",
        "frequencies": entries,
        "all_commensurate": st.all_commensurate,
        "period": st.period,
        "odd_odd": st.odd_odd,
    }
    if args.report_in_pi:
        _over_pi(doc, ["period"])
    return doc, EXIT_OK


def cmd_ensemble(spec: ProblemSpec, args) -> tuple[dict, int]:
    if not spec.ensemble:
        raise SpecError("field 'ensemble': required by this command")
    opts = _solver_opts(spec, args)
    ens = ensemble.make_ensemble([
        (m["weight"], ensemble.two_level_member(*m["energies"], m["phase"], spec.hbar))
        for m in spec.ensemble])
    try:
        out = ensemble.ensemble_passage(ens, opts["tol"], opts["max_den"])
    except IncommensurateEnsemble:
        out = ensemble.EnsemblePassage(None, ensemble.INCOMMENSURATE)

    rho0 = ensemble.density_matrix(ens)
    t_check = out.time if out.time is not None else 1.0
    rho_t = ensemble.evolve_density(rho0, t=t_check)
    deviation = float(np.max(np.abs(np.diag(rho_t.entries) - np.diag(rho0.entries))))
    doc = {
        "command": "ensemble",
        "time": out.time,
        "status": "ok" if out.time is not None else f"none ({out.reason})",
        "multiples": list(out.multiples) if out.multiples else None,
        "member_overlaps": (ensemble.verify_member_orthogonality(ens, out.time)
                            if out.time is not None else None),
        "diagonal_invariance": {"t": t_check, "max_deviation": deviation,
                                "holds": deviation <= 1e-14},
    }
    if args.report_in_pi:
        _over_pi(doc, ["time"])
    return doc, EXIT_OK if out.time is not None else EXIT_NO_PASSAGE


COMMANDS = {
    "bounds": cmd_bounds,
    "passage": cmd_passage,
    "trajectory": cmd_trajectory,
    "check-spectrum": cmd_check_spectrum,
    "ensemble": cmd_ensemble,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="problem document (JSON); '-' reads stdin")
    common.add_argument("--t-max", type=float, default=None, help="search/scan window")
    common.add_argument("--zero-tol", type=float, default=None,
                        help=f"|a| threshold for a zero (default {solver.ZERO_TOL})")
    common.add_argument("--samples", type=int, default=101, help="trajectory rows")
    common.add_argument("--seed", type=int, default=None,
                        help="echoed in the output so randomized runs can be replayed")
    common.add_argument("--report-in-pi", action="store_true",
                        help="also print times divided by pi")
    parser = argparse.ArgumentParser(
        prog="qpassage", description="Quantum passage times and speed-limit bounds.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        spec = parse_spec(text)
        out, code = COMMANDS[args.command](spec, args)
    except OSError as exc:
        print(f"qpassage: cannot read {args.input}: {exc.strerror}", file=sys.stderr)
        return EXIT_INVALID
    except (SpecError, PassageError, ValueError) as exc:
        print(f"qpassage: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID

    if isinstance(out, str):
        sys.stdout.write(out)
    else:
        if args.seed is not None:
            out["seed"] = args.seed
        sys.stdout.write(json.dumps(out, indent=2, allow_nan=False) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
