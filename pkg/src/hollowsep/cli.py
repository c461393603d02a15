"""Command-line interface.

Exit codes: 0 separable, 10 entangled, 20 undecided; 2 for usage errors,
unreadable files or invalid shapes; 3 for files that parse but do not hold a
valid state.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import bundled, fileio
from .concurrence import mixed_concurrence_report, pure_concurrences
from .exceptions import HollowsepError, OverflowGuard, StateFileError
from .operators import generate_minimal, generate_redundant
from .separability import ClassifyOptions, classify
from .states import DEFAULT_RANK_TOL, PureState, SystemShape

EXIT_SEPARABLE = 0
EXIT_USAGE = 2
EXIT_INVALID_STATE = 3
EXIT_ENTANGLED = 10
EXIT_UNDECIDED = 20

VERDICT_EXIT = {"separable": EXIT_SEPARABLE, "entangled": EXIT_ENTANGLED, "undecided": EXIT_UNDECIDED}
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


def _parse_shape(text: str) -> SystemShape:
    try:
        return SystemShape(tuple(int(x) for x in text.split(",")))
    except ValueError as exc:
        raise UsageError(f"invalid shape {text!r}: {exc}") from exc


def _emit(doc: dict, fmt: str, human_lines: list[str], timestamp: bool) -> None:
    if fmt == "machine":
        if timestamp:
            doc["generated_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
        print(json.dumps(doc, indent=2))
    else:
        print("\n".join(human_lines))


def _load_state(path: str):
    doc = fileio.load(path)  # StateFileError -> exit 2
    return doc, doc.to_state()  # validation errors -> exit 3


def cmd_ops(args) -> int:
    shape = _parse_shape(args.shape)
    gen = generate_redundant if args.redundant else generate_minimal
    try:
        cat = gen(shape, cap=args.cap)
    except OverflowGuard as exc:
        raise UsageError(str(exc)) from exc
    family = cat.family
    doc = {
        "shape": list(shape.dims),
        "family": family,
        "count": len(cat),
        "operators": [
            {"alpha": a + 1, "indices": [list(shape.multi(int(x))) for x in q]}
            for a, q in enumerate(cat.quads)
        ] if not args.count_only else [],
    }
    lines = [f"shape {shape}  family {family}  count {len(cat)}"]
    if not args.count_only:
        lines += [f"{a + 1:>6}  {op.describe()}" for a, op in enumerate(cat)]
    _emit(doc, args.format, lines, args.timestamp)
    return 0


def cmd_concurrence(args) -> int:
    doc, state = _load_state(args.state)
    shape = doc.shape
    cat = generate_minimal(shape)
    if isinstance(state, PureState):
        values = pure_concurrences(state, cat)
        gaps = values
        rank = 1
    else:
        rep = mixed_concurrence_report(state, cat, args.rank_tol)
        values, gaps, rank = rep.concurrences, rep.gaps, rep.rank
    tol = args.tol
    witness = [a for a in range(len(values)) if values[a] > tol]
    if witness:
        verdict = "entangled"
    elif rank == 1 or shape.dims == (2, 2):
        # pure states, and two qubits, are decided by the concurrences alone
        verdict = "separable"
    else:
        verdict = "undecided"
    out = {
        "state": doc.name or str(args.state),
        "shape": list(shape.dims),
        "rank": rank,
        "tolerance": tol,
        "concurrences": [
            {"alpha": a + 1, "value": float(values[a]), "thompson_gap": float(gaps[a])} for a in range(len(values))
        ],
        "verdict": verdict,
    }
    lines = [f"state {out['state']}  shape {shape}  rank {rank}", f"{'alpha':>6}  {'C_alpha':>12}  {'gap':>12}"]
    lines += [f"{a + 1:>6}  {values[a]:12.4e}  {gaps[a]:12.4e}" for a in range(len(values))]
    lines.append(f"verdict: {verdict}")
    _emit(out, args.format, lines, args.timestamp)
    return VERDICT_EXIT[verdict]


def _decomposition_doc(decomp) -> list[dict]:
    out = []
    for w, s in zip(decomp.weights, decomp.states):
        out.append({"weight": float(w), "kind": "pure", "shape": list(decomp.shape.dims),
                    "amplitudes": fileio.complex_pairs(s)})
    return out


def cmd_separability(args) -> int:
    doc, state = _load_state(args.state)
    rho = state.projector() if isinstance(state, PureState) else state
    opts = ClassifyOptions(
        tol=args.tol, rank_tol=args.rank_tol, p_max=args.p_max, restarts=args.restarts,
        max_iters=args.max_iters, seed=args.seed, skip_ppt=args.skip_ppt,
    )
    v = classify(rho, opts=opts)
    out = {
        "state": doc.name or str(args.state),
        "shape": list(rho.shape.dims),
        "rank": v.rank,
        "verdict": v.status,
        "method": v.method,
        "seed": args.seed,
        "thompson_gaps": [float(g) for g in v.gaps] if v.gaps is not None else None,
    }
    lines = [f"state {out['state']}  shape {rho.shape}  rank {v.rank}"]
    if v.gaps is not None:
        lines.append("thompson gaps s1 - sum(s_k):")
        lines += [f"  alpha {a + 1:>4}: {g: .4e}" for a, g in enumerate(v.gaps)]
    if v.concurrence_witness is not None:
        a, val = v.concurrence_witness
        out["concurrence_witness"] = {"alpha": a + 1, "value": val}
        lines.append(f"witness: C_{a + 1} = {val:.6e}")
    if v.ppt_witness is not None:
        parties, low = v.ppt_witness
        out["ppt_witness"] = {"parties": list(parties), "min_eigenvalue": low}
        lines.append(f"witness: partial transpose over parties {list(parties)} has eigenvalue {low:.6e}")
    if v.proportionality_witness is not None:
        a, b, res = v.proportionality_witness
        out["proportionality_witness"] = {"alpha": a + 1, "beta": b + 1, "residual": res}
        lines.append(f"witness: tau_{a + 1} and tau_{b + 1} not proportional (residual {res:.3e})")
    if v.decomposition is not None:
        out["p"] = v.p
        out["decomposition"] = _decomposition_doc(v.decomposition)
        out["verification"] = {
            "reconstruction_error": v.verification.reconstruction_error,
            "max_state_concurrence": v.verification.max_state_concurrence,
            "all_product": all(v.verification.product_flags),
        }
        lines.append(f"decomposition over {len(v.decomposition)} product states (p = {v.p}), "
                     f"reconstruction error {v.verification.reconstruction_error:.2e}")
        for w, s in zip(v.decomposition.weights, v.decomposition.states):
            lines.append(f"  weight {w:.6f}")
    tried = v.diagnostics.get("tried")
    if tried:
        out["tried"] = [{"p": p, "status": st, "residual": (res if np.isfinite(res) else None)}
                        for p, st, res in tried]
        if v.status == "undecided":
            lines.append("search diagnostics (p, status, best residual):")
            lines += [f"  {p:>3}  {st:<9}  {res:.3e}" for p, st, res in tried]
    lines.append(f"verdict: {v.status} ({v.method})")
    _emit(out, args.format, lines, args.timestamp)
    return VERDICT_EXIT[v.status]


def cmd_examples(args) -> int:
    if args.list or not args.name:
        for name in bundled.NAMES:
            print(f"{name:<14} {bundled.BUILDERS[name][1]}")
        return 0
    try:
        text = bundled.bundled_text(args.name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hollowsep", description="Separability via generalized concurrences.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["human", "machine"], default="human")
        p.add_argument("--timestamp", action=argparse.BooleanOptionalAction, default=True,
                       help="include a generated_at field in machine output")

    p = sub.add_parser("ops", help="list spin-flip operators")
    p.add_argument("--shape", required=True, help="party dimensions, e.g. 2,2,3")
    p.add_argument("--redundant", action="store_true", help="full minor family instead of the minimal set")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--cap", type=int, default=10**7)
    common(p)
    p.set_defaults(func=cmd_ops)

    p = sub.add_parser("concurrence", help="per-operator concurrences of a state file")
    p.add_argument("state")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)
    common(p)
    p.set_defaults(func=cmd_concurrence)

    p = sub.add_parser("separability", help="classify a state file")
    p.add_argument("state")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)
    p.add_argument("--p-max", type=int, default=None, help="largest decomposition length tried (default r^2)")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--max-iters", type=int, default=300)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--skip-ppt", action="store_true")
    common(p)
    p.set_defaults(func=cmd_separability)

    p = sub.add_parser("examples", help="write a bundled example state file")
    p.add_argument("name", nargs="?", help=", ".join(bundled.NAMES))
    p.add_argument("-o", "--output")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, StateFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HollowsepError as exc:
        print(f"invalid state: {exc}", file=sys.stderr)
        return EXIT_INVALID_STATE


if __name__ == "__main__":
    sys.exit(main())
