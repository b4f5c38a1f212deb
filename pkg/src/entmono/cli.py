"""Command-line surface: analyze, sweep, certify, figures.

Exit codes: 0 success, 1 usage or data error, 2 a non-monogamy witness was
found (so scripts can branch on it).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import measures, monogamy, states
from .measures import LOG2_3, MeasureId, MeasureTriple
from .monogamy import XKind

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_WITNESS = 2


def _fmt(v) -> str:
    """12-significant-digit numeric formatting for CSV cells."""
    return format(float(v), ".12g")


def _parse_reals(spec, n, what):
    parts = spec.split(",")
    if len(parts) != n:
        raise states.StateError(f"{what} needs {n} comma-separated reals, got {spec!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise states.StateError(f"bad number in {what}: {exc}") from exc


def resolve_example(name: str) -> tuple[str, states.PureTripartiteState | None]:
    """Named-example registry: ghz, w, wclass:..., schmidt:..., e223, afs.

    Inline wclass/schmidt parameters give a direction, not exact amplitudes;
    they are normalized before construction so that truncated decimals like
    0.577 are usable.  Returns (descriptor, state); afs pairs with the
    entanglement-cost lookup and is the only state that may exceed qubit
    dims on A.
    """
    if name == "ghz":
        return "ghz", states.ghz()
    if name == "w":
        return "w", states.w_state()
    if name == "e223":
        return "e223", states.example_223()
    if name == "afs":
        return "afs", states.antisymmetric_qutrit()
    if name.startswith("wclass:"):
        b = np.array(_parse_reals(name[7:], 4, "wclass"), dtype=complex)
        nrm = np.linalg.norm(b)
        if nrm == 0:
            raise states.StateError("wclass coefficients are all zero")
        b = b / nrm
        return name, states.w_class(*b)
    if name.startswith("schmidt:"):
        vals = _parse_reals(name[8:], 6, "schmidt")
        lam = np.abs(np.array(vals[:5]))
        nrm = np.linalg.norm(lam)
        if nrm == 0:
            raise states.StateError("schmidt coefficients are all zero")
        lam = lam / nrm
        return name, states.from_schmidt(
            states.SchmidtParams(tuple(lam), vals[5] % (2.0 * math.pi))
        )
    raise states.StateError(
        f"unknown example {name!r}; known: ghz, w, wclass:b0,b1,b2,b3, "
        "schmidt:l0,l1,l2,l3,l4,phi, e223, afs"
    )


def _resolve_source(args) -> tuple[str, states.PureTripartiteState | None]:
    if args.example and args.state:
        raise states.StateError("give either --example or --state, not both")
    if args.example:
        return resolve_example(args.example)
    if args.state:
        return args.state, states.load_state(args.state)
    raise states.StateError("a state source is required (--example or --state)")


def _triple_for(descriptor, state, mid: MeasureId) -> MeasureTriple:
    if mid is MeasureId.ENTANGLEMENT_COST_LOOKUP:
        if descriptor != "afs":
            raise measures.MeasureError(
                "ec-lookup only has a tabulated entry for the 'afs' example"
            )
        return measures.entanglement_cost_lookup("antisymmetric_qutrit")
    return measures.measure_triple(state, mid)


@dataclass
class AnalysisRecord:
    descriptor: str
    measure: MeasureId
    triple: MeasureTriple
    x_solution: monogamy.XSolution
    min_alpha: float
    theorem3: dict
    witness: bool
    residual_at_alpha: float | None = None

    def to_json_dict(self):
        return {
            "state": self.descriptor,
            "measure": self.measure.value,
            "triple": list(self.triple.as_tuple()),
            "x": {
                "kind": self.x_solution.kind.value,
                "y": self.x_solution.y,
                "value": None if not math.isfinite(self.x_solution.x) else self.x_solution.x,
            },
            "min_alpha": None if not math.isfinite(self.min_alpha) else self.min_alpha,
            "per_state_exponent": self.theorem3,
            "non_monogamy_witness": self.witness,
            "residual_at_alpha": self.residual_at_alpha,
        }


def cmd_analyze(args) -> int:
    descriptor, state = _resolve_source(args)
    mid = MeasureId.from_string(args.measure)
    t = _triple_for(descriptor, state, mid)
    sol = monogamy.solve_x(t, args.y, args.eps)
    witness = monogamy.is_theorem2_witness(t, args.eps)
    try:
        thm3 = {"alpha": monogamy.theorem3_alpha(t)}
    except monogamy.DomainError as exc:
        thm3 = {"error": str(exc)}
    rec = AnalysisRecord(
        descriptor=descriptor,
        measure=mid,
        triple=t,
        x_solution=sol,
        min_alpha=monogamy.min_alpha(t),
        theorem3=thm3,
        witness=witness,
        residual_at_alpha=monogamy.residual(t, args.alpha) if args.alpha else None,
    )
    print(json.dumps(rec.to_json_dict(), indent=2))
    return EXIT_WITNESS if witness else EXIT_OK


def cmd_sweep(args) -> int:
    mid = MeasureId.from_string(args.measure)
    dims = tuple(int(d) for d in args.dims.split(","))
    family = {"w": "w_class", "haar": "haar", "schmidt": "schmidt"}.get(args.family, args.family)
    report = monogamy.sweep(dims, mid, args.y, args.samples, args.seed,
                            family=family, eps=args.eps)
    os.makedirs(args.out, exist_ok=True)
    report_path = os.path.join(args.out, "sweep_report.json")
    with open(report_path, "w") as fh:
        json.dump(report.to_json_dict(), fh, indent=2)
        fh.write("\n")
    hist_path = os.path.join(args.out, "sweep_histogram.csv")
    with open(hist_path, "w") as fh:
        fh.write("bucket_lo,bucket_hi,count\n")
        for lo, hi, count in report.histogram:
            fh.write(f"{_fmt(lo)},{_fmt(hi)},{count}\n")
    print(f"report: {report_path}")
    print(f"histogram: {hist_path}")
    print(
        f"samples={report.samples} zero={report.zero_count} "
        f"finite={report.finite_count} unbounded={report.unbounded_count} "
        f"max_finite_x={_fmt(report.max_finite_x)}"
    )
    if report.certified_alpha is not None:
        print(f"certified alpha (empirical): {_fmt(report.certified_alpha)}")
    else:
        print("no certificate: unbounded solutions found")
    return EXIT_WITNESS if report.unbounded_count > 0 else EXIT_OK


def cmd_certify(args) -> int:
    descriptor, state = _resolve_source(args)
    mid = MeasureId.from_string(args.measure)
    t = _triple_for(descriptor, state, mid)
    if args.mode == "thm3":
        cert = monogamy.certify_per_state(t)
    else:
        if args.c is None:
            raise monogamy.DomainError("relaxed mode needs --c")
        cert = monogamy.certify_relaxed(t, args.c)
    print(json.dumps({
        "state": descriptor,
        "measure": mid.value,
        "kind": cert.kind.value,
        "alpha": cert.alpha,
        "residual_at_alpha": cert.residual_at_alpha,
        "inputs": {k: (list(v) if isinstance(v, tuple) else v) for k, v in cert.inputs.items()},
    }, indent=2))
    return EXIT_OK


def cmd_figures(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    t = measures.entanglement_cost_lookup("antisymmetric_qutrit")

    # the residual crosses zero at log2 / log(log2 3) = 1.50500706...; the
    # grid starts at the next 0.005 step above it so every row is >= 0
    fig1 = os.path.join(args.out, "fig1.csv")
    with open(fig1, "w") as fh:
        fh.write("alpha,f_alpha\n")
        for k in range(299):
            alpha = 1.51 + 0.005 * k
            fh.write(f"{_fmt(alpha)},{_fmt(monogamy.residual(t, alpha))}\n")

    fig2 = os.path.join(args.out, "fig2.csv")
    y_grid = [0.1 + 0.01 * k for k in range(391)]
    rows = monogamy.beta_curves(t, y_grid)
    with open(fig2, "w") as fh:
        fh.write("y,z1,z2\n")
        for y, z1, z2 in rows:
            fh.write(f"{_fmt(y)},{_fmt(z1)},{_fmt(z2)}\n")

    print(f"wrote {fig1}")
    print(f"wrote {fig2}")
    return EXIT_OK


def _add_source_args(p):
    p.add_argument("--example", help="named example (ghz, w, wclass:..., schmidt:..., e223, afs)")
    p.add_argument("--state", help="path to a state JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entmono",
        description="Decide and certify alpha-monogamy of entanglement measures "
        "on tripartite pure states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full monogamy analysis of one state")
    _add_source_args(p)
    p.add_argument("--measure", required=True, help="c, ca, eof or ec-lookup")
    p.add_argument("--y", type=float, default=2.0, help="exponent for the x-equation")
    p.add_argument("--alpha", type=float, help="also report the residual at this exponent")
    p.add_argument("--eps", type=float, default=monogamy.DEFAULT_EPS)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="Monte-Carlo probe of x-boundedness")
    p.add_argument("--dims", required=True, help="dA,dB,dC")
    p.add_argument("--measure", required=True)
    p.add_argument("--y", type=float, default=2.0)
    p.add_argument("--samples", "-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--family", default="haar", help="haar, w (W-class) or schmidt")
    p.add_argument("--eps", type=float, default=monogamy.DEFAULT_EPS)
    p.add_argument("--out", default=".", help="output directory for report and histogram")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("certify", help="per-state exponent certificates")
    _add_source_args(p)
    p.add_argument("--measure", required=True)
    p.add_argument("--mode", choices=("thm3", "relaxed"), default="thm3")
    p.add_argument("--c", type=float, help="relaxed base in (1, b]")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("figures", help="emit the residual and crossing-curve CSVs")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_figures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (states.StateError, measures.MeasureError, monogamy.DomainError,
            monogamy.MonotonicityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    run()
