"""Command-line front end.

Usage:
    qutrit-qkd mub-check --d 3
    qutrit-qkd curves --d 3 --m-bases 2 --omega-grid 0:1:101
    qutrit-qkd table1 --format csv
    qutrit-qkd phase2 --d 3 --m-bases 2 --out phase2.csv
    qutrit-qkd phasecollab --d 3 --m-bases 2 --n-max 100 --out collab.csv
    qutrit-qkd simulate --d 3 --m-bases 2 --omegas 1.0 --rounds 4000000 --seed 7

Exit codes: 0 success, 2 invariant-check failure, 3 simulation disagrees with
the closed forms, 64 usage error, 74 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

from . import chain, information, mubs, scan
from .information import AttackVector, ProtocolParams

EXIT_OK = 0
EXIT_CHECK = 2
EXIT_ORACLE = 3
EXIT_USAGE = 64
EXIT_IO = 74


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    """12 significant digits, locale independent."""
    if x is None:
        return "nan"
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".12g")


def _round_floats(obj):
    if isinstance(obj, float):
        return float(format(obj, ".12g"))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    return json.dumps(_round_floats(obj), indent=2, sort_keys=True) + "\n"


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def write_outputs(outputs: dict[Path | None, str]) -> None:
    """Write every payload atomically; ``None`` means stdout."""
    staged = []
    try:
        for path, text in outputs.items():
            if path is None:
                continue
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            staged.append((tmp, path))
        for tmp, path in staged:
            os.replace(tmp, path)
    except OSError:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise
    if None in outputs:
        sys.stdout.write(outputs[None])


# -- argument parsing helpers ------------------------------------------------


def parse_omegas(text: str) -> tuple[float, ...]:
    if text is None or text.strip() == "":
        return ()
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"cannot parse omega list {text!r}") from exc


def parse_grid(text: str) -> list[float]:
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError as exc:
        raise UsageError(f"omega grid must look like a:b:n, got {text!r}") from exc
    if n < 2 or not 0 <= a <= b <= 1:
        raise UsageError(f"omega grid needs 0 <= a <= b <= 1 and n >= 2, got {text!r}")
    return scan.grid(a, b, n)


def make_params(args) -> ProtocolParams:
    try:
        return ProtocolParams(args.d, args.m_bases)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def make_attack(omegas) -> AttackVector:
    try:
        return AttackVector(omegas)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _mode(args) -> str:
    return args.mode.replace("-", "_")


# -- subcommands -------------------------------------------------------------


def cmd_mub_check(args) -> int:
    if args.d not in (2, 3):
        raise UsageError(f"unsupported dimension d={args.d}")
    table = mubs.mub_table(args.d)
    ortho, unbiased = mubs.overlap_deviations(table)
    unitary = True
    if args.d == 3:
        unitary = mubs.is_unitary(mubs.phase_operator()) and all(
            mubs.is_unitary(mubs.evolution_operator(p)) for p in range(3)
        )
    ok = ortho < mubs.TOL and unbiased < mubs.TOL and unitary
    print(f"d={args.d} bases={len(table)} labels={','.join(table.labels)}")
    print(f"max orthonormality deviation: {ortho:.3e}")
    print(f"max |<u|v>|^2 - 1/d deviation: {unbiased:.3e}")
    if args.d == 3:
        print(f"phase and evolution operators unitary: {unitary}")
    print("PASS" if ok else "FAIL")
    if args.out:
        write_outputs({Path(args.out): table.to_json(indent=2) + "\n"})
    return EXIT_OK if ok else EXIT_CHECK


def _curve_ts(args) -> list[float]:
    if args.omegas is not None:
        ts = list(parse_omegas(args.omegas))
        make_attack(ts)
        return ts
    return parse_grid(args.omega_grid)


def cmd_curves(args) -> int:
    params = make_params(args)
    ts = _curve_ts(args)
    fixed = parse_omegas(args.fixed_omegas)
    make_attack(fixed)
    mode = _mode(args)
    if mode == information.PAPER_LITERAL and 1 + len(fixed) != 2:
        raise UsageError("paper-literal mode needs exactly two eavesdroppers (one fixed omega)")

    def family(t):
        return (t, *fixed)

    if args.key == "p_err":
        samples = scan.info_vs_error(params, ts, family, mode)
    else:
        samples = scan.info_curve(params, ts, family, mode)
    n = 1 + len(fixed)
    if args.format == "json":
        text = dump_json(
            {
                "d": params.d,
                "m_bases": params.M,
                "key": args.key,
                "fixed_omegas": list(fixed),
                "samples": [s.__dict__ for s in samples],
            }
        )
    else:
        header = ["t", "i_ab", "i_ae"] + [f"i_ae_{m}" for m in range(1, n + 1)] + ["p_err"]
        rows = [[s.t, s.i_ab, s.i_ae, *s.i_ae_m, s.p_err] for s in samples]
        text = dump_csv(header, rows)
    write_outputs({_out(args): text})
    return EXIT_OK


def cmd_table1(args) -> int:
    table = scan.table1()
    if args.format == "json":
        text = dump_json([{"d": d, "m": M, "q_err": q} for (d, M), q in table.items()])
    else:
        text = dump_csv(["d", "m", "q_err"], [[d, M, q] for (d, M), q in table.items()])
    write_outputs({_out(args): text})
    return EXIT_OK


def _out(args) -> Path | None:
    return Path(args.out) if args.out else None


def _diagram_outputs(args, diagram: scan.PhaseDiagram) -> dict:
    out = _out(args)
    if args.format == "json":
        return {out: dump_json(diagram.to_json_obj())}
    rows = []
    for y, row in zip(diagram.y.values, diagram.verdict_labels()):
        for x, v in zip(diagram.x.values, row):
            rows.append([x, y, v])
    outputs = {out: dump_csv(["x", "y", "verdict"], rows)}
    boundary_path = Path(args.boundary_out) if args.boundary_out else (
        out.parent / "boundary.csv" if out is not None else None
    )
    if boundary_path is not None:
        outputs[boundary_path] = dump_csv(
            ["row_value", "boundary_value"], [[r, b] for r, b in diagram.boundary]
        )
    return outputs


def cmd_phase2(args) -> int:
    params = make_params(args)
    xs = parse_grid(args.omega_grid)
    diagram = scan.phase_diagram_two(
        params, len(xs), _mode(args), omega1_range=(xs[0], xs[-1]), omega2_range=(xs[0], xs[-1])
    )
    write_outputs(_diagram_outputs(args, diagram))
    return EXIT_OK


def cmd_phasecollab(args) -> int:
    params = make_params(args)
    xs = parse_grid(args.omega_grid)
    if args.n_max < 1:
        raise UsageError("--n-max must be positive")
    diagram = scan.phase_diagram_collab(params, xs, range(1, args.n_max + 1))
    write_outputs(_diagram_outputs(args, diagram))
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = make_params(args)
    attack = make_attack(parse_omegas(args.omegas))
    if args.workers < 1:
        raise UsageError("--workers must be positive")
    try:
        config = chain.SimConfig(params, attack, args.rounds, args.seed, args.backend)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        stats = chain.simulate(config, workers=args.workers, pooled=not args.no_pool)
    except chain.InsufficientDataError as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    comparisons = chain.compare_with_analytic(stats)
    ok = all(c.passes(4.0) for c in comparisons)

    log = sys.stderr
    print(f"rounds={config.rounds} sifted={stats.sifted_count} backend={config.backend} seed={config.seed}", file=log)
    for c in comparisons:
        verdict = "PASS" if c.passes(4.0) else "FAIL"
        print(
            f"{c.name:12s} empirical={c.empirical:.6f} analytic={c.analytic:.6f} "
            f"delta={c.delta:+.2e} stderr={c.stderr:.2e} z={c.z:+.2f} {verdict}",
            file=log,
        )
    print("PASS" if ok else "FAIL", file=log)

    if args.format == "json":
        obj = stats.to_json_obj()
        obj["comparisons"] = [
            {"name": c.name, "empirical": c.empirical, "analytic": c.analytic, "stderr": c.stderr, "z": c.z}
            for c in comparisons
        ]
        text = dump_json(obj)
    else:
        text = dump_csv(
            ["quantity", "empirical", "analytic", "stderr", "z"],
            [[c.name, c.empirical, c.analytic, c.stderr, c.z] for c in comparisons],
        )
    write_outputs({_out(args): text})
    return EXIT_OK if ok else EXIT_ORACLE


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qutrit-qkd", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, params=True, fmt_choices=("csv", "json"), default_fmt="csv"):
        if params:
            p.add_argument("--d", type=int, required=True)
            p.add_argument("--m-bases", type=int, required=True)
        p.add_argument("--format", choices=fmt_choices, default=default_fmt)
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("mub-check", help="verify the MUB construction")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out", default=None, help="optional JSON dump of the bases")
    p.set_defaults(func=cmd_mub_check)

    p = sub.add_parser("curves", help="I_AB and I_AE along omega_1 = t")
    common(p)
    p.add_argument("--omegas", default=None, help="explicit comma list of t values")
    p.add_argument("--omega-grid", default="0:1:101")
    p.add_argument("--fixed-omegas", default="", help="omegas of E_2.. held fixed")
    p.add_argument("--key", choices=("omega", "p_err"), default="omega")
    p.add_argument("--mode", choices=("physical", "paper-literal"), default="physical")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("table1", help="quantum error for one eavesdropper")
    common(p, params=False)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("phase2", help="(omega1, omega2) phase diagram")
    common(p)
    p.add_argument("--omega-grid", default="0:1:201")
    p.add_argument("--mode", choices=("physical", "paper-literal"), default="physical")
    p.add_argument("--boundary-out", default=None)
    p.set_defaults(func=cmd_phase2)

    p = sub.add_parser("phasecollab", help="(omega, N) phase diagram for collaborating eavesdroppers")
    common(p)
    p.add_argument("--omega-grid", default="0:1:201")
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--boundary-out", default=None)
    p.set_defaults(func=cmd_phasecollab)

    p = sub.add_parser("simulate", help="Monte Carlo run checked against the closed forms")
    common(p, default_fmt="json")
    p.add_argument("--omegas", default="")
    p.add_argument("--rounds", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=chain.BACKENDS, default=chain.SYMBOLIC)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-pool", action="store_true", help="estimate P(0|0) from the x=0 row only")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
