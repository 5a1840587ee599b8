"""Command-line driver.

    gapkit run       -- one gap/midpoint search with a structured report
    gapkit validate  -- statistical suites, CSV output
    gapkit bench     -- ledger-counter sweeps vs (N, gap, eps), CSV output

Reports are line-delimited ``key = value`` documents with a fixed key
order; everything outside the ``info.`` section is bit-reproducible for a
fixed config and seed.  Exit codes: 0 success, 1 search ended without a
detection, 2 usage error, 3 internal failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import (
    CapacityError,
    ContractError,
    DetectionFailed,
    GapNotFound,
    InputError,
    ParameterError,
)
from .gapfinder import BackendConfig, qeig, qgap_const
from .hermitian import eig_reference, gen_planted_gap, read_hmat
from .rng import ENV_SEED, substream
from .validate import SUITES, bench_rows

EXIT_OK = 0
EXIT_NOT_FOUND = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

# Published report schema: ordered (key, type) pairs; "*" keys are optional
# depending on the run flavor.  Validation checks order, presence, and type.
REPORT_SCHEMA = [
    ("report", "str"),
    ("inputs.source", "str"),
    ("inputs.n", "int"),
    ("inputs.k", "int"),
    ("inputs.eps", "float"),
    ("inputs.delta", "float"),
    ("inputs.seed", "int"),
    ("inputs.backend", "str"),
    ("inputs.encoding", "str"),
    ("inputs.gap_min", "float"),
    ("inputs.const_only", "bool"),
    ("outputs.status", "str"),
    ("outputs.lambda_k", "float*"),
    ("outputs.lambda_k1", "float*"),
    ("outputs.mu", "float"),
    ("outputs.gap", "float"),
    ("outputs.iterations", "int*"),
    ("truth.lambda_k", "float"),
    ("truth.lambda_k1", "float"),
    ("truth.mu", "float"),
    ("truth.gap", "float"),
    ("check.lambda_k", "bool*"),
    ("check.lambda_k1", "bool*"),
    ("check.mu", "bool"),
    ("check.gap", "bool"),
    ("ledger.queries_uh", "int"),
    ("ledger.queries_state_prep", "int"),
    ("ledger.elementary_gates", "int"),
    ("ledger.max_qubits", "int"),
    ("ledger.classical_samples", "int"),
    ("info.wall_clock_s", "float"),
    ("info.version", "str"),
    ("info.numpy", "str"),
]


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def render_report(pairs) -> str:
    return "".join(f"{k} = {_fmt(v)}\n" for k, v in pairs)


def validate_report(text: str) -> bool:
    """Check a report against REPORT_SCHEMA (order, presence, types)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    got = []
    for ln in lines:
        if " = " not in ln:
            return False
        k, v = ln.split(" = ", 1)
        got.append((k, v))
    idx = 0
    for key, kind in REPORT_SCHEMA:
        optional = kind.endswith("*")
        kind = kind.rstrip("*")
        if idx < len(got) and got[idx][0] == key:
            val = got[idx][1]
            try:
                if kind == "int":
                    int(val)
                elif kind == "float":
                    float(val)
                elif kind == "bool":
                    assert val in ("true", "false")
            except (ValueError, AssertionError):
                return False
            idx += 1
        elif not optional:
            return False
    return idx == len(got)


def deterministic_section(text: str) -> str:
    """Report content subject to the bit-reproducibility contract."""
    return "".join(
        ln + "\n" for ln in text.splitlines() if ln.strip() and not ln.startswith("info.")
    )


def _parse_gen_spec(spec: str):
    name, _, kvs = spec.partition(":")
    params = {}
    if kvs:
        for item in kvs.split(","):
            key, _, val = item.partition("=")
            if not _:
                raise ParameterError(f"bad generator parameter {item!r} (want key=val)")
            params[key.strip()] = val.strip()
    return name.strip(), params


def _resolve_seed(arg_seed) -> int:
    if arg_seed is not None:
        return int(arg_seed)
    env = os.environ.get(ENV_SEED)
    return int(env) if env is not None else 0


def cmd_run(args) -> int:
    seed = _resolve_seed(args.seed)
    if (args.matrix is None) == (args.gen is None):
        raise ParameterError("exactly one of --matrix and --gen is required")

    if args.matrix is not None:
        h = read_hmat(args.matrix)
        source = args.matrix
    else:
        name, params = _parse_gen_spec(args.gen)
        if name != "planted":
            raise ParameterError(f"unknown generator {name!r} (supported: planted)")
        n = int(params.get("N", params.get("n", 16)))
        k_gen = int(params.get("k", args.k if args.k is not None else 1))
        gap = float(params.get("gap", 0.2))
        h, _ = gen_planted_gap(n, k_gen, gap, int(params.get("seed", seed)))
        source = args.gen
        if args.k is None:
            args.k = k_gen
    if args.k is None:
        raise ParameterError("--k is required")
    k = int(args.k)

    dec = eig_reference(h)
    norm = max(abs(dec.eigenvalues[0]), abs(dec.eigenvalues[-1]))
    if norm > 0.5 + 1e-9:
        raise InputError(f"matrix spectral norm {norm:g} exceeds the 1/2 bound")
    if not 1 <= k <= h.dim - 1:
        raise ParameterError(f"k must lie in [1, {h.dim - 1}] for an {h.dim}x{h.dim} matrix")

    config = BackendConfig(sampling=args.backend == "sampling", encoding=args.encoding)
    true_gap = dec.gap(k)
    true_mu = dec.midpoint(k)
    slack = args.eps * true_gap / 2.0

    t0 = time.perf_counter()
    status = "ok"
    outputs = []
    checks = []
    ledger_counts = None
    try:
        if args.const_only:
            res = qgap_const(h, k, args.delta, args.gap_min, config, substream(seed, 1))
            outputs = [
                ("outputs.status", "ok"),
                ("outputs.mu", res.mu_hat),
                ("outputs.gap", res.gap_hat),
                ("outputs.iterations", res.iterations),
            ]
            checks = [
                ("check.mu", abs(res.mu_hat - true_mu) <= (7.0 / 16.0) * true_gap),
                ("check.gap", true_gap / 2.0 <= res.gap_hat <= 4.0 * true_gap),
            ]
            ledger_counts = res.ledger.report()
        else:
            res = qeig(h, k, args.delta, args.eps, config, substream(seed, 1), args.gap_min)
            lk, lk1 = dec.eigenvalues[k - 1], dec.eigenvalues[k]
            outputs = [
                ("outputs.status", "ok"),
                ("outputs.lambda_k", res.lambda_k),
                ("outputs.lambda_k1", res.lambda_k1),
                ("outputs.mu", res.mu),
                ("outputs.gap", res.gap),
            ]
            checks = [
                ("check.lambda_k", lk - slack <= res.lambda_k <= lk),
                ("check.lambda_k1", lk1 <= res.lambda_k1 <= lk1 + slack),
                ("check.mu", abs(res.mu - true_mu) <= slack),
                ("check.gap", (1 - args.eps) * true_gap <= res.gap <= (1 + args.eps) * true_gap),
            ]
            ledger_counts = res.ledger.report()
    except (GapNotFound, DetectionFailed) as exc:
        status = "not_found"
        outputs = [
            ("outputs.status", "not_found"),
            ("outputs.mu", float("nan")),
            ("outputs.gap", float("nan")),
        ]
        checks = [("check.mu", False), ("check.gap", False)]
        ledger_counts = exc.ledger.report() if exc.ledger else {}

    pairs = [
        ("report", "gapkit-run-v1"),
        ("inputs.source", source),
        ("inputs.n", h.dim),
        ("inputs.k", k),
        ("inputs.eps", float(args.eps)),
        ("inputs.delta", float(args.delta)),
        ("inputs.seed", seed),
        ("inputs.backend", args.backend),
        ("inputs.encoding", args.encoding),
        ("inputs.gap_min", float(args.gap_min if args.gap_min is not None else 2.0**-40)),
        ("inputs.const_only", bool(args.const_only)),
    ]
    pairs += outputs
    pairs += [
        ("truth.lambda_k", float(dec.eigenvalues[k - 1])),
        ("truth.lambda_k1", float(dec.eigenvalues[k])),
        ("truth.mu", true_mu),
        ("truth.gap", true_gap),
    ]
    pairs += checks
    pairs += [(f"ledger.{key}", ledger_counts.get(key, 0)) for key in (
        "queries_uh", "queries_state_prep", "elementary_gates", "max_qubits",
        "classical_samples")]
    pairs += [
        ("info.wall_clock_s", time.perf_counter() - t0),
        ("info.version", __version__),
        ("info.numpy", np.__version__),
    ]
    text = render_report(pairs)
    sys.stdout.write(text)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    return EXIT_OK if status == "ok" else EXIT_NOT_FOUND


def _write_csv(rows, out_path) -> None:
    if not rows:
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    text = buf.getvalue()
    sys.stdout.write(text)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)


def cmd_validate(args) -> int:
    import inspect

    fn = SUITES[args.suite]
    accepted = set(inspect.signature(fn).parameters)
    kwargs = {"seed": _resolve_seed(args.seed), "jobs": args.jobs}
    for name in ("trials", "n", "delta", "eps", "gap"):
        value = getattr(args, name)
        if value is None:
            continue
        if name not in accepted:
            raise ParameterError(f"suite {args.suite!r} does not take --{name}")
        kwargs[name] = value
    kwargs = {k: v for k, v in kwargs.items() if k in accepted}
    rows = fn(**kwargs)
    _write_csv(rows, args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    seed = _resolve_seed(args.seed)
    rows = []
    n_values = [int(v) for v in args.n_values.split(",")]
    gap_values = [float(v) for v in args.gap_values.split(",")]
    for gap in gap_values:
        rows.extend(
            bench_rows(n_values, gap, args.eps, args.delta, seed=seed,
                       repeats=args.repeats, jobs=args.jobs)
        )
    _write_csv(rows, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gapkit", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="search one matrix for its k-th gap/midpoint")
    run.add_argument("--matrix", help="HMAT v1 file")
    run.add_argument("--gen", help="inline generator spec, e.g. planted:N=16,k=3,gap=0.2")
    run.add_argument("--k", type=int, default=None)
    run.add_argument("--eps", type=float, default=0.1)
    run.add_argument("--delta", type=float, default=0.1)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--backend", choices=("sampling", "deterministic"), default="sampling")
    run.add_argument("--encoding", choices=("frobenius", "exact"), default="frobenius")
    run.add_argument("--gap-min", type=float, default=None)
    run.add_argument("--const-only", action="store_true",
                     help="stop after the constant-factor stage")
    run.add_argument("--report", help="also write the report to this path")
    run.set_defaults(fn=cmd_run)

    val = sub.add_parser("validate", help="statistical validation suites (CSV)")
    val.add_argument("suite", choices=sorted(SUITES))
    val.add_argument("--trials", type=int, default=None)
    val.add_argument("--n", type=int, default=None)
    val.add_argument("--seed", type=int, default=None)
    val.add_argument("--jobs", type=int, default=1)
    val.add_argument("--delta", type=float, default=None)
    val.add_argument("--eps", type=float, default=None)
    val.add_argument("--gap", type=float, default=None)
    val.add_argument("--out", help="also write the CSV to this path")
    val.set_defaults(fn=cmd_validate)

    bench = sub.add_parser("bench", help="ledger scaling sweeps (CSV)")
    bench.add_argument("--n-values", default="8,16,32")
    bench.add_argument("--gap-values", default="0.2")
    bench.add_argument("--eps", type=float, default=0.1)
    bench.add_argument("--delta", type=float, default=0.1)
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--out", help="also write the CSV to this path")
    bench.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (ParameterError, InputError, CapacityError, ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GapNotFound, DetectionFailed) as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
