"""Command-line interface.

Subcommands:
  verify SUITE   run a verification suite and write/print its report
  sample         draw flag samples and write them as delimited text
  rhs            print the closed-form values for a given exponent set
  oracle         run the quadrature oracle directly on a supported case

Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage or
configuration error, 3 oracle failure (the quadrature could not certify a
value).  Flags win over the optional JSON config file, which wins over
defaults; the resolved configuration hash is embedded in every report.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .closedform import (CornerExponents, DivergenceError, GammaPoleError,
                         effective_exponents, in_convergence_domain,
                         log_flag_integral, log_hua_integral,
                         log_projection_constant)
from .fields import Field
from .quadrature import OracleFailure, integrate_lines, integrate_radial
from .sampleio import emit_samples
from .sampling import FlagMeasure
from .suites import SUITES, RunSpec, verify_suite
from .suites import n2_integrand, n2_radial, n3_integrand

USAGE_ERROR = 2
ORACLE_ERROR = 3


def _auto_workers() -> int:
    env = os.environ.get("FLAGBETA_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise SystemExit(f"FLAGBETA_WORKERS must be an integer: {exc}")
    return max(1, min(os.cpu_count() or 1, 8))


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        print(f"config file not found: {path}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)
    try:
        cfg = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        print(f"config file is not valid JSON: {exc}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)
    if not isinstance(cfg, dict):
        print("config file must hold a JSON object", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)
    return cfg


def _merge(args: argparse.Namespace, config: dict, key: str, default):
    """Flag > config file > default."""
    flag_val = getattr(args, key, None)
    if flag_val is not None:
        return flag_val
    if key in config:
        return config[key]
    return default


def parse_lambda(raw: str, n: int | None) -> CornerExponents:
    """Parse an exponent specification: comma list or matrix file.

    A list of n-1 values is taken as column exponents; n(n-1)/2 values fill
    the strict upper triangle row by row.  A path is loaded as a square
    matrix whose strict upper triangle is used.
    """
    p = Path(raw)
    if p.exists():
        arr = np.loadtxt(p, dtype=np.complex128, delimiter=None, ndmin=2)
        return CornerExponents.from_matrix(arr)
    try:
        values = [float(v) for v in raw.split(",") if v.strip()]
    except ValueError as exc:
        raise ValueError(f"cannot parse exponent list {raw!r}: {exc}")
    if n is None:
        raise ValueError("specify --n when passing exponents as a list")
    if len(values) == n - 1:
        return CornerExponents.column(n, values)
    if len(values) == n * (n - 1) // 2:
        pairs = [(p_, q_) for p_ in range(1, n) for q_ in range(p_ + 1, n + 1)]
        return CornerExponents(n, {pq: complex(v)
                                   for pq, v in zip(pairs, values)})
    raise ValueError(f"expected {n - 1} (column) or {n * (n - 1) // 2} "
                     f"(full upper triangle) values, got {len(values)}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flagbeta",
        description="Verify and sample the flag-space beta integrals.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--field", choices=["r", "c", "h"], default=None)
        p.add_argument("--lambda", dest="lam", default=None,
                       help="comma list or matrix file of exponents")
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--config", default=None,
                       help="JSON config file (flags win over it)")

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", nargs="?", default="all",
                    choices=sorted(SUITES) + ["all"])
    common(pv)
    pv.add_argument("--trials", type=int, default=None)
    pv.add_argument("--tolerance-profile", dest="tolerance_profile",
                    choices=["default", "strict"], default=None)
    pv.add_argument("--energy-samples", dest="energy_samples", type=int,
                    default=None)
    pv.add_argument("--energy-perms", dest="energy_perms", type=int,
                    default=None)

    ps = sub.add_parser("sample", help="draw flag samples to a file")
    common(ps)

    pr = sub.add_parser("rhs", help="print closed-form values")
    common(pr)
    pr.add_argument("--hua-alpha", dest="hua_alpha", type=float, default=None)

    po = sub.add_parser("oracle", help="run the quadrature oracle directly")
    common(po)
    po.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    return parser


def _cmd_verify(args) -> int:
    config = _load_config(args.config)
    spec = RunSpec(
        suite=args.suite,
        n=_merge(args, config, "n", None),
        field=_merge(args, config, "field", None),
        lam=None,
        samples=int(_merge(args, config, "samples", 1_000_000)),
        seed=int(_merge(args, config, "seed", 20250810)),
        trials=int(_merge(args, config, "trials", 1000)),
        tolerance_profile=_merge(args, config, "tolerance_profile",
                                 "default"),
        out=_merge(args, config, "out", None),
        workers=int(_merge(args, config, "workers", _auto_workers())),
        energy_samples=int(_merge(args, config, "energy_samples", 512)),
        energy_perms=int(_merge(args, config, "energy_perms", 199)),
    )
    try:
        spec.validate()
    except ValueError as exc:
        print(f"invalid run specification: {exc}", file=sys.stderr)
        return USAGE_ERROR
    t0 = time.perf_counter()
    report = verify_suite(spec)
    print(report.console_summary())
    print(f"-- wall time {time.perf_counter() - t0:.1f}s "
          f"(timings are console-only; the report file is canonical)")
    if spec.out:
        path = report.write(spec.out)
        print(f"-- report written to {path}")
    return 0 if report.passed() else 1


def _cmd_sample(args) -> int:
    config = _load_config(args.config)
    n = int(_merge(args, config, "n", 3))
    field = Field.from_string(_merge(args, config, "field", "r"))
    seed = int(_merge(args, config, "seed", 20250810))
    samples = int(_merge(args, config, "samples", 1000))
    workers = int(_merge(args, config, "workers", _auto_workers()))
    out = _merge(args, config, "out", None)
    if out is None:
        print("sample requires --out PATH", file=sys.stderr)
        return USAGE_ERROR
    raw_lam = _merge(args, config, "lam", None)
    if raw_lam is None:
        lam = tuple(float(field.kappa + 1.0) for _ in range(n - 1))
    else:
        lam_set = parse_lambda(str(raw_lam), n)
        col = [lam_set[(p, n)].real for p in range(1, n)]
        off_column = any(lam_set[(p, q)] != 0
                         for p in range(1, n) for q in range(p + 1, n))
        if off_column:
            print("sampling requires a column exponent set", file=sys.stderr)
            return USAGE_ERROR
        lam = tuple(col)
    measure = FlagMeasure(n, field, lam)
    path = emit_samples(measure, samples, seed, out, workers=workers)
    print(f"wrote {samples} samples to {path}")
    return 0


def _cmd_rhs(args) -> int:
    config = _load_config(args.config)
    out = {}
    hua_alpha = _merge(args, config, "hua_alpha", None)
    if hua_alpha is not None:
        n = int(_merge(args, config, "n", 1))
        val = log_hua_integral(hua_alpha, n)
        out["hua"] = {"n": n, "alpha": hua_alpha, "log": val.real,
                      "value": float(np.exp(val).real)}
    raw_lam = _merge(args, config, "lam", None)
    if raw_lam is not None:
        field = Field.from_string(_merge(args, config, "field", "r"))
        n = _merge(args, config, "n", None)
        lam_set = parse_lambda(str(raw_lam), int(n) if n else None)
        nu = effective_exponents(lam_set, field)
        out["exponents"] = {f"{p},{q}": [nu[(p, q)].real, nu[(p, q)].imag]
                            for (p, q) in sorted(nu.values)}
        out["converges"] = in_convergence_domain(lam_set, field)
        if out["converges"]:
            val = log_flag_integral(lam_set, field)
            out["flag_integral"] = {"log_re": val.real, "log_im": val.imag,
                                    "value": float(np.exp(val).real)}
        col = [lam_set[(p, lam_set.n)] for p in range(1, lam_set.n)]
        if all(lam_set[(p, q)] == 0 for p in range(1, lam_set.n)
               for q in range(p + 1, lam_set.n)):
            try:
                c = log_projection_constant([v.real for v in col], field)
                out["projection_constant"] = {"log": c.real,
                                              "value": float(np.exp(c).real)}
            except DivergenceError:
                out["projection_constant"] = None
    if not out:
        print("rhs requires --lambda and/or --hua-alpha", file=sys.stderr)
        return USAGE_ERROR
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def _cmd_oracle(args) -> int:
    config = _load_config(args.config)
    n = int(_merge(args, config, "n", 2))
    field = Field.from_string(_merge(args, config, "field", "r"))
    raw_lam = _merge(args, config, "lam", None)
    rel_tol = float(_merge(args, config, "rel_tol", 1e-7))
    if raw_lam is None:
        print("oracle requires --lambda", file=sys.stderr)
        return USAGE_ERROR
    lam_set = parse_lambda(str(raw_lam), n)
    if not lam_set.is_real():
        print("the oracle integrates real exponent sets only",
              file=sys.stderr)
        return USAGE_ERROR
    kappa = field.kappa
    if lam_set.n == 2:
        lam = lam_set[(1, 2)].real
        if kappa <= 2:
            value = integrate_lines(n2_integrand(lam), kappa, rel_tol=rel_tol)
        else:
            value = integrate_radial(n2_radial(lam), 4, rel_tol=rel_tol)
    elif lam_set.n == 3 and field is Field.REAL:
        value = integrate_lines(
            n3_integrand(lam_set[(1, 2)].real, lam_set[(1, 3)].real,
                         lam_set[(2, 3)].real), 3, rel_tol=rel_tol)
    else:
        print("direct quadrature supports n=2 (any field) and n=3 over r "
              "(at most 4 real dimensions)", file=sys.stderr)
        return USAGE_ERROR
    result = {"oracle": value}
    if in_convergence_domain(lam_set, field):
        closed = float(np.exp(log_flag_integral(lam_set, field)).real)
        result["closed_form"] = closed
        result["rel_err"] = abs(value - closed) / abs(closed)
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "rhs":
            return _cmd_rhs(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
    except OracleFailure as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return ORACLE_ERROR
    except (DivergenceError, GammaPoleError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
