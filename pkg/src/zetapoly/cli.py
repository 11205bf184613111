"""Command-line front end with reproducible, machine-readable output.

Subcommands: powersum | directional | mahler | period | polyzeta |
bernoulli-id | oracle | selftest.  All results are JSON on stdout with a
versioned schema; identical inputs and configuration produce byte-identical
output.  Usage errors exit 2, computation errors exit 1 with a structured
message.
"""
from __future__ import annotations

import argparse
import json
import os
from fractions import Fraction
from pathlib import Path

from mpmath import mp

from . import identities, selftest
from .errors import ZetaPolyError
from .exactnum import SpecialValue, rat_to_str
from .mahler import CompositionFamily, QuadratureSettings, Z_value, delta_multiindices, period_K
from .multipoly import MPoly
from .oracle import EMSettings, powersum2_numeric, zeta1_numeric
from .polyzeta import build_family, diagonal_value, zeta_P_at
from .powersum import (
    DirectionalSpec,
    PowerSumParams,
    directional_limit,
    value_mixed_last_nonpositive,
    value_nonpositive,
)

SCHEMA = "1"


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def _rats(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in text.split(","))


def _load_poly(arg: str, nvars: int | None = None) -> MPoly:
    p = Path(arg)
    if p.exists():
        text = p.read_text()
        if p.suffix == ".json":
            return MPoly.from_json(json.loads(text))
        return MPoly.parse(text, nvars)
    if arg.strip().startswith("{"):
        return MPoly.from_json(json.loads(arg))
    return MPoly.parse(arg, nvars)


def _emit(obj: dict, pretty: bool) -> None:
    obj = {"schema": SCHEMA, **obj}
    if pretty:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(json.dumps(obj, separators=(",", ":"), sort_keys=True))


def _qs(args) -> QuadratureSettings:
    return QuadratureSettings(
        rel_tol=args.rel_tol, abs_tol=args.abs_tol, precision=args.precision
    )


def _add_common(sp):
    sp.add_argument("--precision", type=int,
                    default=int(os.environ.get("ZETAPOLY_PRECISION", "50")),
                    help="working precision in decimal digits")
    sp.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-12)
    sp.add_argument("--abs-tol", dest="abs_tol", type=float, default=1e-30)
    sp.add_argument("--pretty", action="store_true", help="indented JSON output")
    sp.add_argument("--parallelism", type=int,
                    default=int(os.environ.get("ZETAPOLY_PARALLELISM", "0")),
                    help="worker hint; evaluation is deterministic regardless")
    sp.add_argument("--seed", type=int, default=0, help="seed for sampled checks")


def _parse_u(text: str, n: int) -> CompositionFamily:
    """Parse composition entries "k:g1,...,gn[:count]" separated by ';'."""
    per_k: dict[int, dict[tuple, int]] = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        k = int(parts[0])
        gamma = tuple(int(x) for x in parts[1].split(","))
        count = int(parts[2]) if len(parts) > 2 else 1
        per_k.setdefault(k, {})[gamma] = per_k.get(k, {}).get(gamma, 0) + count
    kmax = max(per_k) if per_k else 0
    rows = []
    for k in range(1, kmax + 1):
        gammas = delta_multiindices(k, n)
        row = tuple(per_k.get(k, {}).get(g, 0) for g in gammas)
        rows.append(row)
    return CompositionFamily(n=n, u=tuple(rows))


def cmd_powersum(args) -> dict:
    d = _ints(args.d)
    gamma = _rats(args.gamma) if args.gamma else (Fraction(1),) * len(d)
    params = PowerSumParams.make(d, gamma)
    N = _ints(args.N)
    if args.theta:
        theta = _rats(args.theta)
        spec = DirectionalSpec(N=tuple(-x for x in N), theta=theta)
        val = directional_limit(params, spec, precision=args.precision)
    elif all(x <= 0 for x in N):
        val = SpecialValue.make_exact(value_nonpositive(params, N))
    else:
        val = value_mixed_last_nonpositive(params, N, precision=args.precision)
    return val.to_json(args.precision // 2 + 5)


def cmd_directional(args) -> dict:
    args.theta = args.theta or "0," * (len(_ints(args.d)) - 1) + "1"
    return cmd_powersum(args)


def cmd_mahler(args) -> dict:
    P = _load_poly(args.P)
    Q = _load_poly(args.Q, P.nvars) if args.Q else MPoly.one(P.nvars)
    qs = _qs(args)
    if args.terms:
        val, terms = Z_value(P, Q, args.N, qs, collect_terms=True)
        out = val.to_json(args.precision // 2 + 5)
        out["terms"] = terms
        return out
    return Z_value(P, Q, args.N, qs).to_json(args.precision // 2 + 5)


def cmd_period(args) -> dict:
    P = _load_poly(args.P)
    Q = _load_poly(args.Q, P.nvars) if args.Q else MPoly.one(P.nvars)
    alpha = _ints(args.alpha)
    beta = _ints(args.beta)
    u = _parse_u(args.u, P.nvars)
    # pad the family rows out to len(alpha)
    rows = list(u.u) + [
        (0,) * len(delta_multiindices(k, P.nvars))
        for k in range(len(u.u) + 1, len(alpha) + 1)
    ]
    u = CompositionFamily(n=P.nvars, u=tuple(rows))
    val = period_K(P, Q, args.N, alpha, u, beta, args.i, _qs(args))
    return val.to_json(args.precision // 2 + 5)


def cmd_polyzeta(args) -> dict:
    spec = json.loads(Path(args.family).read_text())
    polys_spec = spec["polys"] if isinstance(spec, dict) else spec
    polys = []
    for j, ps in enumerate(polys_spec, start=1):
        if isinstance(ps, str):
            polys.append(MPoly.parse(ps, j))
        else:
            polys.append(MPoly.from_json(ps))
    family = build_family(polys, seed=args.seed)
    N = _ints(args.N)
    qs = _qs(args)
    if args.diagonal:
        val = diagonal_value(family, N, qs)
    else:
        val = zeta_P_at(family, N, qs)
    return val.to_json(args.precision // 2 + 5)


def cmd_bernoulli_id(args) -> dict:
    n1, n2 = (int(x) for x in args.grid.lower().split("x"))
    reports = identities.verify_identity_grid(n1, n2)
    payload = {
        "reports": [
            {
                "label": r.label,
                "parameters": list(r.parameters),
                "lhs": rat_to_str(r.lhs),
                "rhs": rat_to_str(r.rhs),
                "equal": r.equal,
            }
            for r in reports
        ],
        "all_equal": all(r.equal for r in reports),
    }
    if args.json_out:
        Path(args.json_out).write_text(
            json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=True)
        )
    if args.csv:
        lines = ["label,parameters,lhs,rhs,equal"]
        for r in reports:
            lines.append(
                f"{r.label},{' '.join(map(str, r.parameters))},"
                f"{rat_to_str(r.lhs)},{rat_to_str(r.rhs)},{int(r.equal)}"
            )
        print("\n".join(lines))
        return {}
    return payload


def cmd_oracle(args) -> dict:
    em = EMSettings(precision=min(args.precision, 40))
    if args.oracle_cmd == "zeta1":
        val = zeta1_numeric(args.d_single, Fraction(args.gamma or "1"), Fraction(args.s), em)
        return {"kind": "numeric", **val.to_json(args.precision // 2 + 5)}
    d = _ints(args.d)
    if args.s:
        s = _rats(args.s)
    else:
        s = tuple(-x for x in _ints(args.N))
    params = PowerSumParams.make(d, _rats(args.gamma) if args.gamma else None)
    res = powersum2_numeric(params, s, em)
    out = {"kind": "numeric", **res.value.to_json(args.precision // 2 + 5)}
    out["residual"] = mp.nstr(res.residual, 5)
    out["em_order"] = res.K
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="zetapoly",
        description="Special values of multiple zeta-functions with polynomial denominators",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("powersum", help="value of the power-sum zeta at an integer point")
    sp.add_argument("--d", required=True, help="comma list of exponents d_j")
    sp.add_argument("--gamma", help="comma list of positive rationals (default all 1)")
    sp.add_argument("--N", required=True, help="evaluation point (integers, last <= 0)")
    sp.add_argument("--theta", help="direction for a limit at a point of indeterminacy")
    _add_common(sp)
    sp.set_defaults(fn=cmd_powersum)

    sp = sub.add_parser("directional", help="directional limit at -N (defaults theta = e_n)")
    sp.add_argument("--d", required=True)
    sp.add_argument("--gamma")
    sp.add_argument("--N", required=True)
    sp.add_argument("--theta")
    _add_common(sp)
    sp.set_defaults(fn=cmd_directional)

    sp = sub.add_parser("mahler", help="value of sum Q(m)/P(m)^s at s = -N")
    sp.add_argument("--P", required=True, help="polynomial file or inline text/JSON")
    sp.add_argument("--Q", help="numerator polynomial (default 1)")
    sp.add_argument("--N", type=int, default=0)
    sp.add_argument("--terms", action="store_true", help="emit per-term breakdown")
    _add_common(sp)
    sp.set_defaults(fn=cmd_mahler)

    sp = sub.add_parser("period", help="one face-period integral")
    sp.add_argument("--P", required=True)
    sp.add_argument("--Q")
    sp.add_argument("--N", type=int, default=0)
    sp.add_argument("--alpha", required=True, help="comma list over weights 1..deg P")
    sp.add_argument("--beta", required=True, help="comma list of derivative orders")
    sp.add_argument("--u", required=True,
                    help="composition entries 'k:g1,..,gn[:count]' joined by ';'")
    sp.add_argument("--i", type=int, required=True, help="face index (1-based)")
    _add_common(sp)
    sp.set_defaults(fn=cmd_period)

    sp = sub.add_parser("polyzeta", help="regularized value for a polynomial family")
    sp.add_argument("--family", required=True, help="JSON file with the polynomial list")
    sp.add_argument("--N", required=True, help="comma list of non-negative integers")
    sp.add_argument("--diagonal", action="store_true",
                    help="use the diagonal-denominator expansion")
    _add_common(sp)
    sp.set_defaults(fn=cmd_polyzeta)

    sp = sub.add_parser("bernoulli-id", help="verify the Bernoulli identity grid")
    sp.add_argument("--grid", default="8x8", help="grid bounds, e.g. 8x8")
    sp.add_argument("--json", dest="json_out", help="also write reports to this file")
    sp.add_argument("--csv", action="store_true", help="CSV to stdout instead of JSON")
    _add_common(sp)
    sp.set_defaults(fn=cmd_bernoulli_id)

    sp = sub.add_parser("oracle", help="independent Euler-Maclaurin continuation")
    osub = sp.add_subparsers(dest="oracle_cmd", required=True)
    o1 = osub.add_parser("zeta1", help="one-variable continuation")
    o1.add_argument("--d", dest="d_single", type=int, required=True)
    o1.add_argument("--gamma")
    o1.add_argument("--s", required=True)
    _add_common(o1)
    o1.set_defaults(fn=cmd_oracle)
    o2 = osub.add_parser("powersum2", help="two-variable continuation at -N")
    o2.add_argument("--d", required=True)
    o2.add_argument("--gamma")
    o2.add_argument("--N", help="non-negative pair; evaluation point is -N")
    o2.add_argument("--s", help="evaluation point directly (overrides --N)")
    _add_common(o2)
    o2.set_defaults(fn=cmd_oracle)

    sp = sub.add_parser("selftest", help="run the acceptance suite")
    _add_common(sp)
    sp.set_defaults(fn=None)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.cmd == "selftest":
        results = selftest.run_all(verbose=True)
        bad = [r for r in results if not r.passed]
        print(f"{len(results) - len(bad)}/{len(results)} acceptance criteria passed")
        return 1 if bad else 0
    try:
        out = args.fn(args)
    except (ZetaPolyError, ValueError, OSError, KeyError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}},
              getattr(args, "pretty", False))
        return 1
    if out:
        _emit(out, args.pretty)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
