"""Command-line interface: sums, poly, coeffs, specfun, verify, residuals.

Exit codes: 0 success, 2 domain/usage error, 3 verification-suite failure.
Output is byte-stable for identical configuration (numbers printed with 17
significant digits in csv/json, 10 in table mode; no timestamps).
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass

from . import specfun
from .errors import DomainError, MertensError
from .polynomials import coeff_seq, to_plain_basis
from .primes import build_sieve, load_cache, save_cache
from .residuals import GridSpec, residual_table
from .sums import Method, Predictor, SumSpec, compute_sum
from .xfloat import XFloat

ENV_CACHE = "MERTENS_PRIME_CACHE"


@dataclass
class Config:
    prime_limit: int = 10**7
    cache_path: str = None
    threads: int = 1
    output_format: str = "table"
    b_limit: int = 10**6

    def __post_init__(self):
        if self.prime_limit < 10**3:
            raise DomainError(f"prime limit must be >= 1000, got {self.prime_limit}")
        if self.threads < 1:
            raise DomainError(f"threads must be >= 1, got {self.threads}")


def _fmt17(v):
    if isinstance(v, XFloat):
        v = v.hi
    return format(float(v), ".17g")


def _fmt10(v):
    if isinstance(v, XFloat):
        v = v.hi
    return format(float(v), ".10g")


class TableProvider:
    """Builds the prime table lazily on first need; persists to the cache
    path when one is configured."""

    def __init__(self, config):
        self.config = config
        self._table = None
        self._constants = None
        self._predictor = None

    def table(self, needed_limit=0):
        want = max(self.config.prime_limit, int(needed_limit))
        if self._table is not None and self._table.limit >= want:
            return self._table
        path = self.config.cache_path
        if path and os.path.exists(path):
            cached = load_cache(path)
            if cached.limit >= want:
                self._table = cached
                return cached
        self._table = build_sieve(want, threads=self.config.threads)
        if path:
            save_cache(self._table, path)
        return self._table

    def constants(self):
        if self._constants is None:
            table = self.table(self.config.b_limit)
            self._constants = specfun.Constants.compute(table, self.config.b_limit)
        return self._constants

    def predictor(self):
        if self._predictor is None:
            self._predictor = Predictor(self.constants())
        return self._predictor


def _emit_rows(fmt, header, rows, out):
    """rows: list of lists of already-formatted strings."""
    if fmt == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(row) + "\n")
    elif fmt == "json":
        body = []
        for row in rows:
            fields = ", ".join(
                f'"{name}": {cell}' for name, cell in zip(header, row)
            )
            body.append("{" + fields + "}")
        out.write("[" + ", ".join(body) + "]\n")
    else:
        widths = [
            max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
            for i, h in enumerate(header)
        ]
        out.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
        for row in rows:
            out.write(
                "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n"
            )


def _json_str(s):
    return '"' + s + '"'


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_sums(args, provider, out):
    spec_kwargs = dict(k=args.k, s=args.s, x=args.x)
    if args.split is not None:
        spec_kwargs["split_y"] = args.split
    methods = (
        [Method.ENUMERATE, Method.MULTISET, Method.HYPERBOLA]
        if args.method == "all"
        else [
            {
                "enum": Method.ENUMERATE,
                "multiset": Method.MULTISET,
                "hyperbola": Method.HYPERBOLA,
            }[args.method]
        ]
    )
    needed = math.floor(args.x) >> (args.k - 1)
    table = provider.table(needed)
    if args.x > math.e:
        predictor = provider.predictor()
        if args.s == 0:
            pred = predictor.main_term(args.k, args.x)
        else:
            pred = predictor.weighted_main_term(args.k, args.s, args.x)
    else:
        pred = None
    fmt = args.format
    num = _fmt17 if fmt in ("csv", "json") else _fmt10
    header = ["x", "k", "s", "method", "value", "term_count", "prediction", "residual"]
    rows = []
    for method in methods:
        if method is Method.HYPERBOLA and args.k < 2:
            continue
        sv = compute_sum(
            table,
            SumSpec(method=method, **spec_kwargs),
            threads=provider.config.threads,
        )
        pred_cell = num(pred) if pred is not None else ("null" if fmt == "json" else "")
        res_cell = (
            num(sv.value - pred) if pred is not None else ("null" if fmt == "json" else "")
        )
        method_cell = _json_str(method.value) if fmt == "json" else method.value
        rows.append(
            [
                num(args.x),
                str(args.k),
                str(args.s),
                method_cell,
                num(sv.value),
                str(sv.term_count),
                pred_cell,
                res_cell,
            ]
        )
    _emit_rows(fmt, header, rows, out)
    return 0


def cmd_coeffs(args, provider, out):
    seq = coeff_seq(args.kmax)
    fmt = args.format
    num = _fmt17 if fmt in ("csv", "json") else _fmt10
    header = ["k", "a_k"]
    rows = [[str(k), num(seq[k])] for k in range(2, args.kmax + 1)]
    _emit_rows(fmt, header, rows, out)
    return 0


def cmd_poly(args, provider, out):
    predictor = provider.predictor()
    poly = predictor.poly(args.k)
    if args.basis == "plain":
        poly = to_plain_basis(poly, predictor.constants.B)
    fmt = args.format
    num = _fmt17 if fmt in ("csv", "json") else _fmt10
    var = "u" if args.basis == "shifted" else "y"
    header = ["k", "basis", "power", "coeff"]
    basis_cell = _json_str(args.basis) if fmt == "json" else args.basis
    rows = [
        [str(args.k), basis_cell, f"{var}^{j}" if fmt == "table" else str(j), num(c)]
        for j, c in enumerate(poly.coeffs)
    ]
    _emit_rows(fmt, header, rows, out)
    return 0


_SPECFUN_NAMES = (
    "zeta",
    "polylog-half",
    "log-integral-closed",
    "log-integral-quad",
    "mertens-constant",
    "euler-gamma",
)


def cmd_specfun(args, provider, out):
    name = args.name
    if name == "zeta":
        if args.n is None:
            raise DomainError("zeta needs --n")
        value = specfun.zeta_int(args.n)
        arg_str = f"n={args.n}"
        bound = 1e-28 * abs(value.hi)
    elif name == "polylog-half":
        if args.n is None:
            raise DomainError("polylog-half needs --n")
        value = specfun.polylog_half(args.n)
        arg_str = f"n={args.n}"
        bound = 1e-28 * abs(value.hi)
    elif name == "log-integral-closed":
        if args.m is None:
            raise DomainError("log-integral-closed needs --m")
        value = specfun.log_power_integral_closed(args.m)
        arg_str = f"m={args.m}"
        bound = 1e-30 * max(1.0, math.factorial(args.m) * 1.1)
    elif name == "log-integral-quad":
        if args.m is None:
            raise DomainError("log-integral-quad needs --m")
        value = specfun.log_power_integral_quad(args.m, args.tol)
        arg_str = f"m={args.m} tol={args.tol:g}"
        bound = args.tol
    elif name == "mertens-constant":
        limit = args.limit if args.limit is not None else provider.config.b_limit
        table = provider.table(limit)
        value = specfun.mertens_constant(limit, table)
        arg_str = f"limit={limit}"
        bound = specfun.mertens_constant_error_bound(limit)
    else:
        value = specfun.euler_gamma()
        arg_str = ""
        bound = 1e-25
    digits = value.to_decimal_string(31)
    fmt = args.format
    if fmt == "json":
        out.write(
            "{"
            + f'"name": {_json_str(name)}, "args": {_json_str(arg_str)}, '
            + f'"value": {_json_str(digits)}, "abs_error_bound": {bound:.3g}'
            + "}\n"
        )
    elif fmt == "csv":
        out.write("name,args,value,abs_error_bound\n")
        out.write(f"{name},{arg_str},{digits},{bound:.3g}\n")
    else:
        suffix = f"({arg_str})" if arg_str else ""
        out.write(f"{name}{suffix} = {digits} +/- {bound:.3g}\n")
    return 0


def cmd_residuals(args, provider, out):
    grid = GridSpec(x_min=args.xmin, x_max=args.xmax, points=args.points)
    needed = math.floor(args.xmax) >> (args.k - 1)
    table = provider.table(needed)
    rows = residual_table(
        table,
        provider.predictor(),
        args.k,
        args.s,
        grid,
        method=args.method,
        threads=provider.config.threads,
    )
    fmt = args.format
    num = _fmt17 if fmt in ("csv", "json") else _fmt10
    header = ["k", "s", "x", "exact", "prediction", "residual", "scaled"]
    table_rows = [
        [
            str(r.k),
            str(r.s),
            num(r.x),
            num(r.exact),
            num(r.prediction),
            num(r.residual),
            num(r.scaled),
        ]
        for r in rows
    ]
    _emit_rows(fmt, header, table_rows, out)
    return 0


def cmd_verify(args, provider, out):
    """Cross-method consistency suites; exits 3 when any check fails."""
    checks = []

    # triple-oracle suite
    table = provider.table(10**5)
    threads = provider.config.threads
    for k in (1, 2, 3, 4):
        for x in (1e2, 1e3, 1e4, 1e5):
            values = {}
            counts = {}
            for method in (Method.ENUMERATE, Method.MULTISET, Method.HYPERBOLA):
                if method is Method.HYPERBOLA and k < 2:
                    continue
                sv = compute_sum(
                    table, SumSpec(k=k, s=0, x=x, method=method), threads=threads
                )
                values[method.value] = sv.value
                counts[method.value] = sv.term_count
            ref = values["enumerate"]
            spread = max(
                abs(float(v - ref)) for v in values.values()
            )
            rel = spread / abs(float(ref)) if float(ref) != 0.0 else spread
            ok = rel <= 1e-12 and len(set(counts.values())) == 1
            checks.append(
                (
                    f"triple-oracle k={k} x={x:g} rel_spread={rel:.3e} "
                    f"count={counts['enumerate']}",
                    ok,
                )
            )

    # split-independence suite
    x = 1e4
    base = None
    for split in (5.0, 20.0, 50.0, math.sqrt(x)):
        sv = compute_sum(
            table,
            SumSpec(k=2, s=0, x=x, method=Method.HYPERBOLA, split_y=split),
            threads=threads,
        )
        if base is None:
            base = sv.value
            dev = 0.0
        else:
            dev = abs(float(sv.value - base)) / abs(float(base))
        ok = dev <= 1e-13
        checks.append(
            (f"split-independence x={x:g} y={split:g} rel_dev={dev:.3e}", ok)
        )

    failures = 0
    for name, ok in checks:
        out.write(("PASS " if ok else "FAIL ") + name + "\n")
        if not ok:
            failures += 1
    out.write(f"verify: {len(checks)} checks, {len(checks) - failures} passed\n")
    return 3 if failures else 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mertens",
        description="Exact multiple prime-reciprocal sums and their asymptotics",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("table", "csv", "json"),
        default="table",
        help="output format (default table)",
    )
    common.add_argument(
        "--threads",
        default="1",
        help="worker threads: a number or 'auto' (default 1)",
    )
    common.add_argument(
        "--prime-limit",
        type=int,
        default=10**7,
        help="minimum sieve size to build (default 1e7)",
    )
    common.add_argument(
        "--prime-cache",
        default=None,
        help=f"prime cache file (default from ${ENV_CACHE})",
    )
    common.add_argument(
        "--b-limit",
        type=int,
        default=10**6,
        help="prime bound for the Mertens constant (default 1e6)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sums", parents=[common], help="exact multiple sums")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--x", type=float, required=True)
    p.add_argument(
        "--method",
        choices=("enum", "multiset", "hyperbola", "all"),
        default="enum",
    )
    p.add_argument("--split", type=float, default=None, help="hyperbola split point")
    p.set_defaults(func=cmd_sums)

    p = sub.add_parser("coeffs", parents=[common], help="zeta coefficient table")
    p.add_argument("--kmax", type=int, required=True)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("poly", parents=[common], help="prediction polynomial")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--basis", choices=("shifted", "plain"), default="shifted")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("specfun", parents=[common], help="special values")
    p.add_argument("name", choices=_SPECFUN_NAMES)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_specfun)

    p = sub.add_parser("verify", parents=[common], help="consistency suites")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("residuals", parents=[common], help="residual tables")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--xmin", type=float, default=1e3)
    p.add_argument("--xmax", type=float, default=1e7)
    p.add_argument("--points", type=int, default=8)
    p.add_argument(
        "--method",
        choices=("enumerate", "multiset", "hyperbola", "all"),
        default="enumerate",
    )
    p.set_defaults(func=cmd_residuals)
    return parser


def _resolve_threads(raw):
    if raw == "auto":
        return max(1, os.cpu_count() or 1)
    try:
        return int(raw)
    except ValueError as exc:
        raise DomainError(f"invalid thread count {raw!r}") from exc


def main(argv=None, out=None):
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = Config(
            prime_limit=args.prime_limit,
            cache_path=args.prime_cache or os.environ.get(ENV_CACHE) or None,
            threads=_resolve_threads(args.threads),
            output_format=args.format,
            b_limit=args.b_limit,
        )
        provider = TableProvider(config)
        return args.func(args, provider, out)
    except MertensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
