"""Command-line front end.

Every subcommand prints one report, JSON by default, and exits 0 on success.
Integers are written as decimal strings and intervals as outward-rounded
decimals plus a lossless ``mantissa p exponent`` form, so reports replay
exactly.  Exit codes: 1 for invalid input, 2 when a budget or precision
limit is hit, 3 for an internal invariant breach.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .bounds import cheng_lower_bound, find_best_cheng_N, theorem1_check
from .decide import burnikel_bound, decide_sign
from .errors import DomainError, InvariantError, ResourceError
from .exact import DyadicInterval
from .generator import GRID_BUDGET, lll_instance, pigeonhole_instance
from .lattice import (ENUM_BUDGET, LINF, NORMS, LatticeBasis, build_dual_basis, build_primal_basis,
                      dual_check, lll_reduce, shortest_vector, successive_minima)
from .normalize import SqrtSumInstance, is_zero, normalize, to_problem33_format
from .probe import MAX_BITS, dirichlet_witness, empirical_Q0, subspace_scan

MAX_DIGITS = 64
SUBSPACE_HEADER = ("q", "dist_{i}", "product_lo", "product_hi", "status", "bits")


class UsageError(Exception):
    """Bad command line or input document (exit code 1)."""


@dataclass(frozen=True)
class InstanceDocument:
    """JSON form of an instance: ``{"x": [...], "a": [...], "label": ...}``."""

    x: tuple[int, ...]
    a: tuple[int, ...]
    label: str | None = None

    @staticmethod
    def _parse_int(v, field: str) -> int:
        if isinstance(v, bool):
            raise UsageError(f"{field}: booleans are not integers")
        if isinstance(v, int):
            s = str(v)
        elif isinstance(v, str):
            s = v.strip()
        else:
            raise UsageError(f"{field}: expected an integer or decimal string, got {v!r}")
        digits = s.lstrip("+-")
        if not digits.isdigit():
            raise UsageError(f"{field}: not a decimal integer: {v!r}")
        if len(digits) > MAX_DIGITS:
            raise UsageError(f"{field}: more than {MAX_DIGITS} digits")
        return int(s)

    @classmethod
    def from_json(cls, data: Any) -> "InstanceDocument":
        if not isinstance(data, dict) or "x" not in data or "a" not in data:
            raise UsageError("instance document needs fields 'x' and 'a'")
        x = tuple(cls._parse_int(v, "x") for v in data["x"])
        a = tuple(cls._parse_int(v, "a") for v in data["a"])
        if not x or len(x) != len(a):
            raise UsageError("'x' and 'a' must be nonempty arrays of equal length")
        if any(v < 1 for v in a):
            raise UsageError("radicands must be positive")
        label = data.get("label")
        if label is not None and not isinstance(label, str):
            raise UsageError("'label' must be a string")
        return cls(x, a, label)

    @classmethod
    def parse(cls, text: str) -> "InstanceDocument":
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise UsageError(f"invalid JSON: {exc}") from None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"x": [str(v) for v in self.x], "a": [str(v) for v in self.a]}
        if self.label is not None:
            out["label"] = self.label
        return out

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def instance(self) -> SqrtSumInstance:
        return SqrtSumInstance(self.x, self.a)


# -- rendering -----------------------------------------------------------------

def interval_json(v: DyadicInterval | None) -> dict | None:
    if v is None:
        return None
    lo, hi = v.decimal_bounds(20)
    return {"lo": lo, "hi": hi, "exact": v.exact_str()}


def ints(values: Sequence[int]) -> list[str]:
    return [str(v) for v in values]


def _flatten(prefix: str, value: Any, out: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], out)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, "" if value is None else str(value)))


def render(payload: dict, fmt: str, table: tuple[list[str], list[list[str]]] | None = None) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if table is not None:
        for key, value in sorted(payload.get("inputs", {}).items()):
            if isinstance(value, list):
                value = ",".join(value)
            buf.write(f"# {key}={'' if value is None else value}\n")
        header, rows = table
        w.writerow(header)
        w.writerows(rows)
    else:
        pairs: list[tuple[str, str]] = []
        _flatten("", payload, pairs)
        w.writerow(["key", "value"])
        w.writerows(pairs)
    return buf.getvalue()


# -- argument helpers --------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> tuple[int, ...]:
    if text.strip() == "":
        return ()
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/6, got {text!r}") from None


def _load_instance(args) -> InstanceDocument:
    if args.instance is not None:
        if args.instance == "-":
            text = sys.stdin.read()
        else:
            try:
                with open(args.instance, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise UsageError(f"cannot read {args.instance}: {exc}") from None
        return InstanceDocument.parse(text)
    if args.x is None or args.a is None:
        raise UsageError("give an instance file (--instance) or both --x and --a")
    return InstanceDocument.from_json({"x": list(args.x), "a": list(args.a)})


def _load_basis(args) -> LatticeBasis:
    if getattr(args, "basis", None):
        try:
            with open(args.basis, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read basis {args.basis}: {exc}") from None
        try:
            rows = [[Fraction(v) for v in row] for row in data["rows"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError):
            raise UsageError("basis document needs 'rows': a square array of rationals") from None
        return LatticeBasis.generic(rows)
    if args.a is None:
        raise UsageError("give --a (with --kind and --N/--Q) or --basis")
    if args.kind == "primal":
        if args.N is None:
            raise UsageError("primal basis needs --N")
        return build_primal_basis(args.a, args.N, args.precision)
    if args.Q is None:
        raise UsageError("dual basis needs --Q")
    return build_dual_basis(args.a, args.Q, args.precision, reduced=args.reduced)


def _basis_json(b: LatticeBasis) -> dict:
    return {
        "kind": b.kind,
        "param": None if b.param is None else str(b.param),
        "a": ints(b.a),
        "dim": b.dim,
        "reduced_variant": b.reduced_variant,
        "rows": [[str(v) for v in row] for row in b.mid],
        "radius": [[str(v) for v in row] for row in b.rad],
        "det_mid": str(b.det_mid()),
    }


def _svp_json(r) -> dict | None:
    if r is None:
        return None
    return {"vector": ints(r.vector), "value": interval_json(r.value), "norm": r.norm_kind,
            "certified": r.certified}


def _common(args) -> dict:
    return {"precision": args.precision, "budget": args.budget, "seed": args.seed,
            "version": __version__}


# -- subcommands -----------------------------------------------------------

def cmd_decide(args):
    doc = _load_instance(args)
    cert = decide_sign(doc.instance(), start=args.precision)
    return {
        "command": "decide",
        "inputs": {**doc.to_json(), **_common(args)},
        "sign": cert.sign,
        "bits_used": cert.bits_used,
        "separation_bound": interval_json(cert.separation_bound),
        "final_enclosure": interval_json(cert.final_enclosure),
        "normalized": {"x": ints(cert.normalized.x), "a": ints(cert.normalized.a)},
    }


def cmd_normalize(args):
    doc = _load_instance(args)
    norm = normalize(doc.instance())
    return {"command": "normalize", "inputs": {**doc.to_json(), **_common(args)},
            "x": ints(norm.x), "a": ints(norm.a), "is_zero": norm.is_empty()}


def cmd_convert33(args):
    doc = _load_instance(args)
    out = to_problem33_format(doc.instance())
    return {"command": "convert33", "inputs": {**doc.to_json(), **_common(args)},
            "x": ints(out.x), "a": ints(out.a)}


def _bound_json(rep) -> dict:
    return {
        "kind": rep.kind,
        "Q_or_N": str(rep.Q_or_N),
        "hypothesis_certified": rep.hypothesis_certified,
        "hypothesis_i": rep.hypothesis_i,
        "hypothesis_ii": rep.hypothesis_ii,
        "conclusion_held": rep.conclusion_held,
        "bound_value": interval_json(rep.bound_value),
        "witness": _svp_json(rep.witness),
        "lattice_precision": rep.precision,
        "probes": ints(rep.probes),
    }


def cmd_bound(args):
    if args.which == "burnikel":
        doc = _load_instance(args)
        norm = normalize(doc.instance())
        if norm.is_empty():
            raise UsageError("the instance is identically zero; no separation bound applies")
        return {"command": "bound burnikel", "inputs": {**doc.to_json(), **_common(args)},
                "normalized": {"x": ints(norm.x), "a": ints(norm.a)},
                "bound": interval_json(burnikel_bound(norm, args.precision))}
    if args.which == "cheng":
        if args.a is None or (args.N is None and args.nmax is None):
            raise UsageError("bound cheng needs --a and --N or --nmax")
        inputs = {"a": ints(args.a), "N": args.N, "nmax": args.nmax, **_common(args)}
        if args.N is not None:
            rep = cheng_lower_bound(args.a, args.N, args.precision)
        else:
            rep = find_best_cheng_N(args.a, args.nmax, args.precision)
        return {"command": "bound cheng", "inputs": inputs, **_bound_json(rep)}
    doc = _load_instance(args)
    if args.Q is None:
        raise UsageError("bound theorem1 needs --Q")
    norm = normalize(doc.instance())
    if norm.is_empty():
        raise UsageError("the instance is identically zero")
    rep = theorem1_check(norm, args.Q)
    return {"command": "bound theorem1", "inputs": {**doc.to_json(), "Q": str(args.Q), **_common(args)},
            "normalized": {"x": ints(norm.x), "a": ints(norm.a)}, **_bound_json(rep)}


def _generated_json(g) -> dict:
    return {"x": ints(g.x), "a": ints(g.a), "L": str(g.L), "bound": interval_json(g.bound),
            "proof_bound": interval_json(g.proof_bound), "achieved": interval_json(g.achieved),
            "certified": g.certified, "method": g.method}


def cmd_generate(args):
    if args.a is None:
        raise UsageError("generate needs --a")
    if args.method == "pigeonhole":
        if args.L is None:
            raise UsageError("generate pigeonhole needs --L")
        g = pigeonhole_instance(args.a, args.L, args.precision, args.budget or GRID_BUDGET)
        inputs = {"a": ints(args.a), "L": str(args.L), **_common(args)}
    else:
        if args.N is None:
            raise UsageError("generate lll needs --N")
        g = lll_instance(args.a, args.N, args.precision)
        inputs = {"a": ints(args.a), "N": str(args.N), **_common(args)}
    return {"command": f"generate {args.method}", "inputs": inputs, **_generated_json(g)}


def cmd_probe(args):
    if args.a is None:
        raise UsageError("probe needs --a")
    max_bits = args.budget or MAX_BITS
    if args.what == "dirichlet":
        if args.Q is None:
            raise UsageError("probe dirichlet needs --Q")
        w = dirichlet_witness(args.a, args.Q, max_bits=max_bits)
        return {"command": "probe dirichlet",
                "inputs": {"a": ints(args.a), "Q": str(args.Q), **_common(args)},
                "q": str(w.q), "p": ints(w.p_vec), "max_err": interval_json(w.max_err), "method": w.method}
    if args.delta is None or args.qmax is None:
        raise UsageError(f"probe {args.what} needs --delta and --qmax")
    inputs = {"a": ",".join(ints(args.a)), "delta": str(args.delta), "qmax": str(args.qmax),
              "start_bits": args.precision, "max_bits": max_bits, "version": __version__}
    records = subspace_scan(args.a, args.delta, args.qmax, args.precision, max_bits)
    if args.what == "q0":
        est = empirical_Q0(args.a, args.delta, args.qmax, records)
        return {"command": "probe q0", "inputs": inputs, "q_last": str(est.q_last),
                "Q0_estimate": interval_json(est.estimate), "empirical": True,
                "exceptions": sum(r.status == "exception" for r in records),
                "undecided": sum(r.status == "undecided" for r in records)}
    n = len(args.a)
    header = ["q"] + [f"dist_{i + 1}" for i in range(n)] + ["product_lo", "product_hi", "status", "bits"]
    rows = []
    payload_records = []
    for r in records:
        dists = [format(d.mid.numerator / d.mid.denominator, ".17g") for d in r.distances]
        plo, phi = r.product.decimal_bounds(20)
        rows.append([str(r.q), *dists, plo, phi, r.status, str(r.bits)])
        payload_records.append({"q": str(r.q), "distances": [interval_json(d) for d in r.distances],
                                "product": interval_json(r.product), "status": r.status, "bits": r.bits})
    payload = {"command": "probe subspace", "inputs": inputs, "records": payload_records}
    return payload, (header, rows)


def cmd_lattice(args):
    budget = args.budget or ENUM_BUDGET
    if args.op == "dualcheck":
        if args.a is None or args.Q is None:
            raise UsageError("lattice dualcheck needs --a and --Q")
        dual_a = args.dual_a if args.dual_a is not None else args.a
        N = args.Q ** (len(args.a) + 1)
        primal = build_primal_basis(args.a, N, args.precision)
        dual = build_dual_basis(dual_a, args.Q, args.precision)
        return {"command": "lattice dualcheck",
                "inputs": {"a": ints(args.a), "dual_a": ints(dual_a), "Q": str(args.Q), "N": str(N),
                           **_common(args)},
                "dual": dual_check(primal, dual)}
    basis = _load_basis(args)
    inputs = {"kind": args.kind, "a": None if args.a is None else ints(args.a),
              "N": None if args.N is None else str(args.N), "Q": None if args.Q is None else str(args.Q),
              "reduced": args.reduced, "basis_file": args.basis, **_common(args)}
    out: dict[str, Any] = {"command": f"lattice {args.op}", "inputs": inputs}
    if args.op == "build":
        out["basis"] = _basis_json(basis)
    elif args.op == "reduce":
        reduced, T = lll_reduce(basis, args.delta)
        out["basis"] = _basis_json(reduced)
        out["transform"] = [ints(row) for row in T]
        out["delta"] = str(args.delta)
    elif args.op == "svp":
        out["svp"] = _svp_json(shortest_vector(basis, args.norm, budget=budget))
    else:
        minima = successive_minima(basis, args.norm, budget=budget)
        out["norm"] = args.norm
        out["minima"] = [{"value": interval_json(v), "vector": ints(c)} for v, c in minima]
        rows = [[str(i + 1), *v.decimal_bounds(20), " ".join(ints(c))] for i, (v, c) in enumerate(minima)]
        return out, (["i", "value_lo", "value_hi", "vector"], rows)
    return out


# -- parser ----------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, top: bool) -> None:
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--precision", type=int, default=d(64), help="working precision in bits")
    p.add_argument("--format", choices=("json", "csv"), default=d("json"))
    p.add_argument("--seed", type=int, default=d(0), help="recorded for reproducibility")
    p.add_argument("--budget", type=int, default=d(None),
                   help="resource budget (grid points, enumeration nodes, or max probe bits)")


def _add_instance(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", help="JSON instance document, '-' for stdin")
    p.add_argument("--x", type=_int_list, help="coefficients, e.g. --x=2,-1")
    p.add_argument("--a", type=_int_list, help="radicands, e.g. --a=2,8")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sqrtsep", description=__doc__.splitlines()[0])
    _add_common(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn in (("decide", cmd_decide), ("normalize", cmd_normalize), ("convert33", cmd_convert33)):
        p = sub.add_parser(name)
        _add_common(p, top=False)
        _add_instance(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("bound")
    _add_common(p, top=False)
    p.add_argument("which", choices=("burnikel", "cheng", "theorem1"))
    _add_instance(p)
    p.add_argument("--N", type=int)
    p.add_argument("--nmax", type=int)
    p.add_argument("--Q", type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("generate")
    _add_common(p, top=False)
    p.add_argument("method", choices=("pigeonhole", "lll"))
    p.add_argument("--a", type=_int_list)
    p.add_argument("--L", type=int)
    p.add_argument("--N", type=int)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("probe")
    _add_common(p, top=False)
    p.add_argument("what", choices=("subspace", "dirichlet", "q0"))
    p.add_argument("--a", type=_int_list)
    p.add_argument("--delta", type=_fraction)
    p.add_argument("--qmax", type=int)
    p.add_argument("--Q", type=int)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("lattice")
    _add_common(p, top=False)
    p.add_argument("op", choices=("build", "reduce", "svp", "minima", "dualcheck"))
    p.add_argument("--kind", choices=("primal", "dual"), default="dual")
    p.add_argument("--a", type=_int_list)
    p.add_argument("--dual-a", dest="dual_a", type=_int_list, help="radicands of the dual (dualcheck)")
    p.add_argument("--N", type=int)
    p.add_argument("--Q", type=int)
    p.add_argument("--reduced", action="store_true", help="drop the row of a leading radicand 1")
    p.add_argument("--basis", help="JSON file {'rows': [[...], ...]} of rationals")
    p.add_argument("--norm", choices=NORMS, default=LINF)
    p.add_argument("--delta", type=_fraction, default=Fraction(3, 4))
    p.set_defaults(func=cmd_lattice)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        result = args.func(args)
        payload, table = result if isinstance(result, tuple) else (result, None)
        stdout.write(render(payload, args.format, table))
        return 0
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except DomainError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except ResourceError as exc:
        stderr.write(f"resource limit: {exc}\n")
        return 2
    except BrokenPipeError:
        # the reader closed the pipe early (e.g. `| head`); not a failure of ours
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0
    except InvariantError as exc:
        stderr.write(f"internal invariant breached: {exc}\n")
        return 3
    except Exception as exc:  # anything unexpected is an invariant breach, never silent
        stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return 3


def main() -> None:
    sys.exit(run())
