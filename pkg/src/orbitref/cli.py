"""Command line: ``orbitref analyze|relation|simulate|witness``.

Exit codes: 0 success, 2 parse error, 3 structure extraction failure,
4 misuse (a witness asked for a reflexive input).
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from .config import DEFAULTS, Options
from .jordan.structure import StructureError
from .qspan import detect_relation_numeric, full_support_relation
from .classify import certificate_json
from .report import (
    RequestError,
    analyze,
    decimal_digits,
    dumps,
    exact_values,
    parse_expression,
    parse_requests,
    provenance,
)

EXIT_OK, EXIT_PARSE, EXIT_EXTRACT, EXIT_MISUSE = 0, 2, 3, 4
LOG2_10 = math.log2(10)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _options(args) -> Options:
    return DEFAULTS.updated(
        precision_bits=getattr(args, "precision_bits", None),
        tol=getattr(args, "tol", None),
        height_bound=getattr(args, "height", None),
        n_max=getattr(args, "n_max", None),
        seed=getattr(args, "seed", None),
        n_samples=getattr(args, "samples", None),
        grid=getattr(args, "grid", None),
    )


def _symbols(pairs) -> dict:
    out = {}
    for item in pairs or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise RequestError(f"--symbol expects NAME=DECIMAL, got {item!r}")
        out[name.strip()] = value.strip()
    return out


# ------------------------------------------------------------ text output


def _expression(basis, coords) -> str:
    """``sqrt2 - 1`` style rendering of a coordinate vector."""
    terms = []
    for name, c in zip(basis, coords):
        q = Fraction(c)
        if q == 0:
            continue
        if name == "1":
            body = str(abs(q))
        elif abs(q) == 1:
            body = name
        else:
            body = f"{abs(q)}*{name}"
        terms.append(("-" if q < 0 else "+", body))
    if not terms:
        return "0"
    head_sign, head = terms[0]
    out = ("-" if head_sign == "-" else "") + head
    return out + "".join(f" {sign} {body}" for sign, body in terms[1:])


def _text_analysis(report: dict) -> str:
    s = report["structure"]
    lines = [f"dimension {s['dimension']}, spectral radius {s['spectral_radius']} ({s['source']})"]
    for b in s["blocks"]:
        if b["kind"] == "rotation":
            t = b["turns"]
            turns = t if isinstance(t, str) else _expression(t["basis"], t["coords"])
            lines.append(f"  J_{b['size']}(rotation r={b['radius']} turns={turns})")
        else:
            lines.append(f"  J_{b['size']}({b['eigenvalue']})")
    for key in ("orbit", "r_orbit"):
        v = report["verdicts"][key]
        lines.append(f"{v['property']}: {v['answer']} [{v['rule']}, {v['certainty']}]")
    w = report.get("witness")
    if w:
        for key, rep in w.items():
            if "unavailable" in rep:
                lines.append(f"witness ({key}): {rep['unavailable']}")
            else:
                lines.append(
                    f"witness ({key}): commutator {rep['commutator_norm']:.6g}, "
                    f"max residual {rep['max_residual']:.3g} at n_max {rep['search_budget']}"
                )
    return "\n".join(lines)


def _text_certificate(c: dict) -> str:
    if c["kind"] == "found":
        return f"found {c['coefficients']} residual {c['residual']} ({c['certainty']})"
    if c["height_bound"] is None:
        return f"no relation ({c['certainty']})"
    return f"none up to height {c['height_bound']} ({c['certainty']})"


def _emit(obj, fmt: str, text_fn) -> None:
    print(dumps(obj) if fmt == "json" else text_fn(obj))


# ------------------------------------------------------------ commands


def cmd_analyze(args) -> int:
    requests = parse_requests(_read(args.input), _options(args))
    reports = [analyze(r, witness=args.witness, witness_n_max=args.n_max) for r in requests]
    if len(reports) == 1:
        _emit(reports[0], args.format, _text_analysis)
    else:
        _emit(reports, args.format, lambda rs: "\n\n".join(_text_analysis(r) for r in rs))
    return EXIT_OK


def cmd_relation(args) -> int:
    opts = _options(args)
    symbols = _symbols(args.symbol)
    if args.exact:
        values = exact_values(args.values, symbols)
        cert = full_support_relation(values)
        out = certificate_json(cert)
        out["basis"] = list(values[0].basis.symbols)
    else:
        bits = opts.precision_bits
        digits = [decimal_digits(v) for v in args.values]
        if args.precision_bits is None and all(d is not None for d in digits):
            # decimal literals carry only about 3.32 bits per digit
            bits = max(16, min(bits, int(min(digits) * LOG2_10)))
        for v in args.values:
            if decimal_digits(v) is None:
                parse_expression(v)
        values = [exact_values([v], symbols, precision=bits + 64)[0].value(bits + 64) for v in args.values]
        cert = detect_relation_numeric(values, opts.height_bound, bits)
        out = certificate_json(cert)
    out["convention"] = "sum_j coefficients[j] * alpha_j + coefficients[-1] = 0"
    out["provenance"] = provenance(opts)
    _emit(out, args.format, _text_certificate)
    return EXIT_OK


def cmd_simulate(args) -> int:
    from .torus import simulate

    alphas = exact_values(args.alphas, _symbols(args.symbol))
    monomials = []
    for text in args.monomial or []:
        try:
            m = [int(x) for x in text.split(",")]
        except ValueError:
            raise RequestError(f"monomial exponents must be comma-separated integers, got {text!r}") from None
        if len(m) != len(alphas):
            raise RequestError(f"monomial {text!r} needs {len(alphas)} exponents")
        monomials.append(m)
    out = simulate(alphas, args.N, args.grid, monomials)
    out["alphas"] = [a.to_json() for a in alphas]
    out["provenance"] = provenance(_options(args))

    def text(o):
        lines = []
        for a in o["averages"]:
            lines.append(f"m={a['exponents']}: |avg|={a['abs']:.6g} bound={a['bound']} within={a['within_bound']}")
        if "density" in o:
            d = o["density"]
            lines.append(f"grid {d['grid']}^{d['k']}: empty fraction {d['empty_fraction']}, covering radius {d['covering_radius']}")
        return "\n".join(lines)

    _emit(out, args.format, text)
    return EXIT_OK


def cmd_witness(args) -> int:
    from .classify import classify
    from .witness import WitnessError, witness_report

    opts = _options(args)
    requests = parse_requests(_read(args.input), opts)
    if len(requests) != 1:
        raise RequestError("witness takes a single request")
    req = requests[0]
    structure = req.resolve()
    orbit, r_orbit = classify(structure, req.options)
    verdict = orbit if args.mode == "orbit" else r_orbit
    if verdict.answer:
        print(f"misuse: the input is {verdict.property.value} (rule {verdict.rule}); no witness exists", file=sys.stderr)
        return EXIT_MISUSE
    try:
        rep = witness_report(structure, args.mode, req.options, args.n_max)
    except WitnessError as exc:
        print(f"misuse: {exc}", file=sys.stderr)
        return EXIT_MISUSE
    out = rep.to_json()
    out["verdict"] = verdict.to_json()
    out["provenance"] = provenance(req.options)
    _emit(
        out,
        args.format,
        lambda o: f"commutator {o['commutator_norm']:.6g}; max residual {o['max_residual']:.3g} over {len(o['samples'])} samples",
    )
    return EXIT_OK


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbitref", description="Orbit reflexivity of real matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--precision-bits", type=int, default=None)

    a = sub.add_parser("analyze", help="classify a matrix or block list")
    a.add_argument("input", help="JSON request file, or - for stdin")
    a.add_argument("--witness", action="store_true", help="attach witness verification for negative verdicts")
    a.add_argument("--tol", type=float, default=None)
    a.add_argument("--height", type=int, default=None)
    a.add_argument("--n-max", type=int, default=None)
    a.add_argument("--seed", type=int, default=None)
    a.add_argument("--samples", type=int, default=None)
    common(a)
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("relation", help="integer relation among turns and 1")
    mode = r.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true", help="values are exact expressions (1:3, sqrt2+1/2)")
    mode.add_argument("--numeric", action="store_true", help="values are decimals or expressions evaluated numerically")
    r.add_argument("values", nargs="+")
    r.add_argument("--height", type=int, default=None)
    r.add_argument("--symbol", action="append", help="NAME=DECIMAL for a user symbol")
    common(r)
    r.set_defaults(func=cmd_relation)

    s = sub.add_parser("simulate", help="Weyl averages and torus coverage")
    s.add_argument("--alphas", nargs="+", required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--grid", type=int, default=None)
    s.add_argument("--monomial", action="append", help="comma-separated exponents, repeatable")
    s.add_argument("--symbol", action="append", help="NAME=DECIMAL for a user symbol")
    common(s)
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("witness", help="build and check a non-reflexivity witness")
    w.add_argument("input", help="JSON request file, or - for stdin")
    w.add_argument("--mode", choices=("orbit", "r-orbit"), default="r-orbit")
    w.add_argument("--n-max", type=int, default=None)
    w.add_argument("--seed", type=int, default=None)
    w.add_argument("--samples", type=int, default=None)
    w.add_argument("--tol", type=float, default=None)
    common(w)
    w.set_defaults(func=cmd_witness)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RequestError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except StructureError as exc:
        print(f"extraction failed: {exc}", file=sys.stderr)
        for item in exc.rank_sequences:
            print(f"  {item}", file=sys.stderr)
        return EXIT_EXTRACT
    except (OSError, ValueError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
