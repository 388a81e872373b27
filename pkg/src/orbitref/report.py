"""Analysis requests and reports: JSON in, JSON out.

A request is one JSON object with either ``"matrix"`` (rows of ints,
``"p/q"`` strings or floats) or ``"blocks"`` (tagged block objects), plus
optional ``"symbols"`` and ``"options"``::

    {"blocks": [{"size": 1, "rot": {"r": "1", "turns": {"basis": ["1", "sqrt2"], "coords": ["0", "1"]}}},
                {"size": 2, "split": "-1"}],
     "symbols": {"tau": "1.6180339887498948482045868"},
     "options": {"height_bound": 1000}}
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

import mpmath

from . import __version__
from .classify import Verdict, certificate_json, classify
from .config import DEFAULTS, Options
from .jordan.structure import JordanStructure, extract_structure, from_blocks
from .qspan.field import ExactReal, IrrationalBasis, mp_str, to_fraction


class RequestError(ValueError):
    """Malformed request; ``where`` locates the problem (line/column or JSON path)."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


# ------------------------------------------------------------ values

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:[/:]\d+|\.\d*)?|\.\d+)|(?P<sym>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*]))")


def parse_expression(text: str) -> dict[str, Fraction]:
    """``"sqrt2 + 1/2"`` -> ``{"sqrt2": 1, "1": 1/2}``; terms are rational multiples of one symbol."""
    pos, tokens = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise RequestError(f"cannot parse {text!r} at offset {pos}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
        pos = m.end()
    coords: dict[str, Fraction] = {}
    i, sign = 0, 1
    expect_term = True
    while i < len(tokens):
        kind, val = tokens[i]
        if kind == "op" and val in "+-" and expect_term:
            sign = -sign if val == "-" else sign
            i += 1
            continue
        if not expect_term:
            if kind != "op" or val not in "+-":
                raise RequestError(f"expected + or - in {text!r}")
            sign = -1 if val == "-" else 1
            expect_term = True
            i += 1
            continue
        coef, symbol = Fraction(sign), "1"
        while True:
            kind, val = tokens[i]
            if kind == "num":
                coef *= to_fraction(val) if "." not in val else Fraction(val)
            elif kind == "sym":
                if symbol != "1":
                    raise RequestError(f"products of symbols are not linear: {text!r}")
                symbol = val
            else:
                raise RequestError(f"unexpected {val!r} in {text!r}")
            if i + 1 < len(tokens) and tokens[i + 1] == ("op", "*"):
                i += 2
                if i >= len(tokens):
                    raise RequestError(f"dangling * in {text!r}")
                continue
            break
        coords[symbol] = coords.get(symbol, Fraction(0)) + coef
        i += 1
        sign, expect_term = 1, False
    if expect_term:
        raise RequestError(f"incomplete expression {text!r}")
    return coords


def exact_values(texts, symbols: Mapping[str, str] | None = None, precision: int = 256) -> list[ExactReal]:
    """Parse expressions over one shared basis built from the symbols they mention."""
    parsed = [parse_expression(t) for t in texts]
    names: list[str] = []
    for p in parsed:
        for name in p:
            if name != "1" and name not in names:
                names.append(name)
    try:
        basis = IrrationalBasis.of(*names, precision=precision, values=symbols)
    except KeyError as exc:
        raise RequestError(str(exc.args[0])) from None
    return [basis.combination([p.get(s, 0) for s in basis.symbols]) for p in parsed]


def decimal_digits(text: str) -> int | None:
    """Fraction digits of a plain decimal literal, else None."""
    m = re.fullmatch(r"\s*[-+]?\d*\.(\d+)\s*", text)
    return len(m.group(1)) if m else None


def _exact_turns(obj, symbols, path: str) -> ExactReal:
    if isinstance(obj, str):
        return exact_values([obj], symbols)[0]
    if isinstance(obj, int) and not isinstance(obj, bool):
        return IrrationalBasis.rationals().rational(obj)
    if isinstance(obj, dict) and "basis" in obj and "coords" in obj:
        basis_syms, coords = obj["basis"], obj["coords"]
        if not isinstance(basis_syms, list) or not isinstance(coords, list) or len(basis_syms) != len(coords):
            raise RequestError("basis and coords must be lists of equal length", path)
        try:
            basis = IrrationalBasis.of(*basis_syms, values=symbols)
            return ExactReal(basis, tuple(_rational(c, path) for c in coords))
        except (KeyError, ValueError) as exc:
            raise RequestError(str(exc), path) from None
    raise RequestError("turns must be an exact expression string or {basis, coords}", path)


def _rational(x, path: str) -> Fraction:
    if isinstance(x, float):
        raise RequestError("floats are only accepted in dense matrices; use a \"p/q\" string", path)
    if isinstance(x, bool):
        raise RequestError("booleans are not numbers", path)
    try:
        return to_fraction(x)
    except (TypeError, ValueError) as exc:
        raise RequestError(str(exc), path) from None


def _parse_blocks(items, symbols) -> JordanStructure:
    if not isinstance(items, list) or not items:
        raise RequestError("blocks must be a nonempty list", "$.blocks")
    specs = []
    for i, item in enumerate(items):
        path = f"$.blocks[{i}]"
        if not isinstance(item, dict):
            raise RequestError("block must be an object", path)
        size = item.get("size", 1)
        if not isinstance(size, int) or isinstance(size, bool) or size < 1:
            raise RequestError("size must be a positive integer", path)
        if ("rot" in item) == ("split" in item):
            raise RequestError("block needs exactly one of 'rot' or 'split'", path)
        if "split" in item:
            specs.append(("split", size, _rational(item["split"], path + ".split")))
        else:
            rot = item["rot"]
            if not isinstance(rot, dict) or "turns" not in rot:
                raise RequestError("rot needs 'turns' (and optionally 'r' or 'r2')", path + ".rot")
            turns = _exact_turns(rot["turns"], symbols, path + ".rot.turns")
            if "r2" in rot:
                # squared radius keeps irrational radii exact
                if "r" in rot:
                    raise RequestError("give at most one of 'r' and 'r2'", path + ".rot")
                r2 = _rational(rot["r2"], path + ".rot.r2")
                if r2 <= 0:
                    raise RequestError("squared radius must be positive", path + ".rot.r2")
                specs.append(("rotation", size, None, turns, r2))
                continue
            r = _rational(rot.get("r", "1"), path + ".rot.r")
            if r <= 0:
                raise RequestError("rotation radius must be positive", path + ".rot.r")
            specs.append(("rotation", size, r, turns))
    try:
        return from_blocks(specs)
    except ValueError as exc:
        raise RequestError(str(exc), "$.blocks") from None


def _parse_matrix(rows) -> list[list]:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise RequestError("matrix must be a nonempty list of rows", "$.matrix")
    n = len(rows)
    out = []
    for i, row in enumerate(rows):
        if len(row) != n:
            raise RequestError(f"row has {len(row)} entries, expected {n}", f"$.matrix[{i}]")
        parsed = []
        for j, x in enumerate(row):
            path = f"$.matrix[{i}][{j}]"
            if isinstance(x, float):
                parsed.append(x)
            else:
                parsed.append(_rational(x, path))
        out.append(parsed)
    return out


# ------------------------------------------------------------ requests


@dataclass(frozen=True)
class AnalysisRequest:
    structure: JordanStructure | None = None
    matrix: list | None = None
    options: Options = DEFAULTS
    symbols: dict = field(default_factory=dict)

    def resolve(self) -> JordanStructure:
        if self.structure is not None:
            return self.structure
        o = self.options
        return extract_structure(self.matrix, tol=o.tol, precision_bits=o.precision_bits, max_dim=o.max_dim)


def parse_options(obj, base: Options = DEFAULTS) -> Options:
    if obj is None:
        return base
    if not isinstance(obj, dict):
        raise RequestError("options must be an object", "$.options")
    known = set(base.to_dict())
    unknown = set(obj) - known
    if unknown:
        raise RequestError(f"unknown options {sorted(unknown)}", "$.options")
    try:
        return base.updated(**obj)
    except (TypeError, ValueError) as exc:
        raise RequestError(str(exc), "$.options") from None


def request_from_obj(obj, base: Options = DEFAULTS) -> AnalysisRequest:
    if not isinstance(obj, dict):
        raise RequestError("request must be a JSON object", "$")
    if ("matrix" in obj) == ("blocks" in obj):
        raise RequestError("exactly one of 'matrix' or 'blocks' is required", "$")
    symbols = obj.get("symbols") or {}
    if not isinstance(symbols, dict) or not all(isinstance(v, str) for v in symbols.values()):
        raise RequestError("symbols must map names to decimal strings", "$.symbols")
    options = parse_options(obj.get("options"), base)
    if "blocks" in obj:
        return AnalysisRequest(structure=_parse_blocks(obj["blocks"], symbols), options=options, symbols=symbols)
    return AnalysisRequest(matrix=_parse_matrix(obj["matrix"]), options=options, symbols=symbols)


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise RequestError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None


def parse_requests(text: str, base: Options = DEFAULTS) -> list[AnalysisRequest]:
    """One request object, or a list of them (batch)."""
    obj = load_json(text)
    if isinstance(obj, list):
        return [request_from_obj(o, base) for o in obj]
    return [request_from_obj(obj, base)]


# ------------------------------------------------------------ reports


def _certificates(structure: JordanStructure, verdicts: tuple[Verdict, ...]) -> list[dict]:
    out = []
    for v in verdicts:
        for c in v.certificates:
            item = certificate_json(c)
            item["property"] = v.property.value
            out.append(item)
    if not structure.is_exact:
        out.append(
            {
                "kind": "numeric-extraction",
                "certainty": "heuristic",
                "cluster_radius": structure.tolerance,
                "property": "structure",
            }
        )
    return out


def provenance(options: Options, assumptions: dict | None = None) -> dict:
    base = {
        "tool": "orbitref",
        "version": __version__,
        "options": options.to_dict(),
        "assumptions": {"declared_basis_independent": True},
    }
    if assumptions:
        base["assumptions"].update(assumptions)
    return base


def analyze(request: AnalysisRequest, witness: bool = False, witness_n_max: int | None = None) -> dict:
    structure = request.resolve()
    orbit, r_orbit = classify(structure, request.options)
    report = {
        "structure": structure.to_json(),
        "verdicts": {"orbit": orbit.to_json(), "r_orbit": r_orbit.to_json()},
        "certificates": _certificates(structure, (orbit, r_orbit)),
        "witness": None,
        "provenance": provenance(request.options),
    }
    if witness:
        from .witness import WitnessError, witness_report

        attached = {}
        for key, verdict, mode in (("orbit", orbit, "orbit"), ("r_orbit", r_orbit, "r-orbit")):
            if verdict.answer:
                continue
            try:
                attached[key] = witness_report(structure, mode, request.options, witness_n_max).to_json()
            except WitnessError as exc:
                attached[key] = {"unavailable": str(exc)}
        report["witness"] = attached or None
    return sanitize(report)


def sanitize(obj):
    """Plain JSON types only, so that dump -> load -> dump is byte-identical."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if obj != obj or obj in (float("inf"), float("-inf")):
            return str(obj)
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, mpmath.mpf):
        return mp_str(obj, 30)
    if hasattr(obj, "item"):
        return sanitize(obj.item())
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(sanitize(obj), sort_keys=True, indent=2)
