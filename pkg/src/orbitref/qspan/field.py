"""Finite-dimensional Q-vector spaces spanned by named irrational constants.

An :class:`IrrationalBasis` is a declaration: the caller asserts that its
symbols (the constant ``1`` first) are linearly independent over Q.  That
assumption is never checked, it is recorded.  :class:`ExactReal` holds
rational coordinates over such a basis together with a high precision
numeric value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import mpmath
from mpmath import mp

from ..config import GUARD_BITS

ONE = "1"

BUILTIN_SYMBOLS: dict[str, Callable[[], mpmath.mpf]] = {
    "sqrt2": lambda: mp.sqrt(2),
    "sqrt3": lambda: mp.sqrt(3),
    "sqrt5": lambda: mp.sqrt(5),
    "log2_3": lambda: mp.log(3) / mp.log(2),
}


class BasisMismatchError(ValueError):
    pass


def to_fraction(value) -> Fraction:
    """Exact rational value of an int, Fraction, float, mpf or ``"p/q"`` string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, mpmath.mpf):
        if not mpmath.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        sign, man, exp, _ = value._mpf_  # man_exp drops the sign
        q = Fraction(int(man)) * Fraction(2) ** int(exp)
        return -q if sign else q
    if isinstance(value, str):
        text = value.strip().replace(":", "/")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def fraction_to_mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def mp_str(x, digits: int) -> str:
    """``nstr`` evaluated at enough working precision for ``digits`` significant digits."""
    with mpmath.mp.workprec(int(digits * 3.33) + 16):
        return mpmath.nstr(x, digits)


@dataclass(frozen=True)
class IrrationalBasis:
    """Ordered symbols ``("1", s_1, ..., s_d)`` with numeric approximations.

    Equality and hashing use the symbol names only.
    """

    symbols: tuple[str, ...]
    approx: tuple[mpmath.mpf, ...] = field(compare=False, repr=False)
    precision: int = field(default=256, compare=False)
    independence_assumed: bool = field(default=True, compare=False, init=False)

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("empty basis")
        if self.symbols[0] != ONE:
            raise ValueError("the first basis symbol must be the constant 1")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate basis symbols in {self.symbols}")
        if len(self.approx) != len(self.symbols):
            raise ValueError("one approximation per symbol is required")
        if self.approx[0] != 1:
            raise ValueError("the constant 1 must be approximated by exactly 1")
        for name, a in zip(self.symbols, self.approx):
            if not mpmath.isfinite(a) or a == 0:
                raise ValueError(f"approximation of {name} must be finite and nonzero")

    @classmethod
    def of(
        cls,
        *names: str,
        precision: int = 256,
        values: Mapping[str, object] | None = None,
    ) -> "IrrationalBasis":
        """Build ``{1, names...}``; unknown names need a decimal string in ``values``."""
        values = dict(values or {})
        symbols = [ONE] + [n for n in names if n != ONE]
        approx = []
        with mp.workprec(precision + GUARD_BITS):
            for name in symbols:
                if name == ONE:
                    approx.append(mpmath.mpf(1))
                elif name in values:
                    approx.append(mpmath.mpf(values[name]))
                elif name in BUILTIN_SYMBOLS:
                    approx.append(+BUILTIN_SYMBOLS[name]())
                else:
                    raise KeyError(f"unknown symbol {name!r}; supply a decimal approximation")
        return cls(tuple(symbols), tuple(approx), precision)

    @classmethod
    def rationals(cls, precision: int = 256) -> "IrrationalBasis":
        return cls.of(precision=precision)

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, name: str) -> int:
        return self.symbols.index(name)

    def rational(self, q) -> "ExactReal":
        coords = [Fraction(0)] * len(self)
        coords[0] = to_fraction(q)
        return ExactReal(self, tuple(coords))

    def element(self, name: str, coefficient=1) -> "ExactReal":
        coords = [Fraction(0)] * len(self)
        coords[self.index(name)] = to_fraction(coefficient)
        return ExactReal(self, tuple(coords))

    def combination(self, coords: Iterable) -> "ExactReal":
        return ExactReal(self, tuple(to_fraction(c) for c in coords))

    def union(self, other: "IrrationalBasis") -> "IrrationalBasis":
        if other.symbols == self.symbols:
            return self
        symbols = list(self.symbols)
        approx = list(self.approx)
        for name, a in zip(other.symbols, other.approx):
            if name not in symbols:
                symbols.append(name)
                approx.append(a)
        return IrrationalBasis(tuple(symbols), tuple(approx), min(self.precision, other.precision))


@dataclass(frozen=True)
class ExactReal:
    """``sum(coords[i] * basis.symbols[i])`` with rational coordinates."""

    basis: IrrationalBasis
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(to_fraction(c) for c in self.coords)
        if len(coords) != len(self.basis):
            raise ValueError(
                f"expected {len(self.basis)} coordinates, got {len(coords)}"
            )
        object.__setattr__(self, "coords", coords)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "ExactReal":
        if isinstance(other, ExactReal):
            if other.basis != self.basis:
                raise BasisMismatchError("basis mismatch")
            return other
        return self.basis.rational(other)

    def __add__(self, other):
        o = self._coerce(other)
        return ExactReal(self.basis, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return ExactReal(self.basis, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, q):
        if isinstance(q, ExactReal):
            raise TypeError("products of irrational symbols leave the declared space")
        q = to_fraction(q)
        return ExactReal(self.basis, tuple(q * a for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, q):
        return self * (1 / to_fraction(q))

    # inspection -----------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def rational_part(self) -> Fraction:
        return self.coords[0]

    def value(self, precision: int | None = None) -> mpmath.mpf:
        bits = precision or self.basis.precision
        with mp.workprec(bits + GUARD_BITS):
            total = mpmath.fsum(
                fraction_to_mpf(c) * a for c, a in zip(self.coords, self.basis.approx) if c
            )
        return total

    def __float__(self) -> float:
        return float(self.value())

    def floor(self) -> int:
        if self.is_rational:
            return math.floor(self.coords[0])
        return int(mpmath.floor(self.value()))

    def mod1(self) -> "ExactReal":
        """Representative in ``[0, 1)``."""
        return self - self.floor()

    def turns_representative(self) -> "ExactReal":
        """Representative of ``+-self mod 1`` in ``[0, 1/2]``."""
        r = self.mod1()
        if r.is_rational:
            return r if r.coords[0] <= Fraction(1, 2) else 1 - r
        return r if r.value() < 0.5 else 1 - r

    def rebase(self, basis: IrrationalBasis) -> "ExactReal":
        if basis == self.basis:
            return self
        coords = [Fraction(0)] * len(basis)
        for name, c in zip(self.basis.symbols, self.coords):
            if c:
                try:
                    coords[basis.index(name)] = c
                except ValueError:
                    raise BasisMismatchError(
                        f"symbol {name!r} is not in the target basis"
                    ) from None
        return ExactReal(basis, tuple(coords))

    def __str__(self) -> str:
        parts = []
        for name, c in zip(self.basis.symbols, self.coords):
            if not c:
                continue
            if name == ONE:
                parts.append(str(c))
            elif c == 1:
                parts.append(name)
            else:
                parts.append(f"{c}*{name}")
        return " + ".join(parts).replace("+ -", "- ") or "0"

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis.symbols),
            "coords": [str(c) for c in self.coords],
        }


def common_basis(values: Sequence[ExactReal]) -> IrrationalBasis:
    """Shared basis of ``values``; mixed bases raise :class:`BasisMismatchError`."""
    if not values:
        raise ValueError("no values given")
    basis = values[0].basis
    for v in values[1:]:
        if v.basis != basis:
            raise BasisMismatchError("basis mismatch")
    return basis


def unify(values: Sequence[ExactReal]) -> list[ExactReal]:
    """Rebase every value onto the union of their bases."""
    if not values:
        return []
    basis = values[0].basis
    for v in values[1:]:
        basis = basis.union(v.basis)
    return [v.rebase(basis) for v in values]
